//! Compound Gaussian dirty-paper channel `Y_θ = X + θ S + Z`.
//!
//! `S ~ N(0, Q)` is known to the encoder, `Z ~ N(0, N)`, the input power is at
//! most `P` and the fading coefficient `θ` ranges over a finite set unknown to
//! the encoder. Rates are in bits per channel use.

use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GdpError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("invalid power split: {0}")]
    BadSplit(String),
    #[error("θ_min + θ_max = 0: the mismatch factor is undefined for this set")]
    SymmetricTheta,
    #[error("the upper bound needs at least two distinct fading coefficients")]
    DegenerateTheta,
    #[error("the upper bound needs Q > 0")]
    NoInterference,
    #[error("invalid coding parameters: {0}")]
    BadCoding(String),
    #[error("invalid sweep: {0}")]
    BadSweep(String),
}

pub type Result<T, E = GdpError> = std::result::Result<T, E>;

/// `½ log2(1 + P/N)`.
pub fn awgn_capacity(p: f64, n: f64) -> f64 {
    0.5 * (1.0 + p / n).log2()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GdpParams {
    p: f64,
    n: f64,
    q: f64,
    /// Sorted, duplicates removed.
    thetas: Vec<f64>,
}

impl GdpParams {
    pub fn new(p: f64, n: f64, q: f64, thetas: &[f64]) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(GdpError::BadParams(format!("P must be positive, got {p}")));
        }
        if !(n > 0.0 && n.is_finite()) {
            return Err(GdpError::BadParams(format!("N must be positive, got {n}")));
        }
        if !(q >= 0.0 && q.is_finite()) {
            return Err(GdpError::BadParams(format!(
                "Q must be nonnegative, got {q}"
            )));
        }
        if thetas.is_empty() {
            return Err(GdpError::BadParams("the fading set is empty".into()));
        }
        if thetas.iter().any(|t| !t.is_finite()) {
            return Err(GdpError::BadParams(
                "fading coefficients must be finite".into(),
            ));
        }
        let mut thetas = thetas.to_vec();
        thetas.sort_by(f64::total_cmp);
        thetas.dedup();
        Ok(Self { p, n, q, thetas })
    }

    pub fn with_q(&self, q: f64) -> Result<Self> {
        Self::new(self.p, self.n, q, &self.thetas)
    }

    pub fn with_p(&self, p: f64) -> Result<Self> {
        Self::new(p, self.n, self.q, &self.thetas)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Gain on the input; only the unit-gain case is modelled.
    pub fn beta(&self) -> f64 {
        1.0
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn theta_min(&self) -> f64 {
        self.thetas[0]
    }

    pub fn theta_max(&self) -> f64 {
        *self.thetas.last().expect("nonempty")
    }

    /// Number of distinct fading coefficients.
    pub fn k(&self) -> usize {
        self.thetas.len()
    }

    /// `|θ_min| = |θ_max|`, which selects the symmetric closed form.
    pub fn is_symmetric(&self) -> bool {
        self.theta_min().abs() == self.theta_max().abs()
    }

    /// The set holds some `±θ` pair while `|θ_min| ≠ |θ_max|`.
    pub fn mixed_symmetry(&self) -> bool {
        !self.is_symmetric()
            && self
                .thetas
                .iter()
                .any(|&t| t > 0.0 && self.thetas.contains(&-t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub p_c: f64,
    pub p_delta: f64,
}

impl PowerSplit {
    pub fn new(params: &GdpParams, p_c: f64, p_delta: f64) -> Result<Self> {
        if !(p_c >= 0.0) || !(p_delta >= 0.0) {
            return Err(GdpError::BadSplit(format!(
                "powers must be nonnegative, got P_C = {p_c}, P_Δ = {p_delta}"
            )));
        }
        if p_c + p_delta > params.p * (1.0 + 1e-12) {
            return Err(GdpError::BadSplit(format!(
                "P_C + P_Δ = {} exceeds P = {}",
                p_c + p_delta,
                params.p
            )));
        }
        Ok(Self { p_c, p_delta })
    }

    /// `T = P_C + P_Δ + N`.
    pub fn total(&self, params: &GdpParams) -> f64 {
        self.p_c + self.p_delta + params.n
    }
}

fn mismatch(theta_min: f64, theta_max: f64, t_over_q: f64) -> f64 {
    let d = (theta_max * theta_max + t_over_q).sqrt() - (theta_min * theta_min + t_over_q).sqrt();
    d * d / ((theta_min + theta_max) * (theta_min + theta_max))
}

fn mismatch_at(params: &GdpParams, t: f64) -> Result<f64> {
    let (lo, hi) = (params.theta_min(), params.theta_max());
    if lo + hi == 0.0 {
        return Err(GdpError::SymmetricTheta);
    }
    if params.q == 0.0 {
        // T/Q → ∞
        return Ok(0.0);
    }
    Ok(mismatch(lo, hi, t / params.q))
}

/// Mismatch factor `ε_Θ` at total power `T = P_C + P_Δ + N`.
pub fn mismatch_factor(params: &GdpParams, split: &PowerSplit) -> Result<f64> {
    mismatch_at(params, split.total(params))
}

/// Mismatch factor `ε*_Θ` at full power, `T = P + N`.
pub fn mismatch_factor_full_power(params: &GdpParams) -> Result<f64> {
    mismatch_at(params, params.p + params.n)
}

/// Achievable rate of the common/private layering for a given power split.
pub fn rate_lower_split(params: &GdpParams, split: &PowerSplit) -> Result<f64> {
    let k = params.k() as f64;
    let n = params.n;
    let private = (1.0 + split.p_delta / n).log2() / (2.0 * k);
    let common = if params.is_symmetric() {
        let t = params.theta_min();
        0.5 * (1.0 + split.p_c / (split.p_delta + n + t * t * params.q)).log2()
    } else {
        let eps = mismatch_factor(params, split)?;
        0.5 * (1.0 + split.p_c * (1.0 - eps) / (split.p_delta + n + eps * split.p_c)).log2()
    };
    Ok(private + common)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerRegime {
    /// `Q = 0`.
    InterferenceFree,
    /// A single fading coefficient.
    NoUncertainty,
    /// All power on the common dirty-paper layer.
    DirtyPaper,
    /// Common and private layers both active.
    Superposition,
    /// All power on time-shared private layers.
    TimeSharing,
}

impl LowerRegime {
    pub fn name(self) -> &'static str {
        match self {
            LowerRegime::InterferenceFree => "interference-free",
            LowerRegime::NoUncertainty => "no-uncertainty",
            LowerRegime::DirtyPaper => "dirty-paper",
            LowerRegime::Superposition => "superposition",
            LowerRegime::TimeSharing => "time-sharing",
        }
    }
}

impl fmt::Display for LowerRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub bits: f64,
    pub regime: LowerRegime,
    /// See [`GdpParams::mixed_symmetry`].
    pub mixed_symmetry: bool,
}

/// Lower bound optimized in closed form over the power split.
pub fn rate_lower_opt(params: &GdpParams) -> LowerBound {
    let (p, n, q) = (params.p, params.n, params.q);
    let with = |bits, regime| LowerBound {
        bits,
        regime,
        mixed_symmetry: params.mixed_symmetry(),
    };
    if q == 0.0 {
        return with(awgn_capacity(p, n), LowerRegime::InterferenceFree);
    }
    if params.k() == 1 {
        return with(awgn_capacity(p, n), LowerRegime::NoUncertainty);
    }
    let k = params.k() as f64;
    let time_sharing = (1.0 + p / n).log2() / (2.0 * k);
    if params.is_symmetric() {
        let t2 = params.theta_min() * params.theta_min();
        let ratio = t2 / (k - 1.0);
        if ratio < n / q {
            with(
                0.5 * (1.0 + p / (n + t2 * q)).log2(),
                LowerRegime::DirtyPaper,
            )
        } else if ratio < (p + n) / q {
            let log = k * (p + n + t2 * q).log2() - (k * n).log2()
                + (k - 1.0) * ((k - 1.0) / (k * t2 * q)).log2();
            with(log / (2.0 * k), LowerRegime::Superposition)
        } else {
            with(time_sharing, LowerRegime::TimeSharing)
        }
    } else {
        let eps = mismatch_factor_full_power(params).expect("θ_min + θ_max ≠ 0 when asymmetric");
        if eps < n * (k - 1.0) / (p + k * n) {
            with(
                0.5 * (1.0 + p * (1.0 - eps) / (n + eps * p)).log2(),
                LowerRegime::DirtyPaper,
            )
        } else if eps < (k - 1.0) / k {
            let log = ((p + n) / (k * n * (1.0 - eps))).log2()
                + (k - 1.0) * ((k - 1.0) / (k * eps)).log2();
            with(log / (2.0 * k), LowerRegime::Superposition)
        } else {
            with(time_sharing, LowerRegime::TimeSharing)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericLowerBound {
    pub bits: f64,
    pub split: PowerSplit,
}

/// Lower bound maximized over the `(P_C, P_Δ)` lattice with spacing close to `resolution`.
pub fn rate_lower_opt_numeric(params: &GdpParams, resolution: f64) -> Result<NumericLowerBound> {
    if !(resolution > 0.0) || resolution > params.p / 10.0 * (1.0 + 1e-12) {
        return Err(GdpError::BadParams(format!(
            "lattice resolution {resolution} must lie in (0, P/10]"
        )));
    }
    let steps = (params.p / resolution).round() as usize;
    let h = params.p / steps as f64;
    let mut best: Option<NumericLowerBound> = None;
    for i in 0..=steps {
        for j in 0..=steps - i {
            let split = PowerSplit {
                p_c: i as f64 * h,
                p_delta: j as f64 * h,
            };
            let bits = rate_lower_split(params, &split)?;
            if best.is_none_or(|b| bits > b.bits) {
                best = Some(NumericLowerBound { bits, split });
            }
        }
    }
    Ok(best.expect("lattice is nonempty"))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub bits: f64,
    pub rho: f64,
}

fn upper_objective(params: &GdpParams, rho: f64) -> f64 {
    let (p, n, q) = (params.p, params.n, params.q);
    let (lo, hi) = (params.theta_min(), params.theta_max());
    let first = 0.5 * (1.0 + p * (1.0 - rho * rho) / n).log2();
    let denom = ((hi - lo) * (hi - lo) * n * q).sqrt();
    let arm = |t: f64| 0.25 * ((p + n + t * t * q + 2.0 * t * rho * (p * q).sqrt()) / denom).log2();
    first.min(arm(hi) + arm(lo))
}

/// Upper bound `max_ρ min{…}`: grid at 1e-4 followed by a golden-section polish.
pub fn rate_upper(params: &GdpParams) -> Result<UpperBound> {
    if params.k() < 2 {
        return Err(GdpError::DegenerateTheta);
    }
    if params.q == 0.0 {
        return Err(GdpError::NoInterference);
    }
    const STEPS: usize = 20_000;
    let mut best = UpperBound {
        bits: f64::NEG_INFINITY,
        rho: 0.0,
    };
    for i in 0..=STEPS {
        let rho = -1.0 + 2.0 * i as f64 / STEPS as f64;
        let v = upper_objective(params, rho);
        if v > best.bits {
            best = UpperBound { bits: v, rho };
        }
    }
    let h = 2.0 / STEPS as f64;
    let (mut a, mut b) = ((best.rho - h).max(-1.0), (best.rho + h).min(1.0));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (upper_objective(params, c), upper_objective(params, d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = upper_objective(params, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = upper_objective(params, d);
        }
    }
    for (rho, v) in [(c, fc), (d, fd)] {
        if v > best.bits {
            best = UpperBound { bits: v, rho };
        }
    }
    Ok(best)
}

/// Parameters of the Gaussian common/private layering.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianCodingParams {
    /// Scaling of the state in the common auxiliary `U = X_C + α_c S`.
    pub alpha_c: f64,
    /// Per-component scaling `α_k` in `V_k = U + X_k + α_k(θ_k - α_c) S`.
    pub alphas: Vec<f64>,
    /// Time-sharing fractions `λ_k`, summing to 1.
    pub lambdas: Vec<f64>,
    /// Private power `P_k` used during slot `k`.
    pub powers: Vec<f64>,
}

impl GaussianCodingParams {
    /// Equal time sharing, private power `P_Δ` in every slot, Costa scalings.
    pub fn costa(params: &GdpParams, split: &PowerSplit, alpha_c: f64) -> Self {
        let k = params.k();
        let a = split.p_delta / (split.p_delta + params.n);
        Self {
            alpha_c,
            alphas: vec![a; k],
            lambdas: vec![1.0 / k as f64; k],
            powers: vec![split.p_delta; k],
        }
    }

    fn validate(&self, params: &GdpParams, split: &PowerSplit) -> Result<()> {
        let k = params.k();
        if self.alphas.len() != k || self.lambdas.len() != k || self.powers.len() != k {
            return Err(GdpError::BadCoding(format!(
                "expected {k} entries in alphas, lambdas and powers"
            )));
        }
        let all_finite = std::iter::once(self.alpha_c)
            .chain(self.alphas.iter().copied())
            .chain(self.lambdas.iter().copied())
            .chain(self.powers.iter().copied())
            .all(f64::is_finite);
        if !all_finite {
            return Err(GdpError::BadCoding("non-finite coding parameter".into()));
        }
        if self.lambdas.iter().any(|&l| l < 0.0)
            || (self.lambdas.iter().sum::<f64>() - 1.0).abs() > 1e-12
        {
            return Err(GdpError::BadCoding(
                "time-sharing fractions must be nonnegative and sum to 1".into(),
            ));
        }
        if self.powers.iter().any(|&p| p < 0.0) {
            // a negative variance makes the source covariance indefinite
            return Err(GdpError::BadCoding(
                "private powers must be nonnegative (covariance not positive semidefinite)".into(),
            ));
        }
        let avg: f64 = self
            .lambdas
            .iter()
            .zip(&self.powers)
            .map(|(l, p)| l * p)
            .sum();
        if avg > split.p_delta + 1e-12 * params.p.max(1.0) {
            return Err(GdpError::BadCoding(format!(
                "average private power {avg} exceeds P_Δ = {}",
                split.p_delta
            )));
        }
        Ok(())
    }
}

/// Zero-mean scalar Gaussian written as a combination of independent sources `S, X_C, X_D, Z`.
#[derive(Debug, Clone, Copy)]
struct Lin([f64; 4]);

impl Lin {
    fn cov(&self, other: &Lin, var: &[f64; 4]) -> f64 {
        (0..4).map(|i| self.0[i] * other.0[i] * var[i]).sum()
    }
}

/// `I(A;B|C)` in bits for scalar jointly Gaussian variables given as source combinations.
fn gaussian_mi(a: &Lin, b: &Lin, cond: Option<&Lin>, var: &[f64; 4]) -> f64 {
    let (mut caa, mut cbb, mut cab) = (a.cov(a, var), b.cov(b, var), a.cov(b, var));
    if let Some(c) = cond {
        let ccc = c.cov(c, var);
        if ccc > 0.0 {
            let (cac, cbc) = (a.cov(c, var), b.cov(c, var));
            caa -= cac * cac / ccc;
            cbb -= cbc * cbc / ccc;
            cab -= cac * cbc / ccc;
        }
    }
    let scale = var.iter().fold(0.0f64, |m, &v| m.max(v)).max(1.0);
    if caa <= 1e-14 * scale || cbb <= 1e-14 * scale {
        return 0.0;
    }
    let r2 = (cab * cab / (caa * cbb)).min(1.0);
    -0.5 * (1.0 - r2).log2()
}

/// Rate of the explicit Gaussian layering, computed from covariances:
/// `min_k { I(U;Y_k) - I(U;S) + λ_k [I(V_k;Y_k|U) - I(V_k;S|U)] }`.
///
/// The common layer sees the private layers as noise of power `P_Δ`; in slot
/// `k` the private layer carries power `P_k`.
pub fn gaussian_construction_rate(
    params: &GdpParams,
    coding: &GaussianCodingParams,
    split: &PowerSplit,
) -> Result<f64> {
    split_fits(params, split)?;
    coding.validate(params, split)?;
    let ac = coding.alpha_c;
    let u = Lin([ac, 1.0, 0.0, 0.0]);
    let s = Lin([1.0, 0.0, 0.0, 0.0]);
    let common_var = [params.q, split.p_c, split.p_delta, params.n];
    let i_us = gaussian_mi(&u, &s, None, &common_var);
    let mut best = f64::INFINITY;
    for (k, &theta) in params.thetas.iter().enumerate() {
        let y = Lin([theta, 1.0, 1.0, 1.0]);
        let common = gaussian_mi(&u, &y, None, &common_var) - i_us;
        let slot_var = [params.q, split.p_c, coding.powers[k], params.n];
        let v = Lin([ac + coding.alphas[k] * (theta - ac), 1.0, 1.0, 0.0]);
        let private =
            gaussian_mi(&v, &y, Some(&u), &slot_var) - gaussian_mi(&v, &s, Some(&u), &slot_var);
        best = best.min(common + coding.lambdas[k] * private);
    }
    Ok(best)
}

fn split_fits(params: &GdpParams, split: &PowerSplit) -> Result<()> {
    PowerSplit::new(params, split.p_c, split.p_delta).map(|_| ())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotics {
    /// `lim_{Q→∞} ε*_Θ = ((θ_max - θ_min)/(θ_max + θ_min))²`.
    pub eps_inf: f64,
    /// Limit of the lower bound as the number of components grows.
    pub rate_k_inf: f64,
    /// Limit of the lower bound as `θ_max/θ_min → ∞`.
    pub rate_ratio_inf: f64,
}

pub fn asymptotics(params: &GdpParams) -> Result<Asymptotics> {
    let (lo, hi) = (params.theta_min(), params.theta_max());
    if lo + hi == 0.0 {
        return Err(GdpError::SymmetricTheta);
    }
    let eps_inf = ((hi - lo) / (hi + lo)).powi(2);
    let eps = mismatch_factor_full_power(params)?;
    let (p, n) = (params.p, params.n);
    Ok(Asymptotics {
        eps_inf,
        rate_k_inf: 0.5 * (1.0 + p * (1.0 - eps) / (n + eps * p)).log2(),
        rate_ratio_inf: (1.0 + p / n).log2() / (2.0 * params.k() as f64),
    })
}

/// Log-spaced grid of interference-to-noise ratios `Q/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub inr_min: f64,
    pub inr_max: f64,
    pub points: usize,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            inr_min: 0.1,
            inr_max: 1000.0,
            points: 200,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(2..=100_000).contains(&self.points) {
            return Err(GdpError::BadSweep(format!(
                "point count {} outside [2, 100000]",
                self.points
            )));
        }
        if !(self.inr_min > 0.0 && self.inr_max > self.inr_min && self.inr_max.is_finite()) {
            return Err(GdpError::BadSweep(format!(
                "INR range [{}, {}] must be positive and increasing",
                self.inr_min, self.inr_max
            )));
        }
        Ok(())
    }

    pub fn inrs(&self) -> Vec<f64> {
        let (a, b) = (self.inr_min.ln(), self.inr_max.ln());
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| (a + (b - a) * i as f64 / last).exp())
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub q: f64,
    pub inr: f64,
    pub lower: LowerBound,
    pub upper: UpperBound,
    pub awgn_ref: f64,
}

pub const SWEEP_CSV_HEADER: &str = "Q,INR,lower_bits,lower_regime,upper_bits,upper_rho,awgn_ref";

impl SweepRow {
    pub fn csv(&self) -> String {
        format!(
            "{:.9},{:.9},{:.9},{},{:.9},{:.9},{:.9}",
            self.q,
            self.inr,
            self.lower.bits,
            self.lower.regime,
            self.upper.bits,
            self.upper.rho,
            self.awgn_ref
        )
    }
}

/// Lower and upper bounds across an INR grid; `base.q()` is ignored. Rows come back in grid order.
pub fn sweep(base: &GdpParams, spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    spec.inrs()
        .into_par_iter()
        .map(|inr| {
            let params = base.with_q(inr * base.n)?;
            Ok(SweepRow {
                q: params.q,
                inr,
                lower: rate_lower_opt(&params),
                upper: rate_upper(&params)?,
                awgn_ref: awgn_capacity(params.p, params.n),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 96);
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1(q: f64) -> GdpParams {
        GdpParams::new(1.0, 0.1, q, &[-1.0, 1.0]).unwrap()
    }

    #[test]
    fn param_validation() {
        assert!(GdpParams::new(0.0, 0.1, 1.0, &[1.0]).is_err());
        assert!(GdpParams::new(1.0, 0.0, 1.0, &[1.0]).is_err());
        assert!(GdpParams::new(1.0, 0.1, -1.0, &[1.0]).is_err());
        assert!(GdpParams::new(1.0, 0.1, 1.0, &[]).is_err());
        let p = GdpParams::new(1.0, 0.1, 1.0, &[2.0, -1.0, 2.0]).unwrap();
        assert_eq!(p.thetas(), &[-1.0, 2.0]);
        assert_eq!(p.k(), 2);
        assert_eq!(p.beta(), 1.0);
        let p = fig1(1.0);
        assert!(PowerSplit::new(&p, 0.7, 0.4).is_err());
        assert!(PowerSplit::new(&p, -0.1, 0.4).is_err());
    }

    #[test]
    fn mismatch_examples() {
        let same = GdpParams::new(1.0, 0.1, 1.0, &[2.0]).unwrap();
        let split = PowerSplit::new(&same, 1.0, 0.0).unwrap();
        assert_eq!(mismatch_factor(&same, &split).unwrap(), 0.0);

        // T/Q → 0
        let p = GdpParams::new(1e-9, 1e-9, 1e9, &[1.0, 3.0]).unwrap();
        let split = PowerSplit::new(&p, 1e-9, 0.0).unwrap();
        assert!((mismatch_factor(&p, &split).unwrap() - 0.25).abs() < 1e-9);

        // T/Q → ∞
        let p = GdpParams::new(1e9, 0.1, 1e-3, &[1.0, 3.0]).unwrap();
        let split = PowerSplit::new(&p, 1e9, 0.0).unwrap();
        assert!(mismatch_factor(&p, &split).unwrap() < 1e-10);

        let sym = fig1(1.0);
        assert_eq!(
            mismatch_factor(&sym, &PowerSplit::new(&sym, 1.0, 0.0).unwrap()),
            Err(GdpError::SymmetricTheta)
        );
    }

    #[test]
    fn split_examples() {
        let p = fig1(1.0);
        let only_common = PowerSplit::new(&p, 0.6, 0.0).unwrap();
        assert!(
            (rate_lower_split(&p, &only_common).unwrap() - 0.5 * (1.0 + 0.6 / 1.1f64).log2()).abs()
                < 1e-15
        );
        let only_private = PowerSplit::new(&p, 0.0, 0.8).unwrap();
        assert!((rate_lower_split(&p, &only_private).unwrap() - 0.25 * 9f64.log2()).abs() < 1e-15);
        let full_common = PowerSplit::new(&p, 1.0, 0.0).unwrap();
        assert!((rate_lower_split(&p, &full_common).unwrap() - 0.466443).abs() < 1e-4);
    }

    #[test]
    fn closed_form_examples() {
        let p = fig1(0.0);
        let r = rate_lower_opt(&p);
        assert_eq!(r.regime, LowerRegime::InterferenceFree);
        assert_eq!(r.bits, 0.5 * 11f64.log2());
        assert!((r.bits - 1.7297158).abs() < 1e-5);

        let r = rate_lower_opt(&fig1(1.0));
        assert_eq!(r.regime, LowerRegime::Superposition);
        assert!((r.bits - 0.86569).abs() < 1e-4);
        assert!((r.bits - 0.25 * 11.025f64.log2()).abs() < 1e-12);

        let r = rate_lower_opt(&fig1(100.0));
        assert_eq!(r.regime, LowerRegime::TimeSharing);
        assert!((r.bits - 0.8648579).abs() < 1e-4);
    }

    #[test]
    fn upper_examples() {
        let u = rate_upper(&fig1(1.0)).unwrap();
        assert!((u.bits - 0.86569).abs() < 1e-3);
        assert!(u.rho.abs() < 1e-3);
        assert!(upper_objective(&fig1(1.0), 1.0).abs() < 1e-15);
        assert!(u.bits >= 0.0);
        assert_eq!(
            rate_upper(&GdpParams::new(1.0, 0.1, 1.0, &[1.0]).unwrap()),
            Err(GdpError::DegenerateTheta)
        );
        assert_eq!(rate_upper(&fig1(0.0)), Err(GdpError::NoInterference));
    }

    #[test]
    fn asymptotic_examples() {
        let p = GdpParams::new(1.0, 0.1, 1.0, &[2.0]).unwrap();
        assert_eq!(asymptotics(&p).unwrap().eps_inf, 0.0);
        let p = GdpParams::new(1.0, 0.1, 1.0, &[1.0, 3.0]).unwrap();
        let a = asymptotics(&p).unwrap();
        assert!((a.eps_inf - 0.25).abs() < 1e-15);
        assert!((a.rate_ratio_inf - 0.8648579).abs() < 1e-6);
        assert_eq!(asymptotics(&fig1(1.0)), Err(GdpError::SymmetricTheta));
    }

    #[test]
    fn costa_construction() {
        let p = GdpParams::new(1.0, 0.1, 5.0, &[1.0]).unwrap();
        let split = PowerSplit::new(&p, 1.0, 0.0).unwrap();
        let coding = GaussianCodingParams {
            alpha_c: 1.0 / 1.1,
            alphas: vec![0.0],
            lambdas: vec![1.0],
            powers: vec![0.0],
        };
        let r = gaussian_construction_rate(&p, &coding, &split).unwrap();
        assert!((r - awgn_capacity(1.0, 0.1)).abs() < 1e-9, "{r}");
    }

    #[test]
    fn construction_without_cancellation() {
        let p = GdpParams::new(1.0, 0.1, 50.0, &[-1.0, 1.0]).unwrap();
        let split = PowerSplit::new(&p, 0.7, 0.3).unwrap();
        let coding = GaussianCodingParams {
            alpha_c: 0.0,
            alphas: vec![0.0; 2],
            lambdas: vec![0.5; 2],
            powers: vec![0.0; 2],
        };
        let r = gaussian_construction_rate(&p, &coding, &split).unwrap();
        assert!((r - 0.5 * (1.0 + 0.7 / (0.3 + 0.1 + 50.0f64)).log2()).abs() < 1e-12);
    }

    #[test]
    fn construction_validation() {
        let p = fig1(1.0);
        let split = PowerSplit::new(&p, 0.5, 0.5).unwrap();
        let mut c = GaussianCodingParams::costa(&p, &split, 0.3);
        c.lambdas = vec![0.6, 0.6];
        assert!(gaussian_construction_rate(&p, &c, &split).is_err());
        let mut c = GaussianCodingParams::costa(&p, &split, 0.3);
        c.powers = vec![-1.0, 1.0];
        assert!(gaussian_construction_rate(&p, &c, &split).is_err());
    }

    #[test]
    fn sweep_csv_layout() {
        let rows = sweep(
            &fig1(1.0),
            &SweepSpec {
                points: 3,
                ..Default::default()
            },
        )
        .unwrap();
        let csv = sweep_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0.010000000,0.100000000,"));
        assert!(SweepSpec {
            points: 1,
            ..Default::default()
        }
        .validate()
        .is_err());
    }
}
