//! Command layer behind the `ccap` binary.
//!
//! Each command reads a validated [`RunConfig`] and returns a human-readable
//! report, an optional CSV artifact and the list of invariant violations
//! found when self-checking is requested.

use std::fmt::Write as _;

use thiserror::Error;

use crate::config::{ConfigError, RunConfig};
use crate::degraded::test_degraded;
use crate::fm::{verify_thm2_variant, verify_thmk, FmError, ProjectionCheck, Thm2Variant};
use crate::gdp::{
    asymptotics, awgn_capacity, gaussian_construction_rate, mismatch_factor_full_power,
    rate_lower_opt, rate_lower_opt_numeric, rate_lower_split, rate_upper, sweep, sweep_csv,
    GdpError,
};
use crate::gp::{
    feedback_capacity, maximize_bound, thm1_lower_bound, thm2_rate, thm3_rate, thm4_rate, Bound,
    DegradedCheck, GpError, LawShape, RateReport, DEFAULT_SUBSET_CAP,
};
use crate::prob::{compose, ProbError};

/// Absolute slack used by the self-check assertions.
pub const CHECK_TOL: f64 = 1e-9;

pub const GDP_POINT_HEADER: &str = "P,N,Q,K,lower_bits,lower_regime,mixed_symmetry,upper_bits,upper_rho,eps_star,split_bits,lattice_bits,construction_bits";

pub const DEGRADED_HEADER: &str = "verdict,feasible,residual";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FmTarget {
    Thm2(Thm2Variant),
    /// The general system with `K` receivers.
    K(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    GdpSweep,
    GdpPoint,
    DiscreteEval,
    DiscreteMaximize,
    FmVerify(FmTarget),
    DegradedTest,
    Feedback,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::GdpSweep => "gdp-sweep",
            Command::GdpPoint => "gdp-point",
            Command::DiscreteEval => "discrete-eval",
            Command::DiscreteMaximize => "discrete-maximize",
            Command::FmVerify(_) => "fm-verify",
            Command::DegradedTest => "degraded-test",
            Command::Feedback => "feedback",
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{command} needs a [{section}] section")]
    Missing {
        command: &'static str,
        section: &'static str,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Gdp(#[from] GdpError),
    #[error(transparent)]
    Gp(#[from] GpError),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Fm(#[from] FmError),
}

impl RunError {
    /// Everything except file access is a problem with the supplied values.
    pub fn is_validation(&self) -> bool {
        !matches!(self, RunError::Config(ConfigError::Io { .. }))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Output {
    pub report: String,
    pub csv: Option<String>,
    /// Per-restart optimizer trace, for the search commands.
    pub trace_csv: Option<String>,
    /// Filled only when self-checking.
    pub violations: Vec<String>,
}

fn need<'a, T>(
    v: &'a Option<T>,
    command: &'static str,
    section: &'static str,
) -> Result<&'a T, RunError> {
    v.as_ref().ok_or(RunError::Missing { command, section })
}

/// Rows of several reports under a shared header; term columns are the union of labels.
pub fn reports_csv(reports: &[&RateReport]) -> String {
    let mut labels: Vec<String> = Vec::new();
    for r in reports {
        for t in &r.terms {
            if !labels.contains(&t.label) {
                labels.push(t.label.clone());
            }
        }
    }
    let quote = |s: &str| {
        if s.contains(',') {
            format!("\"{s}\"")
        } else {
            s.to_string()
        }
    };
    let mut out = String::from("bound,value_bits,raw_bits,clamped,argmin");
    for l in &labels {
        out.push(',');
        out.push_str(&quote(l));
    }
    out.push('\n');
    for r in reports {
        let _ = write!(
            out,
            "{},{:.12},{:.12},{},{}",
            r.bound.name(),
            r.value_bits,
            r.raw_bits,
            r.clamped,
            quote(&r.terms[r.argmin].label)
        );
        for l in &labels {
            out.push(',');
            if let Some(t) = r.terms.iter().find(|t| &t.label == l) {
                let _ = write!(out, "{:.12}", t.bits);
            }
        }
        out.push('\n');
    }
    out
}

fn check_report(r: &RateReport, v: &mut Vec<String>) {
    let min = r.terms.iter().map(|t| t.bits).fold(f64::INFINITY, f64::min);
    if r.raw_bits != min || r.value_bits != r.raw_bits.max(0.0) || r.clamped != (r.raw_bits < 0.0) {
        v.push(format!(
            "{}: value is not the clamped minimum of its terms",
            r.bound.name()
        ));
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.9}")).unwrap_or_default()
}

pub fn execute(cmd: Command, cfg: &RunConfig, self_check: bool) -> Result<Output, RunError> {
    let mut out = Output::default();
    match cmd {
        Command::GdpSweep => {
            let params = cfg.gdp.params()?;
            let rows = sweep(&params, &cfg.sweep)?;
            let gap = rows
                .iter()
                .map(|r| r.lower.bits - r.upper.bits)
                .fold(f64::NEG_INFINITY, f64::max);
            let _ = writeln!(
                out.report,
                "sweep: P = {}, N = {}, Θ = {:?}, INR {}..{} ({} points)\nmax(lower - upper) = {gap:.3e} bits",
                params.p(),
                params.n(),
                params.thetas(),
                cfg.sweep.inr_min,
                cfg.sweep.inr_max,
                rows.len()
            );
            if params.mixed_symmetry() {
                out.report.push_str("note: Θ mixes a ±θ pair with |θ_min| ≠ |θ_max|; the asymmetric branch is used\n");
            }
            if self_check {
                for (i, r) in rows.iter().enumerate() {
                    if r.lower.bits > r.upper.bits + CHECK_TOL {
                        out.violations.push(format!(
                            "row {}: lower {} > upper {}",
                            i + 1,
                            r.lower.bits,
                            r.upper.bits
                        ));
                    }
                    if r.upper.bits > r.awgn_ref + CHECK_TOL {
                        out.violations.push(format!(
                            "row {}: upper exceeds the interference-free value",
                            i + 1
                        ));
                    }
                    if r.lower.bits < 0.0 {
                        out.violations
                            .push(format!("row {}: negative lower bound", i + 1));
                    }
                }
            }
            out.csv = Some(sweep_csv(&rows));
        }
        Command::GdpPoint => {
            let params = cfg.gdp.params()?;
            let lower = rate_lower_opt(&params);
            let upper = if params.k() >= 2 && params.q() > 0.0 {
                Some(rate_upper(&params)?)
            } else {
                None
            };
            let eps = mismatch_factor_full_power(&params)
                .ok()
                .filter(|_| !params.is_symmetric());
            let split = cfg.gdp.power_split(&params)?;
            let split_bits = split
                .as_ref()
                .map(|s| rate_lower_split(&params, s))
                .transpose()?;
            let lattice = cfg
                .gdp
                .resolution
                .map(|r| rate_lower_opt_numeric(&params, r))
                .transpose()?;
            let construction = match (&cfg.gdp.coding, &split) {
                (None, _) => None,
                (Some(_), None) => {
                    return Err(ConfigError::invalid(
                        "gdp.p_c",
                        "the construction needs a power split (p_c, p_delta)",
                    )
                    .into())
                }
                (Some(c), Some(s)) => Some(gaussian_construction_rate(&params, c, s)?),
            };
            let r = &mut out.report;
            let _ = writeln!(
                r,
                "P = {}, N = {}, Q = {}, Θ = {:?}",
                params.p(),
                params.n(),
                params.q(),
                params.thetas()
            );
            let _ = writeln!(r, "lower bound: {:.9} bits ({})", lower.bits, lower.regime);
            if lower.mixed_symmetry {
                r.push_str("note: Θ mixes a ±θ pair with |θ_min| ≠ |θ_max|; the asymmetric branch is used\n");
            }
            if let Some(u) = &upper {
                let _ = writeln!(r, "upper bound: {:.9} bits at ρ = {:.6}", u.bits, u.rho);
            }
            if let Some(e) = eps {
                let _ = writeln!(r, "mismatch factor at full power: {e:.9}");
            }
            if let (Some(s), Some(b)) = (&split, split_bits) {
                let _ = writeln!(r, "split P_C = {}, P_Δ = {}: {b:.9} bits", s.p_c, s.p_delta);
            }
            if let Some(l) = &lattice {
                let _ = writeln!(
                    r,
                    "lattice optimum: {:.9} bits at P_C = {:.6}, P_Δ = {:.6}",
                    l.bits, l.split.p_c, l.split.p_delta
                );
            }
            if let Some(c) = construction {
                let _ = writeln!(r, "Gaussian construction: {c:.9} bits");
            }
            if let Ok(a) = asymptotics(&params) {
                let _ = writeln!(
                    r,
                    "limits: ε(Q→∞) = {:.9}, rate(K→∞) → {:.9}, rate(θ_max/θ_min→∞) → {:.9}",
                    a.eps_inf, a.rate_k_inf, a.rate_ratio_inf
                );
            }
            let _ = writeln!(
                r,
                "interference-free reference: {:.9} bits",
                awgn_capacity(params.p(), params.n())
            );
            if self_check {
                if let Some(u) = &upper {
                    if lower.bits > u.bits + CHECK_TOL {
                        out.violations
                            .push(format!("lower {} > upper {}", lower.bits, u.bits));
                    }
                    if let Some(c) = construction {
                        if c > u.bits + CHECK_TOL {
                            out.violations
                                .push(format!("construction {c} > upper {}", u.bits));
                        }
                    }
                }
                if let Some(b) = split_bits {
                    if b > lower.bits + CHECK_TOL {
                        out.violations.push(format!(
                            "split rate {b} exceeds the optimized lower bound {}",
                            lower.bits
                        ));
                    }
                }
                if let Some(l) = &lattice {
                    if (l.bits - lower.bits).abs() > 2e-3 {
                        out.violations.push(format!(
                            "lattice {} and closed form {} differ",
                            l.bits, lower.bits
                        ));
                    }
                }
            }
            out.csv = Some(format!(
                "{GDP_POINT_HEADER}\n{:.9},{:.9},{:.9},{},{:.9},{},{},{},{},{},{},{},{}\n",
                params.p(),
                params.n(),
                params.q(),
                params.k(),
                lower.bits,
                lower.regime,
                lower.mixed_symmetry,
                opt(upper.map(|u| u.bits)),
                opt(upper.map(|u| u.rho)),
                opt(eps),
                opt(split_bits),
                opt(lattice.map(|l| l.bits)),
                opt(construction)
            ));
        }
        Command::DiscreteEval => {
            let name = cmd.name();
            let dmc = need(&cfg.dmc, name, "dmc")?;
            if cfg.law.is_none() && cfg.chain.is_none() {
                return Err(RunError::Missing {
                    command: name,
                    section: "law",
                });
            }
            let mut reports = Vec::new();
            let mut thm2 = None;
            if let Some(law) = &cfg.law {
                reports.push(thm1_lower_bound(dmc, law)?);
                let k = dmc.num_components();
                if law.num_auxiliaries() == k {
                    if k == 2 {
                        let t = thm2_rate(dmc, law)?;
                        reports.push(t.report.clone());
                        thm2 = Some(t);
                    }
                    if k <= DEFAULT_SUBSET_CAP {
                        reports.push(thm3_rate(dmc, law)?);
                    }
                } else if law.num_auxiliaries() > 0 {
                    let _ = writeln!(
                        out.report,
                        "note: the law has {} auxiliaries but the channel has {k} components; only the U-only bound applies",
                        law.num_auxiliaries()
                    );
                }
            }
            if let Some(chain) = &cfg.chain {
                reports.push(thm4_rate(dmc, chain, DegradedCheck::Verify)?);
            }
            for r in &reports {
                let _ = write!(out.report, "{r}");
            }
            if let Some(t) = &thm2 {
                let _ = writeln!(
                    out.report,
                    "pair term: {:.12} (split form) vs {:.12} (conditional form){}",
                    t.pair_split_bits,
                    t.pair_conditional_bits,
                    if t.forms_differ { "  FORMS DIFFER" } else { "" }
                );
                if (t.report.value_bits - reports[0].value_bits).abs() <= 1e-12 {
                    out.report
                        .push_str("marton-pair equals compound-gp for this law\n");
                }
            }
            if self_check {
                for r in &reports {
                    check_report(r, &mut out.violations);
                }
                if let Some(t) = &thm2 {
                    if t.forms_differ {
                        out.violations
                            .push("the two forms of the pair term disagree".into());
                    }
                    if let Some(t3) = reports.iter().find(|r| r.bound == Bound::SubsetMin) {
                        if (t3.raw_bits - t.report.raw_bits).abs() > CHECK_TOL {
                            out.violations.push(format!(
                                "subset-min {} and marton-pair {} differ for two components",
                                t3.raw_bits, t.report.raw_bits
                            ));
                        }
                    }
                }
            }
            let refs: Vec<&RateReport> = reports.iter().collect();
            out.csv = Some(reports_csv(&refs));
        }
        Command::DiscreteMaximize => {
            let dmc = need(&cfg.dmc, cmd.name(), "dmc")?;
            let shape = cfg.maximize.shape(dmc);
            let (report, search) =
                maximize_bound(dmc, cfg.maximize.bound, &shape, &cfg.search, &[])?;
            let _ = writeln!(
                out.report,
                "{} restarts, seed {}, |U| = {}, |V| = {:?}, converged = {}",
                cfg.search.restarts, cfg.search.seed, shape.u, shape.v, search.converged
            );
            let _ = write!(out.report, "{report}");
            if self_check {
                check_report(&report, &mut out.violations);
                if (report.raw_bits - search.best_value).abs() > 1e-7 {
                    out.violations.push(format!(
                        "re-evaluated law gives {} but the search reported {}",
                        report.raw_bits, search.best_value
                    ));
                }
            }
            out.csv = Some(reports_csv(&[&report]));
            out.trace_csv = Some(search.trace_csv());
        }
        Command::Feedback => {
            let dmc = need(&cfg.dmc, cmd.name(), "dmc")?;
            let shape = LawShape {
                v: Vec::new(),
                ..cfg.maximize.shape(dmc)
            };
            let (thm1, search) = maximize_bound(dmc, Bound::CompoundGp, &shape, &cfg.search, &[])?;
            let warm = shape.law_from_point(&search.best_point)?;
            let fb = feedback_capacity(dmc, &shape, &cfg.search, &[warm])?;
            let _ = write!(out.report, "{thm1}{}", fb.report);
            let _ = writeln!(
                out.report,
                "feedback - compound-gp = {:.3e} bits{}",
                fb.report.value_bits - thm1.value_bits,
                if fb.converged {
                    ""
                } else {
                    " (some component searches hit the iteration cap)"
                }
            );
            if self_check {
                check_report(&thm1, &mut out.violations);
                check_report(&fb.report, &mut out.violations);
                if fb.report.value_bits < thm1.value_bits - CHECK_TOL {
                    out.violations.push(format!(
                        "feedback {} below compound-gp {}",
                        fb.report.value_bits, thm1.value_bits
                    ));
                }
            }
            out.csv = Some(reports_csv(&[&thm1, &fb.report]));
            out.trace_csv = Some(search.trace_csv());
        }
        Command::DegradedTest => {
            let (w1, w2) = need(&cfg.degraded, cmd.name(), "degraded")?;
            let t = test_degraded(w1, w2)?;
            let _ = writeln!(
                out.report,
                "verdict: {:?} (residual {:.3e})",
                t.verdict, t.residual
            );
            out.report.push_str("W̃ rows (y1 → y2):\n");
            for r in 0..t.w_tilde.num_rows() {
                let row: Vec<String> = t
                    .w_tilde
                    .row_at(r)
                    .iter()
                    .map(|p| format!("{p:.9}"))
                    .collect();
                let _ = writeln!(out.report, "  {r}: [{}]", row.join(", "));
            }
            if self_check {
                let again = compose(w1, &t.w_tilde)?.max_abs_diff(w2)?;
                if again != t.residual {
                    out.violations.push("recomputed residual differs".into());
                }
                if t.feasible && t.residual >= crate::degraded::FEASIBLE_TOL {
                    out.violations
                        .push("feasible verdict with a large residual".into());
                }
            }
            out.csv = Some(format!(
                "{DEGRADED_HEADER}\n{:?},{},{:.3e}\n",
                t.verdict, t.feasible, t.residual
            ));
        }
        Command::FmVerify(target) => {
            let check: ProjectionCheck = match target {
                FmTarget::Thm2(v) => verify_thm2_variant(v),
                FmTarget::K(k) => verify_thmk(k)?,
            };
            out.report = check.to_string();
            if self_check && !check.exact() {
                out.violations
                    .push("projection does not match the targets".into());
            }
            let mut csv = String::from("kind,index,inequality\n");
            let rows = [
                ("projection", check.projection.rows()),
                ("essential", check.essential.as_slice()),
                ("target", check.targets.as_slice()),
            ];
            for (kind, list) in rows {
                for (i, r) in list.iter().enumerate() {
                    let _ = writeln!(csv, "{kind},{},\"{r}\"", i + 1);
                }
            }
            out.csv = Some(csv);
        }
    }
    Ok(out)
}
