//! Rate functionals for compound channels with non-causal state at the encoder.
//!
//! All evaluators share one pipeline: the coding law is expanded into a dense
//! joint table over `(U, V1..VK, S, X)`, each component channel is attached as
//! an output axis when its terms are needed, and every information quantity is
//! read off the table by marginalization.

use std::fmt;

use thiserror::Error;

use crate::degraded::{test_degraded, Degradedness};
use crate::optimize::{self, Objective, OptimError, SearchConfig, SearchResult, SimplexShape};
use crate::prob::{
    conditional_entropy, conditional_mutual_information, mutual_information, Channel, CompoundDmc,
    JointTable, ProbError,
};

/// Default cap on the number of components for subset enumeration.
pub const DEFAULT_SUBSET_CAP: usize = 8;
/// Tolerance under which the two forms of the pair term are considered equal.
pub const FORM_AGREEMENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GpError {
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Optim(#[from] OptimError),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("component index {theta} out of range for {k} components")]
    BadComponent { theta: usize, k: usize },
    #[error("this bound needs exactly {want} components, the channel has {got}")]
    WrongComponentCount { want: usize, got: usize },
    #[error("coding law provides {got} auxiliaries, {want} required")]
    MissingAuxiliaries { want: usize, got: usize },
    #[error("{k} components exceed the subset enumeration cap of {cap}")]
    TooManyComponents { k: usize, cap: usize },
    #[error("component {worse} is not a degraded version of component {better} ({verdict:?}, residual {residual:.3e})")]
    NotDegraded {
        better: usize,
        worse: usize,
        verdict: Degradedness,
        residual: f64,
    },
}

pub type Result<T, E = GpError> = std::result::Result<T, E>;

fn axis_v(k: usize) -> String {
    format!("V{}", k + 1)
}

/// Factored law `P(U|S) Π_k P(V_k|U,S) P(X|U,V_1..V_K,S)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CodingLaw {
    u_given_s: Channel,
    v_given_us: Vec<Channel>,
    x_given_all: Channel,
}

impl CodingLaw {
    pub fn new(u_given_s: Channel, v_given_us: Vec<Channel>, x_given_all: Channel) -> Result<Self> {
        if u_given_s.input_shape().len() != 1 {
            return Err(GpError::AlphabetMismatch(
                "P(U|S) must be indexed by S alone".into(),
            ));
        }
        let s = u_given_s.input_shape()[0];
        let u = u_given_s.output_size();
        for (k, v) in v_given_us.iter().enumerate() {
            if v.input_shape() != [u, s] {
                return Err(GpError::AlphabetMismatch(format!(
                    "P(V{}|U,S) has input shape {:?}, expected [{u}, {s}]",
                    k + 1,
                    v.input_shape()
                )));
            }
        }
        let mut want = vec![u];
        want.extend(v_given_us.iter().map(Channel::output_size));
        want.push(s);
        if x_given_all.input_shape() != want.as_slice() {
            return Err(GpError::AlphabetMismatch(format!(
                "P(X|U,V..,S) has input shape {:?}, expected {want:?}",
                x_given_all.input_shape()
            )));
        }
        Ok(Self {
            u_given_s,
            v_given_us,
            x_given_all,
        })
    }

    /// Law with no auxiliaries beyond `U`.
    pub fn u_only(u_given_s: Channel, x_given_us: Channel) -> Result<Self> {
        Self::new(u_given_s, Vec::new(), x_given_us)
    }

    /// Extend a `U`-only law with `k` auxiliaries that copy `U`.
    pub fn with_copied_auxiliaries(&self, k: usize) -> Result<Self> {
        if !self.v_given_us.is_empty() {
            return Err(GpError::AlphabetMismatch(
                "law already has auxiliaries".into(),
            ));
        }
        let (u, s) = (self.u_size(), self.s_size());
        let copy = Channel::deterministic(vec![u, s], u, |i| i[0])?;
        let mut shape = vec![u; k + 1];
        shape.push(s);
        let x = Channel::from_fn(shape, self.x_size(), |idx| {
            self.x_given_all.row(&[idx[0], idx[k + 1]]).to_vec()
        })?;
        Self::new(self.u_given_s.clone(), vec![copy; k], x)
    }

    pub fn u_given_s(&self) -> &Channel {
        &self.u_given_s
    }

    pub fn v_given_us(&self) -> &[Channel] {
        &self.v_given_us
    }

    pub fn x_given_all(&self) -> &Channel {
        &self.x_given_all
    }

    pub fn s_size(&self) -> usize {
        self.u_given_s.input_shape()[0]
    }

    pub fn u_size(&self) -> usize {
        self.u_given_s.output_size()
    }

    pub fn x_size(&self) -> usize {
        self.x_given_all.output_size()
    }

    pub fn num_auxiliaries(&self) -> usize {
        self.v_given_us.len()
    }

    pub fn shape(&self) -> LawShape {
        LawShape {
            s: self.s_size(),
            u: self.u_size(),
            v: self.v_given_us.iter().map(Channel::output_size).collect(),
            x: self.x_size(),
        }
    }

    fn check_against(&self, dmc: &CompoundDmc) -> Result<()> {
        if self.s_size() != dmc.s_size() || self.x_size() != dmc.x_size() {
            return Err(GpError::AlphabetMismatch(format!(
                "law has |S| = {}, |X| = {}; channel has |S| = {}, |X| = {}",
                self.s_size(),
                self.x_size(),
                dmc.s_size(),
                dmc.x_size()
            )));
        }
        Ok(())
    }

    /// Joint table over `U, V1..VK, S, X` under the state law of `dmc`.
    pub fn joint(&self, dmc: &CompoundDmc) -> Result<JointTable> {
        self.check_against(dmc)?;
        let k = self.num_auxiliaries();
        let names: Vec<String> = (0..k).map(axis_v).collect();
        let mut axes: Vec<(&str, usize)> = vec![("U", self.u_size())];
        for (n, v) in names.iter().zip(&self.v_given_us) {
            axes.push((n, v.output_size()));
        }
        axes.push(("S", self.s_size()));
        axes.push(("X", self.x_size()));
        let ps = dmc.state_law().probs();
        Ok(JointTable::from_fn(&axes, |idx| {
            let (u, s, x) = (idx[0], idx[k + 1], idx[k + 2]);
            let mut p = ps[s] * self.u_given_s.prob(&[s], u);
            for (j, v) in self.v_given_us.iter().enumerate() {
                if p == 0.0 {
                    break;
                }
                p *= v.prob(&[u, s], idx[j + 1]);
            }
            p * self.x_given_all.prob(&idx[..k + 2], x)
        })?)
    }
}

/// Alphabet sizes of a coding law; maps laws to and from optimizer points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawShape {
    pub s: usize,
    pub u: usize,
    pub v: Vec<usize>,
    pub x: usize,
}

impl LawShape {
    /// `|U| = |X||S| + |Θ|` with `aux` auxiliaries of the same size.
    pub fn default_for(dmc: &CompoundDmc, aux: usize) -> Self {
        let u = dmc.x_size() * dmc.s_size() + dmc.num_components();
        Self {
            s: dmc.s_size(),
            u,
            v: vec![u; aux],
            x: dmc.x_size(),
        }
    }

    fn x_rows(&self) -> usize {
        self.u * self.v.iter().product::<usize>() * self.s
    }

    pub fn simplex(&self) -> SimplexShape {
        let mut blocks = vec![(self.s, self.u)];
        blocks.extend(self.v.iter().map(|&v| (self.u * self.s, v)));
        blocks.push((self.x_rows(), self.x));
        SimplexShape::new(blocks)
    }

    pub fn law_from_point(&self, point: &[f64]) -> Result<CodingLaw> {
        let mut off = 0;
        let mut take = |n: usize| {
            let slice = point[off..off + n].to_vec();
            off += n;
            slice
        };
        let u_given_s = Channel::new(vec![self.s], self.u, take(self.s * self.u))?;
        let mut vs = Vec::with_capacity(self.v.len());
        for &v in &self.v {
            vs.push(Channel::new(
                vec![self.u, self.s],
                v,
                take(self.u * self.s * v),
            )?);
        }
        let mut shape = vec![self.u];
        shape.extend(&self.v);
        shape.push(self.s);
        let x = Channel::new(shape, self.x, take(self.x_rows() * self.x))?;
        CodingLaw::new(u_given_s, vs, x)
    }

    pub fn point_from_law(&self, law: &CodingLaw) -> Result<Vec<f64>> {
        if law.shape() != *self {
            return Err(GpError::AlphabetMismatch(format!(
                "law shape {:?} differs from {:?}",
                law.shape(),
                self
            )));
        }
        let mut p = law.u_given_s.matrix().to_vec();
        for v in &law.v_given_us {
            p.extend_from_slice(v.matrix());
        }
        p.extend_from_slice(law.x_given_all.matrix());
        Ok(p)
    }
}

/// Chain-factored law `P(V_K|S) P(V_{K-1}|S,V_K) … P(V_1|S,V_2) P(X|S,V_1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegradedChainLaw {
    v_last_given_s: Channel,
    /// `P(V_k|S,V_{k+1})` for `k = K-1, …, 1`.
    links: Vec<Channel>,
    x_given_s_v1: Channel,
}

impl DegradedChainLaw {
    pub fn new(
        v_last_given_s: Channel,
        links: Vec<Channel>,
        x_given_s_v1: Channel,
    ) -> Result<Self> {
        if v_last_given_s.input_shape().len() != 1 {
            return Err(GpError::AlphabetMismatch(
                "P(V_K|S) must be indexed by S alone".into(),
            ));
        }
        let s = v_last_given_s.input_shape()[0];
        let mut prev = v_last_given_s.output_size();
        for (i, l) in links.iter().enumerate() {
            if l.input_shape() != [s, prev] {
                return Err(GpError::AlphabetMismatch(format!(
                    "chain link {i} has input shape {:?}, expected [{s}, {prev}]",
                    l.input_shape()
                )));
            }
            prev = l.output_size();
        }
        if x_given_s_v1.input_shape() != [s, prev] {
            return Err(GpError::AlphabetMismatch(format!(
                "P(X|S,V1) has input shape {:?}, expected [{s}, {prev}]",
                x_given_s_v1.input_shape()
            )));
        }
        Ok(Self {
            v_last_given_s,
            links,
            x_given_s_v1,
        })
    }

    pub fn num_layers(&self) -> usize {
        self.links.len() + 1
    }

    pub fn s_size(&self) -> usize {
        self.v_last_given_s.input_shape()[0]
    }

    pub fn x_size(&self) -> usize {
        self.x_given_s_v1.output_size()
    }

    pub fn v_last_given_s(&self) -> &Channel {
        &self.v_last_given_s
    }

    pub fn links(&self) -> &[Channel] {
        &self.links
    }

    pub fn x_given_s_v1(&self) -> &Channel {
        &self.x_given_s_v1
    }

    /// Joint over `S, V_K, …, V_1, X`.
    pub fn joint(&self, dmc: &CompoundDmc) -> Result<JointTable> {
        if self.s_size() != dmc.s_size() || self.x_size() != dmc.x_size() {
            return Err(GpError::AlphabetMismatch(
                "chain law alphabets differ from the channel".into(),
            ));
        }
        let k = self.num_layers();
        let mut t = JointTable::product(&[("S", dmc.state_law())])?;
        t = t.attach(&["S"], &self.v_last_given_s, &axis_v(k - 1))?;
        for (i, link) in self.links.iter().enumerate() {
            let from = axis_v(k - 1 - i);
            let to = axis_v(k - 2 - i);
            t = t.attach(&["S", &from], link, &to)?;
        }
        Ok(t.attach(&["S", "V1"], &self.x_given_s_v1, "X")?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    /// Min over components of the Gel'fand–Pinsker functional.
    CompoundGp,
    /// Two-component superposition/Marton bound.
    MartonPair,
    /// Min over nonempty subsets of components.
    SubsetMin,
    /// Degraded components.
    Degraded,
    /// Feedback capacity.
    Feedback,
}

impl Bound {
    pub fn name(self) -> &'static str {
        match self {
            Bound::CompoundGp => "compound-gp",
            Bound::MartonPair => "marton-pair",
            Bound::SubsetMin => "subset-min",
            Bound::Degraded => "degraded",
            Bound::Feedback => "feedback",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateTerm {
    pub label: String,
    pub bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AchievingLaw {
    Coding(CodingLaw),
    Chain(DegradedChainLaw),
    /// One law per component (feedback capacity).
    PerComponent(Vec<CodingLaw>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub bound: Bound,
    /// `max(0, raw_bits)`.
    pub value_bits: f64,
    pub raw_bits: f64,
    pub clamped: bool,
    pub terms: Vec<RateTerm>,
    /// Index into `terms` of the minimizing term (first on ties).
    pub argmin: usize,
    pub law: AchievingLaw,
}

impl RateReport {
    fn from_terms(bound: Bound, terms: Vec<RateTerm>, law: AchievingLaw) -> Self {
        let mut argmin = 0;
        for (i, t) in terms.iter().enumerate() {
            if t.bits < terms[argmin].bits {
                argmin = i;
            }
        }
        let raw = terms[argmin].bits;
        Self {
            bound,
            value_bits: raw.max(0.0),
            raw_bits: raw,
            clamped: raw < 0.0,
            terms,
            argmin,
            law,
        }
    }

    pub fn csv_header(&self) -> String {
        let mut h = String::from("bound,value_bits,raw_bits,clamped,argmin");
        for t in &self.terms {
            h.push(',');
            h.push_str(&csv_field(&t.label));
        }
        h
    }

    pub fn csv_row(&self) -> String {
        let mut r = format!(
            "{},{:.12},{:.12},{},{}",
            self.bound.name(),
            self.value_bits,
            self.raw_bits,
            self.clamped,
            csv_field(&self.terms[self.argmin].label)
        );
        for t in &self.terms {
            r.push_str(&format!(",{:.12}", t.bits));
        }
        r
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} bound: {:.9} bits{}",
            self.bound.name(),
            self.value_bits,
            if self.clamped {
                format!(" (clamped from {:.9})", self.raw_bits)
            } else {
                String::new()
            }
        )?;
        for (i, t) in self.terms.iter().enumerate() {
            let mark = if i == self.argmin { '*' } else { ' ' };
            writeln!(f, "  {mark} {:<16} {:.9}", t.label, t.bits)?;
        }
        Ok(())
    }
}

fn component_label(theta: usize) -> String {
    format!("theta{}", theta + 1)
}

fn subset_label(mask: usize, k: usize) -> String {
    let members: Vec<String> = (0..k)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", members.join(","))
}

fn check_theta(dmc: &CompoundDmc, theta: usize) -> Result<&Channel> {
    dmc.channel(theta).ok_or(GpError::BadComponent {
        theta,
        k: dmc.num_components(),
    })
}

/// `I(U;Y_θ) - I(U;S)` on a prepared joint over `U, .., S, X`.
fn gp_from_joint(joint: &JointTable, w: &Channel) -> Result<f64> {
    let small = joint.marginal(&["U", "S", "X"])?;
    let with_y = small.attach(&["X", "S"], w, "Y")?;
    Ok(mutual_information(&with_y, &["U"], &["Y"])? - mutual_information(&small, &["U"], &["S"])?)
}

/// Gel'fand–Pinsker functional `I(U;Y_θ) - I(U;S)` for component `theta`; may be negative.
pub fn gp_rate(dmc: &CompoundDmc, theta: usize, law: &CodingLaw) -> Result<f64> {
    let w = check_theta(dmc, theta)?;
    gp_from_joint(&law.joint(dmc)?, w)
}

fn thm1_terms(dmc: &CompoundDmc, law: &CodingLaw) -> Result<Vec<RateTerm>> {
    let joint = law.joint(dmc)?;
    let small = joint.marginal(&["U", "S", "X"])?;
    let ius = mutual_information(&small, &["U"], &["S"])?;
    dmc.channels()
        .iter()
        .enumerate()
        .map(|(t, w)| {
            let y = small.attach(&["X", "S"], w, "Y")?;
            Ok(RateTerm {
                label: component_label(t),
                bits: mutual_information(&y, &["U"], &["Y"])? - ius,
            })
        })
        .collect()
}

/// `min_θ [I(U;Y_θ) - I(U;S)]`. Only `U` and `X` of the law are used.
pub fn thm1_lower_bound(dmc: &CompoundDmc, law: &CodingLaw) -> Result<RateReport> {
    let terms = thm1_terms(dmc, law)?;
    Ok(RateReport::from_terms(
        Bound::CompoundGp,
        terms,
        AchievingLaw::Coding(law.clone()),
    ))
}

/// Information quantities that the auxiliary-based bounds are built from.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxQuantities {
    /// `I(U;S)`
    pub i_us: f64,
    /// `I(U,V_k;Y_k)`
    pub i_uv_y: Vec<f64>,
    /// `I(V_k;S|U)`
    pub i_v_s_given_u: Vec<f64>,
    /// `H(V_k|U)`
    pub h_v_given_u: Vec<f64>,
}

fn check_aux(dmc: &CompoundDmc, law: &CodingLaw) -> Result<()> {
    let k = dmc.num_components();
    if law.num_auxiliaries() != k {
        return Err(GpError::MissingAuxiliaries {
            want: k,
            got: law.num_auxiliaries(),
        });
    }
    Ok(())
}

/// Per-component quantities for a law with one auxiliary per component.
pub fn aux_quantities(
    dmc: &CompoundDmc,
    law: &CodingLaw,
    joint: &JointTable,
) -> Result<AuxQuantities> {
    check_aux(dmc, law)?;
    let i_us = mutual_information(joint, &["U"], &["S"])?;
    let mut out = AuxQuantities {
        i_us,
        i_uv_y: Vec::new(),
        i_v_s_given_u: Vec::new(),
        h_v_given_u: Vec::new(),
    };
    for (k, w) in dmc.channels().iter().enumerate() {
        let v = axis_v(k);
        let sub = joint.marginal(&["U", &v, "S", "X"])?;
        let y = sub.attach(&["X", "S"], w, "Y")?;
        out.i_uv_y.push(mutual_information(&y, &["U", &v], &["Y"])?);
        out.i_v_s_given_u
            .push(conditional_mutual_information(&sub, &[&v], &["S"], &["U"])?);
        out.h_v_given_u
            .push(conditional_entropy(&sub, &[&v], &["U"])?);
    }
    Ok(out)
}

/// Two-component bound together with the cross-check of its pair term.
#[derive(Debug, Clone, PartialEq)]
pub struct Thm2Report {
    pub report: RateReport,
    /// Pair term written with `I(V1;V2|U) + I(V1,V2;S|U)`.
    pub pair_split_bits: f64,
    /// Pair term written with `I(UV1;S) + I(UV2;S) + I(V1;V2|U,S)`.
    pub pair_conditional_bits: f64,
    /// The two forms differ by more than [`FORM_AGREEMENT_TOL`].
    pub forms_differ: bool,
}

/// Min of the three terms of the two-component superposition bound.
///
/// The pair term is evaluated as
/// `½[I(U,V1;Y1) + I(U,V2;Y2) - 2I(U;S) - I(V1;V2|U) - I(V1,V2;S|U)]`; the
/// equivalent form `½[t1 + t2 - I(V1;V2|U,S)]` is also computed and compared.
pub fn thm2_rate(dmc: &CompoundDmc, law: &CodingLaw) -> Result<Thm2Report> {
    if dmc.num_components() != 2 {
        return Err(GpError::WrongComponentCount {
            want: 2,
            got: dmc.num_components(),
        });
    }
    check_aux(dmc, law)?;
    let joint = law.joint(dmc)?;
    let q = aux_quantities(dmc, law, &joint)?;
    let t1 = q.i_uv_y[0] - mutual_information(&joint, &["U", "V1"], &["S"])?;
    let t2 = q.i_uv_y[1] - mutual_information(&joint, &["U", "V2"], &["S"])?;
    let i_v1v2_u = conditional_mutual_information(&joint, &["V1"], &["V2"], &["U"])?;
    let i_v12_s_u = conditional_mutual_information(&joint, &["V1", "V2"], &["S"], &["U"])?;
    let split = 0.5 * (q.i_uv_y[0] + q.i_uv_y[1] - 2.0 * q.i_us - i_v1v2_u - i_v12_s_u);
    let i_v1v2_us = conditional_mutual_information(&joint, &["V1"], &["V2"], &["U", "S"])?;
    let conditional = 0.5 * (t1 + t2 - i_v1v2_us);
    let terms = vec![
        RateTerm {
            label: component_label(0),
            bits: t1,
        },
        RateTerm {
            label: component_label(1),
            bits: t2,
        },
        RateTerm {
            label: "pair".into(),
            bits: split,
        },
    ];
    Ok(Thm2Report {
        report: RateReport::from_terms(Bound::MartonPair, terms, AchievingLaw::Coding(law.clone())),
        pair_split_bits: split,
        pair_conditional_bits: conditional,
        forms_differ: (split - conditional).abs() > FORM_AGREEMENT_TOL,
    })
}

/// Subset-min bound with the default component cap.
pub fn thm3_rate(dmc: &CompoundDmc, law: &CodingLaw) -> Result<RateReport> {
    thm3_rate_with_cap(dmc, law, DEFAULT_SUBSET_CAP)
}

/// `min over nonempty subsets 𝒦` of
/// `(1/|𝒦|)[Σ_k I(U,V_k;Y_k) - |𝒦| I(U;S) + H(V_𝒦|U,S) - Σ_k H(V_k|U)]`.
pub fn thm3_rate_with_cap(dmc: &CompoundDmc, law: &CodingLaw, cap: usize) -> Result<RateReport> {
    let k = dmc.num_components();
    if k > cap {
        return Err(GpError::TooManyComponents { k, cap });
    }
    check_aux(dmc, law)?;
    let joint = law.joint(dmc)?;
    let q = aux_quantities(dmc, law, &joint)?;
    let h_us = joint.entropy(&["U", "S"])?;
    let names: Vec<String> = (0..k).map(axis_v).collect();
    let mut terms = Vec::with_capacity((1 << k) - 1);
    for mask in 1usize..(1 << k) {
        let members: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        let mut group: Vec<&str> = members.iter().map(|&i| names[i].as_str()).collect();
        group.extend(["U", "S"]);
        let h_joint_given_us = joint.entropy(&group)? - h_us;
        let size = members.len() as f64;
        let sum: f64 = members
            .iter()
            .map(|&i| q.i_uv_y[i] - q.h_v_given_u[i])
            .sum();
        terms.push(RateTerm {
            label: subset_label(mask, k),
            bits: (sum - size * q.i_us + h_joint_given_us) / size,
        });
    }
    Ok(RateReport::from_terms(
        Bound::SubsetMin,
        terms,
        AchievingLaw::Coding(law.clone()),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegradedCheck {
    /// Verify `W_{k+1} ⪯ W_k` for every consecutive pair first.
    Verify,
    /// Trust the caller's ordering.
    Waive,
}

/// `min_θ [I(V_θ;Y_θ) - I(V_θ;S)]` under the chain-factored law.
pub fn thm4_rate(
    dmc: &CompoundDmc,
    chain: &DegradedChainLaw,
    check: DegradedCheck,
) -> Result<RateReport> {
    let k = dmc.num_components();
    if chain.num_layers() != k {
        return Err(GpError::MissingAuxiliaries {
            want: k,
            got: chain.num_layers(),
        });
    }
    if check == DegradedCheck::Verify {
        for i in 0..k.saturating_sub(1) {
            let t = test_degraded(&dmc.channels()[i], &dmc.channels()[i + 1])?;
            if t.verdict != Degradedness::Feasible {
                return Err(GpError::NotDegraded {
                    better: i + 1,
                    worse: i + 2,
                    verdict: t.verdict,
                    residual: t.residual,
                });
            }
        }
    }
    let joint = chain.joint(dmc)?;
    let mut terms = Vec::with_capacity(k);
    for (t, w) in dmc.channels().iter().enumerate() {
        let v = axis_v(t);
        let sub = joint.marginal(&[&v, "S", "X"])?;
        let y = sub.attach(&["X", "S"], w, "Y")?;
        terms.push(RateTerm {
            label: component_label(t),
            bits: mutual_information(&y, &[&v], &["Y"])? - mutual_information(&sub, &[&v], &["S"])?,
        });
    }
    Ok(RateReport::from_terms(
        Bound::Degraded,
        terms,
        AchievingLaw::Chain(chain.clone()),
    ))
}

/// Objective wrapper evaluating one of the auxiliary-law bounds on optimizer points.
pub struct BoundObjective<'a> {
    dmc: &'a CompoundDmc,
    shape: LawShape,
    bound: Bound,
}

impl<'a> BoundObjective<'a> {
    pub fn new(dmc: &'a CompoundDmc, shape: LawShape, bound: Bound) -> Result<Self> {
        if shape.s != dmc.s_size() || shape.x != dmc.x_size() {
            return Err(GpError::AlphabetMismatch(
                "law shape alphabets differ from the channel".into(),
            ));
        }
        match bound {
            Bound::CompoundGp => {}
            Bound::MartonPair | Bound::SubsetMin => {
                if shape.v.len() != dmc.num_components() {
                    return Err(GpError::MissingAuxiliaries {
                        want: dmc.num_components(),
                        got: shape.v.len(),
                    });
                }
                if bound == Bound::MartonPair && dmc.num_components() != 2 {
                    return Err(GpError::WrongComponentCount {
                        want: 2,
                        got: dmc.num_components(),
                    });
                }
                if bound == Bound::SubsetMin && dmc.num_components() > DEFAULT_SUBSET_CAP {
                    return Err(GpError::TooManyComponents {
                        k: dmc.num_components(),
                        cap: DEFAULT_SUBSET_CAP,
                    });
                }
            }
            Bound::Degraded | Bound::Feedback => {
                return Err(GpError::AlphabetMismatch(format!(
                    "{} is not optimized through a coding-law objective",
                    bound.name()
                )))
            }
        }
        Ok(Self { dmc, shape, bound })
    }

    pub fn shape(&self) -> &LawShape {
        &self.shape
    }

    pub fn report(&self, law: &CodingLaw) -> Result<RateReport> {
        match self.bound {
            Bound::CompoundGp => thm1_lower_bound(self.dmc, law),
            Bound::MartonPair => thm2_rate(self.dmc, law).map(|r| r.report),
            _ => thm3_rate(self.dmc, law),
        }
    }
}

impl Objective for BoundObjective<'_> {
    fn terms(&self, point: &[f64]) -> Vec<f64> {
        let terms = self
            .shape
            .law_from_point(point)
            .and_then(|law| match self.bound {
                Bound::CompoundGp => thm1_terms(self.dmc, &law),
                _ => self.report(&law).map(|r| r.terms),
            });
        match terms {
            Ok(t) => t.into_iter().map(|t| t.bits).collect(),
            Err(_) => vec![f64::NEG_INFINITY],
        }
    }
}

/// Numerically maximize `bound` over coding laws of `shape`.
pub fn maximize_bound(
    dmc: &CompoundDmc,
    bound: Bound,
    shape: &LawShape,
    cfg: &SearchConfig,
    warm_starts: &[CodingLaw],
) -> Result<(RateReport, SearchResult)> {
    let obj = BoundObjective::new(dmc, shape.clone(), bound)?;
    let starts = warm_starts
        .iter()
        .map(|l| shape.point_from_law(l))
        .collect::<Result<Vec<_>>>()?;
    let result = optimize::maximize_from(&obj, &shape.simplex(), cfg, &starts)?;
    let law = shape.law_from_point(&result.best_point)?;
    Ok((obj.report(&law)?, result))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackReport {
    pub report: RateReport,
    pub per_component: Vec<SearchResult>,
    /// False when any per-component search hit its iteration budget.
    pub converged: bool,
}

/// `min_θ sup_law [I(U;Y_θ) - I(U;S)]`, maximizing each component separately.
///
/// `warm_starts` are extra starting laws (of shape `shape`) used for every component.
pub fn feedback_capacity(
    dmc: &CompoundDmc,
    shape: &LawShape,
    cfg: &SearchConfig,
    warm_starts: &[CodingLaw],
) -> Result<FeedbackReport> {
    let mut terms = Vec::with_capacity(dmc.num_components());
    let mut laws = Vec::with_capacity(dmc.num_components());
    let mut per_component = Vec::with_capacity(dmc.num_components());
    let u_shape = LawShape {
        v: Vec::new(),
        ..shape.clone()
    };
    for theta in 0..dmc.num_components() {
        let single = dmc.component(theta).expect("index in range");
        let (report, search) =
            maximize_bound(&single, Bound::CompoundGp, &u_shape, cfg, warm_starts)?;
        terms.push(RateTerm {
            label: component_label(theta),
            bits: report.raw_bits,
        });
        laws.push(u_shape.law_from_point(&search.best_point)?);
        per_component.push(search);
    }
    let converged = per_component.iter().all(|s| s.converged);
    Ok(FeedbackReport {
        report: RateReport::from_terms(Bound::Feedback, terms, AchievingLaw::PerComponent(laws)),
        per_component,
        converged,
    })
}
