//! TOML configuration shared by every `ccap` command.
//!
//! All sections are optional; each command reads the ones it needs. Channel
//! and law tables are nested arrays of numbers, row-major, with the output
//! symbol on the innermost axis.
//!
//! ```toml
//! seed = 0
//!
//! [search]            # optimizer settings
//! restarts = 32
//! max_iters = 2000
//! grid_resolution = 0.1
//!
//! [dmc]               # compound channel: components[θ][x][s][y]
//! state = [0.5, 0.5]
//! components = [
//!   [[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]],
//!   [[[0.89, 0.11], [0.11, 0.89]], [[0.11, 0.89], [0.89, 0.11]]],
//! ]
//!
//! [law]               # coding law for discrete-eval
//! u_given_s = [[0.5, 0.5], [0.5, 0.5]]          # [s][u]
//! v_given_us = []                               # per auxiliary: [u][s][v]
//! x_given_all = [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]   # [u][v1]..[vK][s][x]
//!
//! [chain]             # degraded chain law for discrete-eval
//! v_last_given_s = [[...]]                      # [s][v_K]
//! links = []                                    # P(V_k|S,V_{k+1}): [s][v_{k+1}][v_k]
//! x_given_s_v1 = [[[...]]]                      # [s][v_1][x]
//!
//! [maximize]          # discrete-maximize / feedback
//! bound = "compound-gp"   # or "marton-pair", "subset-min"
//! aux = 0                 # number of V auxiliaries
//! u_size = 6              # default |X||S| + |Θ|
//! v_size = 6              # default u_size
//!
//! [gdp]               # Gaussian channel
//! p = 1.0
//! n = 0.1
//! q = 1.0
//! thetas = [-1.0, 1.0]
//! p_c = 0.5               # optional power split
//! p_delta = 0.5
//! resolution = 0.001      # optional lattice check of the closed form
//! alpha_c = 0.0           # optional explicit Gaussian construction
//! alphas = [0.8, 0.8]
//! lambdas = [0.5, 0.5]
//! powers = [0.5, 0.5]
//!
//! [sweep]
//! inr_min = 0.1
//! inr_max = 1000.0
//! points = 200
//!
//! [degraded]          # w1[in..][y1], w2[in..][y2], same input axes
//! w1 = [[0.9, 0.1], [0.1, 0.9]]
//! w2 = [[0.82, 0.18], [0.18, 0.82]]
//! ```
//!
//! Values given on the command line take precedence over the file, which takes
//! precedence over built-in defaults.

use std::ops::Range;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use toml::{Spanned, Value};

use crate::gdp::{GaussianCodingParams, GdpParams, PowerSplit, SweepSpec};
use crate::gp::{Bound, CodingLaw, DegradedChainLaw, LawShape};
use crate::optimize::SearchConfig;
use crate::prob::{Channel, CompoundDmc, Dist};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("{}field `{field}`: {msg}", line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Invalid {
        field: String,
        line: Option<usize>,
        msg: String,
    },
}

impl ConfigError {
    pub fn invalid(field: &str, msg: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.to_string(),
            line: None,
            msg: msg.into(),
        }
    }

    /// The offending field, for validation failures.
    pub fn field(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { field, .. } => Some(field),
            _ => None,
        }
    }
}

type Result<T, E = ConfigError> = std::result::Result<T, E>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<Spanned<u64>>,
    search: Option<RawSearch>,
    dmc: Option<RawDmc>,
    law: Option<RawLaw>,
    chain: Option<RawChain>,
    maximize: Option<RawMaximize>,
    gdp: Option<RawGdp>,
    sweep: Option<RawSweep>,
    degraded: Option<RawDegraded>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSearch {
    restarts: Option<Spanned<usize>>,
    max_iters: Option<Spanned<usize>>,
    initial_step: Option<Spanned<f64>>,
    step_decay: Option<Spanned<f64>>,
    grid_resolution: Option<Spanned<f64>>,
    tolerance: Option<Spanned<f64>>,
    patience: Option<Spanned<usize>>,
    fd_step: Option<Spanned<f64>>,
    sharpness: Option<Spanned<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDmc {
    state: Spanned<Value>,
    components: Spanned<Vec<Spanned<Value>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    u_given_s: Spanned<Value>,
    #[serde(default)]
    v_given_us: Vec<Spanned<Value>>,
    x_given_all: Spanned<Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawChain {
    v_last_given_s: Spanned<Value>,
    #[serde(default)]
    links: Vec<Spanned<Value>>,
    x_given_s_v1: Spanned<Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMaximize {
    bound: Option<Spanned<String>>,
    aux: Option<Spanned<usize>>,
    u_size: Option<Spanned<usize>>,
    v_size: Option<Spanned<usize>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGdp {
    p: Option<Spanned<f64>>,
    n: Option<Spanned<f64>>,
    q: Option<Spanned<f64>>,
    thetas: Option<Spanned<Vec<f64>>>,
    p_c: Option<Spanned<f64>>,
    p_delta: Option<Spanned<f64>>,
    resolution: Option<Spanned<f64>>,
    alpha_c: Option<Spanned<f64>>,
    alphas: Option<Spanned<Vec<f64>>>,
    lambdas: Option<Spanned<Vec<f64>>>,
    powers: Option<Spanned<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    inr_min: Option<Spanned<f64>>,
    inr_max: Option<Spanned<f64>>,
    points: Option<Spanned<usize>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDegraded {
    w1: Spanned<Value>,
    w2: Spanned<Value>,
}

/// Gaussian-channel section.
#[derive(Debug, Clone, PartialEq)]
pub struct GdpSection {
    pub p: f64,
    pub n: f64,
    pub q: f64,
    pub thetas: Vec<f64>,
    pub split: Option<(f64, f64)>,
    pub resolution: Option<f64>,
    pub coding: Option<GaussianCodingParams>,
}

impl Default for GdpSection {
    /// The setup of the INR sweep: `P = 1`, `N = 0.1`, `Q = 1`, `Θ = {-1, 1}`.
    fn default() -> Self {
        Self {
            p: 1.0,
            n: 0.1,
            q: 1.0,
            thetas: vec![-1.0, 1.0],
            split: None,
            resolution: None,
            coding: None,
        }
    }
}

impl GdpSection {
    pub fn params(&self) -> Result<GdpParams> {
        GdpParams::new(self.p, self.n, self.q, &self.thetas)
            .map_err(|e| ConfigError::invalid("gdp", e.to_string()))
    }

    pub fn power_split(&self, params: &GdpParams) -> Result<Option<PowerSplit>> {
        self.split
            .map(|(pc, pd)| PowerSplit::new(params, pc, pd))
            .transpose()
            .map_err(|e| ConfigError::invalid("gdp.p_c", e.to_string()))
    }
}

/// Which discrete bound `discrete-maximize` optimizes, and over which alphabets.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximizeSection {
    pub bound: Bound,
    pub aux: usize,
    pub u_size: Option<usize>,
    pub v_size: Option<usize>,
}

impl Default for MaximizeSection {
    fn default() -> Self {
        Self {
            bound: Bound::CompoundGp,
            aux: 0,
            u_size: None,
            v_size: None,
        }
    }
}

impl MaximizeSection {
    pub fn shape(&self, dmc: &CompoundDmc) -> LawShape {
        let mut shape = LawShape::default_for(dmc, self.aux);
        if let Some(u) = self.u_size {
            shape.u = u;
        }
        let v = self.v_size.unwrap_or(shape.u);
        shape.v = vec![v; self.aux];
        shape
    }
}

/// Validated configuration.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub seed: u64,
    pub search: SearchConfig,
    pub dmc: Option<CompoundDmc>,
    pub law: Option<CodingLaw>,
    pub chain: Option<DegradedChainLaw>,
    pub maximize: MaximizeSection,
    pub gdp: GdpSection,
    pub sweep: SweepSpec,
    pub degraded: Option<(Channel, Channel)>,
}

struct Ctx<'a> {
    text: &'a str,
}

impl Ctx<'_> {
    fn line(&self, span: Range<usize>) -> usize {
        let end = span.start.min(self.text.len());
        self.text[..end].matches('\n').count() + 1
    }

    fn err(&self, field: &str, span: Range<usize>, msg: impl Into<String>) -> ConfigError {
        ConfigError::Invalid {
            field: field.to_string(),
            line: Some(self.line(span)),
            msg: msg.into(),
        }
    }

    /// Flatten a rectangular nested array of numbers; returns the shape and the data.
    fn tensor(&self, field: &str, v: &Spanned<Value>) -> Result<(Vec<usize>, Vec<f64>)> {
        fn walk(
            v: &Value,
            depth: usize,
            shape: &mut Vec<usize>,
            out: &mut Vec<f64>,
        ) -> Result<(), String> {
            match v {
                Value::Array(items) => {
                    if depth == shape.len() {
                        shape.push(items.len());
                    } else if shape[depth] != items.len() {
                        return Err(format!(
                            "ragged array: expected {} entries at depth {depth}, found {}",
                            shape[depth],
                            items.len()
                        ));
                    }
                    if items.is_empty() {
                        return Err("empty array".into());
                    }
                    for it in items {
                        walk(it, depth + 1, shape, out)?;
                    }
                    Ok(())
                }
                Value::Float(x) if depth == shape.len() && depth > 0 => {
                    out.push(*x);
                    Ok(())
                }
                Value::Integer(x) if depth == shape.len() && depth > 0 => {
                    out.push(*x as f64);
                    Ok(())
                }
                Value::Float(_) | Value::Integer(_) => Err("mixed nesting depth".into()),
                other => Err(format!("expected a number, found {}", other.type_str())),
            }
        }
        let mut shape = Vec::new();
        let mut out = Vec::new();
        walk(v.get_ref(), 0, &mut shape, &mut out).map_err(|m| self.err(field, v.span(), m))?;
        Ok((shape, out))
    }

    fn channel(&self, field: &str, v: &Spanned<Value>) -> Result<Channel> {
        let (shape, data) = self.tensor(field, v)?;
        if shape.len() < 2 {
            return Err(self.err(field, v.span(), "a channel needs at least one input axis"));
        }
        let (inputs, out) = shape.split_at(shape.len() - 1);
        Channel::new(inputs.to_vec(), out[0], data)
            .map_err(|e| self.err(field, v.span(), e.to_string()))
    }

    fn check<T>(
        &self,
        field: &str,
        v: &Option<Spanned<T>>,
        ok: impl Fn(&T) -> bool,
        msg: &str,
    ) -> Result<()> {
        match v {
            Some(s) if !ok(s.get_ref()) => Err(self.err(field, s.span(), msg)),
            _ => Ok(()),
        }
    }
}

fn val<T: Clone>(v: &Option<Spanned<T>>) -> Option<T> {
    v.as_ref().map(|s| s.get_ref().clone())
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| ConfigError::Syntax {
            line: e.span().map_or(1, |s| {
                text[..s.start.min(text.len())].matches('\n').count() + 1
            }),
            msg: e.message().trim().to_string(),
        })?;
        let cx = Ctx { text };
        let mut cfg = RunConfig {
            seed: val(&raw.seed).unwrap_or(0),
            ..Default::default()
        };

        if let Some(s) = &raw.search {
            let d = SearchConfig::default();
            cx.check(
                "search.restarts",
                &s.restarts,
                |&r| r >= 1,
                "must be at least 1",
            )?;
            cx.check(
                "search.max_iters",
                &s.max_iters,
                |&r| r >= 1,
                "must be at least 1",
            )?;
            cx.check(
                "search.patience",
                &s.patience,
                |&r| r >= 1,
                "must be at least 1",
            )?;
            cx.check(
                "search.grid_resolution",
                &s.grid_resolution,
                |&r| r > 0.0 && r <= 0.5,
                "must lie in (0, 0.5]",
            )?;
            cx.check(
                "search.initial_step",
                &s.initial_step,
                |&r| r > 0.0,
                "must be positive",
            )?;
            cx.check(
                "search.step_decay",
                &s.step_decay,
                |&r| r > 0.0 && r <= 1.0,
                "must lie in (0, 1]",
            )?;
            cx.check(
                "search.tolerance",
                &s.tolerance,
                |&r| r >= 0.0,
                "must be nonnegative",
            )?;
            cx.check(
                "search.fd_step",
                &s.fd_step,
                |&r| r > 0.0,
                "must be positive",
            )?;
            cx.check(
                "search.sharpness",
                &s.sharpness,
                |&r| r > 0.0,
                "must be positive",
            )?;
            cfg.search = SearchConfig {
                restarts: val(&s.restarts).unwrap_or(d.restarts),
                max_iters: val(&s.max_iters).unwrap_or(d.max_iters),
                initial_step: val(&s.initial_step).unwrap_or(d.initial_step),
                step_decay: val(&s.step_decay).unwrap_or(d.step_decay),
                seed: 0,
                grid_resolution: val(&s.grid_resolution).unwrap_or(d.grid_resolution),
                tolerance: val(&s.tolerance).unwrap_or(d.tolerance),
                patience: val(&s.patience).unwrap_or(d.patience),
                fd_step: val(&s.fd_step).unwrap_or(d.fd_step),
                sharpness: val(&s.sharpness).unwrap_or(d.sharpness),
            };
        }
        cfg.search.seed = cfg.seed;

        if let Some(d) = &raw.dmc {
            let (shape, probs) = cx.tensor("dmc.state", &d.state)?;
            if shape.len() != 1 {
                return Err(cx.err(
                    "dmc.state",
                    d.state.span(),
                    "expected a flat list of probabilities",
                ));
            }
            let state =
                Dist::new(probs).map_err(|e| cx.err("dmc.state", d.state.span(), e.to_string()))?;
            if d.components.get_ref().is_empty() {
                return Err(cx.err(
                    "dmc.components",
                    d.components.span(),
                    "at least one component is required",
                ));
            }
            let mut chans = Vec::new();
            for (i, c) in d.components.get_ref().iter().enumerate() {
                let field = format!("dmc.components[{i}]");
                let ch = cx.channel(&field, c)?;
                if ch.input_shape().len() != 2 {
                    return Err(cx.err(&field, c.span(), "expected nesting [x][s][y]"));
                }
                chans.push(ch);
            }
            let spans: Vec<Range<usize>> =
                d.components.get_ref().iter().map(Spanned::span).collect();
            cfg.dmc = Some(CompoundDmc::new(chans, state).map_err(|e| {
                let span = spans.get(1).cloned().unwrap_or_else(|| d.components.span());
                cx.err("dmc.components", span, e.to_string())
            })?);
        }

        if let Some(l) = &raw.law {
            let u = cx.channel("law.u_given_s", &l.u_given_s)?;
            let mut vs = Vec::new();
            for (i, v) in l.v_given_us.iter().enumerate() {
                vs.push(cx.channel(&format!("law.v_given_us[{i}]"), v)?);
            }
            let x = cx.channel("law.x_given_all", &l.x_given_all)?;
            let law = CodingLaw::new(u, vs, x)
                .map_err(|e| cx.err("law.x_given_all", l.x_given_all.span(), e.to_string()))?;
            if let Some(dmc) = &cfg.dmc {
                if law.s_size() != dmc.s_size() || law.x_size() != dmc.x_size() {
                    return Err(cx.err(
                        "law",
                        l.u_given_s.span(),
                        format!(
                            "law alphabets |S| = {}, |X| = {} do not match the channel ({}, {})",
                            law.s_size(),
                            law.x_size(),
                            dmc.s_size(),
                            dmc.x_size()
                        ),
                    ));
                }
            }
            cfg.law = Some(law);
        }

        if let Some(c) = &raw.chain {
            let last = cx.channel("chain.v_last_given_s", &c.v_last_given_s)?;
            let mut links = Vec::new();
            for (i, v) in c.links.iter().enumerate() {
                links.push(cx.channel(&format!("chain.links[{i}]"), v)?);
            }
            let x = cx.channel("chain.x_given_s_v1", &c.x_given_s_v1)?;
            cfg.chain = Some(
                DegradedChainLaw::new(last, links, x)
                    .map_err(|e| cx.err("chain", c.x_given_s_v1.span(), e.to_string()))?,
            );
        }

        if let Some(m) = &raw.maximize {
            let bound = match &m.bound {
                None => Bound::CompoundGp,
                Some(b) => match b.get_ref().as_str() {
                    "compound-gp" => Bound::CompoundGp,
                    "marton-pair" => Bound::MartonPair,
                    "subset-min" => Bound::SubsetMin,
                    other => {
                        return Err(cx.err(
                            "maximize.bound",
                            b.span(),
                            format!("unknown bound `{other}`; expected compound-gp, marton-pair or subset-min"),
                        ))
                    }
                },
            };
            cx.check(
                "maximize.u_size",
                &m.u_size,
                |&u| u >= 1,
                "must be at least 1",
            )?;
            cx.check(
                "maximize.v_size",
                &m.v_size,
                |&u| u >= 1,
                "must be at least 1",
            )?;
            cfg.maximize = MaximizeSection {
                bound,
                aux: val(&m.aux).unwrap_or(0),
                u_size: val(&m.u_size),
                v_size: val(&m.v_size),
            };
        }

        if let Some(g) = &raw.gdp {
            let d = GdpSection::default();
            cx.check(
                "gdp.p",
                &g.p,
                |&p| p > 0.0 && p.is_finite(),
                "must be positive",
            )?;
            cx.check(
                "gdp.n",
                &g.n,
                |&p| p > 0.0 && p.is_finite(),
                "must be positive",
            )?;
            cx.check(
                "gdp.q",
                &g.q,
                |&p| p >= 0.0 && p.is_finite(),
                "must be nonnegative",
            )?;
            cx.check(
                "gdp.thetas",
                &g.thetas,
                |t| !t.is_empty(),
                "needs at least one coefficient",
            )?;
            cx.check(
                "gdp.resolution",
                &g.resolution,
                |&r| r > 0.0,
                "must be positive",
            )?;
            let split = match (&g.p_c, &g.p_delta) {
                (Some(a), Some(b)) => Some((*a.get_ref(), *b.get_ref())),
                (None, None) => None,
                (Some(a), None) => {
                    return Err(cx.err("gdp.p_delta", a.span(), "p_c given without p_delta"))
                }
                (None, Some(b)) => {
                    return Err(cx.err("gdp.p_c", b.span(), "p_delta given without p_c"))
                }
            };
            let coding = match (&g.alpha_c, &g.alphas, &g.lambdas, &g.powers) {
                (None, None, None, None) => None,
                (Some(a), Some(al), Some(la), Some(po)) => Some(GaussianCodingParams {
                    alpha_c: *a.get_ref(),
                    alphas: al.get_ref().clone(),
                    lambdas: la.get_ref().clone(),
                    powers: po.get_ref().clone(),
                }),
                _ => {
                    return Err(ConfigError::invalid(
                        "gdp.alpha_c",
                        "the construction needs alpha_c, alphas, lambdas and powers together",
                    ))
                }
            };
            cfg.gdp = GdpSection {
                p: val(&g.p).unwrap_or(d.p),
                n: val(&g.n).unwrap_or(d.n),
                q: val(&g.q).unwrap_or(d.q),
                thetas: val(&g.thetas).unwrap_or(d.thetas),
                split,
                resolution: val(&g.resolution),
                coding,
            };
        }

        if let Some(s) = &raw.sweep {
            let d = SweepSpec::default();
            cx.check(
                "sweep.points",
                &s.points,
                |p| (2..=100_000).contains(p),
                "must lie in [2, 100000]",
            )?;
            cx.check(
                "sweep.inr_min",
                &s.inr_min,
                |&x| x > 0.0,
                "must be positive",
            )?;
            cfg.sweep = SweepSpec {
                inr_min: val(&s.inr_min).unwrap_or(d.inr_min),
                inr_max: val(&s.inr_max).unwrap_or(d.inr_max),
                points: val(&s.points).unwrap_or(d.points),
            };
            if let Err(e) = cfg.sweep.validate() {
                let span = s.inr_max.as_ref().map(Spanned::span).unwrap_or(0..0);
                return Err(cx.err("sweep.inr_max", span, e.to_string()));
            }
        }

        if let Some(d) = &raw.degraded {
            let w1 = cx.channel("degraded.w1", &d.w1)?;
            let w2 = cx.channel("degraded.w2", &d.w2)?;
            if w1.input_shape() != w2.input_shape() {
                return Err(cx.err(
                    "degraded.w2",
                    d.w2.span(),
                    format!(
                        "input axes {:?} differ from w1's {:?}",
                        w2.input_shape(),
                        w1.input_shape()
                    ),
                ));
            }
            cfg.degraded = Some((w1, w2));
        }
        Ok(cfg)
    }
}
