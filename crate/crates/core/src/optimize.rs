//! Multi-start projected ascent over products of probability simplices.
//!
//! A search point is a flat vector made of consecutive simplex rows: a block
//! `(rows, cols)` contributes `rows` probability vectors of length `cols`.
//! Objectives return a list of component terms and the value being maximized
//! is their minimum; during ascent the minimum is replaced by a log-sum-exp
//! soft minimum so that kinks between components do not stall the search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimError {
    #[error("invalid search configuration: {0}")]
    BadConfig(String),
    #[error("lattice has {points} points, more than the {max} allowed")]
    LatticeTooLarge { points: u128, max: u128 },
    #[error("starting point has {got} coordinates, shape needs {want}")]
    BadStart { got: usize, want: usize },
}

pub const MAX_LATTICE_POINTS: u128 = 10_000_000;

/// Something to maximize: the value is the minimum of the returned terms.
pub trait Objective: Sync {
    fn terms(&self, point: &[f64]) -> Vec<f64>;

    fn value(&self, point: &[f64]) -> f64 {
        exact_min(&self.terms(point))
    }
}

impl<F> Objective for F
where
    F: Fn(&[f64]) -> Vec<f64> + Sync,
{
    fn terms(&self, point: &[f64]) -> Vec<f64> {
        self(point)
    }
}

fn exact_min(terms: &[f64]) -> f64 {
    // NaN terms count as -inf
    terms.iter().copied().fold(f64::INFINITY, |a, b| {
        if b.is_nan() {
            f64::NEG_INFINITY
        } else {
            a.min(b)
        }
    })
}

fn soft_min(terms: &[f64], sharpness: f64) -> f64 {
    let m = exact_min(terms);
    if !m.is_finite() || terms.len() == 1 {
        return m;
    }
    let s: f64 = terms.iter().map(|t| (-sharpness * (t - m)).exp()).sum();
    m - s.ln() / sharpness
}

/// Product of simplex rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexShape {
    blocks: Vec<(usize, usize)>,
}

impl SimplexShape {
    pub fn new(blocks: Vec<(usize, usize)>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|(r, c)| r * c).sum()
    }

    /// Row lengths in storage order.
    pub fn rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks
            .iter()
            .flat_map(|&(r, c)| std::iter::repeat_n(c, r))
    }

    /// Every row is a probability vector within `tol`.
    pub fn contains(&self, point: &[f64], tol: f64) -> bool {
        if point.len() != self.dim() {
            return false;
        }
        let mut off = 0;
        for c in self.rows() {
            let row = &point[off..off + c];
            if row.iter().any(|&p| !(p >= 0.0)) || (row.iter().sum::<f64>() - 1.0).abs() > tol {
                return false;
            }
            off += c;
        }
        true
    }

    fn project(&self, point: &mut [f64]) {
        let mut off = 0;
        for c in self.rows() {
            project_simplex(&mut point[off..off + c]);
            off += c;
        }
    }

    fn random_interior(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut point = Vec::with_capacity(self.dim());
        for c in self.rows() {
            let draws: Vec<f64> = (0..c).map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
            let total: f64 = draws.iter().sum();
            point.extend(draws.iter().map(|d| d / total));
        }
        point
    }
}

/// Euclidean projection of `v` onto the probability simplex, in place.
pub fn project_simplex(v: &mut [f64]) {
    let n = v.len();
    if n == 0 {
        return;
    }
    let mut sorted: Vec<f64> = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (i, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if u - t > 0.0 {
            tau = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - tau).max(0.0);
    }
    // exact renormalization of rounding drift
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    } else {
        v.iter_mut().for_each(|x| *x = 1.0 / n as f64);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub initial_step: f64,
    /// Per-iteration decay of the step ceiling.
    pub step_decay: f64,
    pub seed: u64,
    pub grid_resolution: f64,
    /// Stop once the smoothed objective improves by less than this over `patience` iterations.
    pub tolerance: f64,
    pub patience: usize,
    pub fd_step: f64,
    pub sharpness: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 2000,
            initial_step: 0.5,
            step_decay: 0.999,
            seed: 0,
            grid_resolution: 0.1,
            tolerance: 1e-9,
            patience: 50,
            fd_step: 1e-5,
            sharpness: 200.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), OptimError> {
        if self.restarts == 0 {
            return Err(OptimError::BadConfig("restarts must be at least 1".into()));
        }
        if !(self.grid_resolution > 0.0 && self.grid_resolution <= 0.5) {
            return Err(OptimError::BadConfig(format!(
                "grid resolution {} outside (0, 0.5]",
                self.grid_resolution
            )));
        }
        if !(self.initial_step > 0.0) || !(self.step_decay > 0.0 && self.step_decay <= 1.0) {
            return Err(OptimError::BadConfig(
                "step schedule must be positive with decay in (0, 1]".into(),
            ));
        }
        if !(self.fd_step > 0.0) || !(self.sharpness > 0.0) || self.patience == 0 {
            return Err(OptimError::BadConfig(
                "finite-difference step, sharpness and patience must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartTrace {
    pub restart: usize,
    pub best_value: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_value: f64,
    pub best_point: Vec<f64>,
    pub trace: Vec<RestartTrace>,
    pub converged: bool,
}

impl SearchResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("restart,best_value,iterations,converged\n");
        for t in &self.trace {
            out.push_str(&format!(
                "{},{:.12},{},{}\n",
                t.restart, t.best_value, t.iterations, t.converged
            ));
        }
        out
    }
}

struct Probe<'a, O: ?Sized> {
    objective: &'a O,
    sharpness: f64,
    best_value: f64,
    best_point: Vec<f64>,
}

impl<O: Objective + ?Sized> Probe<'_, O> {
    /// Smoothed value for the ascent; the exact value feeds the incumbent.
    fn eval(&mut self, point: &[f64]) -> f64 {
        let terms = self.objective.terms(point);
        let exact = exact_min(&terms);
        if exact > self.best_value {
            self.best_value = exact;
            self.best_point.clear();
            self.best_point.extend_from_slice(point);
        }
        let s = soft_min(&terms, self.sharpness);
        if s.is_nan() {
            f64::NEG_INFINITY
        } else {
            s
        }
    }
}

fn ascend<O: Objective + ?Sized>(
    objective: &O,
    shape: &SimplexShape,
    cfg: &SearchConfig,
    start: Vec<f64>,
    restart: usize,
) -> (RestartTrace, Vec<f64>) {
    let mut probe = Probe {
        objective,
        sharpness: cfg.sharpness,
        best_value: f64::NEG_INFINITY,
        best_point: start.clone(),
    };
    let dim = shape.dim();
    let mut x = start;
    let mut fx = probe.eval(&x);
    let mut history = vec![fx];
    let mut step = cfg.initial_step;
    let mut ceiling = cfg.initial_step;
    let mut converged = false;
    let mut iterations = 0;
    let mut grad = vec![0.0; dim];
    let mut trial = vec![0.0; dim];

    while iterations < cfg.max_iters {
        iterations += 1;
        for j in 0..dim {
            trial.copy_from_slice(&x);
            trial[j] += cfg.fd_step;
            shape.project(&mut trial);
            let up = probe.eval(&trial);
            trial.copy_from_slice(&x);
            trial[j] -= cfg.fd_step;
            shape.project(&mut trial);
            let down = probe.eval(&trial);
            let g = (up - down) / (2.0 * cfg.fd_step);
            grad[j] = if g.is_finite() { g } else { 0.0 };
        }

        let mut accepted = false;
        for _ in 0..40 {
            for ((t, &xi), &gi) in trial.iter_mut().zip(&x).zip(&grad) {
                *t = xi + step * gi;
            }
            shape.project(&mut trial);
            let ft = probe.eval(&trial);
            if ft > fx {
                x.copy_from_slice(&trial);
                fx = ft;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        history.push(fx);
        if !accepted {
            converged = true;
            break;
        }
        ceiling *= cfg.step_decay;
        step = (step * 2.0).min(ceiling);
        if history.len() > cfg.patience {
            let past = history[history.len() - 1 - cfg.patience];
            if fx - past < cfg.tolerance {
                converged = true;
                break;
            }
        }
    }

    (
        RestartTrace {
            restart,
            best_value: probe.best_value,
            iterations,
            converged,
        },
        probe.best_point,
    )
}

fn merge(results: Vec<(RestartTrace, Vec<f64>)>) -> SearchResult {
    let mut best_value = f64::NEG_INFINITY;
    let mut best_point = Vec::new();
    let mut trace = Vec::with_capacity(results.len());
    let mut converged = true;
    for (t, p) in results {
        // strict comparison: the lowest restart index wins ties
        if t.best_value > best_value || best_point.is_empty() {
            best_value = t.best_value;
            best_point = p;
        }
        converged &= t.converged;
        trace.push(t);
    }
    SearchResult {
        best_value,
        best_point,
        trace,
        converged,
    }
}

/// Maximize `objective` from `cfg.restarts` random interior starts.
pub fn maximize<O: Objective + ?Sized>(
    objective: &O,
    shape: &SimplexShape,
    cfg: &SearchConfig,
) -> Result<SearchResult, OptimError> {
    maximize_from(objective, shape, cfg, &[])
}

/// As [`maximize`], with extra caller-supplied starting points run as
/// additional restarts after the random ones.
pub fn maximize_from<O: Objective + ?Sized>(
    objective: &O,
    shape: &SimplexShape,
    cfg: &SearchConfig,
    starts: &[Vec<f64>],
) -> Result<SearchResult, OptimError> {
    cfg.validate()?;
    for s in starts {
        if s.len() != shape.dim() {
            return Err(OptimError::BadStart {
                got: s.len(),
                want: shape.dim(),
            });
        }
    }
    let total = cfg.restarts + starts.len();
    let results: Vec<_> = (0..total)
        .into_par_iter()
        .map(|r| {
            let start = if r < cfg.restarts {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(r as u64);
                shape.random_interior(&mut rng)
            } else {
                let mut s = starts[r - cfg.restarts].clone();
                shape.project(&mut s);
                s
            };
            ascend(objective, shape, cfg, start, r)
        })
        .collect();
    Ok(merge(results))
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// All ways to write `m` as an ordered sum of `n` nonnegative parts.
fn compositions(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for first in 0..=left {
            cur.push(first);
            rec(left - first, n - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Number of lattice points `grid_maximize` would visit.
pub fn lattice_size(shape: &SimplexShape, resolution: f64) -> u128 {
    let m = (1.0 / resolution).round() as u128;
    shape
        .rows()
        .map(|c| binomial(m + c as u128 - 1, c as u128 - 1))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

/// Exhaustive search over the lattice of rows with entries in multiples of `resolution`.
pub fn grid_maximize<O: Objective + ?Sized>(
    objective: &O,
    shape: &SimplexShape,
    resolution: f64,
) -> Result<SearchResult, OptimError> {
    if !(resolution > 0.0 && resolution <= 0.5) {
        return Err(OptimError::BadConfig(format!(
            "grid resolution {resolution} outside (0, 0.5]"
        )));
    }
    let points = lattice_size(shape, resolution);
    if points > MAX_LATTICE_POINTS {
        return Err(OptimError::LatticeTooLarge {
            points,
            max: MAX_LATTICE_POINTS,
        });
    }
    let m = (1.0 / resolution).round() as usize;
    let rows: Vec<usize> = shape.rows().collect();
    let mut tables: Vec<(usize, Vec<Vec<f64>>)> = Vec::new();
    let row_sets: Vec<usize> = rows
        .iter()
        .map(|&c| {
            if let Some(i) = tables.iter().position(|(n, _)| *n == c) {
                i
            } else {
                let comps = compositions(m, c)
                    .into_iter()
                    .map(|v| v.into_iter().map(|k| k as f64 / m as f64).collect())
                    .collect();
                tables.push((c, comps));
                tables.len() - 1
            }
        })
        .collect();
    let counts: Vec<usize> = row_sets.iter().map(|&t| tables[t].1.len()).collect();

    let mut choice = vec![0usize; rows.len()];
    let mut point = Vec::with_capacity(shape.dim());
    let mut best_value = f64::NEG_INFINITY;
    let mut best_point = Vec::new();
    loop {
        point.clear();
        for (&t, &c) in row_sets.iter().zip(&choice) {
            point.extend_from_slice(&tables[t].1[c]);
        }
        let v = objective.value(&point);
        if v > best_value || best_point.is_empty() {
            best_value = v;
            best_point = point.clone();
        }
        if !crate::prob::advance(&mut choice, &counts) {
            break;
        }
    }
    Ok(SearchResult {
        best_value,
        best_point,
        trace: vec![RestartTrace {
            restart: 0,
            best_value,
            iterations: points as usize,
            converged: true,
        }],
        converged: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_lands_on_simplex() {
        let mut v = vec![0.7, 0.6, -0.2];
        project_simplex(&mut v);
        assert!((v.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(v.iter().all(|&x| x >= 0.0));
        assert!((v[0] - 0.55).abs() < 1e-12 && (v[1] - 0.45).abs() < 1e-12 && v[2] == 0.0);

        let mut inside = vec![0.2, 0.3, 0.5];
        project_simplex(&mut inside);
        assert_eq!(inside, vec![0.2, 0.3, 0.5]);
    }

    #[test]
    fn constant_objective() {
        let shape = SimplexShape::new(vec![(2, 3)]);
        let cfg = SearchConfig {
            restarts: 3,
            ..Default::default()
        };
        let r = maximize(&|_: &[f64]| vec![0.3], &shape, &cfg).unwrap();
        assert_eq!(r.best_value, 0.3);
        assert!(r.converged);
        assert!(shape.contains(&r.best_point, 1e-12));
    }

    #[test]
    fn concave_objective_reaches_optimum() {
        // entropy of one row, maximized by the uniform law
        let shape = SimplexShape::new(vec![(1, 4)]);
        let obj = |p: &[f64]| vec![crate::prob::entropy_bits(p)];
        let r = maximize(&obj, &shape, &SearchConfig::default()).unwrap();
        assert!((r.best_value - 2.0).abs() < 1e-6, "{}", r.best_value);
    }

    #[test]
    fn determinism() {
        let shape = SimplexShape::new(vec![(2, 3)]);
        let obj = |p: &[f64]| vec![p[0] * p[4] + p[2], 1.0 - p[1] - p[3] * p[5]];
        let cfg = SearchConfig {
            restarts: 5,
            seed: 42,
            ..Default::default()
        };
        let a = maximize(&obj, &shape, &cfg).unwrap();
        let b = maximize(&obj, &shape, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            a.best_value,
            a.trace
                .iter()
                .map(|t| t.best_value)
                .fold(f64::MIN, f64::max)
        );
    }

    #[test]
    fn grid_enumeration_contract() {
        let shape = SimplexShape::new(vec![(2, 2)]);
        assert_eq!(lattice_size(&shape, 0.25), 25);
        let seen = std::sync::Mutex::new(Vec::new());
        let obj = |p: &[f64]| {
            seen.lock().unwrap().push(p.to_vec());
            vec![p[0] * p[3]]
        };
        let r = grid_maximize(&obj, &shape, 0.25).unwrap();
        assert_eq!(seen.lock().unwrap().len(), 25);
        assert_eq!(r.best_value, 1.0);

        let coarse = SimplexShape::new(vec![(1, 3)]);
        let values = std::sync::Mutex::new(std::collections::BTreeSet::new());
        grid_maximize(
            &|p: &[f64]| {
                for &x in p {
                    values.lock().unwrap().insert((x * 1000.0) as i64);
                }
                vec![0.0]
            },
            &coarse,
            0.5,
        )
        .unwrap();
        assert!(values.lock().unwrap().len() <= 3);
    }

    #[test]
    fn grid_rejects_large_lattices() {
        let shape = SimplexShape::new(vec![(6, 2), (24, 2)]);
        assert!(matches!(
            grid_maximize(&|_: &[f64]| vec![0.0], &shape, 0.05),
            Err(OptimError::LatticeTooLarge { .. })
        ));
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SearchConfig {
            grid_resolution: 0.6,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn warm_start_never_loses_value() {
        let shape = SimplexShape::new(vec![(1, 2)]);
        let obj = |p: &[f64]| vec![-(p[0] - 0.8).powi(2)];
        let cfg = SearchConfig {
            restarts: 1,
            max_iters: 1,
            ..Default::default()
        };
        let r = maximize_from(&obj, &shape, &cfg, &[vec![0.8, 0.2]]).unwrap();
        assert!(r.best_value >= -1e-30);
    }
}
