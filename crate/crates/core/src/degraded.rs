//! Stochastic degradedness test: is `W2 = W1 ∘ W̃` for some stochastic `W̃`?
//!
//! Solved as the linear program
//! `min t  s.t. |W2(y2|in) - Σ_{y1} W1(y1|in) W̃(y2|y1)| ≤ t,  W̃ row-stochastic`,
//! then the residual is recomputed from the cleaned-up `W̃`.

use minilp::{ComparisonOp, OptimizationDirection, Problem};

use crate::prob::{compose, Channel, ProbError};

/// Residual below which the pair is declared degraded.
pub const FEASIBLE_TOL: f64 = 1e-9;
/// Residual above which the pair is declared not degraded.
pub const INFEASIBLE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degradedness {
    Feasible,
    Infeasible,
    /// Residual fell between the two tolerances.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegradedTest {
    pub verdict: Degradedness,
    pub feasible: bool,
    /// Best `W̃` found.
    pub w_tilde: Channel,
    /// `max |W2 - W1 ∘ W̃|` for the returned `W̃`.
    pub residual: f64,
}

/// Test whether `w2` is a stochastically degraded version of `w1`.
pub fn test_degraded(w1: &Channel, w2: &Channel) -> Result<DegradedTest, ProbError> {
    if w1.input_shape() != w2.input_shape() {
        return Err(ProbError::ShapeMismatch(format!(
            "degradedness needs shared inputs, got {:?} and {:?}",
            w1.input_shape(),
            w2.input_shape()
        )));
    }
    let (n1, n2) = (w1.output_size(), w2.output_size());
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let t = lp.add_var(1.0, (0.0, f64::INFINITY));
    let vars: Vec<Vec<_>> = (0..n1)
        .map(|_| (0..n2).map(|_| lp.add_var(0.0, (0.0, 1.0))).collect())
        .collect();
    for row in &vars {
        let terms: Vec<_> = row.iter().map(|&v| (v, 1.0)).collect();
        lp.add_constraint(&terms, ComparisonOp::Eq, 1.0);
    }
    for r in 0..w1.num_rows() {
        let p1 = w1.row_at(r);
        let p2 = w2.row_at(r);
        for y2 in 0..n2 {
            let mut terms: Vec<_> = (0..n1)
                .filter(|&y1| p1[y1] != 0.0)
                .map(|y1| (vars[y1][y2], p1[y1]))
                .collect();
            terms.push((t, -1.0));
            lp.add_constraint(&terms, ComparisonOp::Le, p2[y2]);
            terms.last_mut().expect("t pushed").1 = 1.0;
            lp.add_constraint(&terms, ComparisonOp::Ge, p2[y2]);
        }
    }

    let raw: Vec<f64> = match lp.solve() {
        Ok(sol) => vars
            .iter()
            .flat_map(|row| row.iter().map(|&v| sol[v]))
            .collect(),
        // the program always has a feasible point; fall back to a uniform map
        Err(_) => vec![1.0 / n2 as f64; n1 * n2],
    };
    let mut cleaned = Vec::with_capacity(raw.len());
    for row in raw.chunks(n2) {
        let clipped: Vec<f64> = row.iter().map(|&p| p.clamp(0.0, 1.0)).collect();
        let s: f64 = clipped.iter().sum();
        if s > 0.0 {
            cleaned.extend(clipped.iter().map(|p| p / s));
        } else {
            cleaned.extend(std::iter::repeat_n(1.0 / n2 as f64, n2));
        }
    }
    let w_tilde = Channel::new(vec![n1], n2, cleaned)?;
    let residual = compose(w1, &w_tilde)?.max_abs_diff(w2)?;
    let verdict = if residual < FEASIBLE_TOL {
        Degradedness::Feasible
    } else if residual > INFEASIBLE_TOL {
        Degradedness::Infeasible
    } else {
        Degradedness::Indeterminate
    };
    Ok(DegradedTest {
        verdict,
        feasible: verdict == Degradedness::Feasible,
        w_tilde,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// BSC(p) as a state-independent channel with binary input and state.
    fn bsc_xs(p: f64) -> Channel {
        Channel::from_fn(vec![2, 2], 2, |i| {
            let mut row = vec![p; 2];
            row[i[0]] = 1.0 - p;
            row
        })
        .unwrap()
    }

    #[test]
    fn identical_channels_are_degraded() {
        let w = Channel::new(
            vec![2, 2],
            3,
            vec![0.2, 0.3, 0.5, 0.1, 0.1, 0.8, 0.6, 0.4, 0.0, 0.3, 0.3, 0.4],
        )
        .unwrap();
        let t = test_degraded(&w, &w).unwrap();
        assert!(t.feasible, "{}", t.residual);
    }

    #[test]
    fn bsc_cascade() {
        let t = test_degraded(&bsc_xs(0.1), &bsc_xs(0.18)).unwrap();
        assert!(t.feasible, "{}", t.residual);
        assert!(t.w_tilde.max_abs_diff(&Channel::bsc(0.1).unwrap()).unwrap() < 1e-6);
    }

    #[test]
    fn anti_degraded_pair() {
        let t = test_degraded(&bsc_xs(0.3), &bsc_xs(0.1)).unwrap();
        assert_eq!(t.verdict, Degradedness::Infeasible);
        // exhaustive grid over 2x2 stochastic maps at step 1e-3
        let w1 = bsc_xs(0.3);
        let w2 = bsc_xs(0.1);
        let mut best = f64::INFINITY;
        for a in 0..=1000 {
            for b in 0..=1000 {
                let (a, b) = (a as f64 / 1000.0, b as f64 / 1000.0);
                let wt = Channel::new(vec![2], 2, vec![1.0 - a, a, b, 1.0 - b]).unwrap();
                best = best.min(compose(&w1, &wt).unwrap().max_abs_diff(&w2).unwrap());
            }
        }
        assert!(best > 1e-6);
        assert!(t.residual <= best + 1e-9);
        assert!(t.residual > best - 2e-3);
    }

    #[test]
    fn shape_mismatch() {
        assert!(test_degraded(&Channel::bsc(0.1).unwrap(), &bsc_xs(0.1)).is_err());
    }
}
