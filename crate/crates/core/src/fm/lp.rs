//! Dense two-phase simplex over rationals with Bland's rule.
//!
//! All unknowns are free; each is split as `x = x⁺ - x⁻`.

use num_traits::{One, Signed, Zero};

use super::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpRel {
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub(crate) struct LpRow {
    pub coeffs: Vec<Rational>,
    pub rel: LpRel,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Unbounded,
    Infeasible,
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximize `cost · y` from the current basic feasible solution.
    /// Returns `false` when unbounded.
    fn run(&mut self, cost: &[Rational], allowed: &[bool]) -> bool {
        let rhs = self.width;
        loop {
            let mut entering = None;
            for j in 0..self.width {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut reduced = cost[j].clone();
                for (i, row) in self.rows.iter().enumerate() {
                    let cb = &cost[self.basis[i]];
                    if !cb.is_zero() && !row[j].is_zero() {
                        reduced -= cb * &row[j];
                    }
                }
                if reduced.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[j].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[j];
                let better = match &leave {
                    None => true,
                    Some((k, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*k])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((i, _)) = leave else { return false };
            self.pivot(i, j);
        }
    }

    fn objective(&self, cost: &[Rational]) -> Rational {
        self.rows
            .iter()
            .zip(&self.basis)
            .map(|(row, &b)| &cost[b] * &row[self.width])
            .fold(Rational::zero(), |a, b| a + b)
    }

    fn value(&self, col: usize) -> Rational {
        self.basis
            .iter()
            .position(|&b| b == col)
            .map_or_else(Rational::zero, |i| self.rows[i][self.width].clone())
    }
}

/// Maximize `objective · x` subject to `rows`, with `x ∈ ℚⁿ` free.
pub(crate) fn maximize(n: usize, objective: &[Rational], rows: &[LpRow]) -> LpOutcome {
    let m = rows.len();
    let slacks: Vec<usize> = (0..m).filter(|&i| rows[i].rel == LpRel::Le).collect();
    // rows whose slack can start in the basis
    let needs_art: Vec<bool> = rows
        .iter()
        .map(|r| r.rel == LpRel::Eq || r.rhs.is_negative())
        .collect();
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let slack_base = 2 * n;
    let art_base = slack_base + slacks.len();
    let width = art_base + n_art;

    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        width,
    };
    let mut art = art_base;
    for (i, r) in rows.iter().enumerate() {
        let mut line = vec![Rational::zero(); width + 1];
        for (j, c) in r.coeffs.iter().enumerate() {
            if !c.is_zero() {
                line[j] = c.clone();
                line[n + j] = -c;
            }
        }
        let slack = slacks.iter().position(|&s| s == i).map(|k| slack_base + k);
        if let Some(s) = slack {
            line[s] = Rational::one();
        }
        line[width] = r.rhs.clone();
        if r.rhs.is_negative() {
            for v in line.iter_mut() {
                *v = -&*v;
            }
        }
        if needs_art[i] {
            line[art] = Rational::one();
            tab.basis.push(art);
            art += 1;
        } else {
            tab.basis
                .push(slack.expect("Le row with rhs ≥ 0 has a slack"));
        }
        tab.rows.push(line);
    }

    if n_art > 0 {
        let mut cost = vec![Rational::zero(); width];
        for c in cost.iter_mut().skip(art_base) {
            *c = -Rational::one();
        }
        let allowed = vec![true; width];
        tab.run(&cost, &allowed);
        if tab.objective(&cost).is_negative() {
            return LpOutcome::Infeasible;
        }
        for i in 0..m {
            if tab.basis[i] < art_base {
                continue;
            }
            if let Some(j) = (0..art_base).find(|&j| !tab.rows[i][j].is_zero()) {
                tab.pivot(i, j);
            }
        }
    }

    let mut cost = vec![Rational::zero(); width];
    for (j, c) in objective.iter().enumerate() {
        cost[j] = c.clone();
        cost[n + j] = -c;
    }
    let allowed: Vec<bool> = (0..width).map(|j| j < art_base).collect();
    if !tab.run(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let point: Vec<Rational> = (0..n).map(|j| tab.value(j) - tab.value(n + j)).collect();
    LpOutcome::Optimal {
        value: tab.objective(&cost),
        point,
    }
}
