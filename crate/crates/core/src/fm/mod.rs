//! Exact Fourier–Motzkin elimination over rational linear inequalities.
//!
//! Right-hand sides may contain symbolic atoms such as `I(U;S)` or `H(V1|U)`.
//! Atoms are opaque labels and are never eliminated. Every coefficient is a
//! [`BigRational`]; nothing in this module touches floating point.

mod derivation;
mod lp;
mod parse;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use derivation::{
    build_thmk_system, check_projection, elimination_order, thm2_context, thm2_system,
    thm2_targets, thm3_targets, thmk_context, verify_thm2, verify_thm2_variant, verify_thmk,
    ProjectionCheck, Thm2Variant, MAX_K,
};
pub use parse::parse_inequality;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FmError {
    #[error("line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("name `{0}` is not declared in the system")]
    Undeclared(String),
    #[error("name `{0}` is declared twice")]
    Duplicate(String),
    #[error("cannot eliminate `{0}`: not a variable of the system")]
    NotAVariable(String),
    #[error("K = {k} outside 1..={max}")]
    BadK { k: usize, max: usize },
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `Σ c_v v + Σ c_a a + constant`. Zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinForm {
    vars: BTreeMap<String, Rational>,
    atoms: BTreeMap<String, Rational>,
    constant: Rational,
}

fn bump(map: &mut BTreeMap<String, Rational>, name: &str, c: &Rational) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(name.to_string()).or_insert_with(Rational::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(name);
    }
}

impl LinForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(name: &str, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_var(name, &c);
        f
    }

    pub fn atom(name: &str, c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_atom(name, &c);
        f
    }

    pub fn constant_form(c: Rational) -> Self {
        Self {
            constant: c,
            ..Self::zero()
        }
    }

    pub fn add_var(&mut self, name: &str, c: &Rational) {
        bump(&mut self.vars, name, c);
    }

    pub fn add_atom(&mut self, name: &str, c: &Rational) {
        bump(&mut self.atoms, name, c);
    }

    pub fn add_constant(&mut self, c: &Rational) {
        self.constant += c;
    }

    pub fn vars(&self) -> &BTreeMap<String, Rational> {
        &self.vars
    }

    pub fn atoms(&self) -> &BTreeMap<String, Rational> {
        &self.atoms
    }

    pub fn constant(&self) -> &Rational {
        &self.constant
    }

    pub fn var_coeff(&self, name: &str) -> Rational {
        self.vars.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn atom_coeff(&self, name: &str) -> Rational {
        self.atoms.get(name).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty() && self.atoms.is_empty()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            vars: self.vars.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            atoms: self.atoms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            constant: &self.constant * c,
        }
    }

    pub fn add_scaled(&mut self, other: &LinForm, c: &Rational) {
        for (k, v) in &other.vars {
            bump(&mut self.vars, k, &(v * c));
        }
        for (k, v) in &other.atoms {
            bump(&mut self.atoms, k, &(v * c));
        }
        self.constant += &other.constant * c;
    }

    pub fn plus(&self, other: &LinForm) -> Self {
        let mut f = self.clone();
        f.add_scaled(other, &Rational::one());
        f
    }

    pub fn minus(&self, other: &LinForm) -> Self {
        let mut f = self.clone();
        f.add_scaled(other, &-Rational::one());
        f
    }

    /// First nonzero coefficient in the order variables, atoms, constant.
    fn leading(&self) -> Option<&Rational> {
        self.vars
            .values()
            .next()
            .or_else(|| self.atoms.values().next())
            .or((!self.constant.is_zero()).then_some(&self.constant))
    }

    /// Replace names by values; names absent from `values` are kept.
    pub fn fix(&self, values: &BTreeMap<String, Rational>) -> Self {
        let mut out = LinForm::constant_form(self.constant.clone());
        for (k, c) in &self.vars {
            match values.get(k) {
                Some(v) => out.constant += c * v,
                None => out.add_var(k, c),
            }
        }
        for (k, c) in &self.atoms {
            match values.get(k) {
                Some(v) => out.constant += c * v,
                None => out.add_atom(k, c),
            }
        }
        out
    }

    /// Replace atoms by forms over atoms and constants.
    pub fn substitute_atoms(&self, subs: &BTreeMap<String, LinForm>) -> Self {
        let mut out = LinForm {
            vars: self.vars.clone(),
            atoms: BTreeMap::new(),
            constant: self.constant.clone(),
        };
        for (k, c) in &self.atoms {
            match subs.get(k) {
                Some(f) => out.add_scaled(f, c),
                None => out.add_atom(k, c),
            }
        }
        out
    }

    /// Value when every name has an assignment.
    pub fn eval(&self, values: &BTreeMap<String, Rational>) -> Option<Rational> {
        let f = self.fix(values);
        f.is_constant().then_some(f.constant)
    }

    fn names(&self) -> impl Iterator<Item = &String> {
        self.vars.keys().chain(self.atoms.keys())
    }
}

fn write_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &Rational,
    name: Option<&str>,
) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    match name {
        Some(n) if mag.is_one() => write!(f, "{n}"),
        Some(n) => write!(f, "{mag}*{n}"),
        None => write!(f, "{mag}"),
    }
}

/// Writes `0` when there are no terms.
fn write_side(f: &mut fmt::Formatter<'_>, terms: &[(Option<&str>, Rational)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (i, (name, c)) in terms.iter().enumerate() {
        write_term(f, i == 0, c, *name)?;
    }
    Ok(())
}

impl fmt::Display for LinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Option<&str>, Rational)> = self
            .vars
            .iter()
            .chain(self.atoms.iter())
            .map(|(k, v)| (Some(k.as_str()), v.clone()))
            .collect();
        if !self.constant.is_zero() {
            terms.push((None, self.constant.clone()));
        }
        write_side(f, &terms)
    }
}

/// Relation between a form and zero after normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Le,
    Lt,
    Eq,
}

/// Relation as written between two sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

/// `form rel 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Inequality {
    pub form: LinForm,
    pub rel: Rel,
}

impl Inequality {
    /// `lhs op rhs`.
    pub fn new(lhs: &LinForm, op: RelOp, rhs: &LinForm) -> Self {
        let (form, rel) = match op {
            RelOp::Lt => (lhs.minus(rhs), Rel::Lt),
            RelOp::Le => (lhs.minus(rhs), Rel::Le),
            RelOp::Eq => (lhs.minus(rhs), Rel::Eq),
            RelOp::Ge => (rhs.minus(lhs), Rel::Le),
            RelOp::Gt => (rhs.minus(lhs), Rel::Lt),
        };
        Self { form, rel }
    }

    pub fn is_strict(&self) -> bool {
        self.rel == Rel::Lt
    }

    /// Strict rows become non-strict.
    pub fn closure(&self) -> Self {
        Self {
            form: self.form.clone(),
            rel: if self.rel == Rel::Lt {
                Rel::Le
            } else {
                self.rel
            },
        }
    }

    /// Leading coefficient scaled to `±1` (to `+1` for equalities).
    pub fn normalized(&self) -> Self {
        match self.form.leading() {
            None => self.clone(),
            Some(lead) => {
                let s = if self.rel == Rel::Eq {
                    lead.recip()
                } else {
                    lead.abs().recip()
                };
                Self {
                    form: self.form.scaled(&s),
                    rel: self.rel,
                }
            }
        }
    }

    /// Truth value of a row with no names left.
    pub fn trivial(&self) -> Option<bool> {
        if !self.form.is_constant() {
            return None;
        }
        let c = &self.form.constant;
        Some(match self.rel {
            Rel::Le => !c.is_positive(),
            Rel::Lt => c.is_negative(),
            Rel::Eq => c.is_zero(),
        })
    }

    /// Truth value under a full assignment.
    pub fn holds(&self, values: &BTreeMap<String, Rational>) -> Option<bool> {
        self.fix(values).trivial()
    }

    pub fn fix(&self, values: &BTreeMap<String, Rational>) -> Self {
        Self {
            form: self.form.fix(values),
            rel: self.rel,
        }
    }

    pub fn substitute_atoms(&self, subs: &BTreeMap<String, LinForm>) -> Self {
        Self {
            form: self.form.substitute_atoms(subs),
            rel: self.rel,
        }
    }

    /// Same closed half-space (or hyperplane) as `other` up to positive scaling.
    pub fn same_closure(&self, other: &Inequality) -> bool {
        self.closure().normalized() == other.closure().normalized()
    }
}

impl fmt::Display for Inequality {
    /// Variables on the left, atoms and the constant on the right.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let left: Vec<(Option<&str>, Rational)> = self
            .form
            .vars
            .iter()
            .map(|(k, v)| (Some(k.as_str()), v.clone()))
            .collect();
        let mut right: Vec<(Option<&str>, Rational)> = self
            .form
            .atoms
            .iter()
            .map(|(k, v)| (Some(k.as_str()), -v))
            .collect();
        if !self.form.constant.is_zero() {
            right.push((None, -&self.form.constant));
        }
        write_side(f, &left)?;
        f.write_str(match self.rel {
            Rel::Le => " <= ",
            Rel::Lt => " < ",
            Rel::Eq => " = ",
        })?;
        write_side(f, &right)
    }
}

/// Normalize, drop rows that are trivially true, merge duplicates.
///
/// When the same closed half-space appears both strictly and non-strictly the
/// strict row is kept. First-occurrence order is preserved.
pub fn reduce(rows: impl IntoIterator<Item = Inequality>) -> Vec<Inequality> {
    let mut out: Vec<Inequality> = Vec::new();
    let mut seen: HashMap<(LinForm, bool), usize> = HashMap::new();
    for row in rows {
        let row = row.normalized();
        if row.trivial() == Some(true) {
            continue;
        }
        let key = (row.form.clone(), row.rel == Rel::Eq);
        match seen.get(&key) {
            Some(&i) => {
                if row.is_strict() {
                    out[i].rel = Rel::Lt;
                }
            }
            None => {
                seen.insert(key, out.len());
                out.push(row);
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinIneqSystem {
    vars: Vec<String>,
    atoms: Vec<String>,
    rows: Vec<Inequality>,
}

impl LinIneqSystem {
    pub fn new<S: AsRef<str>>(vars: &[S], atoms: &[S]) -> Result<Self, FmError> {
        let mut seen = BTreeSet::new();
        for n in vars.iter().chain(atoms) {
            if !seen.insert(n.as_ref().to_string()) {
                return Err(FmError::Duplicate(n.as_ref().to_string()));
            }
        }
        Ok(Self {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            atoms: atoms.iter().map(|s| s.as_ref().to_string()).collect(),
            rows: Vec::new(),
        })
    }

    /// Parse the plain-text format; see [`LinIneqSystem::to_text`].
    pub fn parse(text: &str) -> Result<Self, FmError> {
        parse::parse_system(text)
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn rows(&self) -> &[Inequality] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn push(&mut self, row: Inequality) -> Result<(), FmError> {
        for n in row.form.vars.keys() {
            if !self.vars.contains(n) {
                return Err(FmError::Undeclared(n.clone()));
            }
        }
        for n in row.form.atoms.keys() {
            if !self.atoms.contains(n) {
                return Err(FmError::Undeclared(n.clone()));
            }
        }
        self.rows.push(row);
        Ok(())
    }

    /// Parse one row and push it.
    pub fn push_str(&mut self, line: &str) -> Result<(), FmError> {
        let row = parse_inequality(line)?;
        self.push(row)
    }

    pub fn mentions(&self, name: &str) -> bool {
        self.rows.iter().any(|r| r.form.names().any(|n| n == name))
    }

    /// Same system with rows passed through [`reduce`].
    pub fn reduced(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            atoms: self.atoms.clone(),
            rows: reduce(self.rows.iter().cloned()),
        }
    }

    /// Replace atoms by forms; atoms that no longer occur are dropped from the declaration.
    pub fn substitute_atoms(&self, subs: &BTreeMap<String, LinForm>) -> Self {
        let rows: Vec<Inequality> = self.rows.iter().map(|r| r.substitute_atoms(subs)).collect();
        let mut atoms: Vec<String> = self
            .atoms
            .iter()
            .filter(|a| !subs.contains_key(*a))
            .cloned()
            .collect();
        for f in subs.values() {
            for a in f.atoms.keys() {
                if !atoms.contains(a) {
                    atoms.push(a.clone());
                }
            }
        }
        Self {
            vars: self.vars.clone(),
            atoms,
            rows,
        }
    }

    /// Replace the named variables and atoms by values.
    pub fn fix(&self, values: &BTreeMap<String, Rational>) -> Self {
        Self {
            vars: self
                .vars
                .iter()
                .filter(|v| !values.contains_key(*v))
                .cloned()
                .collect(),
            atoms: self
                .atoms
                .iter()
                .filter(|a| !values.contains_key(*a))
                .cloned()
                .collect(),
            rows: self.rows.iter().map(|r| r.fix(values)).collect(),
        }
    }

    /// Remove one row (the Marton-style sum constraint, for instance).
    pub fn without_row(&self, index: usize) -> Self {
        let mut s = self.clone();
        s.rows.remove(index);
        s
    }

    /// Plain-text form accepted by [`LinIneqSystem::parse`].
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LinIneqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.vars.join(", "))?;
        writeln!(f, "atoms: {}", self.atoms.join(", "))?;
        for r in &self.rows {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn eliminate_one(rows: Vec<Inequality>, v: &str) -> Vec<Inequality> {
    if let Some(pos) = rows
        .iter()
        .position(|r| r.rel == Rel::Eq && !r.form.var_coeff(v).is_zero())
    {
        let eq = rows[pos].form.clone();
        let a = eq.var_coeff(v);
        return reduce(
            rows.into_iter()
                .enumerate()
                .filter(|(i, _)| *i != pos)
                .map(|(_, r)| {
                    let c = r.form.var_coeff(v);
                    if c.is_zero() {
                        return r;
                    }
                    let mut form = r.form;
                    form.add_scaled(&eq, &-(c / &a));
                    Inequality { form, rel: r.rel }
                }),
        );
    }
    let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
    for r in rows {
        let c = r.form.var_coeff(v);
        if c.is_positive() {
            pos.push((c, r));
        } else if c.is_negative() {
            neg.push((c, r));
        } else {
            rest.push(r);
        }
    }
    for (a, p) in &pos {
        for (b, n) in &neg {
            // (-b) p + a n cancels v
            let mut form = p.form.scaled(&-b);
            form.add_scaled(&n.form, a);
            let rel = if p.is_strict() || n.is_strict() {
                Rel::Lt
            } else {
                Rel::Le
            };
            rest.push(Inequality { form, rel });
        }
    }
    reduce(rest)
}

/// Project out `vars`, in order. Variables declared but absent are skipped.
pub fn eliminate<S: AsRef<str>>(sys: &LinIneqSystem, vars: &[S]) -> Result<LinIneqSystem, FmError> {
    for v in vars {
        if !sys.vars.iter().any(|x| x == v.as_ref()) {
            return Err(FmError::NotAVariable(v.as_ref().to_string()));
        }
    }
    if vars.is_empty() {
        return Ok(sys.clone());
    }
    let mut rows = reduce(sys.rows.iter().cloned());
    for v in vars {
        rows = eliminate_one(rows, v.as_ref());
    }
    Ok(LinIneqSystem {
        vars: sys
            .vars
            .iter()
            .filter(|x| !vars.iter().any(|v| v.as_ref() == x.as_str()))
            .cloned()
            .collect(),
        atoms: sys.atoms.clone(),
        rows,
    })
}

/// Treat every variable and atom as an unknown and collect the LP rows.
struct Unknowns {
    index: BTreeMap<String, usize>,
}

impl Unknowns {
    fn from_rows<'a>(rows: impl IntoIterator<Item = &'a Inequality>) -> Self {
        let mut index = BTreeMap::new();
        for r in rows {
            for n in r.form.names() {
                let next = index.len();
                index.entry(n.clone()).or_insert(next);
            }
        }
        Self { index }
    }

    fn len(&self) -> usize {
        self.index.len()
    }

    fn dense(&self, form: &LinForm) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.len()];
        for (n, c) in form.vars.iter().chain(form.atoms.iter()) {
            out[self.index[n]] = c.clone();
        }
        out
    }

    fn lp_rows(&self, rows: &[Inequality], strict_slack: bool) -> Vec<lp::LpRow> {
        let width = self.len() + usize::from(strict_slack);
        rows.iter()
            .map(|r| {
                let mut coeffs = self.dense(&r.form);
                coeffs.resize(width, Rational::zero());
                if strict_slack && r.is_strict() {
                    coeffs[width - 1] = Rational::one();
                }
                lp::LpRow {
                    coeffs,
                    rel: if r.rel == Rel::Eq {
                        lp::LpRel::Eq
                    } else {
                        lp::LpRel::Le
                    },
                    rhs: -&r.form.constant,
                }
            })
            .collect()
    }

    fn assignment(&self, point: &[Rational]) -> BTreeMap<String, Rational> {
        self.index
            .iter()
            .map(|(n, &i)| (n.clone(), point[i].clone()))
            .collect()
    }
}

/// Does the closure of `premises` imply the closure of `target`, for every
/// value of the variables and atoms?
///
/// Decided exactly by linear programming; by Farkas' lemma a `true` answer is
/// the same as `target` being a nonnegative combination of premise rows.
pub fn implies(premises: &[Inequality], target: &Inequality) -> bool {
    let premises: Vec<Inequality> = premises.iter().map(Inequality::closure).collect();
    let target = target.closure();
    let halves = if target.rel == Rel::Eq {
        vec![target.form.clone(), target.form.scaled(&-Rational::one())]
    } else {
        vec![target.form.clone()]
    };
    let unk = Unknowns::from_rows(premises.iter().chain(std::iter::once(&target)));
    let rows = unk.lp_rows(&premises, false);
    halves.iter().all(
        |half| match lp::maximize(unk.len(), &unk.dense(half), &rows) {
            lp::LpOutcome::Infeasible => true,
            lp::LpOutcome::Unbounded => false,
            lp::LpOutcome::Optimal { value, .. } => !(value + &half.constant).is_positive(),
        },
    )
}

/// A point satisfying every row, strict rows strictly, or `None`.
pub fn feasible_point(rows: &[Inequality]) -> Option<BTreeMap<String, Rational>> {
    if rows.iter().any(|r| r.trivial() == Some(false)) {
        return None;
    }
    let unk = Unknowns::from_rows(rows);
    let n = unk.len();
    let mut lp_rows = unk.lp_rows(rows, true);
    // slack δ ≤ 1
    let mut cap = vec![Rational::zero(); n + 1];
    cap[n] = Rational::one();
    lp_rows.push(lp::LpRow {
        coeffs: cap.clone(),
        rel: lp::LpRel::Le,
        rhs: Rational::one(),
    });
    match lp::maximize(n + 1, &cap, &lp_rows) {
        lp::LpOutcome::Optimal { value, point } if value.is_positive() => {
            Some(unk.assignment(&point[..n]))
        }
        _ => None,
    }
}

/// Indices of rows not implied, in closure, by the other kept rows together with `context`.
///
/// Rows are visited in order and dropped greedily, so the result is deterministic.
pub fn essential_rows(rows: &[Inequality], context: &[Inequality]) -> Vec<usize> {
    let mut keep: Vec<bool> = vec![true; rows.len()];
    for i in 0..rows.len() {
        let mut premises: Vec<Inequality> = context.to_vec();
        premises.extend(
            rows.iter()
                .enumerate()
                .filter(|(j, _)| *j != i && keep[*j])
                .map(|(_, r)| r.clone()),
        );
        if implies(&premises, &rows[i]) {
            keep[i] = false;
        }
    }
    (0..rows.len()).filter(|&i| keep[i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(s: &str) -> Inequality {
        parse_inequality(s).unwrap()
    }

    fn sys(text: &str) -> LinIneqSystem {
        LinIneqSystem::parse(text).unwrap()
    }

    #[test]
    fn interval_projection() {
        let s = sys("vars: x\natoms: a(), b()\nx >= a()\nx <= b()\n");
        let p = eliminate(&s, &["x"]).unwrap();
        assert_eq!(p.rows().len(), 1);
        assert!(p.rows()[0].same_closure(&row("a() <= b()")));
        assert!(!p.rows()[0].is_strict());
    }

    #[test]
    fn single_combination() {
        let s = sys("vars: T0, R, S0, T1\natoms: I1()\nT0 - R > S0\nT0 + T1 < I1()\n");
        let p = eliminate(&s, &["T0"]).unwrap();
        assert_eq!(p.rows().len(), 1);
        assert!(p.rows()[0].same_closure(&row("R + S0 + T1 < I1()")));
        assert!(p.rows()[0].is_strict());
    }

    #[test]
    fn empty_list_is_identity() {
        let s = sys("vars: x, y\nx + y < 1\n2*x >= y\n");
        assert_eq!(eliminate::<&str>(&s, &[]).unwrap(), s);
    }

    #[test]
    fn absent_variable_is_identity_and_unknown_errors() {
        let s = sys("vars: x, y\nx < 1\n");
        let p = eliminate(&s, &["y"]).unwrap();
        assert_eq!(p.rows(), s.reduced().rows());
        assert_eq!(
            eliminate(&s, &["z"]),
            Err(FmError::NotAVariable("z".into()))
        );
    }

    #[test]
    fn equalities_substitute() {
        let s = sys("vars: x, y\nx = y + 1\nx <= 3\ny >= 0\n");
        let p = eliminate(&s, &["x"]).unwrap();
        let p = eliminate(&p, &["y"]).unwrap();
        assert!(p.is_empty(), "{p}");
        let s = sys("vars: x, y\nx = y + 1\nx <= 0\ny >= 0\n");
        let p = eliminate(&s, &["x", "y"]).unwrap();
        assert_eq!(
            p.rows()
                .iter()
                .filter_map(Inequality::trivial)
                .collect::<Vec<_>>(),
            vec![false]
        );
    }

    #[test]
    fn reduce_merges_scalings_and_strictness() {
        let rows = reduce(vec![
            row("2*x <= 4"),
            row("x < 2"),
            row("0 <= 1"),
            row("3*x <= 6"),
        ]);
        assert_eq!(rows, vec![row("x < 2").normalized()]);
    }

    #[test]
    fn implication_and_feasibility() {
        let premises = vec![row("x <= a()"), row("y <= b()"), row("a() >= 0")];
        assert!(implies(&premises, &row("x + y <= a() + b()")));
        assert!(!implies(&premises, &row("x <= b()")));
        assert!(implies(&premises, &row("x < a()")), "closure sense");
        assert!(feasible_point(&[row("x < 1"), row("x > 0")]).is_some());
        assert!(feasible_point(&[row("x < 1"), row("x > 1")]).is_none());
        assert!(feasible_point(&[row("x <= 1"), row("x >= 1")]).is_some());
        let pt = feasible_point(&[row("x + y = 2"), row("x - y > 0"), row("y >= 0")]).unwrap();
        assert_eq!(row("x + y = 2").holds(&pt), Some(true));
        assert_eq!(row("x - y > 0").holds(&pt), Some(true));
    }

    #[test]
    fn essential_drops_implied_rows() {
        let rows = vec![
            row("x <= 1"),
            row("x <= 2"),
            row("y <= 1"),
            row("x + y <= 2"),
        ];
        assert_eq!(essential_rows(&rows, &[]), vec![0, 2]);
    }

    #[test]
    fn display_roundtrip() {
        let s = sys("vars: R, T0\natoms: I(U,V1;Y1), I(U;S)\n1*T0 + 1/2*R < I(U,V1;Y1) - 0.5*I(U;S)\nR >= 0\n");
        let back = LinIneqSystem::parse(&s.to_text()).unwrap();
        assert_eq!(back, s);
    }
}
