//! Encoding/decoding constraint systems of the superposition–Marton scheme and
//! the checks that their projections give the stated rate bounds.

use std::collections::BTreeMap;
use std::fmt;

use super::{
    eliminate, essential_rows, implies, parse_inequality, rat, FmError, Inequality, LinForm,
    LinIneqSystem,
};

/// Largest K accepted by [`build_thmk_system`].
pub const MAX_K: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Thm2Variant {
    Full,
    /// The joint-typicality constraint on `S1 + S2` removed.
    WithoutMartonSum,
    /// `V1 = V2 = U`: conditional terms vanish and `I(U,Vk;Yk)` becomes `I(U;Yk)`.
    CollapsedAuxiliaries,
}

const THM2_ATOMS: [&str; 7] = [
    "I(U;S)",
    "I(V1;S|U)",
    "I(V2;S|U)",
    "I(V1;V2|U)",
    "I(V1,V2;S|U)",
    "I(U,V1;Y1)",
    "I(U,V2;Y2)",
];

const MARTON_ROW: &str = "S1 + S2 > I(V1;V2|U) + I(V1,V2;S|U)";

fn must(line: &str) -> Inequality {
    parse_inequality(line).expect("built-in row parses")
}

fn atom(name: &str) -> LinForm {
    LinForm::atom(name, rat(1))
}

fn collapse_substitution() -> BTreeMap<String, LinForm> {
    let mut subs = BTreeMap::new();
    for a in ["I(V1;S|U)", "I(V2;S|U)", "I(V1;V2|U)", "I(V1,V2;S|U)"] {
        subs.insert(a.to_string(), LinForm::zero());
    }
    subs.insert("I(U,V1;Y1)".into(), atom("I(U;Y1)"));
    subs.insert("I(U,V2;Y2)".into(), atom("I(U;Y2)"));
    subs
}

/// Rate variable, binning variables `T`, covering slacks `S` for `K` receivers.
fn variables(k: usize) -> Vec<String> {
    let mut v = vec!["R".to_string(), "T0".to_string()];
    v.extend((1..=k).map(|i| format!("T{i}")));
    v.push("S0".into());
    v.extend((1..=k).map(|i| format!("S{i}")));
    v
}

fn push_nonnegativity(sys: &mut LinIneqSystem, k: usize) {
    sys.push(must("T0 >= R")).expect("declared");
    for i in 0..=k {
        sys.push(must(&format!("S{i} >= 0"))).expect("declared");
    }
    for i in 0..=k {
        sys.push(must(&format!("T{i} >= 0"))).expect("declared");
    }
}

/// Constraint system for two receivers, before elimination.
pub fn thm2_system(variant: Thm2Variant) -> LinIneqSystem {
    let mut sys =
        LinIneqSystem::new(&variables(2), &THM2_ATOMS.map(String::from)).expect("distinct names");
    let mut rows = vec![
        "T0 - R > S0",
        "T1 >= S1",
        "T2 >= S2",
        "S0 > I(U;S)",
        MARTON_ROW,
        "S1 > I(V1;S|U)",
        "S2 > I(V2;S|U)",
        "T0 + T1 < I(U,V1;Y1)",
        "T0 + T2 < I(U,V2;Y2)",
    ];
    if variant == Thm2Variant::WithoutMartonSum {
        rows.retain(|r| *r != MARTON_ROW);
    }
    for r in rows {
        sys.push(must(r)).expect("declared");
    }
    push_nonnegativity(&mut sys, 2);
    if variant == Thm2Variant::CollapsedAuxiliaries {
        sys = sys.substitute_atoms(&collapse_substitution());
    }
    sys
}

/// Rate bounds the two-receiver projection should reduce to.
pub fn thm2_targets(variant: Thm2Variant) -> Vec<Inequality> {
    let mut split = BTreeMap::new();
    for k in 1..=2 {
        split.insert(
            format!("I(U,V{k};S)"),
            atom("I(U;S)").plus(&atom(&format!("I(V{k};S|U)"))),
        );
    }
    let mut rows = vec!["R <= I(U,V1;Y1) - I(U,V1;S)", "R <= I(U,V2;Y2) - I(U,V2;S)"];
    if variant == Thm2Variant::Full {
        rows.push("2*R <= I(U,V1;Y1) + I(U,V2;Y2) - 2*I(U;S) - I(V1;V2|U) - I(V1,V2;S|U)");
    }
    let rows = rows.into_iter().map(|r| must(r).substitute_atoms(&split));
    if variant == Thm2Variant::CollapsedAuxiliaries {
        let c = collapse_substitution();
        rows.map(|r| r.substitute_atoms(&c)).collect()
    } else {
        rows.collect()
    }
}

/// Facts that hold for every distribution: rates and information atoms are nonnegative,
/// and the Marton penalty dominates the two covering terms when both are present.
pub fn thm2_context(sys: &LinIneqSystem) -> Vec<Inequality> {
    let mut ctx = vec![must("R >= 0")];
    ctx.extend(sys.atoms().iter().map(|a| must(&format!("{a} >= 0"))));
    if ["I(V1;V2|U)", "I(V1,V2;S|U)", "I(V1;S|U)", "I(V2;S|U)"]
        .iter()
        .all(|a| sys.atoms().iter().any(|b| b == a))
    {
        ctx.push(must("I(V1;V2|U) + I(V1,V2;S|U) >= I(V1;S|U) + I(V2;S|U)"));
    }
    ctx
}

/// Nonempty subsets of `{1..k}`, by bitmask.
fn subsets(k: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << k)).map(move |m| (1..=k).filter(|i| m & (1 << (i - 1)) != 0).collect())
}

fn joint_name(set: &[usize]) -> String {
    let v: Vec<String> = set.iter().map(|i| format!("V{i}")).collect();
    format!("H({}|U,S)", v.join(","))
}

fn thmk_atoms(k: usize) -> Vec<String> {
    let mut atoms = vec!["I(U;S)".to_string()];
    atoms.extend((1..=k).map(|i| format!("I(U,V{i};Y{i})")));
    atoms.extend((1..=k).map(|i| format!("H(V{i}|U)")));
    atoms.extend(subsets(k).map(|s| joint_name(&s)));
    atoms
}

/// Σ_{k∈set} H(Vk|U) − H(V_set|U,S) as atom terms.
fn covering_terms(set: &[usize]) -> String {
    let mut s: Vec<String> = set.iter().map(|i| format!("H(V{i}|U)")).collect();
    s.push(format!("- {}", joint_name(set)));
    s.join(" + ").replace("+ -", "-")
}

/// Constraint system for `k` receivers with one covering constraint per nonempty subset.
pub fn build_thmk_system(k: usize) -> Result<LinIneqSystem, FmError> {
    if !(1..=MAX_K).contains(&k) {
        return Err(FmError::BadK { k, max: MAX_K });
    }
    let mut sys = LinIneqSystem::new(&variables(k), &thmk_atoms(k))?;
    sys.push(must("T0 - R > S0"))?;
    for i in 1..=k {
        sys.push(must(&format!("T{i} >= S{i}")))?;
    }
    sys.push(must("S0 > I(U;S)"))?;
    for set in subsets(k) {
        let lhs: Vec<String> = set.iter().map(|i| format!("S{i}")).collect();
        sys.push(must(&format!(
            "{} > {}",
            lhs.join(" + "),
            covering_terms(&set)
        )))?;
    }
    for i in 1..=k {
        sys.push(must(&format!("T0 + T{i} < I(U,V{i};Y{i})")))?;
    }
    push_nonnegativity(&mut sys, k);
    Ok(sys)
}

/// Subset bounds `|𝒦| R ≤ Σ I(U,Vk;Yk) − |𝒦| I(U;S) + H(V_𝒦|U,S) − Σ H(Vk|U)`.
pub fn thm3_targets(k: usize) -> Vec<Inequality> {
    subsets(k)
        .map(|set| {
            let n = set.len();
            let gains: Vec<String> = set.iter().map(|i| format!("I(U,V{i};Y{i})")).collect();
            let costs: String = set.iter().map(|i| format!(" - H(V{i}|U)")).collect();
            must(&format!(
                "{n}*R <= {} - {n}*I(U;S) + {}{costs}",
                gains.join(" + "),
                joint_name(&set)
            ))
        })
        .collect()
}

/// Nonnegativity of rates and atoms, and of every covering term `Σ H(Vk|U) − H(V_𝒦|U,S)`.
pub fn thmk_context(k: usize) -> Vec<Inequality> {
    let mut ctx = vec![must("R >= 0")];
    ctx.extend(thmk_atoms(k).iter().map(|a| must(&format!("{a} >= 0"))));
    ctx.extend(subsets(k).map(|s| must(&format!("{} >= 0", covering_terms(&s)))));
    ctx
}

/// `S0`, then `T1..Tk`, then `S1..Sk`, then `T0`.
pub fn elimination_order(k: usize) -> Vec<String> {
    let mut v = vec!["S0".to_string()];
    v.extend((1..=k).map(|i| format!("T{i}")));
    v.extend((1..=k).map(|i| format!("S{i}")));
    v.push("T0".into());
    v
}

/// Outcome of projecting a system and comparing it with target rows.
#[derive(Debug, Clone)]
pub struct ProjectionCheck {
    pub source: LinIneqSystem,
    pub eliminated: Vec<String>,
    pub projection: LinIneqSystem,
    pub context: Vec<Inequality>,
    /// Projection rows not implied by the remaining ones together with the context.
    pub essential: Vec<Inequality>,
    pub targets: Vec<Inequality>,
    /// Per target: implied by the projection and the context.
    pub projection_implies: Vec<bool>,
    /// Per projection row: implied by the targets and the context.
    pub targets_imply: Vec<bool>,
    /// Per target: index of an essential row with the same closure.
    pub matches: Vec<Option<usize>>,
}

impl ProjectionCheck {
    /// The essential rows are exactly the targets, up to positive scaling and closure,
    /// and the two sets imply each other.
    pub fn exact(&self) -> bool {
        let mut used: Vec<usize> = self.matches.iter().flatten().copied().collect();
        used.sort_unstable();
        used.dedup();
        self.projection_implies.iter().all(|&b| b)
            && self.targets_imply.iter().all(|&b| b)
            && self.essential.len() == self.targets.len()
            && used.len() == self.targets.len()
    }

    /// Do the projection and the context imply `row` (in closure)?
    pub fn implies(&self, row: &Inequality) -> bool {
        let mut premises = self.context.clone();
        premises.extend(self.projection.rows().iter().cloned());
        implies(&premises, row)
    }

    /// Is some essential row the same closed half-space as `row`?
    pub fn has_essential(&self, row: &Inequality) -> bool {
        self.essential.iter().any(|e| e.same_closure(row))
    }
}

impl fmt::Display for ProjectionCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "eliminated: {}", self.eliminated.join(", "))?;
        writeln!(f, "projection ({} rows):", self.projection.len())?;
        for r in self.projection.rows() {
            writeln!(f, "  {r}")?;
        }
        writeln!(
            f,
            "essential rows given the context ({}):",
            self.essential.len()
        )?;
        for r in &self.essential {
            writeln!(f, "  {r}")?;
        }
        writeln!(f, "context:")?;
        for r in &self.context {
            writeln!(f, "  {r}")?;
        }
        writeln!(f, "targets:")?;
        for (i, t) in self.targets.iter().enumerate() {
            let tag = match (self.projection_implies[i], self.matches[i]) {
                (true, Some(j)) => format!("matched essential row {}", j + 1),
                (true, None) => "implied, no matching essential row".to_string(),
                (false, _) => "NOT implied".to_string(),
            };
            writeln!(f, "  {t}    [{tag}]")?;
        }
        let unexplained = self.targets_imply.iter().filter(|&&b| !b).count();
        if unexplained > 0 {
            writeln!(
                f,
                "projection rows not implied by the targets: {unexplained}"
            )?;
        }
        writeln!(
            f,
            "verdict: {}",
            if self.exact() {
                "projection equals the targets up to positive scaling"
            } else {
                "projection differs from the targets"
            }
        )?;
        writeln!(
            f,
            "note: elimination tracks strict rows; the comparison uses closures (every < read as <=)"
        )
    }
}

/// Eliminate `vars` from `source` and compare the result with `targets` under `context`.
pub fn check_projection(
    source: &LinIneqSystem,
    vars: &[String],
    targets: Vec<Inequality>,
    context: Vec<Inequality>,
) -> Result<ProjectionCheck, FmError> {
    let projection = eliminate(source, vars)?;
    let rows = projection.rows();
    let essential: Vec<Inequality> = essential_rows(rows, &context)
        .into_iter()
        .map(|i| rows[i].clone())
        .collect();
    let mut with_rows = context.clone();
    with_rows.extend(rows.iter().cloned());
    let projection_implies = targets.iter().map(|t| implies(&with_rows, t)).collect();
    let mut with_targets = context.clone();
    with_targets.extend(targets.iter().cloned());
    let targets_imply = rows.iter().map(|r| implies(&with_targets, r)).collect();
    let matches = targets
        .iter()
        .map(|t| essential.iter().position(|e| e.same_closure(t)))
        .collect();
    Ok(ProjectionCheck {
        source: source.clone(),
        eliminated: vars.to_vec(),
        projection,
        context,
        essential,
        targets,
        projection_implies,
        targets_imply,
        matches,
    })
}

pub fn verify_thm2_variant(variant: Thm2Variant) -> ProjectionCheck {
    let sys = thm2_system(variant);
    let ctx = thm2_context(&sys);
    check_projection(&sys, &elimination_order(2), thm2_targets(variant), ctx)
        .expect("built-in system is well formed")
}

/// Eliminate `T0..T2, S0..S2` from the two-receiver system and compare with the three rate bounds.
pub fn verify_thm2() -> ProjectionCheck {
    verify_thm2_variant(Thm2Variant::Full)
}

/// Eliminate all `T`, `S` from the `k`-receiver system and compare with the subset bounds.
pub fn verify_thmk(k: usize) -> Result<ProjectionCheck, FmError> {
    let sys = build_thmk_system(k)?;
    check_projection(
        &sys,
        &elimination_order(k),
        thm3_targets(k),
        thmk_context(k),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_receivers() {
        let c = verify_thm2();
        assert!(c.exact(), "{c}");
    }

    #[test]
    fn marton_sum_carries_the_pair_bound() {
        let c = verify_thm2_variant(Thm2Variant::WithoutMartonSum);
        assert!(c.exact(), "{c}");
        let pair = &thm2_targets(Thm2Variant::Full)[2];
        assert!(!c.implies(pair));
        assert!(!c.has_essential(pair));
    }

    #[test]
    fn collapsed_auxiliaries() {
        let c = verify_thm2_variant(Thm2Variant::CollapsedAuxiliaries);
        assert!(c.exact(), "{c}");
    }

    #[test]
    fn one_receiver() {
        let c = verify_thmk(1).unwrap();
        assert!(c.exact(), "{c}");
        let want = must("R <= I(U,V1;Y1) - I(U;S) - H(V1|U) + H(V1|U,S)");
        assert!(c.has_essential(&want));
    }

    #[test]
    fn three_receivers() {
        let c = verify_thmk(3).unwrap();
        assert!(c.exact(), "{c}");
        assert_eq!(c.essential.len(), 7);
    }

    #[test]
    fn k_range() {
        assert_eq!(
            build_thmk_system(0),
            Err(FmError::BadK { k: 0, max: MAX_K })
        );
        assert!(build_thmk_system(7).is_err());
        assert_eq!(
            build_thmk_system(6).unwrap().len(),
            1 + 6 + 1 + 63 + 6 + 1 + 7 + 7
        );
    }
}
