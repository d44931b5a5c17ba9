use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use compound_capacity::fm::{
    build_thmk_system, eliminate, feasible_point, implies, parse_inequality, rat, ratio,
    thm2_system, Inequality, LinForm, LinIneqSystem, Rational, RelOp, Thm2Variant,
};

const VARS: [&str; 3] = ["x", "y", "z"];
const ATOMS: [&str; 2] = ["I(A;B)", "H(A|B,C)"];

fn coeff() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| ratio(n, d))
}

fn op() -> impl Strategy<Value = RelOp> {
    prop_oneof![
        Just(RelOp::Lt),
        Just(RelOp::Le),
        Just(RelOp::Ge),
        Just(RelOp::Gt),
        Just(RelOp::Eq)
    ]
}

fn inequality(with_atoms: bool) -> impl Strategy<Value = Inequality> {
    let n_atoms = if with_atoms { ATOMS.len() } else { 0 };
    (
        prop::collection::vec(coeff(), VARS.len()),
        prop::collection::vec(coeff(), n_atoms),
        -3i64..=3,
        op(),
    )
        .prop_map(|(vc, ac, c, op)| {
            let mut lhs = LinForm::zero();
            for (v, k) in VARS.iter().zip(&vc) {
                lhs.add_var(v, k);
            }
            let mut rhs = LinForm::constant_form(rat(c));
            for (a, k) in ATOMS.iter().zip(&ac) {
                rhs.add_atom(a, k);
            }
            Inequality::new(&lhs, op, &rhs)
        })
}

fn system(rows: &[Inequality]) -> LinIneqSystem {
    let mut sys = LinIneqSystem::new(&VARS, &ATOMS).unwrap();
    for r in rows {
        sys.push(r.clone()).unwrap();
    }
    sys
}

fn point(xs: &[i64]) -> BTreeMap<String, Rational> {
    VARS.iter()
        .zip(xs)
        .map(|(v, &x)| (v.to_string(), ratio(x, 2)))
        .collect()
}

/// Output holds at `(x, y)` exactly when some `z` completes it.
fn check_projection(rows: &[Inequality], pts: &[[i64; 2]]) -> Result<(), TestCaseError> {
    let sys = system(rows);
    let out = eliminate(&sys, &["z"]).unwrap();
    prop_assert!(!out.mentions("z"));
    for p in pts {
        let at = point(p);
        let projected = out.rows().iter().all(|r| r.holds(&at) == Some(true));
        let fiber: Vec<Inequality> = sys.rows().iter().map(|r| r.fix(&at)).collect();
        let lifted = feasible_point(&fiber).is_some();
        prop_assert_eq!(
            projected,
            lifted,
            "at {:?}\nsystem:\n{}\nprojection:\n{}",
            p,
            sys,
            out
        );
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn display_parse_roundtrip(ineq in inequality(true)) {
        let text = ineq.to_string();
        let back = parse_inequality(&text).unwrap();
        prop_assert_eq!(back, ineq, "{}", text);
    }

    #[test]
    fn system_text_roundtrip(rows in prop::collection::vec(inequality(true), 0..6)) {
        let sys = system(&rows);
        let back = LinIneqSystem::parse(&sys.to_text()).unwrap();
        prop_assert_eq!(back, sys);
    }

    #[test]
    fn elimination_is_exact(
        rows in prop::collection::vec(inequality(false), 1..6),
        pts in prop::collection::vec([-6i64..=6, -6i64..=6], 25),
    ) {
        check_projection(&rows, &pts)?;
    }

    #[test]
    fn projection_is_implied(rows in prop::collection::vec(inequality(true), 1..6)) {
        let sys = system(&rows);
        let out = eliminate(&sys, &["y", "z"]).unwrap();
        for r in out.rows() {
            prop_assert!(implies(sys.rows(), r), "{}", r);
        }
    }
}

#[test]
fn exact_projection_on_a_fixed_system() {
    let rows: Vec<Inequality> = [
        "x + z < 2",
        "y - z <= 1",
        "x - 2*z >= -3",
        "z >= 0",
        "x + y + z > -2",
        "2*x - y + 1/3*z <= 4",
    ]
    .iter()
    .map(|r| parse_inequality(r).unwrap())
    .collect();
    let mut state = 17u64;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 33) % 25) as i64 - 12
    };
    let pts: Vec<[i64; 2]> = (0..1000).map(|_| [next(), next()]).collect();
    check_projection(&rows, &pts).unwrap();
}

#[test]
fn two_receiver_system_is_the_general_system_at_k2() {
    let k2: BTreeSet<Inequality> = build_thmk_system(2)
        .unwrap()
        .reduced()
        .rows()
        .iter()
        .cloned()
        .collect();
    // rewrite the mutual-information atoms through conditional entropies; the two
    // pair atoms only ever appear as a sum
    let mut subs = BTreeMap::new();
    let h = |n: &str| LinForm::atom(n, rat(1));
    let neg = |n: &str| LinForm::atom(n, rat(-1));
    subs.insert(
        "I(V1;S|U)".to_string(),
        h("H(V1|U)").plus(&neg("H(V1|U,S)")),
    );
    subs.insert(
        "I(V2;S|U)".to_string(),
        h("H(V2|U)").plus(&neg("H(V2|U,S)")),
    );
    let pair = h("H(V1|U)").plus(&h("H(V2|U)")).plus(&neg("H(V1,V2|U,S)"));
    subs.insert("I(V1;V2|U)".to_string(), pair);
    subs.insert("I(V1,V2;S|U)".to_string(), LinForm::zero());
    let k2_from_thm2: BTreeSet<Inequality> = thm2_system(Thm2Variant::Full)
        .substitute_atoms(&subs)
        .reduced()
        .rows()
        .iter()
        .cloned()
        .collect();
    assert_eq!(k2_from_thm2, k2);
}
