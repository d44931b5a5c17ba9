//! Maximize the compound Gel'fand–Pinsker bound over coding laws with
//! seeded multi-start projected ascent, and cross-check with a lattice search.

use compound_capacity::gp::{maximize_bound, Bound, BoundObjective};
use compound_capacity::optimize::{grid_maximize, Objective, SimplexShape};
use compound_capacity::prob::{Channel, CompoundDmc, Dist};
use compound_capacity::{LawShape, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let chans = [0.0, 0.11]
        .iter()
        .map(|&z| {
            Channel::from_fn(vec![2, 2], 2, |i| {
                let mut row = vec![z; 2];
                row[i[0] ^ i[1]] = 1.0 - z;
                row
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let dmc = CompoundDmc::new(chans, Dist::uniform(2)?)?;

    let shape = LawShape {
        u: 2,
        ..LawShape::default_for(&dmc, 0)
    };
    let cfg = SearchConfig {
        restarts: 32,
        seed: 1,
        ..SearchConfig::default()
    };
    let (report, search) = maximize_bound(&dmc, Bound::CompoundGp, &shape, &cfg, &[])?;
    print!("{report}");
    println!(
        "analytic optimum 1 - h(0.11) = {:.6}",
        1.0 - Dist::bernoulli(0.11)?.entropy()
    );
    let spread = search
        .trace
        .iter()
        .map(|t| t.best_value)
        .fold(f64::INFINITY, f64::min);
    println!("worst restart reached {spread:.6}");

    // exhaustive check over P(X|U,S) with U uniform and independent of S
    let objective = BoundObjective::new(&dmc, shape, Bound::CompoundGp)?;
    let restricted = |x: &[f64]| {
        let mut point = vec![0.5; 4];
        point.extend_from_slice(x);
        objective.terms(&point)
    };
    let grid = grid_maximize(&restricted, &SimplexShape::new(vec![(4, 2)]), 0.05)?;
    println!("lattice search at resolution 0.05: {:.6}", grid.best_value);
    Ok(())
}
