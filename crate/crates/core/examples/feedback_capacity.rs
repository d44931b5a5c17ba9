//! Feedback bound: per-component Gel'fand–Pinsker optima, worst case over
//! the family, warm-started from the optimized no-feedback law.

use compound_capacity::gp::{feedback_capacity, maximize_bound, Bound};
use compound_capacity::prob::{Channel, CompoundDmc, Dist};
use compound_capacity::{LawShape, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // component 1 flips X when S = 1, component 2 ignores S but adds noise
    let w1 = Channel::deterministic(vec![2, 2], 2, |i| i[0] ^ i[1])?;
    let w2 = Channel::from_fn(vec![2, 2], 2, |i| {
        if i[0] == 0 {
            vec![0.95, 0.05]
        } else {
            vec![0.05, 0.95]
        }
    })?;
    let dmc = CompoundDmc::new(vec![w1, w2], Dist::bernoulli(0.3)?)?;

    let shape = LawShape {
        u: 4,
        ..LawShape::default_for(&dmc, 0)
    };
    let cfg = SearchConfig {
        restarts: 8,
        seed: 3,
        ..SearchConfig::default()
    };
    let (nofb, search) = maximize_bound(&dmc, Bound::CompoundGp, &shape, &cfg, &[])?;
    let warm = shape.law_from_point(&search.best_point)?;
    let fb = feedback_capacity(&dmc, &shape, &cfg, &[warm])?;

    print!("{nofb}{}", fb.report);
    for (theta, r) in fb.per_component.iter().enumerate() {
        println!("component {}: {:.6} bits", theta + 1, r.best_value);
    }
    println!(
        "gain from feedback: {:.6} bits",
        fb.report.value_bits - nofb.value_bits
    );
    Ok(())
}
