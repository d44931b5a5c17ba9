//! Decide stochastic degradedness by linear programming.

use compound_capacity::prob::{compose, Channel};
use compound_capacity::test_degraded;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let good = Channel::bsc(0.1)?;
    let bad = Channel::bsc(0.3)?;

    let t = test_degraded(&good, &bad)?;
    println!(
        "BSC(0.3) from BSC(0.1): {:?}, residual {:.2e}",
        t.verdict, t.residual
    );
    println!("  W̃ = {:?}", t.w_tilde.matrix());

    let t = test_degraded(&bad, &good)?;
    println!(
        "BSC(0.1) from BSC(0.3): {:?}, residual {:.2e}",
        t.verdict, t.residual
    );

    // a two-input channel followed by an erasure-like post-processing
    let w1 = Channel::from_fn(vec![2, 2], 3, |i| match (i[0], i[1]) {
        (0, 0) => vec![0.7, 0.2, 0.1],
        (0, 1) => vec![0.1, 0.8, 0.1],
        (1, 0) => vec![0.2, 0.2, 0.6],
        _ => vec![0.3, 0.3, 0.4],
    })?;
    let post = Channel::new(vec![3], 2, vec![0.9, 0.1, 0.5, 0.5, 0.2, 0.8])?;
    let w2 = compose(&w1, &post)?;
    let t = test_degraded(&w1, &w2)?;
    println!(
        "constructed pair: {:?}, residual {:.2e}",
        t.verdict, t.residual
    );
    Ok(())
}
