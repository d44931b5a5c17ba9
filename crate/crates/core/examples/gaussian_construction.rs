//! Rate of an explicit jointly Gaussian common/private construction,
//! computed from covariances, next to the closed-form split rate.

use compound_capacity::gdp::{
    gaussian_construction_rate, rate_lower_split, GaussianCodingParams, GdpParams, PowerSplit,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = GdpParams::new(1.0, 0.1, 2.0, &[0.5, 1.0])?;
    for pc in [0.0, 0.25, 0.5, 0.75, 1.0] {
        let split = PowerSplit::new(&params, pc, 1.0 - pc)?;
        let formula = rate_lower_split(&params, &split)?;
        let best = (0..=40)
            .map(|i| {
                let coding = GaussianCodingParams::costa(&params, &split, i as f64 / 40.0);
                gaussian_construction_rate(&params, &coding, &split).unwrap_or(f64::NEG_INFINITY)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        println!("P_C = {pc:.2}: split formula {formula:.5}, best construction over α_c {best:.5}");
    }
    Ok(())
}
