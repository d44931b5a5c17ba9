//! Closed-form lower bound, its regime, the upper bound and the mismatch
//! factor of the Gaussian model at a few parameter points.

use compound_capacity::gdp::{
    awgn_capacity, mismatch_factor_full_power, rate_lower_opt, rate_lower_opt_numeric, rate_upper,
    GdpParams,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for thetas in [
        vec![-1.0, 1.0],
        vec![0.5, 1.0],
        vec![-0.5, 1.0],
        vec![0.2, 0.6, 1.0],
    ] {
        for q in [0.1, 1.0, 10.0] {
            let params = GdpParams::new(1.0, 0.1, q, &thetas)?;
            let lower = rate_lower_opt(&params);
            let upper = rate_upper(&params)?;
            let lattice = rate_lower_opt_numeric(&params, 1e-3)?;
            let eps = mismatch_factor_full_power(&params)
                .map(|e| format!("{e:.4}"))
                .unwrap_or_else(|_| "-".into());
            println!(
                "Θ = {thetas:>16?}  Q = {q:>4}: lower {:.5} ({:>13}), lattice {:.5}, upper {:.5}, ε* {eps}",
                lower.bits, lower.regime, lattice.bits, upper.bits
            );
        }
    }
    println!("interference-free: {:.5}", awgn_capacity(1.0, 0.1));
    Ok(())
}
