//! INR sweep of the two-receiver Gaussian model, written as CSV to stdout.

use compound_capacity::gdp::{sweep, sweep_csv, GdpParams, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = GdpParams::new(1.0, 0.1, 1.0, &[-1.0, 1.0])?;
    let rows = sweep(&base, &SweepSpec::default())?;
    print!("{}", sweep_csv(&rows));
    let worst = rows
        .iter()
        .map(|r| r.upper.bits - r.lower.bits)
        .fold(f64::INFINITY, f64::min);
    eprintln!(
        "{} points, smallest gap upper - lower = {worst:.2e}",
        rows.len()
    );
    Ok(())
}
