//! Capacity bounds for compound state-dependent channels whose state sequence
//! is known non-causally at the transmitter.
//!
//! The crate is organized by capability:
//!
//! - [`prob`]: distributions, channels, joint tables and information measures.
//! - [`gp`]: rate functionals for compound discrete channels (compound
//!   Gel'fand–Pinsker, superposition/Marton bounds, degraded components,
//!   feedback capacity).
//! - [`degraded`]: linear-programming test for stochastic degradedness.
//! - [`optimize`]: multi-start projected ascent and exhaustive lattice search
//!   over products of simplices.
//! - [`fm`]: exact Fourier–Motzkin elimination over rational inequalities with
//!   symbolic information-measure atoms, and the rate-region derivations it
//!   checks.
//! - [`gdp`]: closed-form and numeric bounds for the compound Gaussian
//!   dirty-paper channel with fading on the interference.
//! - [`config`]: the TOML configuration format used by the `ccap` binary.
//! - [`cli`]: the commands behind `ccap`, callable in-process.
//!
//! Runnable walkthroughs live in `examples/`; see the README for the list.

pub mod cli;
pub mod config;
pub mod degraded;
pub mod fm;
pub mod gdp;
pub mod gp;
pub mod optimize;
pub mod prob;

pub use degraded::{test_degraded, DegradedTest, Degradedness};
pub use gp::{CodingLaw, DegradedChainLaw, LawShape, RateReport};
pub use optimize::{SearchConfig, SearchResult};
pub use prob::{Channel, CompoundDmc, Dist, JointTable};
