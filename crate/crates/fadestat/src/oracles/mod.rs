//! Independent references for the closed forms: direct quadrature of the
//! defining integral and a sum-of-sinusoids Monte Carlo simulator.

pub mod channel;
pub mod estimate;
pub mod quadrature;
pub mod sim;
pub mod trace;

pub use channel::{generate_channel, PathKey};
pub use estimate::{
    empirical_stats, estimate_aod, estimate_cdf, estimate_lcr, estimate_per, sample_mean, EmpiricalStats, Estimate,
};
pub use quadrature::{quadrature_ia, quadrature_lcr};
pub use sim::{simulate_sinr, simulate_sinr_with_threads, Combining, SimulationPlan};
