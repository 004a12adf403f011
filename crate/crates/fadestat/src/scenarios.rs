//! Reference scenarios used by the examples, the CLI and the test suites.

use crate::error::{Error, Result};
use crate::fsmc_arq::ArqScenario;
use crate::model::LinkConfig;
use crate::outage::analytic_mean_sinr;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Two interferers at 32 and 162 Hz against a 32 Hz desired signal, two
/// branches, interference limited (50 dB SNR). `upsilon_db` is the power
/// ratio of the second interferer to the first; the stronger one has unit
/// power.
pub fn fig1(upsilon_db: f64) -> LinkConfig {
    let r = db_to_linear(upsilon_db);
    let powers = if upsilon_db <= 0.0 { [1.0, r] } else { [1.0 / r, 1.0] };
    LinkConfig::from_pairs(1.0, 32.0, 1e-5, 2, &powers, &[32.0, 162.0]).expect("fig1 preset is valid")
}

pub const FIG1_UPSILON_DB: [f64; 5] = [-10.0, -3.0, 0.0, 3.0, 10.0];

/// Four interferers at 20 dB SNR, two branches, desired Doppler `f_d_hz`.
pub fn fig2(f_d_hz: f64) -> LinkConfig {
    LinkConfig::from_pairs(10.0, f_d_hz, 0.1, 2, &[0.07, 0.1, 0.05, 0.12], &[30.0, 160.0, 65.0, 100.0])
        .expect("fig2 preset is valid")
}

pub const FIG2_DOPPLERS_HZ: [f64; 4] = [9.7, 97.0, 162.0, 324.0];

/// `L` branches against the first `N` of four interferers
/// (`p = [1, 0.5, 0.8, 0.3]`, `f = [32, 162, 65, 97]` Hz) at 50 dB SNR.
pub fn diversity_system(l: usize, n: usize) -> Result<LinkConfig> {
    if n > 4 {
        return Err(Error::InvalidConfig(format!("preset has four interferers, asked for {n}")));
    }
    let p = [1.0, 0.5, 0.8, 0.3];
    let f = [32.0, 162.0, 65.0, 97.0];
    LinkConfig::from_pairs(1.0, 32.0, 1e-5, l, &p[..n], &f[..n])
}

/// Normalized threshold of the packet error and throughput studies.
pub const ARQ_THRESHOLD_DB: f64 = -14.0;
pub const ARQ_OVERHEAD_SYMBOLS: f64 = 100.0;

/// SW-ARQ on `diversity_system(l, n)` at `symbol_rate` symbols per second.
pub fn arq_system(l: usize, n: usize, symbol_rate: f64) -> Result<ArqScenario> {
    let link = diversity_system(l, n)?;
    let g = analytic_mean_sinr(&link)? * db_to_linear(ARQ_THRESHOLD_DB);
    ArqScenario::new(1.0 / symbol_rate, ARQ_OVERHEAD_SYMBOLS, g, link)
}

/// Scenario names understood by [`named`].
pub const NAMES: [&str; 8] = ["fig1", "fig1-m10", "fig1-p10", "fig2", "fig2-slow", "sys22", "sys44", "sys23"];

pub fn named(name: &str) -> Result<LinkConfig> {
    Ok(match name {
        "fig1" => fig1(0.0),
        "fig1-m10" => fig1(-10.0),
        "fig1-p10" => fig1(10.0),
        "fig2" => fig2(97.0),
        "fig2-slow" => fig2(9.7),
        "sys22" => diversity_system(2, 2)?,
        "sys44" => diversity_system(4, 4)?,
        "sys23" => diversity_system(2, 3)?,
        _ => {
            return Err(Error::InvalidConfig(format!(
                "unknown scenario {name:?}; known: {}",
                NAMES.join(", ")
            )))
        }
    })
}
