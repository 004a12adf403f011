//! Monte Carlo post-combining SINR traces.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::channel::{generate_channel, PathKey};
use crate::error::{Error, Result};
use crate::model::LinkConfig;

pub const THREADS_ENV: &str = "FADESTAT_THREADS";

/// How an interferer reaches the combiner output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Combining {
    /// `|w^H h_n|^2` with `w = h_D / |h_D|` recomputed every sample.
    #[default]
    Mrc,
    /// `|g_n|^2` for a separate unit-power process `g_n` with the
    /// interferer's own Doppler; same marginal law as MRC, but the
    /// interference does not inherit the desired signal's fading rate.
    IndependentEnvelope,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationPlan {
    pub link: LinkConfig,
    pub sample_rate_hz: f64,
    pub duration_sec: f64,
    pub realizations: usize,
    pub master_seed: u64,
    /// Sinusoids per quadrature arm.
    pub sinusoid_count: usize,
    pub combining: Combining,
}

impl SimulationPlan {
    /// 100 realizations of 2 s at 100 times the largest Doppler, 16 sinusoids.
    pub fn default_for(link: LinkConfig, master_seed: u64) -> Result<Self> {
        let rate = 100.0 * link.max_doppler().max(1.0);
        let plan = SimulationPlan {
            link,
            sample_rate_hz: rate,
            duration_sec: 2.0,
            realizations: 100,
            master_seed,
            sinusoid_count: 16,
            combining: Combining::Mrc,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        let fmax = self.link.max_doppler();
        if !(self.sample_rate_hz > 0.0) || !self.sample_rate_hz.is_finite() {
            return Err(Error::InvalidConfig(format!("sample rate {} must be positive", self.sample_rate_hz)));
        }
        if self.sample_rate_hz < 50.0 * fmax {
            return Err(Error::InvalidConfig(format!(
                "sample rate {} Hz is below 50x the largest Doppler {fmax} Hz",
                self.sample_rate_hz
            )));
        }
        if self.realizations < 1 || self.sinusoid_count < 1 {
            return Err(Error::InvalidConfig("need at least one realization and one sinusoid".into()));
        }
        if fmax > 0.0 && self.duration_sec * fmax < 20.0 {
            return Err(Error::InvalidConfig(format!(
                "duration {} s spans fewer than 20 Doppler periods",
                self.duration_sec
            )));
        }
        if self.n_samples() < 2 {
            return Err(Error::InvalidConfig("plan yields fewer than two samples".into()));
        }
        Ok(())
    }

    pub fn n_samples(&self) -> usize {
        (self.duration_sec * self.sample_rate_hz).round() as usize
    }
}

/// `FADESTAT_THREADS`, `0` or unset meaning one worker per core.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(0)
}

/// Runs `f` inside a pool capped by `threads` (`0` = automatic).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Path index of branch `l` of the desired signal (`interferer = None`)
/// or of interferer `n`.
pub fn path_index(l_branches: usize, interferer: Option<usize>, branch: usize) -> u64 {
    match interferer {
        None => branch as u64,
        Some(n) => (l_branches * (n + 1) + branch) as u64,
    }
}

/// One realization's SINR samples.
pub fn simulate_realization(plan: &SimulationPlan, realization: usize) -> Vec<f64> {
    let link = &plan.link;
    let l = link.l_branches;
    let n = plan.n_samples();
    let key = |path| PathKey { master_seed: plan.master_seed, realization: realization as u64, path };
    let gen = |f: f64, path| generate_channel(f, plan.sample_rate_hz, n, plan.sinusoid_count, key(path));

    let desired: Vec<Vec<Complex64>> = (0..l).map(|b| gen(link.f_d_hz, path_index(l, None, b))).collect();
    let gain: Vec<f64> = (0..n).map(|k| desired.iter().map(|h| h[k].norm_sqr()).sum()).collect();
    let mut denom = vec![link.noise_power; n];
    for (i, it) in link.interferers.iter().enumerate() {
        match plan.combining {
            Combining::Mrc => {
                let paths: Vec<Vec<Complex64>> =
                    (0..l).map(|b| gen(it.doppler_hz, path_index(l, Some(i), b))).collect();
                for k in 0..n {
                    let z: Complex64 = (0..l).map(|b| desired[b][k].conj() * paths[b][k]).sum();
                    denom[k] += it.power * z.norm_sqr() / gain[k];
                }
            }
            Combining::IndependentEnvelope => {
                let g = gen(it.doppler_hz, path_index(l, Some(i), 0));
                for k in 0..n {
                    denom[k] += it.power * g[k].norm_sqr();
                }
            }
        }
    }
    gain.iter().zip(&denom).map(|(g, d)| link.p_d * g / d).collect()
}

/// All realizations, in realization order, computed on up to
/// `FADESTAT_THREADS` workers. The output does not depend on the worker count.
pub fn simulate_sinr(plan: &SimulationPlan) -> Result<Vec<Vec<f64>>> {
    simulate_sinr_with_threads(plan, thread_count())
}

pub fn simulate_sinr_with_threads(plan: &SimulationPlan, threads: usize) -> Result<Vec<Vec<f64>>> {
    plan.validate()?;
    Ok(with_threads(threads, || {
        (0..plan.realizations).into_par_iter().map(|r| simulate_realization(plan, r)).collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_are_distinct() {
        let mut seen = std::collections::HashSet::new();
        for n in [None, Some(0), Some(1), Some(2)] {
            for b in 0..3 {
                assert!(seen.insert(path_index(3, n, b)));
            }
        }
    }

    #[test]
    fn plan_invariants() {
        let link = LinkConfig::from_pairs(1.0, 32.0, 0.1, 2, &[1.0], &[162.0]).unwrap();
        let mut plan = SimulationPlan::default_for(link, 0).unwrap();
        assert_eq!(plan.sample_rate_hz, 16_200.0);
        plan.sample_rate_hz = 1000.0;
        assert!(plan.validate().is_err());
    }
}
