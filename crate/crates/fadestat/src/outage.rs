//! SINR distribution, average outage duration and mean SINR.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lcr::{self, partial_fraction_weights, perturb_power_ties};
use crate::model::LinkConfig;
use crate::quad::exp_sinh;
use crate::special::{erlang_cdf, exp_integral_e1_scaled, factorial, upper_inc_gamma};
use crate::sums::{Compensated, LogNum, LogSum};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageStats {
    pub cdf: f64,
    pub aod_sec: f64,
    pub gamma_avg: f64,
    pub c: Vec<f64>,
}

/// `P(Gamma <= gamma_th)`.
///
/// Written through the tilted interference `V = gamma H / p_D`: with
/// `u_n = theta_n / (1 + theta_n)` and `h_i` the complete homogeneous
/// symmetric polynomials of `u`, the complement is
/// `prod(1-u) sum_{i<L} h_i Q(L-i, x0)` and the CDF is
/// `prod(1-u) (sum_{i<L} h_i P(L-i, x0) + sum_{i>=L} h_i)`. Both are sums of
/// positive terms, so neither tied powers nor tiny outage probabilities
/// cause cancellation. The branch with the smaller result is used.
pub fn cdf(config: &LinkConfig, gamma_th: f64) -> Result<f64> {
    config.validate()?;
    if !(gamma_th >= 0.0) || gamma_th.is_nan() {
        return Err(Error::Domain(format!("threshold must be >= 0, got {gamma_th}")));
    }
    if gamma_th == 0.0 {
        return Ok(0.0);
    }
    if gamma_th.is_infinite() {
        return Ok(1.0);
    }
    let l = config.l_branches;
    let x0 = gamma_th * config.noise_power / config.p_d;
    let u: Vec<f64> = config
        .interferers
        .iter()
        .map(|i| {
            let theta = gamma_th * i.power / config.p_d;
            theta / (1.0 + theta)
        })
        .collect();
    let ln_keep: f64 = u.iter().map(|u| (-u).ln_1p()).sum();
    let keep = ln_keep.exp();
    let mut hs = HomogeneousSums::new(&u);
    let head: Vec<f64> = (0..l).map(|_| hs.next_value()).collect();

    let upper = keep * compensated(head.iter().enumerate().map(|(i, h)| h * (1.0 - erlang_cdf(l - i, x0))));
    if upper >= 0.5 {
        let mut tail = Compensated::default();
        if !u.is_empty() {
            let mut last = f64::INFINITY;
            for _ in 0..5_000_000 {
                let h = hs.next_value();
                tail.add(h);
                if h <= 1e-18 * tail.total() && h <= last {
                    break;
                }
                last = h;
            }
        }
        let lower = keep * (compensated(head.iter().enumerate().map(|(i, h)| h * erlang_cdf(l - i, x0))) + tail.total());
        return clamp_probability(lower);
    }
    clamp_probability(1.0 - upper)
}

fn compensated<I: Iterator<Item = f64>>(it: I) -> f64 {
    it.collect::<Compensated>().total()
}

// Yields h_0(u), h_1(u), ... one at a time.
struct HomogeneousSums {
    u: Vec<f64>,
    prev: Vec<f64>,
    started: bool,
}

impl HomogeneousSums {
    fn new(u: &[f64]) -> Self {
        HomogeneousSums { u: u.to_vec(), prev: vec![0.0; u.len()], started: false }
    }

    fn next_value(&mut self) -> f64 {
        if !self.started {
            self.started = true;
            self.prev.iter_mut().for_each(|x| *x = 1.0);
            return 1.0;
        }
        if self.u.is_empty() {
            return 0.0;
        }
        // h_i over the first n variables = h_i over n-1 of them + u_n h_{i-1} over n.
        let mut below = 0.0;
        for (n, &un) in self.u.iter().enumerate() {
            let cur = below + un * self.prev[n];
            self.prev[n] = cur;
            below = cur;
        }
        below
    }
}

fn clamp_probability(v: f64) -> Result<f64> {
    if !(-1e-9..=1.0 + 1e-9).contains(&v) || v.is_nan() {
        return Err(Error::NumericalInstability(format!("CDF evaluated to {v}")));
    }
    Ok(v.clamp(0.0, 1.0))
}

/// The printed partial-fraction form of the CDF; needs distinct powers
/// (ties are perturbed) and loses accuracy for tiny outage probabilities.
pub fn cdf_partial_fraction(config: &LinkConfig, gamma_th: f64) -> Result<f64> {
    config.validate()?;
    let l = config.l_branches;
    let (pd, no) = (config.p_d, config.noise_power);
    if config.n() == 0 {
        let q = upper_inc_gamma(l as f64, gamma_th * no / pd)? / factorial(l - 1);
        return Ok(1.0 - q);
    }
    let (cfg, _) = perturb_power_ties(config);
    let c = partial_fraction_weights(&cfg.powers())?;
    let mut acc = LogSum::default();
    for (cn, it) in c.iter().zip(&cfg.interferers) {
        let pn = it.power;
        let x = gamma_th * no / pd + no / pn;
        for m in 0..l {
            let ln = pd.ln() + no / pn + m as f64 * (gamma_th * pn).ln()
                - crate::special::ln_factorial(m)
                - (m as f64 + 1.0) * (gamma_th * pn + pd).ln()
                + crate::special::ln_gamma_inc_scaled_unchecked(m as f64 + 1.0, x)
                - x;
            acc.push(LogNum::new(*cn) * LogNum::from_ln(ln), 0.0);
        }
    }
    Ok(1.0 - acc.finish().value.value())
}

/// Average outage duration `cdf / lcr`, with the crossing rate taken from
/// the formula router.
pub fn aod(config: &LinkConfig, gamma_th: f64) -> Result<f64> {
    let n_c = lcr::lcr(config, gamma_th)?.crossings_per_sec;
    aod_from(cdf(config, gamma_th)?, n_c, gamma_th)
}

pub fn aod_from(cdf: f64, lcr_hz: f64, gamma_th: f64) -> Result<f64> {
    if !(lcr_hz > 0.0) {
        return Err(Error::DivisionDomain(gamma_th));
    }
    Ok(cdf / lcr_hz)
}

pub fn outage_stats(config: &LinkConfig, gamma_th: f64) -> Result<OutageStats> {
    let f = cdf(config, gamma_th)?;
    let (cfg, _) = perturb_power_ties(config);
    let c = if cfg.n() == 0 { Vec::new() } else { partial_fraction_weights(&cfg.powers())? };
    Ok(OutageStats { cdf: f, aod_sec: aod(config, gamma_th)?, gamma_avg: analytic_mean_sinr(config)?, c })
}

/// Mean SINR `L p_D E[1 / (N_o + H)]`, `H` the total interference power.
///
/// Uses the partial-fraction closed form with `E1`; when its sum is badly
/// conditioned (near-tied powers) the same expectation is integrated as
/// `int_0^inf e^{-s N_o} prod 1/(1 + s p_n) ds`.
pub fn analytic_mean_sinr(config: &LinkConfig) -> Result<f64> {
    config.validate()?;
    let n = config.n();
    let l = config.l_branches as f64;
    let no = config.noise_power;
    if n == 0 {
        return Ok(l * config.p_d / no);
    }
    if no == 0.0 && n < 2 {
        return Err(Error::Divergent("a single interferer without noise has infinite mean SINR".into()));
    }
    let (cfg, _) = perturb_power_ties(config);
    let mu = partial_fraction_weights(&cfg.powers())?;
    let mut terms = Compensated::default();
    let mut abs = 0.0;
    for (m, it) in mu.iter().zip(&cfg.interferers) {
        let p = it.power;
        let t = if no == 0.0 { m * p.ln() / p } else { m * exp_integral_e1_scaled(no / p)? / p };
        terms.add(t);
        abs += t.abs();
    }
    let e_inv = terms.total();
    if e_inv > 0.0 && abs / e_inv * f64::EPSILON < 1e-12 {
        return Ok(l * config.p_d * e_inv);
    }
    let powers = config.powers();
    let integrand = |s: f64| (-s * no).exp() / powers.iter().map(|p| 1.0 + s * p).product::<f64>();
    let (v, change) = exp_sinh(integrand, 1e-300, 1e300, 1e-13, 12);
    if !(change < 1e-9) {
        return Err(Error::NoConvergence("mean SINR integral".into()));
    }
    Ok(l * config.p_d * v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(no: f64, l: usize, powers: &[f64]) -> LinkConfig {
        let f = vec![50.0; powers.len()];
        LinkConfig::from_pairs(1.0, 30.0, no, l, powers, &f).unwrap()
    }

    #[test]
    fn cdf_forms_agree() {
        for (c, g) in [
            (cfg(0.1, 2, &[1.0, 0.5]), 1.0),
            (cfg(1e-5, 4, &[1.0, 0.5, 0.8, 0.3]), 0.05),
            (cfg(2.0, 3, &[0.3, 0.9, 0.4]), 0.7),
        ] {
            let a = cdf(&c, g).unwrap();
            let b = cdf_partial_fraction(&c, g).unwrap();
            assert!((a - b).abs() < 1e-13, "{a} {b}");
        }
    }

    #[test]
    fn small_cdf_keeps_relative_accuracy() {
        // 60-digit evaluation of the same scenario.
        let c = cfg(1e-5, 4, &[1.0, 0.5, 0.8, 0.3]);
        let want = 3.756_504_094_264_938_5e-5;
        assert!(((cdf(&c, 0.05).unwrap() - want) / want).abs() < 1e-13);
    }

    #[test]
    fn cdf_limits() {
        let c = cfg(0.1, 2, &[1.0, 0.5]);
        assert_eq!(cdf(&c, 0.0).unwrap(), 0.0);
        assert!((cdf(&c, 1e9).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn noise_only_cdf_is_erlang() {
        let c = cfg(0.5, 3, &[]);
        let want = erlang_cdf(3, 2.0 * 0.5);
        assert!((cdf(&c, 2.0).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn mean_sinr_single_interferer() {
        let c = cfg(1.0, 1, &[1.0]);
        let want = std::f64::consts::E * crate::special::exp_integral_e1(1.0).unwrap();
        assert!((analytic_mean_sinr(&c).unwrap() - want).abs() < 1e-14);
        assert!((want - 0.596_347_362_323_194).abs() < 1e-12);
    }

    #[test]
    fn tied_powers_mean_sinr_uses_integral() {
        let tied = cfg(1e-3, 2, &[0.5, 0.5, 0.5]);
        let near = cfg(1e-3, 2, &[0.5, 0.5 * (1.0 + 1e-4), 0.5 * (1.0 + 2e-4)]);
        let (a, b) = (analytic_mean_sinr(&tied).unwrap(), analytic_mean_sinr(&near).unwrap());
        assert!(((a - b) / a).abs() < 1e-3);
    }
}
