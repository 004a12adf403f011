//! Empirical statistics of SINR traces, with standard errors taken across
//! realizations.

use serde::Serialize;

use crate::error::{Error, Result};

/// Fewer total events than this draws a warning.
pub const MIN_EVENTS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    /// Crossings, outages or windows behind the estimate.
    pub events: u64,
}

impl Estimate {
    pub fn insufficient(&self) -> bool {
        self.events < MIN_EVENTS
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmpiricalStats {
    pub lcr_hz: Estimate,
    pub aod_sec: Estimate,
    /// `(t_pkt_sec, estimate)` per requested packet duration.
    pub per: Vec<(f64, Estimate)>,
    pub gamma_avg: f64,
    /// `(gamma_th, fraction of samples below)`.
    pub empirical_cdf: Vec<(f64, f64)>,
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn check_traces(traces: &[Vec<f64>]) -> Result<()> {
    if traces.len() < 2 {
        return Err(Error::InvalidConfig(format!("need at least 2 realizations, got {}", traces.len())));
    }
    if traces.iter().any(|t| t.len() < 2) {
        return Err(Error::InvalidConfig("every trace needs at least two samples".into()));
    }
    Ok(())
}

fn warn_if_few(what: &str, e: &Estimate) {
    if e.insufficient() {
        log::warn!("insufficient {what}: only {} events, confidence interval is wide", e.events);
    }
}

/// Upward crossings of `gamma_th`: sample `k` below, sample `k+1` at or above.
pub fn upcrossings(trace: &[f64], gamma_th: f64) -> u64 {
    trace.windows(2).filter(|w| w[0] < gamma_th && w[1] >= gamma_th).count() as u64
}

pub fn estimate_lcr(traces: &[Vec<f64>], sample_rate_hz: f64, gamma_th: f64) -> Result<Estimate> {
    check_traces(traces)?;
    let counts: Vec<u64> = traces.iter().map(|t| upcrossings(t, gamma_th)).collect();
    let rates: Vec<f64> = counts
        .iter()
        .zip(traces)
        .map(|(&c, t)| c as f64 * sample_rate_hz / t.len() as f64)
        .collect();
    let (value, stderr) = mean_and_stderr(&rates);
    let e = Estimate { value, stderr, events: counts.iter().sum() };
    warn_if_few("crossings", &e);
    Ok(e)
}

// Lengths in samples of each maximal run below the threshold.
fn outage_runs(trace: &[f64], gamma_th: f64) -> Vec<usize> {
    let mut runs = Vec::new();
    let mut cur = 0;
    for &x in trace {
        if x < gamma_th {
            cur += 1;
        } else if cur > 0 {
            runs.push(cur);
            cur = 0;
        }
    }
    if cur > 0 {
        runs.push(cur);
    }
    runs
}

/// Mean length of a contiguous below-threshold dwell. Realizations with no
/// outage do not contribute.
pub fn estimate_aod(traces: &[Vec<f64>], sample_rate_hz: f64, gamma_th: f64) -> Result<Estimate> {
    check_traces(traces)?;
    let mut means = Vec::new();
    let mut events = 0;
    for t in traces {
        let runs = outage_runs(t, gamma_th);
        if runs.is_empty() {
            continue;
        }
        events += runs.len() as u64;
        means.push(runs.iter().sum::<usize>() as f64 / runs.len() as f64 / sample_rate_hz);
    }
    if means.is_empty() {
        return Ok(Estimate { value: 0.0, stderr: 0.0, events: 0 });
    }
    let (value, stderr) = mean_and_stderr(&means);
    let e = Estimate { value, stderr, events };
    warn_if_few("outages", &e);
    Ok(e)
}

/// Fraction of non-overlapping windows of `t_pkt_sec` that contain a sample
/// below threshold. The trailing partial window is dropped.
pub fn estimate_per(traces: &[Vec<f64>], sample_rate_hz: f64, gamma_th: f64, t_pkt_sec: f64) -> Result<Estimate> {
    check_traces(traces)?;
    if !(t_pkt_sec >= 0.0) {
        return Err(Error::Domain(format!("packet duration must be >= 0, got {t_pkt_sec}")));
    }
    let w = ((t_pkt_sec * sample_rate_hz).round() as usize).max(1);
    let mut rates = Vec::with_capacity(traces.len());
    let mut events = 0;
    for t in traces {
        let windows = t.len() / w;
        if windows == 0 {
            return Err(Error::InvalidConfig(format!("trace of {} samples is shorter than one packet", t.len())));
        }
        let bad = t.chunks_exact(w).filter(|c| c.iter().any(|&x| x < gamma_th)).count();
        events += windows as u64;
        rates.push(bad as f64 / windows as f64);
    }
    let (value, stderr) = mean_and_stderr(&rates);
    Ok(Estimate { value, stderr, events })
}

pub fn estimate_cdf(traces: &[Vec<f64>], gamma_th: f64) -> Result<Estimate> {
    check_traces(traces)?;
    let fr: Vec<f64> = traces
        .iter()
        .map(|t| t.iter().filter(|&&x| x < gamma_th).count() as f64 / t.len() as f64)
        .collect();
    let (value, stderr) = mean_and_stderr(&fr);
    Ok(Estimate { value, stderr, events: traces.iter().map(|t| t.len() as u64).sum() })
}

pub fn sample_mean(traces: &[Vec<f64>]) -> f64 {
    let (s, n) = traces.iter().fold((0.0, 0usize), |(s, n), t| (s + t.iter().sum::<f64>(), n + t.len()));
    s / n as f64
}

pub fn empirical_stats(
    traces: &[Vec<f64>],
    sample_rate_hz: f64,
    gamma_th: f64,
    packet_durations: &[f64],
    cdf_thresholds: &[f64],
) -> Result<EmpiricalStats> {
    let per = packet_durations
        .iter()
        .map(|&t| Ok((t, estimate_per(traces, sample_rate_hz, gamma_th, t)?)))
        .collect::<Result<Vec<_>>>()?;
    let empirical_cdf = cdf_thresholds
        .iter()
        .map(|&g| Ok((g, estimate_cdf(traces, g)?.value)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalStats {
        lcr_hz: estimate_lcr(traces, sample_rate_hz, gamma_th)?,
        aod_sec: estimate_aod(traces, sample_rate_hz, gamma_th)?,
        per,
        gamma_avg: sample_mean(traces),
        empirical_cdf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_trace_has_no_crossings() {
        let t = vec![vec![1.0; 100]; 3];
        let e = estimate_lcr(&t, 10.0, 0.5).unwrap();
        assert_eq!(e.value, 0.0);
        assert!(e.insufficient());
        assert_eq!(estimate_lcr(&t, 10.0, 2.0).unwrap().value, 0.0);
    }

    #[test]
    fn threshold_above_everything() {
        let t = vec![vec![0.1, 0.2, 0.3, 0.4], vec![0.5, 0.1, 0.2, 0.3]];
        assert_eq!(estimate_per(&t, 1.0, 10.0, 2.0).unwrap().value, 1.0);
        assert_eq!(estimate_cdf(&t, 10.0).unwrap().value, 1.0);
    }

    #[test]
    fn counts_on_a_square_wave() {
        let wave: Vec<f64> = (0..40).map(|k| if (k / 5) % 2 == 0 { 0.0 } else { 2.0 }).collect();
        let t = vec![wave.clone(), wave];
        assert_eq!(upcrossings(&t[0], 1.0), 4);
        assert!((estimate_aod(&t, 10.0, 1.0).unwrap().value - 0.5).abs() < 1e-15);
        assert!((estimate_per(&t, 10.0, 1.0, 0.5).unwrap().value - 0.5).abs() < 1e-15);
        // windows of 3 samples straddle the edges
        assert!((estimate_per(&t, 10.0, 1.0, 0.3).unwrap().value - 9.0 / 13.0).abs() < 1e-15);
    }
}
