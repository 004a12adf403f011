//! Two-state Markov packet error model and stop-and-wait ARQ throughput.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lcr::{self, FormulaId};
use crate::model::LinkConfig;
use crate::outage;

/// Good/bad channel abstraction at one threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FsmcModel {
    /// Level crossing rate at the threshold, crossings per second.
    pub n_c: f64,
    /// `1 - F(gamma_th)`.
    pub p_cf: f64,
    pub t_pkt_sec: f64,
}

impl FsmcModel {
    pub fn new(n_c: f64, p_cf: f64, t_pkt_sec: f64) -> Result<Self> {
        let m = FsmcModel { n_c, p_cf, t_pkt_sec };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p_cf) {
            return Err(Error::Domain(format!("p_cf must lie in [0, 1], got {}", self.p_cf)));
        }
        if !(self.n_c >= 0.0) || !self.n_c.is_finite() {
            return Err(Error::Domain(format!("n_c must be finite and >= 0, got {}", self.n_c)));
        }
        if !(self.t_pkt_sec >= 0.0) {
            return Err(Error::Domain(format!("t_pkt_sec must be >= 0, got {}", self.t_pkt_sec)));
        }
        Ok(())
    }

    fn decay(&self) -> f64 {
        self.n_c * self.t_pkt_sec / self.p_cf
    }

    /// Packet error rate `1 - p_good`.
    pub fn per(&self) -> Result<f64> {
        p_good(self)?;
        Ok((1.0 - self.p_cf) - self.p_cf * (-self.decay()).exp_m1())
    }
}

/// Probability that the SINR stays above threshold for a whole packet,
/// `P_CF exp(-N_c T_pkt / P_CF)`.
pub fn p_good(model: &FsmcModel) -> Result<f64> {
    model.validate()?;
    if model.p_cf == 0.0 {
        return Err(Error::Domain("p_good needs p_cf > 0".into()));
    }
    Ok(model.p_cf * (-model.decay()).exp())
}

/// `1 / (1 - pe)`.
pub fn avg_retransmissions(pe: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&pe) {
        return Err(Error::Domain(format!("packet error rate must lie in [0, 1), got {pe}")));
    }
    Ok(1.0 / (1.0 - pe))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArqScenario {
    pub t_s_sec: f64,
    /// Protocol overhead in equivalent symbols.
    pub m_o: f64,
    pub gamma_th: f64,
    pub link: LinkConfig,
}

/// Crossing rate and CDF of the link at the scenario threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkPoint {
    pub n_c: f64,
    pub cdf: f64,
    pub p_cf: f64,
    pub formula_id: FormulaId,
    /// Set when the approximate rate stood in for a masked exact one.
    pub approx_fallback: bool,
}

impl ArqScenario {
    pub fn new(t_s_sec: f64, m_o: f64, gamma_th: f64, link: LinkConfig) -> Result<Self> {
        let s = ArqScenario { t_s_sec, m_o, gamma_th, link };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_s_sec > 0.0) || !self.t_s_sec.is_finite() {
            return Err(Error::Domain(format!("t_s_sec must be > 0, got {}", self.t_s_sec)));
        }
        if !(self.m_o >= 0.0) || !self.m_o.is_finite() {
            return Err(Error::Domain(format!("m_o must be >= 0, got {}", self.m_o)));
        }
        self.link.validate()
    }

    pub fn link_point(&self) -> Result<LinkPoint> {
        self.link_point_with(false)
    }

    /// With `allow_approx_fallback`, a threshold below the validity bound
    /// uses the approximate crossing rate instead of failing.
    pub fn link_point_with(&self, allow_approx_fallback: bool) -> Result<LinkPoint> {
        self.validate()?;
        let cdf = outage::cdf(&self.link, self.gamma_th)?;
        let (v, approx_fallback) = match lcr::lcr(&self.link, self.gamma_th) {
            Ok(v) => (v, false),
            Err(Error::ValidityRange { .. }) if allow_approx_fallback => {
                log::warn!("threshold {} below the validity bound; using the approximate LCR", self.gamma_th);
                (lcr::lcr_approx(&self.link, self.gamma_th)?, true)
            }
            Err(e) => return Err(e),
        };
        let n_c = v.crossings_per_sec;
        Ok(LinkPoint { n_c, cdf, p_cf: 1.0 - cdf, formula_id: v.formula_id, approx_fallback })
    }

    pub fn fsmc(&self, point: &LinkPoint, m_t: f64) -> Result<FsmcModel> {
        FsmcModel::new(point.n_c, point.p_cf, m_t * self.t_s_sec)
    }
}

fn check_length(m_t: f64) -> Result<()> {
    if !(m_t >= 1.0) || !m_t.is_finite() {
        return Err(Error::Domain(format!("packet length must be >= 1 symbol, got {m_t}")));
    }
    Ok(())
}

/// Packet error rate for an `m_t`-symbol packet.
pub fn per(scenario: &ArqScenario, m_t: f64) -> Result<f64> {
    check_length(m_t)?;
    per_at(&scenario.link_point()?, m_t * scenario.t_s_sec)
}

/// PER from a precomputed link point; equals the CDF exactly at `t_pkt_sec = 0`.
pub fn per_at(point: &LinkPoint, t_pkt_sec: f64) -> Result<f64> {
    let model = FsmcModel::new(point.n_c, point.p_cf, t_pkt_sec)?;
    p_good(&model)?;
    Ok(point.cdf - point.p_cf * (-model.decay()).exp_m1())
}

/// Delivered symbols per second, `P_CF m e^{-k m} / ((m + m_o) T_s)` with
/// `k = N_c T_s / P_CF`.
pub fn throughput(scenario: &ArqScenario, m_t: f64) -> Result<f64> {
    check_length(m_t)?;
    Ok(throughput_at(&scenario.link_point()?, scenario.t_s_sec, scenario.m_o, m_t))
}

pub fn throughput_at(point: &LinkPoint, t_s_sec: f64, m_o: f64, m_t: f64) -> f64 {
    if point.p_cf == 0.0 {
        return 0.0;
    }
    let k = point.n_c * t_s_sec / point.p_cf;
    point.p_cf * m_t * (-k * m_t).exp() / ((m_t + m_o) * t_s_sec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalLength {
    /// Stationary point of the throughput; `None` when `m_o = 0`.
    pub real: Option<f64>,
    pub floor: u64,
    pub ceil: u64,
    /// Whichever of floor and ceil gives the larger throughput.
    pub best: u64,
    pub best_throughput: f64,
    /// Throughput decreases monotonically and the minimum length wins.
    pub boundary: bool,
}

pub fn optimal_packet_length(scenario: &ArqScenario) -> Result<OptimalLength> {
    optimal_packet_length_at(&scenario.link_point()?, scenario.t_s_sec, scenario.m_o)
}

pub fn optimal_packet_length_at(point: &LinkPoint, t_s_sec: f64, m_o: f64) -> Result<OptimalLength> {
    let real = stationary_length(point.n_c, point.p_cf, t_s_sec, m_o)?;
    let Some(m) = real else {
        return Ok(OptimalLength {
            real: None,
            floor: 1,
            ceil: 1,
            best: 1,
            best_throughput: throughput_at(point, t_s_sec, m_o, 1.0),
            boundary: true,
        });
    };
    let floor = (m.floor() as u64).max(1);
    let ceil = (m.ceil() as u64).max(1);
    let (tf, tc) = (throughput_at(point, t_s_sec, m_o, floor as f64), throughput_at(point, t_s_sec, m_o, ceil as f64));
    let (best, best_throughput) = if tc > tf { (ceil, tc) } else { (floor, tf) };
    Ok(OptimalLength { real: Some(m), floor, ceil, best, best_throughput, boundary: false })
}

/// `(m_o / 2) (sqrt(1 + 4 P_CF / (m_o N_c T_s)) - 1)`, written without the
/// subtraction.
pub fn stationary_length(n_c: f64, p_cf: f64, t_s_sec: f64, m_o: f64) -> Result<Option<f64>> {
    for (name, v) in [("n_c", n_c), ("p_cf", p_cf), ("t_s_sec", t_s_sec)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    if !(m_o >= 0.0) || !m_o.is_finite() {
        return Err(Error::Domain(format!("m_o must be >= 0, got {m_o}")));
    }
    if m_o == 0.0 {
        return Ok(None);
    }
    let x = 4.0 * p_cf / (m_o * n_c * t_s_sec);
    Ok(Some(0.5 * m_o * x / ((1.0 + x).sqrt() + 1.0)))
}

/// Largest exact-vs-approximate LCR gap over a threshold grid, relative to
/// the exact value where the gap peaks. Thresholds outside the exact
/// formula's validity range are skipped.
pub fn mrg(config: &LinkConfig, threshold_grid: &[f64]) -> Result<f64> {
    if threshold_grid.is_empty() {
        return Err(Error::Domain("MRG needs a nonempty grid".into()));
    }
    let mut exact = Vec::with_capacity(threshold_grid.len());
    let mut approx = Vec::with_capacity(threshold_grid.len());
    for &g in threshold_grid {
        match lcr::lcr(config, g) {
            Ok(v) => {
                exact.push(v.crossings_per_sec);
                approx.push(lcr::lcr_approx(config, g)?.crossings_per_sec);
            }
            Err(Error::ValidityRange { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if exact.is_empty() {
        return Err(Error::Domain("every grid threshold lies below the validity bound".into()));
    }
    mrg_from_values(&exact, &approx)
}

pub fn mrg_from_values(exact: &[f64], approx: &[f64]) -> Result<f64> {
    if exact.len() != approx.len() || exact.is_empty() {
        return Err(Error::Domain("MRG needs equally long nonempty series".into()));
    }
    let mut best: Option<(f64, f64)> = None;
    for (&e, &a) in exact.iter().zip(approx) {
        let gap = (e - a).abs();
        if best.is_none_or(|(g, _)| gap > g) {
            best = Some((gap, e));
        }
    }
    let (gap, e) = best.unwrap();
    if gap == 0.0 {
        return Ok(0.0);
    }
    if !(e > 0.0) {
        return Err(Error::DivisionDomain(e));
    }
    Ok(gap / e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n_c: f64, cdf: f64) -> LinkPoint {
        LinkPoint { n_c, cdf, p_cf: 1.0 - cdf, formula_id: FormulaId::Exact, approx_fallback: false }
    }

    #[test]
    fn static_channel_keeps_p_cf() {
        let m = FsmcModel::new(0.0, 0.8, 1.0).unwrap();
        assert_eq!(p_good(&m).unwrap(), 0.8);
        assert!(p_good(&FsmcModel::new(1.0, 0.0, 1.0).unwrap()).is_err());
    }

    #[test]
    fn retransmissions() {
        assert_eq!(avg_retransmissions(0.0).unwrap(), 1.0);
        assert_eq!(avg_retransmissions(0.5).unwrap(), 2.0);
        assert!((avg_retransmissions(0.9).unwrap() - 10.0).abs() < 1e-12);
        assert!(avg_retransmissions(1.0).is_err());
    }

    #[test]
    fn perfect_square_length() {
        // P_CF / (N_c T_s) = 4 with m_o = 2.
        let m = stationary_length(0.25, 1.0, 1.0, 2.0).unwrap().unwrap();
        assert!((m - 2.0).abs() < 1e-15);
    }

    #[test]
    fn zero_overhead_is_boundary() {
        let r = optimal_packet_length_at(&point(5.0, 0.1), 1e-5, 0.0).unwrap();
        assert!(r.boundary && r.best == 1 && r.real.is_none());
    }

    #[test]
    fn per_at_zero_length_is_cdf() {
        let p = point(3.0, 0.017_023_191_811_586_836);
        assert_eq!(per_at(&p, 0.0).unwrap(), p.cdf);
    }

    #[test]
    fn mrg_self_is_zero() {
        let v = [1.0, 2.0, 3.0];
        assert_eq!(mrg_from_values(&v, &v).unwrap(), 0.0);
    }
}
