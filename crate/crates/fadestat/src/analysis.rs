//! Threshold sweeps, exact vs approximate vs simulated comparison tables,
//! PER and throughput curves and packet-length reports.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fsmc_arq::{self, ArqScenario, LinkPoint, OptimalLength};
use crate::lcr::{self, FormulaId, Route};
use crate::model::{validity_min_threshold, LinkConfig};
use crate::oracles::{self, Combining, Estimate, SimulationPlan};
use crate::outage;
use crate::scenarios::{db_to_linear, linear_to_db};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    /// `gamma_th / gamma_avg` in dB, `points` evenly spaced values.
    NormalizedDb { start: f64, stop: f64, points: usize },
    /// Absolute linear thresholds.
    Linear(Vec<f64>),
}

impl Default for Axis {
    fn default() -> Self {
        Axis::NormalizedDb { start: -30.0, stop: 10.0, points: 121 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaAvgSource {
    #[default]
    Analytic,
    MonteCarlo,
    User(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    Exact,
    Approx,
    Equal,
    IntLimited,
    Mc,
}

impl std::str::FromStr for Formula {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            "exact" => Formula::Exact,
            "approx" => Formula::Approx,
            "equal" => Formula::Equal,
            "int_limited" => Formula::IntLimited,
            "mc" => Formula::Mc,
            other => return Err(Error::InvalidConfig(format!("unknown formula {other:?}"))),
        })
    }
}

/// Monte Carlo settings; the plan is otherwise the simulator default.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McSettings {
    pub realizations: usize,
    pub duration_sec: f64,
    pub combining: Combining,
    pub sinusoid_count: usize,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings { realizations: 100, duration_sec: 2.0, combining: Combining::Mrc, sinusoid_count: 16 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub link: LinkConfig,
    pub axis: Axis,
    pub gamma_avg_source: GammaAvgSource,
    pub which_formulas: Vec<Formula>,
    pub master_seed: u64,
    pub mc: McSettings,
}

impl SweepSpec {
    pub fn new(link: LinkConfig) -> Self {
        SweepSpec {
            link,
            axis: Axis::default(),
            gamma_avg_source: GammaAvgSource::Analytic,
            which_formulas: vec![Formula::Exact, Formula::Approx],
            master_seed: 0,
            mc: McSettings::default(),
        }
    }

    pub fn wants(&self, f: Formula) -> bool {
        self.which_formulas.contains(&f)
    }

    pub fn validate(&self) -> Result<()> {
        self.link.validate()?;
        match &self.axis {
            Axis::NormalizedDb { start, stop, points } => {
                if *points < 2 || !(stop > start) || !start.is_finite() || !stop.is_finite() {
                    return Err(Error::InvalidConfig(format!(
                        "grid needs start < stop and at least 2 points, got {start}:{stop}:{points}"
                    )));
                }
            }
            Axis::Linear(g) => {
                if g.len() < 2 || g.windows(2).any(|w| !(w[1] > w[0])) || !(g[0] > 0.0) {
                    return Err(Error::InvalidConfig("linear grid must be positive and strictly increasing".into()));
                }
            }
        }
        if let GammaAvgSource::User(g) = self.gamma_avg_source {
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidConfig(format!("gamma_avg override must be positive, got {g}")));
            }
        }
        Ok(())
    }
}

/// Evenly spaced dB values, endpoints included.
pub fn db_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    let step = (stop - start) / (points - 1) as f64;
    (0..points).map(|i| if i + 1 == points { stop } else { start + i as f64 * step }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub gamma_norm_db: f64,
    pub gamma_linear: f64,
    pub lcr_exact_hz: Option<f64>,
    pub lcr_approx_hz: Option<f64>,
    pub lcr_equal_hz: Option<f64>,
    pub lcr_int_limited_hz: Option<f64>,
    pub lcr_mc: Option<Estimate>,
    pub cdf: Option<f64>,
    pub aod_sec: Option<f64>,
    /// False when the threshold lies below the exact formula's validity bound.
    pub valid: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepMeta {
    pub config: LinkConfig,
    pub seed: u64,
    pub gamma_avg: f64,
    pub gamma_avg_source: GammaAvgSource,
    pub formula_id: FormulaId,
    pub perturbed: bool,
    pub validity_bound: Option<f64>,
    pub formulas: Vec<Formula>,
    pub plan: Option<SimulationPlan>,
    /// Relative gap between the single-antenna and general exact formulas
    /// at the probe threshold, when both apply.
    pub probe_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub meta: SweepMeta,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    pub fn all_masked(&self) -> bool {
        self.rows.iter().all(|r| !r.valid)
    }

    /// MRG over rows carrying both exact and approximate values.
    pub fn mrg(&self) -> Result<f64> {
        let (e, a): (Vec<f64>, Vec<f64>) = self
            .rows
            .iter()
            .filter(|r| r.valid)
            .filter_map(|r| Some((r.lcr_exact_hz?, r.lcr_approx_hz?)))
            .unzip();
        if e.is_empty() {
            return Err(Error::Domain("sweep has no rows with both exact and approximate values".into()));
        }
        fsmc_arq::mrg_from_values(&e, &a)
    }
}

fn probe_gap(routed: &lcr::Routed, gamma: f64) -> Option<f64> {
    let Route::SingleAntenna(c) = &routed.route else { return None };
    if c.n() < 2 {
        return None;
    }
    let single = lcr::lcr_single_antenna(c, gamma).ok()?.crossings_per_sec;
    let exact = lcr::lcr_exact(c, gamma).ok()?.crossings_per_sec;
    let gap = ((single - exact) / exact).abs();
    if gap > 1e-9 {
        log::warn!("single-antenna and exact formulas disagree by {gap:.2e} at threshold {gamma}");
    }
    Some(gap)
}

fn is_masked(e: &Error) -> bool {
    matches!(e, Error::ValidityRange { .. })
}

fn mc_plan(spec: &SweepSpec) -> Result<SimulationPlan> {
    let mut plan = SimulationPlan::default_for(spec.link.clone(), spec.master_seed)?;
    plan.realizations = spec.mc.realizations;
    plan.duration_sec = spec.mc.duration_sec;
    plan.combining = spec.mc.combining;
    plan.sinusoid_count = spec.mc.sinusoid_count;
    plan.validate()?;
    Ok(plan)
}

/// Evaluates the requested formulas at every grid point. A row whose
/// threshold is outside the exact formula's range is masked; any other
/// per-row failure is recorded in its note.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let link = &spec.link;
    let routed = lcr::route(link)?;

    let need_mc = spec.wants(Formula::Mc) || spec.gamma_avg_source == GammaAvgSource::MonteCarlo;
    let (plan, traces) = if need_mc {
        let plan = mc_plan(spec)?;
        let tr = oracles::simulate_sinr(&plan)?;
        (Some(plan), Some(tr))
    } else {
        (None, None)
    };

    let gamma_avg = match spec.gamma_avg_source {
        GammaAvgSource::Analytic => outage::analytic_mean_sinr(link)?,
        GammaAvgSource::MonteCarlo => oracles::sample_mean(traces.as_ref().expect("traces simulated")),
        GammaAvgSource::User(g) => g,
    };
    let grid: Vec<(f64, f64)> = match &spec.axis {
        Axis::NormalizedDb { start, stop, points } => db_grid(*start, *stop, *points)
            .into_iter()
            .map(|db| (db, gamma_avg * db_to_linear(db)))
            .collect(),
        Axis::Linear(g) => g.iter().map(|&x| (linear_to_db(x / gamma_avg), x)).collect(),
    };
    let bound = match &routed.route {
        Route::Exact(c) | Route::SingleAntenna(c) => validity_min_threshold(c)?.bound(),
        _ => None,
    };

    let row = |&(db, g): &(f64, f64)| -> SweepRow {
        let mut notes: Vec<String> = Vec::new();
        let mut valid = true;
        let record = |r: Result<f64>, notes: &mut Vec<String>| match r {
            Ok(v) => Some(v),
            Err(e) => {
                notes.push(e.to_string());
                None
            }
        };
        let lcr_exact_hz = if spec.wants(Formula::Exact) || spec.wants(Formula::Mc) {
            match lcr::lcr_routed(link, &routed, g) {
                Ok(v) => {
                    if let Some(n) = v.validity_note {
                        notes.push(n);
                    }
                    Some(v.crossings_per_sec)
                }
                Err(e) if is_masked(&e) => {
                    valid = false;
                    notes.push(e.to_string());
                    None
                }
                Err(e) => record(Err(e), &mut notes),
            }
        } else {
            None
        };
        let lcr_approx_hz = spec
            .wants(Formula::Approx)
            .then(|| record(lcr::lcr_approx(link, g).map(|v| v.crossings_per_sec), &mut notes))
            .flatten();
        let lcr_equal_hz = spec
            .wants(Formula::Equal)
            .then(|| record(lcr::lcr_equal_case(link, g).map(|v| v.crossings_per_sec), &mut notes))
            .flatten();
        let lcr_int_limited_hz = spec
            .wants(Formula::IntLimited)
            .then(|| record(int_limited(link, g), &mut notes))
            .flatten();
        let lcr_mc = match (&traces, &plan) {
            (Some(tr), Some(p)) if spec.wants(Formula::Mc) => {
                match oracles::estimate_lcr(tr, p.sample_rate_hz, g) {
                    Ok(e) => Some(e),
                    Err(e) => {
                        notes.push(e.to_string());
                        None
                    }
                }
            }
            _ => None,
        };
        let cdf = record(outage::cdf(link, g), &mut notes);
        let aod_sec = match (cdf, lcr_exact_hz) {
            (Some(c), Some(n)) if n > 0.0 => Some(c / n),
            _ => None,
        };
        SweepRow {
            gamma_norm_db: db,
            gamma_linear: g,
            // exact values also decide the mask when only MC was asked for
            lcr_exact_hz: lcr_exact_hz.filter(|_| spec.wants(Formula::Exact)),
            lcr_approx_hz,
            lcr_equal_hz,
            lcr_int_limited_hz,
            lcr_mc,
            cdf,
            aod_sec,
            valid,
            note: (!notes.is_empty()).then(|| notes.join("; ")),
        }
    };
    let rows: Vec<SweepRow> = oracles::sim::with_threads(oracles::sim::thread_count(), || grid.par_iter().map(row).collect());

    let meta = SweepMeta {
        config: link.clone(),
        seed: spec.master_seed,
        gamma_avg,
        gamma_avg_source: spec.gamma_avg_source,
        formula_id: routed.route.formula_id(),
        perturbed: routed.perturbed,
        validity_bound: bound,
        formulas: spec.which_formulas.clone(),
        plan,
        probe_gap: probe_gap(&routed, gamma_avg),
    };
    Ok(SweepResult { meta, rows })
}

// Interference-limited form with the common power and Doppler of an
// identical-interferer link.
fn int_limited(link: &LinkConfig, g: f64) -> Result<f64> {
    if link.n() == 0 || !link.all_identical() {
        return Err(Error::Unsupported("int_limited needs identical interferers".into()));
    }
    let i = link.interferers[0];
    Ok(lcr::lcr_int_limited(link.l_branches, link.n(), link.p_d, i.power, link.f_d_hz, i.doppler_hz, g)?.crossings_per_sec)
}

/// MRG over a normalized-dB grid, through the same routine as
/// [`fsmc_arq::mrg`].
pub fn mrg_normalized(link: &LinkConfig, start_db: f64, stop_db: f64, points: usize) -> Result<f64> {
    let ga = outage::analytic_mean_sinr(link)?;
    let grid: Vec<f64> = db_grid(start_db, stop_db, points).into_iter().map(|db| ga * db_to_linear(db)).collect();
    fsmc_arq::mrg(link, &grid)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerRow {
    /// `T_pkt f_D`.
    pub normalized_length: f64,
    pub t_pkt_sec: f64,
    pub per: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerCurve {
    pub gamma_th: f64,
    pub point: LinkPoint,
    pub rows: Vec<PerRow>,
}

/// PER against packet duration normalized by the desired Doppler.
pub fn per_curve(link: &LinkConfig, gamma_th: f64, normalized_lengths: &[f64], allow_approx_fallback: bool) -> Result<PerCurve> {
    if !(link.f_d_hz > 0.0) {
        return Err(Error::Domain("normalized packet length needs f_D > 0".into()));
    }
    let scenario = ArqScenario { t_s_sec: 1.0, m_o: 0.0, gamma_th, link: link.clone() };
    let point = scenario.link_point_with(allow_approx_fallback)?;
    let rows = normalized_lengths
        .iter()
        .map(|&x| {
            let t = x / link.f_d_hz;
            Ok(PerRow { normalized_length: x, t_pkt_sec: t, per: fsmc_arq::per_at(&point, t)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PerCurve { gamma_th, point, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputRow {
    pub m_t: f64,
    pub throughput: f64,
    /// Throughput times the symbol duration.
    pub normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThroughputCurve {
    pub point: LinkPoint,
    pub rows: Vec<ThroughputRow>,
    pub argmax: usize,
    pub m_opt: OptimalLength,
}

pub fn throughput_curve(scenario: &ArqScenario, m_grid: &[f64], allow_approx_fallback: bool) -> Result<ThroughputCurve> {
    if m_grid.is_empty() || m_grid.iter().any(|&m| !(m >= 1.0)) {
        return Err(Error::Domain("packet-length grid must be nonempty with lengths >= 1".into()));
    }
    let point = scenario.link_point_with(allow_approx_fallback)?;
    let rows: Vec<ThroughputRow> = m_grid
        .iter()
        .map(|&m| {
            let r = fsmc_arq::throughput_at(&point, scenario.t_s_sec, scenario.m_o, m);
            ThroughputRow { m_t: m, throughput: r, normalized: r * scenario.t_s_sec }
        })
        .collect();
    let argmax = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.throughput.total_cmp(&b.1.throughput))
        .map(|(i, _)| i)
        .unwrap();
    let m_opt = fsmc_arq::optimal_packet_length_at(&point, scenario.t_s_sec, scenario.m_o)?;
    Ok(ThroughputCurve { point, rows, argmax, m_opt })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MoptRow {
    pub name: String,
    pub symbol_rate: f64,
    pub m_o: f64,
    pub gamma_th: f64,
    pub n_c: f64,
    pub p_cf: f64,
    pub m_opt_real: Option<f64>,
    pub m_opt: u64,
    pub throughput: f64,
    pub boundary: bool,
    pub approx_fallback: bool,
}

pub fn mopt_report(scenarios: &[(String, ArqScenario)], allow_approx_fallback: bool) -> Result<Vec<MoptRow>> {
    scenarios
        .iter()
        .map(|(name, s)| {
            let p = s.link_point_with(allow_approx_fallback)?;
            let m = fsmc_arq::optimal_packet_length_at(&p, s.t_s_sec, s.m_o)?;
            Ok(MoptRow {
                name: name.clone(),
                symbol_rate: 1.0 / s.t_s_sec,
                m_o: s.m_o,
                gamma_th: s.gamma_th,
                n_c: p.n_c,
                p_cf: p.p_cf,
                m_opt_real: m.real,
                m_opt: m.best,
                throughput: m.best_throughput,
                boundary: m.boundary,
                approx_fallback: p.approx_fallback,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = db_grid(-30.0, 10.0, 121);
        assert_eq!(g.len(), 121);
        assert_eq!(g[0], -30.0);
        assert_eq!(g[120], 10.0);
        assert!((g[60] + 10.0).abs() < 1e-12);
    }

    #[test]
    fn parses_formulas() {
        assert_eq!("int_limited".parse::<Formula>().unwrap(), Formula::IntLimited);
        assert!("exactly".parse::<Formula>().is_err());
    }
}
