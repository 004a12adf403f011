//! Sum-of-sinusoids simulation of the combined SINR and the empirical
//! crossing rate next to the closed form.

use std::time::Instant;

use fadestat::lcr::lcr;
use fadestat::oracles::{estimate_lcr, sample_mean, simulate_sinr, Combining, SimulationPlan};
use fadestat::outage::analytic_mean_sinr;
use fadestat::scenarios::{db_to_linear, fig2};

fn main() -> fadestat::Result<()> {
    let link = fig2(9.7);
    let ga = analytic_mean_sinr(&link)?;
    for combining in [Combining::Mrc, Combining::IndependentEnvelope] {
        let mut plan = SimulationPlan::default_for(link.clone(), 42)?;
        plan.combining = combining;
        let t = Instant::now();
        let traces = simulate_sinr(&plan)?;
        println!("{combining:?}: {} x {} samples in {:.1?}, sample mean {:.3} (analytic {ga:.3})",
            traces.len(), plan.n_samples(), t.elapsed(), sample_mean(&traces));
        for db in [-10.0, -5.0, 0.0, 5.0] {
            let g = ga * db_to_linear(db);
            let Ok(exact) = lcr(&link, g) else { continue };
            let est = estimate_lcr(&traces, plan.sample_rate_hz, g)?;
            println!("  {db:>5} dB  exact {:8.3}  simulated {:8.3} +- {:.3}  ({} crossings)",
                exact.crossings_per_sec, est.value, est.stderr, est.events);
        }
    }
    Ok(())
}
