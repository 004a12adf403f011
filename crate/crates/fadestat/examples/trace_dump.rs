//! Writes simulated SINR traces to disk, reads them back and estimates
//! their statistics.
//!
//! ```bash
//! cargo run -p fadestat --example trace_dump -- /tmp/sinr
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter};

use fadestat::oracles::trace::{read_trace, write_trace};
use fadestat::oracles::sim::simulate_realization;
use fadestat::oracles::{empirical_stats, SimulationPlan};
use fadestat::outage::analytic_mean_sinr;
use fadestat::scenarios::diversity_system;

fn main() -> fadestat::Result<()> {
    let stem = std::env::args().nth(1).unwrap_or_else(|| "sinr".into());
    let link = diversity_system(2, 2)?;
    let plan = SimulationPlan::default_for(link.clone(), 3)?;
    let mut traces = Vec::new();
    let mut rate = 0.0;
    for r in 0..4 {
        let path = format!("{stem}.{r}.trace");
        write_trace(BufWriter::new(File::create(&path)?), plan.sample_rate_hz, &simulate_realization(&plan, r))?;
        let (fs, samples) = read_trace(BufReader::new(File::open(&path)?))?;
        println!("{path}: {} samples at {fs} Hz", samples.len());
        rate = fs;
        traces.push(samples);
    }
    let g = 0.5 * analytic_mean_sinr(&link)?;
    let stats = empirical_stats(&traces, rate, g, &[1e-3, 1e-2], &[g])?;
    println!("threshold {g:.4}: lcr {:.2} Hz, aod {:.2} ms, cdf {:.4}, sample mean {:.4}",
        stats.lcr_hz.value, 1e3 * stats.aod_sec.value, stats.empirical_cdf[0].1, stats.gamma_avg);
    for (t, per) in &stats.per {
        println!("  PER at {t} s packets: {:.4}", per.value);
    }
    Ok(())
}
