//! Stop-and-wait ARQ throughput against packet length and the optimal
//! length for two symbol rates.

use fadestat::analysis::throughput_curve;
use fadestat::fsmc_arq::optimal_packet_length;
use fadestat::scenarios::arq_system;

fn main() -> fadestat::Result<()> {
    let grid: Vec<f64> = (0..=40).map(|i| 10f64.powf(1.0 + 4.0 * i as f64 / 40.0).round()).collect();
    for (l, n) in [(2, 2), (4, 4)] {
        for rs in [1e5, 1e6] {
            let s = arq_system(l, n, rs)?;
            let opt = optimal_packet_length(&s)?;
            let curve = throughput_curve(&s, &grid, false)?;
            let peak = &curve.rows[curve.argmax];
            println!(
                "(L, N) = ({l}, {n}) at {rs:.0} sps: m_opt {} (stationary point {:.1}), grid peak {} at {:.4} of full rate",
                opt.best,
                opt.real.unwrap_or(f64::NAN),
                peak.m_t,
                peak.normalized
            );
        }
    }
    Ok(())
}
