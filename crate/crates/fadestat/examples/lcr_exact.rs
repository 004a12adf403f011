//! Exact level crossing rate of the post-MRC SINR for two interferers with
//! different powers and speeds.
//!
//! ```bash
//! cargo run -p fadestat --example lcr_exact
//! ```

use fadestat::lcr;
use fadestat::model::LinkConfig;
use fadestat::outage::analytic_mean_sinr;
use fadestat::scenarios::db_to_linear;

fn main() -> fadestat::Result<()> {
    // Desired user at 32 Hz, interferers at 162 Hz and 32 Hz, 10 dB SNR.
    let link = LinkConfig::from_pairs(1.0, 32.0, 0.1, 2, &[1.0, 0.5], &[162.0, 32.0])?;
    let ga = analytic_mean_sinr(&link)?;
    println!("mean SINR {ga:.4} ({:.2} dB)", 10.0 * ga.log10());

    println!("{:>8} {:>12} {:>14}", "norm dB", "gamma", "LCR (1/s)");
    for db in (-20..=10).step_by(5) {
        let g = ga * db_to_linear(db as f64);
        match lcr::lcr(&link, g) {
            Ok(v) => println!("{db:>8} {g:>12.5} {:>14.6}", v.crossings_per_sec),
            Err(e) => println!("{db:>8} {g:>12.5} {e}"),
        }
    }
    Ok(())
}
