//! Outage probability and average outage duration for two diversity orders.

use fadestat::error::Error;
use fadestat::outage::{analytic_mean_sinr, outage_stats};
use fadestat::scenarios::{db_to_linear, diversity_system};

fn main() -> fadestat::Result<()> {
    for (l, n) in [(2, 2), (4, 4)] {
        let link = diversity_system(l, n)?;
        let ga = analytic_mean_sinr(&link)?;
        println!("(L, N) = ({l}, {n}), mean SINR {ga:.4}");
        for db in (-15..=10).step_by(5) {
            match outage_stats(&link, ga * db_to_linear(db as f64)) {
                Ok(s) => println!("  {db:>4} dB  cdf {:.5}  aod {:.3} ms", s.cdf, 1e3 * s.aod_sec),
                Err(Error::ValidityRange { bound, .. }) => println!("  {db:>4} dB  below validity bound {bound:.4}"),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}
