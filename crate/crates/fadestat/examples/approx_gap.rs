//! Exact against approximate crossing rate, and the maximum relative gap
//! for a range of interferer power ratios.

use fadestat::analysis::mrg_normalized;
use fadestat::lcr::{lcr, lcr_approx};
use fadestat::outage::analytic_mean_sinr;
use fadestat::scenarios::{db_to_linear, fig1, FIG1_UPSILON_DB};

fn main() -> fadestat::Result<()> {
    let link = fig1(0.0);
    let ga = analytic_mean_sinr(&link)?;
    println!("{:>8} {:>12} {:>12}", "norm dB", "exact", "approx");
    for db in (-25..=10).step_by(5) {
        let g = ga * db_to_linear(db as f64);
        let e = lcr(&link, g)?.crossings_per_sec;
        let a = lcr_approx(&link, g)?.crossings_per_sec;
        println!("{db:>8} {e:>12.4} {a:>12.4}");
    }

    println!();
    for u in FIG1_UPSILON_DB {
        let m = mrg_normalized(&fig1(u), -30.0, 10.0, 121)?;
        println!("power ratio {u:>5} dB  MRG {:5.2}%", 100.0 * m);
    }
    Ok(())
}
