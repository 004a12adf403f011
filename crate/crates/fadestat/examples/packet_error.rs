//! Packet error rate from the two-state Markov channel, against packet
//! duration normalized by the desired Doppler.

use fadestat::analysis::per_curve;
use fadestat::outage::analytic_mean_sinr;
use fadestat::scenarios::{db_to_linear, diversity_system, ARQ_THRESHOLD_DB};

fn main() -> fadestat::Result<()> {
    let lengths = [0.0, 0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0];
    for (l, n) in [(2, 2), (4, 4)] {
        let link = diversity_system(l, n)?;
        let g = analytic_mean_sinr(&link)? * db_to_linear(ARQ_THRESHOLD_DB);
        let curve = per_curve(&link, g, &lengths, false)?;
        println!("(L, N) = ({l}, {n})  N_c {:.4}/s  P_CF {:.5}", curve.point.n_c, curve.point.p_cf);
        for r in &curve.rows {
            println!("  T f_D {:>6}  T {:.2e} s  PER {:.5}", r.normalized_length, r.t_pkt_sec, r.per);
        }
    }
    Ok(())
}
