//! Cross-check of the exact closed form against direct numerical
//! integration of the defining multiple integral.

use std::time::Instant;

use fadestat::lcr::lcr_exact;
use fadestat::model::{canonical_order, LinkConfig};
use fadestat::oracles::quadrature_lcr;

fn main() -> fadestat::Result<()> {
    let link = canonical_order(&LinkConfig::from_pairs(2.0, 40.0, 0.05, 3, &[0.6, 0.3, 1.1], &[150.0, 70.0, 20.0])?)?;
    for g in [1.0, 3.0, 10.0, 30.0] {
        let t = Instant::now();
        let q = quadrature_lcr(&link, g)?;
        let dt = t.elapsed();
        match lcr_exact(&link, g) {
            Ok(e) => {
                let e = e.crossings_per_sec;
                println!("gamma {g:>5}: closed form {e:.10}  quadrature {q:.10}  rel {:.1e}  ({dt:.1?})", ((e - q) / q).abs())
            }
            Err(err) => println!("gamma {g:>5}: quadrature {q:.10}  closed form unavailable: {err}"),
        }
    }
    Ok(())
}
