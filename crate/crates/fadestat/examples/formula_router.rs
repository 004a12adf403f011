//! Which closed form the router picks for different link shapes.

use fadestat::lcr::{self, route};
use fadestat::model::{validity_min_threshold, LinkConfig, Validity};

fn main() -> fadestat::Result<()> {
    let cases = [
        ("noise only", LinkConfig::from_pairs(1.0, 50.0, 0.1, 3, &[], &[])?),
        ("identical interferers", LinkConfig::from_pairs(1.0, 50.0, 0.1, 2, &[0.4, 0.4], &[80.0, 80.0])?),
        ("identical, no noise", LinkConfig::from_pairs(1.0, 50.0, 0.0, 2, &[0.4, 0.4], &[80.0, 80.0])?),
        ("single antenna", LinkConfig::from_pairs(1.0, 50.0, 0.1, 1, &[0.4, 0.2], &[80.0, 20.0])?),
        ("general", LinkConfig::from_pairs(1.0, 50.0, 0.1, 3, &[0.4, 0.2, 0.7], &[80.0, 20.0, 10.0])?),
        ("tied power-variance", LinkConfig::from_pairs(1.0, 50.0, 0.1, 2, &[1.0, 4.0], &[80.0, 40.0])?),
    ];
    for (name, link) in &cases {
        let r = route(link)?;
        let v = lcr::lcr(link, 2.0)?;
        print!("{name:<22} {:<15} perturbed={:<5} LCR(2)={:.5}", r.route.formula_id().as_str(), r.perturbed, v.crossings_per_sec);
        if link.n() >= 2 {
            if let lcr::Route::Exact(c) | lcr::Route::SingleAntenna(c) = &r.route {
                match validity_min_threshold(c)? {
                    Validity::AllValid => print!("  valid everywhere"),
                    Validity::Above(b) => print!("  valid above {b:.4}"),
                }
            }
        }
        println!();
    }
    Ok(())
}
