//! Equal-power, equal-speed interferers without noise: the crossing rate
//! in closed form and the threshold where it peaks.

use fadestat::lcr::{gamma_max_int_limited, lcr_int_limited};

fn main() -> fadestat::Result<()> {
    let (p_d, p_i, f_d, f_i) = (1.0, 0.3, 50.0, 120.0);
    for (l, n) in [(1, 1), (2, 2), (4, 3)] {
        let g = gamma_max_int_limited(l, n, p_d, p_i, f_d, f_i)?;
        let peak = lcr_int_limited(l, n, p_d, p_i, f_d, f_i, g)?.crossings_per_sec;
        let half = lcr_int_limited(l, n, p_d, p_i, f_d, f_i, 0.5 * g)?.crossings_per_sec;
        println!("L={l} N={n}: peak at gamma {g:.4} with {peak:.3}/s, {half:.3}/s at half that threshold");
    }
    Ok(())
}
