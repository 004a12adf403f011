//! Double-exponential (exp-sinh) rules on the half line.

use std::f64::consts::FRAC_PI_2;

/// Nodes and weights of the exp-sinh trapezoid rule with step `h` for
/// `int_0^inf f(u) du`, via `u = exp(pi/2 sinh t)`. Nodes outside
/// `[u_min, u_max]` are dropped.
pub(crate) fn exp_sinh_rule(h: f64, u_min: f64, u_max: f64) -> Vec<(f64, f64)> {
    let t_lo = (u_min.ln() / FRAC_PI_2).asinh();
    let t_hi = (u_max.ln() / FRAC_PI_2).asinh();
    let k_lo = (t_lo / h).floor() as i64;
    let k_hi = (t_hi / h).ceil() as i64;
    (k_lo..=k_hi)
        .map(|k| {
            let t = k as f64 * h;
            let u = (FRAC_PI_2 * t.sinh()).exp();
            (u, h * FRAC_PI_2 * t.cosh() * u)
        })
        .filter(|&(u, w)| u.is_finite() && w.is_finite() && u > 0.0)
        .collect()
}

/// Integrates `f` over `(0, inf)` with successively halved steps until two
/// levels agree to `tol` relative. Returns the estimate and the last
/// relative change.
pub(crate) fn exp_sinh<F: Fn(f64) -> f64>(f: F, u_min: f64, u_max: f64, tol: f64, max_level: usize) -> (f64, f64) {
    let mut h = 0.5;
    let mut prev = integrate(&f, h, u_min, u_max);
    let mut change = f64::INFINITY;
    for _ in 0..max_level {
        h *= 0.5;
        let cur = integrate(&f, h, u_min, u_max);
        change = ((cur - prev) / cur).abs();
        prev = cur;
        if change < tol {
            break;
        }
    }
    (prev, change)
}

fn integrate<F: Fn(f64) -> f64>(f: &F, h: f64, u_min: f64, u_max: f64) -> f64 {
    crate::sums::compensated_sum(exp_sinh_rule(h, u_min, u_max).into_iter().map(|(u, w)| w * f(u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_gamma_kernels() {
        let (v, _) = exp_sinh(|u: f64| u.sqrt() * (-u).exp(), 1e-300, 800.0, 1e-14, 10);
        assert!((v - 0.886_226_925_452_758).abs() < 1e-13);
        let (v, _) = exp_sinh(|u: f64| (-u).exp() / (1.0 + 1e5 * u), 1e-300, 800.0, 1e-14, 10);
        // e^{1/b} E1(1/b) / b with b = 1e5
        let want = (1e-5f64).exp() * crate::special::exp_integral_e1(1e-5).unwrap() / 1e5;
        assert!(((v - want) / want).abs() < 1e-12, "{v} {want}");
    }
}
