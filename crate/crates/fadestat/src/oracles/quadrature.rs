//! Direct quadrature of the defining N-fold integral
//! `I_a = int_{[0,inf)^N} (1 + sum a_n u_n)^{L-1} sqrt(1 + sum b_n u_n) e^{-sum u_n} du`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::model::LinkConfig;

pub const MAX_INTERFERERS: usize = 3;
const GL_LEVELS: [usize; 5] = [16, 32, 64, 128, 256];
const REL_TOL: f64 = 1e-9;
const DE_MAX_NODES: usize = 40_000_000;

/// Gauss–Laguerre nodes and weights (weight `e^{-x}`) by Golub–Welsch.
pub fn gauss_laguerre(n: usize) -> Vec<(f64, f64)> {
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        jac[(i, i)] = (2 * i + 1) as f64;
        if i + 1 < n {
            let off = (i + 1) as f64;
            jac[(i, i + 1)] = off;
            jac[(i + 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(jac);
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    rule.sort_by(|a, b| a.0.total_cmp(&b.0));
    rule
}

/// Exp-sinh nodes for `int_0^inf g(u) du` with step `h`, truncated to
/// `[1e-40, 800]`.
fn exp_sinh_nodes(h: f64) -> Vec<(f64, f64)> {
    let t_lo = ((1e-40f64).ln() / (PI / 2.0)).asinh();
    let t_hi = ((800f64).ln() / (PI / 2.0)).asinh();
    let (k_lo, k_hi) = ((t_lo / h).floor() as i64, (t_hi / h).ceil() as i64);
    (k_lo..=k_hi)
        .map(|k| {
            let t = k as f64 * h;
            let u = (PI / 2.0 * t.sinh()).exp();
            (u, h * PI / 2.0 * t.cosh() * u)
        })
        .collect()
}

fn tensor_sum(rule: &[(f64, f64)], dims: usize, f: &dyn Fn(&[f64]) -> f64) -> f64 {
    let mut u = vec![0.0; dims];
    fn rec(rule: &[(f64, f64)], d: usize, w: f64, u: &mut Vec<f64>, f: &dyn Fn(&[f64]) -> f64) -> f64 {
        if d == u.len() {
            return w * f(u);
        }
        let mut s = 0.0;
        for &(x, wx) in rule {
            let ww = w * wx;
            if ww == 0.0 {
                continue;
            }
            u[d] = x;
            s += rec(rule, d + 1, ww, u, f);
        }
        s
    }
    rec(rule, 0, 1.0, &mut u, f)
}

/// `I_a` for up to three interferers. Tensor Gauss–Laguerre is refined
/// from 16 to 256 nodes per axis; if that does not settle to `1e-9`, a
/// tensor exp-sinh rule is refined instead, which copes with the `sqrt`
/// kink near the origin when `b_n` is large.
pub fn quadrature_ia_coefficients(a: &[f64], b: &[f64], l: usize) -> Result<f64> {
    let dims = a.len();
    if dims == 0 || dims > MAX_INTERFERERS || b.len() != dims {
        return Err(Error::Unsupported(format!("quadrature oracle handles 1..=3 interferers, got {dims}")));
    }
    if l == 0 {
        return Err(Error::InvalidConfig("need at least one branch".into()));
    }
    let poly = |u: &[f64]| -> f64 {
        let (mut sa, mut sb) = (1.0, 1.0);
        for i in 0..u.len() {
            sa += a[i] * u[i];
            sb += b[i] * u[i];
        }
        sa.powi(l as i32 - 1) * sb.sqrt()
    };

    let mut prev = f64::NAN;
    for &n in &GL_LEVELS {
        let cur = tensor_sum(&gauss_laguerre(n), dims, &poly);
        if ((cur - prev) / cur).abs() < REL_TOL {
            return Ok(cur);
        }
        prev = cur;
    }
    let gl_last = prev;

    let weighted = |u: &[f64]| -> f64 { poly(u) * (-u.iter().sum::<f64>()).exp() };
    let mut prev = f64::NAN;
    let mut h = 0.5;
    loop {
        let rule = exp_sinh_nodes(h);
        if rule.len().pow(dims as u32) > DE_MAX_NODES {
            break;
        }
        let cur = tensor_sum(&rule, dims, &weighted);
        if ((cur - prev) / cur).abs() < REL_TOL {
            return Ok(cur);
        }
        prev = cur;
        h *= 0.5;
    }
    Err(Error::NoConvergence(format!(
        "I_a quadrature: Gauss-Laguerre at 256 nodes gave {gl_last:.12e}, exp-sinh gave {prev:.12e}"
    )))
}

/// `I_a` for a scenario at one threshold, in the given interferer order.
pub fn quadrature_ia(config: &LinkConfig, gamma_th: f64) -> Result<f64> {
    let (a, b) = coefficients(config, gamma_th)?;
    quadrature_ia_coefficients(&a, &b, config.l_branches)
}

fn coefficients(config: &LinkConfig, gamma_th: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    config.validate()?;
    if !(gamma_th > 0.0) || config.noise_power <= 0.0 || config.f_d_hz <= 0.0 {
        return Err(Error::Unsupported("quadrature oracle needs gamma_th > 0, N_o > 0 and f_D > 0".into()));
    }
    let (pd, no) = (config.p_d, config.noise_power);
    let sd = PI * PI * config.f_d_hz * config.f_d_hz;
    Ok(config
        .interferers
        .iter()
        .map(|i| {
            let sn = PI * PI * i.doppler_hz * i.doppler_hz;
            let a = i.power / (no * (1.0 + gamma_th * i.power / pd));
            let eps = gamma_th * i.power * sn / (pd * sd);
            (a, a + a * eps)
        })
        .unzip())
}

/// Crossing rate built from the quadrature value:
/// `sqrt(2 sigma_D^2) x0^{L-1/2} e^{-x0} I_a / (sqrt(pi) (L-1)! prod(1 + gamma p_n / p_D))`.
pub fn quadrature_lcr(config: &LinkConfig, gamma_th: f64) -> Result<f64> {
    let ia = quadrature_ia(config, gamma_th)?;
    let l = config.l_branches;
    let x0 = gamma_th * config.noise_power / config.p_d;
    let sd = PI * PI * config.f_d_hz * config.f_d_hz;
    let fact: f64 = (1..l).map(|k| k as f64).product();
    let denom: f64 = config.interferers.iter().map(|i| 1.0 + gamma_th * i.power / config.p_d).product();
    let ln = 0.5 * (2.0 * sd).ln() + (l as f64 - 0.5) * x0.ln() - x0 + ia.ln() - 0.5 * PI.ln() - fact.ln() - denom.ln();
    Ok(ln.exp())
}
