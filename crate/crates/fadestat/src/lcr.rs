//! Closed-form level crossing rates of the post-MRC SINR.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{self, canonical_order, is_canonical, rel_close, validity_min_threshold, DerivedConstants, LinkConfig, TIE_TOL};
use crate::quad::exp_sinh;
use crate::special::{binomial, factorial, ln_factorial, ln_gamma_half, ln_gamma_inc_scaled_unchecked};
use crate::sums::{LogNum, LogSum};

const EPS: f64 = f64::EPSILON;

/// Relative size of the deterministic nudge applied to tied parameters.
pub const TIE_PERTURBATION: f64 = 1e-7;

/// Estimated relative error above which the closed form is abandoned for
/// the one-dimensional integral representation.
pub const FALLBACK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaId {
    Exact,
    EqualCase,
    IntLimited,
    SingleAntenna,
    NoiseOnly,
    Approx,
}

impl FormulaId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::Exact => "exact",
            FormulaId::EqualCase => "equal_case",
            FormulaId::IntLimited => "int_limited",
            FormulaId::SingleAntenna => "single_antenna",
            FormulaId::NoiseOnly => "noise_only",
            FormulaId::Approx => "approx",
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LcrValue {
    pub crossings_per_sec: f64,
    pub formula_id: FormulaId,
    pub validity_note: Option<String>,
    /// Estimated relative rounding error of the evaluation.
    pub rel_error_bound: f64,
}

impl LcrValue {
    fn checked(crossings_per_sec: f64, formula_id: FormulaId, rel_error_bound: f64) -> Result<Self> {
        if !crossings_per_sec.is_finite() || crossings_per_sec < 0.0 {
            return Err(Error::NumericalInstability(format!("{formula_id} produced {crossings_per_sec}")));
        }
        Ok(LcrValue { crossings_per_sec, formula_id, validity_note: None, rel_error_bound })
    }

    fn with_note(mut self, note: Option<String>) -> Self {
        self.validity_note = match (self.validity_note.take(), note) {
            (Some(a), Some(b)) => Some(format!("{a}; {b}")),
            (a, b) => a.or(b),
        };
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApproxAux {
    pub mu: Vec<f64>,
    pub sigma_dot_i_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactOptions {
    /// Refuse thresholds below the validity bound.
    pub enforce_validity: bool,
    /// Estimated relative error that triggers the integral fallback;
    /// `f64::INFINITY` disables it.
    pub fallback_tol: f64,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { enforce_validity: true, fallback_tol: FALLBACK_TOL }
    }
}

fn check_threshold(gamma_th: f64) -> Result<()> {
    if !(gamma_th > 0.0) || !gamma_th.is_finite() {
        return Err(Error::Domain(format!("threshold must be positive and finite, got {gamma_th}")));
    }
    Ok(())
}

// ln of sqrt(2 sigma_D^2) x0^{L-1/2} e^{-x0} / (sqrt(pi) prod(1 + gamma p_n / p_D)).
fn ln_outer_prefactor(config: &LinkConfig, gamma_th: f64) -> f64 {
    let x0 = gamma_th * config.noise_power / config.p_d;
    let l = config.l_branches as f64;
    0.5 * (2.0 * config.sigma_d_sq()).ln() + (l - 0.5) * x0.ln() - x0 - 0.5 * PI.ln()
        - config.interferers.iter().map(|i| (gamma_th * i.power / config.p_d).ln_1p()).sum::<f64>()
}

/// Exact closed form for `N >= 2` on a canonically ordered config.
pub fn lcr_exact(config: &LinkConfig, gamma_th: f64) -> Result<LcrValue> {
    lcr_exact_with(config, gamma_th, &ExactOptions::default())
}

pub fn lcr_exact_with(config: &LinkConfig, gamma_th: f64, opts: &ExactOptions) -> Result<LcrValue> {
    if config.n() < 2 {
        return Err(Error::Unsupported(format!("exact formula needs N >= 2, got {}", config.n())));
    }
    check_threshold(gamma_th)?;
    config.validate()?;
    if !is_canonical(config) {
        return Err(Error::NotCanonical);
    }
    let d = model::derive(config, gamma_th, opts.enforce_validity)?;
    let below = below_bound_note(config, gamma_th)?;
    let sum = exact_sum(&d);
    let ln_pref = ln_outer_prefactor(config, gamma_th) + d.big_lambda.ln_abs;
    if sum.value.sign > 0.0 && sum.rel_error <= opts.fallback_tol {
        let v = (ln_pref + sum.value.ln_abs).exp();
        return Ok(LcrValue::checked(v, FormulaId::Exact, sum.rel_error)?.with_note(below));
    }
    if opts.fallback_tol.is_infinite() {
        return Err(Error::NumericalInstability(format!(
            "closed form lost all accuracy at threshold {gamma_th} (estimated error {:.1e})",
            sum.rel_error
        )));
    }
    let (v, err) = lcr_integral_parts(config, gamma_th, &d.a, &d.b)?;
    let note = format!(
        "closed form ill-conditioned (estimated error {:.1e}); evaluated by the integral representation",
        sum.rel_error
    );
    Ok(LcrValue::checked(v, FormulaId::Exact, err)?.with_note(below).with_note(Some(note)))
}

fn below_bound_note(config: &LinkConfig, gamma_th: f64) -> Result<Option<String>> {
    Ok(match validity_min_threshold(config)? {
        model::Validity::Above(b) if gamma_th <= b => Some(format!("threshold below validity bound {b:.6e}")),
        _ => None,
    })
}

fn exact_sum(d: &DerivedConstants) -> crate::sums::LogSumResult {
    let n = d.n();
    let l = d.l();
    let ln_gt: Vec<Vec<f64>> = (0..n)
        .map(|j| (0..l).map(|i| ln_gamma_inc_scaled_unchecked(i as f64 + 1.5, d.g_coef[j])).collect())
        .collect();
    let ln_g: Vec<f64> = d.g_coef.iter().map(|g| g.ln()).collect();
    let base_err = |s: f64| 1e-15 + (4.0 * s + 30.0) * EPS;
    let mut acc = LogSum::default();
    for k in 0..l {
        for m in 0..l - k {
            let xi = d.xi[k][m];
            let s = k as f64 + 1.5;
            for t in 1..n {
                let lam = LogNum::new(d.lambda[t][0]);
                let term = xi * d.delta[0] * d.psi[t][0] * LogNum::from_ln(ln_gt[0][k] - s * ln_g[0]) / lam.powi(m as i32 + 1);
                let rho = d.err.delta[0] + d.err.psi[t][0] + (m + 1) as f64 * d.err.lambda[t][0] + base_err(s);
                acc.push(term, rho);
            }
            for j in 1..n {
                let ln_f = d.f_coef[j].ln();
                for t in (0..n).filter(|&t| t != j) {
                    let lam = LogNum::new(d.lambda[t][j]);
                    let head = xi * d.delta[j] * d.psi[t][j];
                    for r in 0..=m {
                        let ln_fr = if r == 0 { 0.0 } else { r as f64 * ln_f };
                        let lam_pow = lam.powi((m - r + 1) as i32);
                        for w in 0..=r {
                            let s = (k + w) as f64 + 1.5;
                            let sign = if (r - w) % 2 == 0 { 1.0 } else { -1.0 };
                            let mag = ln_fr + binomial(r, w).ln() - ln_factorial(r) + ln_gt[j][k + w] - s * ln_g[j];
                            let term = head * LogNum { sign, ln_abs: mag } / lam_pow;
                            let rho = d.err.delta[j]
                                + d.err.psi[t][j]
                                + (m - r + 1) as f64 * d.err.lambda[t][j]
                                + r as f64 * d.err.f[j]
                                + base_err(s);
                            acc.push(term, rho);
                        }
                    }
                }
            }
        }
    }
    acc.finish()
}

/// The integral `I_a` written as a one-dimensional integral over an
/// exponential tilt, `I_a = pi^{-1/2} int_0^inf s^{-1/2} e^{-s}
/// E[(1+X)^{L-1} (1+Y) e^{-sY}] ds`, where every term of the inner
/// expectation is positive. Returns the value and the quadrature's last
/// relative change.
pub fn ia_integral(a: &[f64], b: &[f64], l: usize) -> (f64, f64) {
    assert_eq!(a.len(), b.len());
    let j = l - 1;
    let falling: Vec<f64> = (0..l).map(|k| factorial(j) / factorial(j - k)).collect();
    let moment = |hv: &[f64]| -> f64 { hv.iter().zip(&falling).map(|(h, f)| h * f).sum() };
    let integrand = |s: f64| -> f64 {
        let rho: Vec<f64> = b.iter().map(|bn| 1.0 + s * bn).collect();
        let alpha: Vec<f64> = a.iter().zip(&rho).map(|(an, r)| an / r).collect();
        // complete homogeneous symmetric polynomials of the tilted means
        let mut h = vec![0.0; l];
        h[0] = 1.0;
        for &al in &alpha {
            for k in 1..l {
                h[k] += al * h[k - 1];
            }
        }
        let mut q = moment(&h);
        let mut hp = vec![1.0; l];
        for n in 0..b.len() {
            for k in 1..l {
                hp[k] = h[k] + alpha[n] * hp[k - 1];
            }
            q += b[n] / rho[n] * moment(&hp);
        }
        let ln_p: f64 = rho.iter().map(|r| r.ln()).sum();
        (-ln_p - s - 0.5 * s.ln()).exp() * q
    };
    let (v, change) = exp_sinh(integrand, 1e-300, 800.0, 1e-14, 12);
    (v / PI.sqrt(), change)
}

fn lcr_integral_parts(config: &LinkConfig, gamma_th: f64, a: &[f64], b: &[f64]) -> Result<(f64, f64)> {
    let l = config.l_branches;
    let (ia, change) = ia_integral(a, b, l);
    if !(change < 1e-10) {
        return Err(Error::NoConvergence(format!("integral representation stalled at relative change {change:.1e}")));
    }
    let ln = ln_outer_prefactor(config, gamma_th) - ln_factorial(l - 1) + ia.ln();
    Ok((ln.exp(), change.max(1e-13)))
}

/// Level crossing rate from the one-dimensional integral representation of
/// `I_a`; any interferer order, any `N >= 1`, `N_o > 0`.
pub fn lcr_integral(config: &LinkConfig, gamma_th: f64) -> Result<f64> {
    config.validate()?;
    check_threshold(gamma_th)?;
    if config.noise_power == 0.0 || config.n() == 0 {
        return Err(Error::Unsupported("integral representation needs N >= 1 and N_o > 0".into()));
    }
    let (a, b) = ab_coefficients(config, gamma_th);
    Ok(lcr_integral_parts(config, gamma_th, &a, &b)?.0)
}

/// The `a_n` and `b_n` of the scenario at one threshold, in the given order.
pub fn ab_coefficients(config: &LinkConfig, gamma_th: f64) -> (Vec<f64>, Vec<f64>) {
    let (pd, no, sd) = (config.p_d, config.noise_power, config.sigma_d_sq());
    config
        .interferers
        .iter()
        .map(|i| {
            let a = (i.power / no) / (1.0 + gamma_th * i.power / pd);
            let eps = gamma_th * i.power * i.sigma_sq() / (pd * sd);
            (a, a * (1.0 + eps))
        })
        .unzip()
}

/// All interferers share one power and one Doppler.
pub fn lcr_equal_case(config: &LinkConfig, gamma_th: f64) -> Result<LcrValue> {
    config.validate()?;
    check_threshold(gamma_th)?;
    if config.n() == 0 || !config.all_identical() {
        return Err(Error::Unsupported("equal case needs N >= 1 identical interferers".into()));
    }
    if config.noise_power == 0.0 {
        return Err(Error::Unsupported("equal case needs noise_power > 0; use lcr_int_limited".into()));
    }
    if config.f_d_hz == 0.0 {
        return Err(Error::Unsupported("equal case needs a moving desired user".into()));
    }
    let it = config.interferers[0];
    let n = config.n();
    let l = config.l_branches;
    let (pd, no) = (config.p_d, config.noise_power);
    let a = (it.power / no) / (1.0 + gamma_th * it.power / pd);
    let eps = gamma_th * it.power * it.sigma_sq() / (pd * config.sigma_d_sq());
    let b = a * (1.0 + eps);
    let inv_b = 1.0 / b;
    let mut acc = LogSum::default();
    for li in 0..l {
        for m in 0..n {
            let s = (m + li) as f64 + 1.5;
            let sign = if (n - m - 1) % 2 == 0 { 1.0 } else { -1.0 };
            let ln_mag = (l - li - 1) as f64 * eps.ln()
                - ln_factorial(li)
                - ln_factorial(m)
                - ln_factorial(l - li - 1)
                - ln_factorial(n - m - 1)
                + ln_gamma_inc_scaled_unchecked(s, inv_b)
                - (n as f64 - m as f64 - li as f64 - 1.5) * b.ln();
            acc.push(LogNum { sign, ln_abs: ln_mag }, 1e-15 + (4.0 * s + 30.0) * EPS);
        }
    }
    let sum = acc.finish();
    if sum.value.sign <= 0.0 {
        return Err(Error::NumericalInstability("equal-case sum is not positive".into()));
    }
    let ln = ln_outer_prefactor(config, gamma_th) - (l as f64 - 1.0) * eps.ln_1p() + sum.value.ln_abs;
    LcrValue::checked(ln.exp(), FormulaId::EqualCase, sum.rel_error)
}

/// Equal-power equal-speed interferers with no noise.
pub fn lcr_int_limited(l: usize, n: usize, p_d: f64, p_i: f64, f_d_hz: f64, f_i_hz: f64, gamma_th: f64) -> Result<LcrValue> {
    if l < 1 || n < 1 || !(p_d > 0.0) || !(p_i > 0.0) || !(f_d_hz >= 0.0) || !(f_i_hz >= 0.0) {
        return Err(Error::Domain("interference-limited formula needs positive arguments".into()));
    }
    check_threshold(gamma_th)?;
    let omega = p_d / (gamma_th * p_i);
    let (lf, nf) = (l as f64, n as f64);
    let ln = 0.5 * (2.0 * PI).ln() + ln_gamma_half(nf + lf - 0.5) - ln_gamma_half(nf) - ln_gamma_half(lf)
        + 0.5 * (f_d_hz * f_d_hz + f_i_hz * f_i_hz / omega).ln()
        + nf * omega.ln()
        - (nf + lf - 0.5) * omega.ln_1p();
    LcrValue::checked(ln.exp(), FormulaId::IntLimited, 1e-14)
}

/// Threshold at which the interference-limited crossing rate peaks.
pub fn gamma_max_int_limited(l: usize, n: usize, p_d: f64, p_i: f64, f_d_hz: f64, f_i_hz: f64) -> Result<f64> {
    if l < 1 || n < 1 || !(p_d > 0.0) || !(p_i > 0.0) || !(f_d_hz >= 0.0) || !(f_i_hz > 0.0) {
        return Err(Error::Domain("gamma_max needs positive arguments".into()));
    }
    let (lf, nf) = (l as f64, n as f64);
    let r = (f_d_hz / f_i_hz).powi(2);
    let x = lf - nf * r;
    let c = (2.0 * lf - 1.0) * (2.0 * nf - 1.0) * r;
    let root = (x * x + c).sqrt();
    let sum = if x >= 0.0 { x + root } else { c / (root - x) };
    Ok(p_d / ((2.0 * nf - 1.0) * p_i) * sum)
}

/// Single receive antenna, `N >= 2`.
pub fn lcr_single_antenna(config: &LinkConfig, gamma_th: f64) -> Result<LcrValue> {
    lcr_single_antenna_with(config, gamma_th, &ExactOptions::default())
}

pub fn lcr_single_antenna_with(config: &LinkConfig, gamma_th: f64, opts: &ExactOptions) -> Result<LcrValue> {
    if config.l_branches != 1 {
        return Err(Error::Unsupported("single-antenna formula needs L = 1".into()));
    }
    if config.n() < 2 {
        return Err(Error::Unsupported(format!("single-antenna formula needs N >= 2, got {}", config.n())));
    }
    check_threshold(gamma_th)?;
    config.validate()?;
    if !is_canonical(config) {
        return Err(Error::NotCanonical);
    }
    let d = model::derive(config, gamma_th, opts.enforce_validity)?;
    let below = below_bound_note(config, gamma_th)?;
    let g = &d.g_coef;
    let n = g.len();
    let mut acc = LogSum::default();
    for j in 0..n {
        let mut delta = LogNum::ONE;
        let mut rho = 1e-15 + 40.0 * EPS;
        for t in (0..n).filter(|&t| t != j) {
            delta = delta * LogNum::new(g[t] / (g[t] - g[j]));
            rho += 7.0 * EPS * (g[t] + g[j]) / (g[t] - g[j]).abs() + 2.0 * EPS;
        }
        let term = delta * LogNum::from_ln(ln_gamma_inc_scaled_unchecked(1.5, g[j]) - 0.5 * g[j].ln());
        acc.push(term, rho);
    }
    let sum = acc.finish();
    let (pd, no) = (config.p_d, config.noise_power);
    let x0 = gamma_th * no / pd;
    if sum.value.sign > 0.0 && sum.rel_error <= opts.fallback_tol {
        let ln = 0.5 * (2.0 * config.sigma_d_sq() * x0 / PI).ln() - x0
            - config.interferers.iter().map(|i| (gamma_th * i.power / pd).ln_1p()).sum::<f64>()
            + sum.value.ln_abs;
        return Ok(LcrValue::checked(ln.exp(), FormulaId::SingleAntenna, sum.rel_error)?.with_note(below));
    }
    if opts.fallback_tol.is_infinite() {
        return Err(Error::NumericalInstability("single-antenna sum lost all accuracy".into()));
    }
    let (v, err) = lcr_integral_parts(config, gamma_th, &d.a, &d.b)?;
    let note = format!(
        "closed form ill-conditioned (estimated error {:.1e}); evaluated by the integral representation",
        sum.rel_error
    );
    Ok(LcrValue::checked(v, FormulaId::SingleAntenna, err)?.with_note(below).with_note(Some(note)))
}

/// No interferers: Nakagami-like Erlang numerator over white noise.
pub fn lcr_noise_only(config: &LinkConfig, gamma_th: f64) -> Result<LcrValue> {
    config.validate()?;
    check_threshold(gamma_th)?;
    if config.n() != 0 {
        return Err(Error::Unsupported("noise-only formula needs N = 0".into()));
    }
    if config.f_d_hz == 0.0 {
        return LcrValue::checked(0.0, FormulaId::NoiseOnly, 0.0);
    }
    let x0 = gamma_th * config.noise_power / config.p_d;
    let l = config.l_branches as f64;
    let ln = 0.5 * (2.0 * config.sigma_d_sq() / PI).ln() + (l - 0.5) * x0.ln() - x0 - ln_factorial(config.l_branches - 1);
    LcrValue::checked(ln.exp(), FormulaId::NoiseOnly, 1e-14)
}

/// Partial-fraction weights `mu_n = prod_{k != n} p_n / (p_n - p_k)`.
pub fn partial_fraction_weights(powers: &[f64]) -> Result<Vec<f64>> {
    for i in 0..powers.len() {
        for j in i + 1..powers.len() {
            if rel_close(powers[i], powers[j], TIE_TOL) {
                return Err(Error::DegenerateTie { first: i, second: j });
            }
        }
    }
    Ok(powers
        .iter()
        .enumerate()
        .map(|(n, &pn)| {
            powers
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != n)
                .map(|(_, &pk)| pn / (pn - pk))
                .product()
        })
        .collect())
}

pub fn approx_aux(config: &LinkConfig) -> Result<ApproxAux> {
    if config.n() == 0 {
        return Err(Error::InvalidArity { needed: 1, got: 0 });
    }
    let mu = partial_fraction_weights(&config.powers())?;
    let total: f64 = config.interferers.iter().map(|i| i.power).sum();
    let num: f64 = config.interferers.iter().map(|i| i.power * i.power * i.sigma_sq()).sum();
    Ok(ApproxAux { mu, sigma_dot_i_sq: num / (config.noise_power + total) })
}

/// Approximate closed form built on the interference-envelope derivative
/// variance.
pub fn lcr_approx(config: &LinkConfig, gamma_th: f64) -> Result<LcrValue> {
    config.validate()?;
    check_threshold(gamma_th)?;
    let (cfg, perturbed) = perturb_power_ties(config);
    let aux = approx_aux(&cfg)?;
    let (pd, no) = (cfg.p_d, cfg.noise_power);
    let l = cfg.l_branches as f64;
    let x0 = gamma_th * no / pd;
    let mut acc = LogSum::default();
    for (mu, it) in aux.mu.iter().zip(&cfg.interferers) {
        let gp = gamma_th * it.power;
        let x = x0 + no / it.power;
        let ln = ln_gamma_inc_scaled_unchecked(l + 0.5, x) - x0 + (l - 0.5) * gp.ln() - (l + 0.5) * (gp + pd).ln();
        acc.push(LogNum::new(*mu) * LogNum::from_ln(ln), 1e-15 + 60.0 * EPS);
    }
    let sum = acc.finish();
    if sum.value.sign <= 0.0 {
        return Err(Error::NumericalInstability("approximate sum is not positive".into()));
    }
    let a = ((PI * PI * cfg.f_d_hz * cfg.f_d_hz * pd * pd + gamma_th * pd * aux.sigma_dot_i_sq) / (2.0 * PI)).sqrt();
    let v = 2.0 / factorial(cfg.l_branches - 1) * a * sum.value.value();
    let note = perturbed.then(|| "tied interferer powers perturbed".to_string());
    Ok(LcrValue::checked(v, FormulaId::Approx, sum.rel_error)?.with_note(note))
}

/// Gives later members of each group of tied powers a relative nudge of
/// `k * TIE_PERTURBATION`, `k` being the rank within the group.
pub fn perturb_power_ties(config: &LinkConfig) -> (LinkConfig, bool) {
    let mut out = config.clone();
    let mut changed = false;
    for i in 0..config.n() {
        let rank = (0..i).filter(|&j| rel_close(config.interferers[j].power, config.interferers[i].power, TIE_TOL)).count();
        if rank > 0 {
            out.interferers[i].power *= 1.0 + rank as f64 * TIE_PERTURBATION;
            changed = true;
        }
    }
    (out, changed)
}

/// Same policy for tied power-variance products, applied through the
/// Doppler of the later group members.
pub fn perturb_eps_ties(config: &LinkConfig) -> (LinkConfig, bool) {
    let mut out = config.clone();
    let mut changed = false;
    let pv: Vec<f64> = config.interferers.iter().map(|i| i.power_variance()).collect();
    let fallback = config.max_doppler().max(1.0);
    for i in 0..config.n() {
        let rank = (0..i).filter(|&j| rel_close(pv[j], pv[i], TIE_TOL)).count();
        if rank > 0 {
            let nudge = rank as f64 * TIE_PERTURBATION;
            let f = &mut out.interferers[i].doppler_hz;
            *f = if *f > 0.0 { *f * (1.0 + nudge) } else { nudge * fallback };
            changed = true;
        }
    }
    (out, changed)
}

/// Formula choice for one scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum Route {
    NoiseOnly,
    EqualCase,
    IntLimited,
    SingleAntenna(LinkConfig),
    Exact(LinkConfig),
}

impl Route {
    pub fn formula_id(&self) -> FormulaId {
        match self {
            Route::NoiseOnly => FormulaId::NoiseOnly,
            Route::EqualCase => FormulaId::EqualCase,
            Route::IntLimited => FormulaId::IntLimited,
            Route::SingleAntenna(_) => FormulaId::SingleAntenna,
            Route::Exact(_) => FormulaId::Exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Routed {
    pub route: Route,
    pub perturbed: bool,
}

/// Picks the formula for a scenario, applying the tie policy when needed.
pub fn route(config: &LinkConfig) -> Result<Routed> {
    config.validate()?;
    if config.n() == 0 {
        return Ok(Routed { route: Route::NoiseOnly, perturbed: false });
    }
    if config.all_identical() {
        let route = if config.noise_power == 0.0 { Route::IntLimited } else { Route::EqualCase };
        return Ok(Routed { route, perturbed: false });
    }
    let (cfg, perturbed) = perturb_eps_ties(config);
    if perturbed {
        log::warn!("tied power-variance products perturbed by {TIE_PERTURBATION:e} relative");
    }
    let cfg = canonical_order(&cfg)?;
    let route = if cfg.l_branches == 1 { Route::SingleAntenna(cfg) } else { Route::Exact(cfg) };
    Ok(Routed { route, perturbed })
}

pub fn lcr_routed(original: &LinkConfig, routed: &Routed, gamma_th: f64) -> Result<LcrValue> {
    let note = routed.perturbed.then(|| "tied interferers perturbed".to_string());
    let v = match &routed.route {
        Route::NoiseOnly => lcr_noise_only(original, gamma_th)?,
        Route::EqualCase => lcr_equal_case(original, gamma_th)?,
        Route::IntLimited => {
            let it = original.interferers[0];
            let (l, n) = (original.l_branches, original.n());
            lcr_int_limited(l, n, original.p_d, it.power, original.f_d_hz, it.doppler_hz, gamma_th)?
        }
        Route::SingleAntenna(c) => lcr_single_antenna(c, gamma_th)?,
        Route::Exact(c) => lcr_exact(c, gamma_th)?,
    };
    Ok(v.with_note(note))
}

/// Dispatches to the closed form matching the scenario.
pub fn lcr(config: &LinkConfig, gamma_th: f64) -> Result<LcrValue> {
    let routed = route(config)?;
    lcr_routed(config, &routed, gamma_th)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_by_two() -> LinkConfig {
        LinkConfig::from_pairs(1.0, 32.0, 0.1, 2, &[1.0, 0.5], &[162.0, 32.0]).unwrap()
    }

    #[test]
    fn routing() {
        let c = LinkConfig::from_pairs(1.0, 32.0, 0.1, 2, &[], &[]).unwrap();
        assert_eq!(lcr(&c, 1.0).unwrap().formula_id, FormulaId::NoiseOnly);
        let c = LinkConfig::from_pairs(1.0, 32.0, 0.1, 2, &[0.3; 3], &[50.0; 3]).unwrap();
        assert_eq!(lcr(&c, 1.0).unwrap().formula_id, FormulaId::EqualCase);
        assert_eq!(lcr(&two_by_two(), 1.0).unwrap().formula_id, FormulaId::Exact);
    }

    #[test]
    fn int_limited_smallest_arity() {
        let (f, omega): (f64, f64) = (40.0, 2.5);
        let v = lcr_int_limited(1, 1, 1.0, 1.0 / omega, f, f, 1.0).unwrap().crossings_per_sec;
        let want = (2.0 * PI).sqrt() * (PI.sqrt() / 2.0) * f * (1.0 + 1.0 / omega).sqrt() * omega / (1.0 + omega).powf(1.5);
        assert!(((v - want) / want).abs() < 1e-13);
    }

    #[test]
    fn gamma_max_unit_case() {
        let g = gamma_max_int_limited(1, 1, 2.0, 0.5, 70.0, 70.0).unwrap();
        assert!((g - 4.0).abs() < 1e-12);
    }

    #[test]
    fn noise_only_single_branch_is_rayleigh() {
        let c = LinkConfig::from_pairs(2.0, 50.0, 0.5, 1, &[], &[]).unwrap();
        let gbar = 4.0;
        for g in [0.1, 1.0, 4.0, 20.0] {
            let v = lcr_noise_only(&c, g).unwrap().crossings_per_sec;
            let want = (2.0 * PI).sqrt() * 50.0 * (g / gbar).sqrt() * (-g / gbar).exp();
            assert!(((v - want) / want).abs() < 1e-13);
        }
    }

    #[test]
    fn mu_is_one_for_single_interferer() {
        assert_eq!(partial_fraction_weights(&[0.7]).unwrap(), vec![1.0]);
    }
}
