//! Link scenario, interferer ordering and the coefficient bundle feeding the
//! exact level crossing rate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::ln_factorial;
use crate::sums::LogNum;

/// Relative tolerance below which two epsilon values (or two powers) count
/// as tied.
pub const TIE_TOL: f64 = 1e-9;

const EPS: f64 = f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InterfererSpec {
    pub power: f64,
    pub doppler_hz: f64,
}

impl InterfererSpec {
    pub fn new(power: f64, doppler_hz: f64) -> Self {
        InterfererSpec { power, doppler_hz }
    }

    /// Envelope-derivative variance `pi^2 f^2`.
    pub fn sigma_sq(&self) -> f64 {
        PI * PI * self.doppler_hz * self.doppler_hz
    }

    pub fn power_variance(&self) -> f64 {
        self.power * self.sigma_sq()
    }

    pub fn same_as(&self, other: &InterfererSpec) -> bool {
        rel_close(self.power, other.power, TIE_TOL) && rel_close(self.doppler_hz, other.doppler_hz, TIE_TOL)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkConfig {
    pub p_d: f64,
    pub f_d_hz: f64,
    pub noise_power: f64,
    pub l_branches: usize,
    pub interferers: Vec<InterfererSpec>,
}

impl LinkConfig {
    pub fn new(p_d: f64, f_d_hz: f64, noise_power: f64, l_branches: usize, interferers: Vec<InterfererSpec>) -> Result<Self> {
        let cfg = LinkConfig { p_d, f_d_hz, noise_power, l_branches, interferers };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds a config from parallel power and Doppler slices.
    pub fn from_pairs(p_d: f64, f_d_hz: f64, noise_power: f64, l_branches: usize, powers: &[f64], dopplers: &[f64]) -> Result<Self> {
        if powers.len() != dopplers.len() {
            return Err(Error::InvalidConfig("powers and dopplers differ in length".into()));
        }
        let interferers = powers.iter().zip(dopplers).map(|(&p, &f)| InterfererSpec::new(p, f)).collect();
        Self::new(p_d, f_d_hz, noise_power, l_branches, interferers)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidConfig(what.to_string()));
        if !(self.p_d > 0.0) || !self.p_d.is_finite() {
            return bad("p_d must be positive and finite");
        }
        if !(self.f_d_hz >= 0.0) || !self.f_d_hz.is_finite() {
            return bad("f_d_hz must be finite and >= 0");
        }
        if !(self.noise_power >= 0.0) || !self.noise_power.is_finite() {
            return bad("noise_power must be finite and >= 0");
        }
        if self.l_branches < 1 {
            return bad("l_branches must be >= 1");
        }
        for (i, it) in self.interferers.iter().enumerate() {
            if !(it.power > 0.0) || !it.power.is_finite() {
                return Err(Error::InvalidConfig(format!("interferer {i}: power must be positive and finite")));
            }
            if !(it.doppler_hz >= 0.0) || !it.doppler_hz.is_finite() {
                return Err(Error::InvalidConfig(format!("interferer {i}: doppler_hz must be finite and >= 0")));
            }
        }
        if self.interferers.is_empty() && self.noise_power == 0.0 {
            return bad("a link without interferers needs noise_power > 0");
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.interferers.len()
    }

    pub fn sigma_d_sq(&self) -> f64 {
        PI * PI * self.f_d_hz * self.f_d_hz
    }

    pub fn powers(&self) -> Vec<f64> {
        self.interferers.iter().map(|i| i.power).collect()
    }

    pub fn dopplers(&self) -> Vec<f64> {
        self.interferers.iter().map(|i| i.doppler_hz).collect()
    }

    pub fn max_doppler(&self) -> f64 {
        self.interferers.iter().map(|i| i.doppler_hz).fold(self.f_d_hz, f64::max)
    }

    /// True when there is at least one interferer and all share one
    /// (power, Doppler) pair.
    pub fn all_identical(&self) -> bool {
        match self.interferers.first() {
            Some(first) => self.interferers.iter().all(|i| i.same_as(first)),
            None => false,
        }
    }

    /// Multiplies every Doppler, desired and interfering, by `c`.
    pub fn scale_dopplers(&self, c: f64) -> LinkConfig {
        let mut out = self.clone();
        out.f_d_hz *= c;
        for i in &mut out.interferers {
            i.doppler_hz *= c;
        }
        out
    }
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    let m = a.abs().max(b.abs());
    m == 0.0 || (a - b).abs() <= tol * m
}

/// Moves the interferer with the largest power-variance product to the
/// front, keeping the others in their original order.
pub fn canonical_order(config: &LinkConfig) -> Result<LinkConfig> {
    let n = config.n();
    if n < 2 {
        return Err(Error::InvalidArity { needed: 2, got: n });
    }
    let pv: Vec<f64> = config.interferers.iter().map(InterfererSpec::power_variance).collect();
    let mut top = 0;
    for (i, &v) in pv.iter().enumerate() {
        if v > pv[top] {
            top = i;
        }
    }
    for j in 0..n {
        if j != top && rel_close(pv[j], pv[top], TIE_TOL) && !config.interferers[j].same_as(&config.interferers[top]) {
            let (first, second) = if j < top { (j, top) } else { (top, j) };
            return Err(Error::DegenerateTie { first, second });
        }
    }
    let mut out = config.clone();
    let lead = out.interferers.remove(top);
    out.interferers.insert(0, lead);
    Ok(out)
}

pub fn is_canonical(config: &LinkConfig) -> bool {
    let pv0 = config.interferers[0].power_variance();
    config.interferers.iter().skip(1).all(|i| i.power_variance() <= pv0)
}

/// Lower end of the threshold range on which the closed form is stated to
/// hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Validity {
    AllValid,
    Above(f64),
}

impl Validity {
    pub fn admits(&self, gamma_th: f64) -> bool {
        match *self {
            Validity::AllValid => true,
            Validity::Above(b) => gamma_th > b,
        }
    }

    pub fn bound(&self) -> Option<f64> {
        match *self {
            Validity::AllValid => None,
            Validity::Above(b) => Some(b),
        }
    }
}

pub fn validity_min_threshold(config: &LinkConfig) -> Result<Validity> {
    if config.n() < 2 {
        return Err(Error::InvalidArity { needed: 2, got: config.n() });
    }
    let first = config.interferers[0];
    let (p1, s1) = (first.power, first.sigma_sq());
    let (pd, sd) = (config.p_d, config.sigma_d_sq());
    let mut best: Option<f64> = None;
    for it in config.interferers.iter().skip(1) {
        let (pt, st) = (it.power, it.sigma_sq());
        if p1 >= pt {
            continue;
        }
        let a = p1 * pt * (p1 * s1 - pt * st);
        let b = pd * (p1 * p1 * s1 - pt * pt * st);
        let c = pd * pd * sd * (p1 - pt);
        let root = positive_root(a, b, c);
        best = Some(best.map_or(root, |r: f64| r.max(root)));
    }
    Ok(best.map_or(Validity::AllValid, Validity::Above))
}

// Positive root of a x^2 + b x + c with a > 0 and c < 0.
fn positive_root(a: f64, b: f64, c: f64) -> f64 {
    if a == 0.0 {
        return -c / b;
    }
    let disc = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * disc);
    let (r1, r2) = (q / a, c / q);
    r1.max(r2)
}

/// Coefficients of the exact closed form at one threshold. Products that
/// can leave the `f64` range are carried as [`LogNum`].
#[derive(Debug, Clone)]
pub struct DerivedConstants {
    pub gamma_th: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub eps: Vec<f64>,
    pub f_coef: Vec<f64>,
    pub g_coef: Vec<f64>,
    pub delta: Vec<LogNum>,
    /// `lambda[t][n]`; the diagonal is NaN.
    pub lambda: Vec<Vec<f64>>,
    /// `psi[t][n]`; the diagonal is NaN.
    pub psi: Vec<Vec<LogNum>>,
    pub big_lambda: LogNum,
    /// `xi[k][m]` for `m <= L-1-k`.
    pub xi: Vec<Vec<LogNum>>,
    pub(crate) err: CoefficientErrors,
}

/// First-order relative rounding-error estimates of the coefficients.
#[derive(Debug, Clone)]
pub(crate) struct CoefficientErrors {
    pub delta: Vec<f64>,
    pub lambda: Vec<Vec<f64>>,
    pub psi: Vec<Vec<f64>>,
    pub f: Vec<f64>,
}

impl DerivedConstants {
    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn l(&self) -> usize {
        self.xi.len()
    }
}

pub fn derive_constants(config: &LinkConfig, gamma_th: f64) -> Result<DerivedConstants> {
    derive(config, gamma_th, true)
}

pub(crate) fn derive(config: &LinkConfig, gamma_th: f64, enforce_validity: bool) -> Result<DerivedConstants> {
    config.validate()?;
    let n = config.n();
    if n < 2 {
        return Err(Error::InvalidArity { needed: 2, got: n });
    }
    if !(gamma_th > 0.0) || !gamma_th.is_finite() {
        return Err(Error::Domain(format!("threshold must be positive and finite, got {gamma_th}")));
    }
    if config.noise_power == 0.0 {
        return Err(Error::Unsupported("the exact closed form needs noise_power > 0".into()));
    }
    if config.f_d_hz == 0.0 {
        return Err(Error::Unsupported("the exact closed form needs a moving desired user".into()));
    }
    let (pd, no, sd, l) = (config.p_d, config.noise_power, config.sigma_d_sq(), config.l_branches);
    let g = gamma_th;

    let a: Vec<f64> = config.interferers.iter().map(|i| (i.power / no) / (1.0 + g * i.power / pd)).collect();
    let eps: Vec<f64> = config.interferers.iter().map(|i| g * i.power * i.sigma_sq() / (pd * sd)).collect();
    let b: Vec<f64> = a.iter().zip(&eps).map(|(a, e)| a * (1.0 + e)).collect();

    for i in 0..n {
        for j in i + 1..n {
            if rel_close(eps[i], eps[j], TIE_TOL) {
                return Err(Error::NearDegenerate { n: i, q: j });
            }
        }
    }
    if eps.iter().skip(1).any(|&e| e > eps[0]) {
        return Err(Error::NotCanonical);
    }

    let eps_gap = |i: usize, j: usize| 4.0 * EPS * (eps[i] + eps[j]) / (eps[i] - eps[j]).abs() + EPS;

    let mut lambda = vec![vec![f64::NAN; n]; n];
    let mut lambda_err = vec![vec![f64::NAN; n]; n];
    for t in 0..n {
        for m in 0..n {
            if t == m {
                continue;
            }
            lambda[t][m] = (b[m] - b[t]) / (a[t] * a[m] * (eps[m] - eps[t]));
            let b_gap = 6.0 * EPS * (b[m] + b[t]) / (b[m] - b[t]).abs() + EPS;
            lambda_err[t][m] = b_gap + eps_gap(t, m) + 10.0 * EPS;
        }
    }

    if enforce_validity {
        if (1..n).any(|t| lambda[t][0] <= 0.0) {
            let bound = validity_min_threshold(config)?.bound().unwrap_or(0.0);
            return Err(Error::ValidityRange { gamma_th, bound });
        }
    }

    let mut psi = vec![vec![LogNum { sign: f64::NAN, ln_abs: f64::NAN }; n]; n];
    let mut psi_err = vec![vec![f64::NAN; n]; n];
    for t in 0..n {
        for m in 0..n {
            if t == m {
                continue;
            }
            let mut prod = LogNum::ONE;
            let mut rho = n as f64 * EPS;
            for q in 0..n {
                if q == t || q == m {
                    continue;
                }
                let (lq, lt) = (lambda[q][m], lambda[t][m]);
                let diff = lq - lt;
                prod = prod * LogNum::new(diff);
                rho += (lq.abs() * (lambda_err[q][m] + EPS) + lt.abs() * (lambda_err[t][m] + EPS)) / diff.abs();
            }
            psi[t][m] = prod.recip();
            psi_err[t][m] = rho;
        }
    }

    let mut delta = Vec::with_capacity(n);
    let mut delta_err = Vec::with_capacity(n);
    for m in 0..n {
        let mut ln_num = (n as f64 - 1.0) * eps[m].ln_1p();
        let mut den = LogNum::ONE;
        let mut rho = 3.0 * n as f64 * EPS;
        for q in 0..n {
            if q == m {
                continue;
            }
            ln_num += eps[q].ln_1p();
            den = den * LogNum::new(eps[m] - eps[q]);
            rho += eps_gap(m, q);
        }
        delta.push(LogNum::from_ln(ln_num) / den);
        delta_err.push(rho);
    }

    let mut f_coef = vec![0.0; n];
    let mut f_err = vec![0.0; n];
    for m in 1..n {
        f_coef[m] = (eps[0] - eps[m]) / ((1.0 + eps[0]) * (1.0 + eps[m]));
        f_err[m] = eps_gap(0, m) + 4.0 * EPS;
    }
    let g_coef: Vec<f64> = b.iter().map(|b| 1.0 / b).collect();
    let big_lambda = LogNum::from_ln(-b.iter().map(|b| b.ln()).sum::<f64>());

    let e1 = eps[0];
    let xi = (0..l)
        .map(|k| {
            (0..l - k)
                .map(|m| {
                    LogNum::from_ln(
                        -ln_factorial(k) - ln_factorial(l - 1 - k - m)
                            - k as f64 * e1.ln()
                            - (l - 1 - m) as f64 * (1.0 / e1).ln_1p(),
                    )
                })
                .collect()
        })
        .collect();

    Ok(DerivedConstants {
        gamma_th,
        a,
        b,
        eps,
        f_coef,
        g_coef,
        delta,
        lambda,
        psi,
        big_lambda,
        xi,
        err: CoefficientErrors { delta: delta_err, lambda: lambda_err, psi: psi_err, f: f_err },
    })
}
