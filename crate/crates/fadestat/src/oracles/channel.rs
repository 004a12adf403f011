//! Sum-of-sinusoids Rayleigh fading with a `J0(2 pi f tau)` autocorrelation.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Oscillators are re-evaluated directly every this many samples to stop
/// the rotation recurrence from drifting.
const RESYNC: usize = 4096;

/// Identifies one fading path inside a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PathKey {
    pub master_seed: u64,
    pub realization: u64,
    pub path: u64,
}

/// Generator for one arm keyed by `(master_seed, realization, path, arm)`.
pub fn arm_rng(key: PathKey, arm: u64) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&key.master_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&key.realization.to_le_bytes());
    seed[16..24].copy_from_slice(&key.path.to_le_bytes());
    seed[24..].copy_from_slice(&arm.to_le_bytes());
    ChaCha8Rng::from_seed(seed)
}

struct Arm {
    omega: Vec<f64>,
    phase: Vec<f64>,
}

impl Arm {
    fn value_at(&self, k: usize, dt: f64) -> Vec<Complex64> {
        self.omega
            .iter()
            .zip(&self.phase)
            .map(|(w, p)| Complex64::from_polar(1.0, w * k as f64 * dt + p))
            .collect()
    }
}

/// `n` samples of a unit-power complex Gaussian process with maximum
/// Doppler `f_doppler_hz`, sampled at `sample_rate_hz`, from `m`
/// sinusoids per quadrature arm with random arrival angles and phases.
/// A zero Doppler gives a constant sequence.
pub fn generate_channel(f_doppler_hz: f64, sample_rate_hz: f64, n: usize, m: usize, key: PathKey) -> Vec<Complex64> {
    assert!(f_doppler_hz >= 0.0 && sample_rate_hz > 0.0 && m > 0);
    let mut rng_i = arm_rng(key, 0);
    let mut rng_q = arm_rng(key, 1);
    let theta = rng_i.random_range(-PI..PI);
    let w = 2.0 * PI * f_doppler_hz;
    let alpha: Vec<f64> = (1..=m).map(|k| (2.0 * PI * k as f64 - PI + theta) / (4.0 * m as f64)).collect();
    let arm_i = Arm {
        omega: alpha.iter().map(|a| w * a.cos()).collect(),
        phase: (0..m).map(|_| rng_i.random_range(-PI..PI)).collect(),
    };
    let arm_q = Arm {
        omega: alpha.iter().map(|a| w * a.sin()).collect(),
        phase: (0..m).map(|_| rng_q.random_range(-PI..PI)).collect(),
    };

    let dt = 1.0 / sample_rate_hz;
    let rot_i: Vec<Complex64> = arm_i.omega.iter().map(|w| Complex64::from_polar(1.0, w * dt)).collect();
    let rot_q: Vec<Complex64> = arm_q.omega.iter().map(|w| Complex64::from_polar(1.0, w * dt)).collect();
    let scale = 1.0 / (m as f64).sqrt();

    let mut out = Vec::with_capacity(n);
    let (mut si, mut sq) = (Vec::new(), Vec::new());
    for k in 0..n {
        if k % RESYNC == 0 {
            si = arm_i.value_at(k, dt);
            sq = arm_q.value_at(k, dt);
        }
        let mut xi = 0.0;
        for (s, r) in si.iter_mut().zip(&rot_i) {
            xi += s.re;
            *s *= r;
        }
        let mut xq = 0.0;
        for (s, r) in sq.iter_mut().zip(&rot_q) {
            xq += s.re;
            *s *= r;
        }
        out.push(Complex64::new(xi * scale, xq * scale));
    }
    out
}

/// Empirical autocorrelation `mean(h[k+lag] conj(h[k]))` normalized by the
/// sample power, real part.
pub fn autocorrelation(h: &[Complex64], lag: usize) -> f64 {
    let n = h.len() - lag;
    let power: f64 = h.iter().map(|z| z.norm_sqr()).sum::<f64>() / h.len() as f64;
    let c: Complex64 = (0..n).map(|k| h[k + lag] * h[k].conj()).sum();
    c.re / n as f64 / power
}

/// Bessel `J0` by its power series; accurate to about `1e-14` for `|x| <= 20`.
pub fn bessel_j0(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / (k * k) as f64;
        sum += term;
        if term.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}
