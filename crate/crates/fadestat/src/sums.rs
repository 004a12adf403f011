//! Sign and log-magnitude numbers plus compensated accumulation.

use std::ops::{Div, Mul};

/// A real number stored as `sign * exp(ln_abs)`; survives products that
/// would overflow or underflow an `f64`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNum {
    pub sign: f64,
    pub ln_abs: f64,
}

impl LogNum {
    pub const ONE: LogNum = LogNum { sign: 1.0, ln_abs: 0.0 };
    pub const ZERO: LogNum = LogNum { sign: 0.0, ln_abs: f64::NEG_INFINITY };

    pub fn new(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogNum { sign: x.signum(), ln_abs: x.abs().ln() }
        }
    }

    pub fn from_ln(ln_abs: f64) -> Self {
        LogNum { sign: 1.0, ln_abs }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }

    pub fn recip(self) -> Self {
        LogNum { sign: self.sign, ln_abs: -self.ln_abs }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        let sign = if n % 2 == 0 { self.sign.abs() } else { self.sign };
        LogNum { sign, ln_abs: self.ln_abs * n as f64 }
    }
}

impl Mul for LogNum {
    type Output = LogNum;
    fn mul(self, rhs: LogNum) -> LogNum {
        LogNum { sign: self.sign * rhs.sign, ln_abs: self.ln_abs + rhs.ln_abs }
    }
}

impl Div for LogNum {
    type Output = LogNum;
    fn div(self, rhs: LogNum) -> LogNum {
        self * rhs.recip()
    }
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for Compensated {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut c = Compensated::default();
        for x in iter {
            c.add(x);
        }
        c
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Compensated>().total()
}

/// Collects signed log-magnitude terms, each with a first-order relative
/// error estimate, and sums them relative to the largest magnitude.
#[derive(Debug, Clone, Default)]
pub struct LogSum {
    terms: Vec<(LogNum, f64)>,
}

#[derive(Debug, Clone, Copy)]
pub struct LogSumResult {
    pub value: LogNum,
    /// `sum |t_i| / |sum t_i|`.
    pub condition: f64,
    /// Estimated relative error of the sum.
    pub rel_error: f64,
}

impl LogSum {
    pub fn push(&mut self, term: LogNum, rel_err: f64) {
        if term.sign != 0.0 {
            self.terms.push((term, rel_err));
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn finish(&self) -> LogSumResult {
        if self.terms.is_empty() {
            return LogSumResult { value: LogNum::ZERO, condition: 1.0, rel_error: 0.0 };
        }
        let top = self.terms.iter().map(|(t, _)| t.ln_abs).fold(f64::NEG_INFINITY, f64::max);
        let mut sum = Compensated::default();
        let mut abs = Compensated::default();
        let mut err = Compensated::default();
        for (t, rho) in &self.terms {
            let mag = (t.ln_abs - top).exp();
            sum.add(t.sign * mag);
            abs.add(mag);
            err.add(mag * (rho + f64::EPSILON));
        }
        let s = sum.total();
        let value = LogNum { sign: s.signum(), ln_abs: s.abs().ln() + top };
        if s == 0.0 {
            return LogSumResult { value: LogNum::ZERO, condition: f64::INFINITY, rel_error: f64::INFINITY };
        }
        LogSumResult {
            value,
            condition: abs.total() / s.abs(),
            rel_error: err.total() / s.abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lognum_roundtrip() {
        for x in [-3.5, 1e-300, 7.0, -1e200] {
            assert!((LogNum::new(x).value() - x).abs() <= x.abs() * 1e-13);
        }
        let p = LogNum::new(-2.0).powi(3);
        assert_eq!(p.sign, -1.0);
        assert!((p.value() + 8.0).abs() < 1e-14);
    }

    #[test]
    fn compensated_beats_naive() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn logsum_huge_range() {
        let mut s = LogSum::default();
        s.push(LogNum::from_ln(800.0), 0.0);
        s.push(LogNum { sign: -1.0, ln_abs: 800.0 + (0.5f64).ln() }, 0.0);
        let r = s.finish();
        assert!((r.value.ln_abs - (800.0 + (0.5f64).ln())).abs() < 1e-12);
        assert!((r.condition - 3.0).abs() < 1e-12);
    }
}
