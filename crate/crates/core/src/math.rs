//! Floating-point helpers shared by the divergence, affinity and spectral code.
//!
//! Everything here is `no_std`; transcendental functions come from `libm`.

use libm::{erfc, exp, fabs, lgamma, log, log1p};

pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
pub const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;

/// `log(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + log1p(exp(lo - hi))
}

/// Logistic function, stable for large `|x|`.
#[inline]
pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + exp(-x))
    } else {
        let e = exp(x);
        e / (1.0 + e)
    }
}

#[inline]
pub fn logit(p: f64) -> f64 {
    log(p) - log1p(-p)
}

/// `log(1 + e^x)`, the Bernoulli log-partition function.
#[inline]
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + log1p(exp(-x))
    } else {
        log1p(exp(x))
    }
}

/// Neumaier-compensated running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, carry: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if fabs(self.sum) >= fabs(x) {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl core::iter::FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Streaming log-sum-exp.
///
/// Keeps the running maximum `m` and a compensated linear sum of `exp(x - m)`,
/// rescaling when a larger term arrives. The result is accurate to a few ulps
/// of `log` even when every term is far below the `f64` underflow threshold.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp {
    max: f64,
    scaled: CompensatedSum,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self::new()
    }
}

impl LogSumExp {
    pub const fn new() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: CompensatedSum::new() }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.scaled.add(exp(x - self.max));
        } else {
            let rescale = exp(self.max - x);
            let old = self.scaled.value();
            self.scaled = CompensatedSum::new();
            self.scaled.add(old * rescale);
            self.scaled.add(1.0);
            self.max = x;
        }
    }

    /// Merge another accumulator (order-insensitive up to rounding).
    pub fn merge(&mut self, other: &LogSumExp) {
        if other.max == f64::NEG_INFINITY {
            return;
        }
        let v = other.scaled.value();
        if v > 0.0 {
            self.push_scaled(other.max, v);
        }
    }

    fn push_scaled(&mut self, max: f64, scaled: f64) {
        if max <= self.max {
            self.scaled.add(scaled * exp(max - self.max));
        } else {
            let old = self.scaled.value() * exp(self.max - max);
            self.scaled = CompensatedSum::new();
            self.scaled.add(old);
            self.scaled.add(scaled);
            self.max = max;
        }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        if self.max == f64::NEG_INFINITY {
            f64::NEG_INFINITY
        } else {
            self.max + log(self.scaled.value())
        }
    }
}

/// Log of the Binomial(n, p) mass at every `k in 0..=n`, via log-gamma.
pub fn log_binomial_pmf_table(n: u64, p: f64) -> alloc::vec::Vec<f64> {
    let nf = n as f64;
    let lp = log(p);
    let lq = log1p(-p);
    let ln_n_fact = lgamma(nf + 1.0);
    (0..=n)
        .map(|k| {
            let kf = k as f64;
            ln_n_fact - lgamma(kf + 1.0) - lgamma(nf - kf + 1.0) + kf * lp + (nf - kf) * lq
        })
        .collect()
}

/// Scaled complementary error function `exp(x²)·erfc(x)` for `x >= 0`.
///
/// Direct product below 8, continued fraction above (where `erfc` alone
/// would underflow long before the product does).
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 8.0 {
        exp(x * x) * erfc(x)
    } else {
        // erfcx(x) = (1/√π) · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
        let mut tail = x;
        for k in (1..=60).rev() {
            tail = x + (k as f64 * 0.5) / tail;
        }
        FRAC_1_SQRT_PI / tail
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / core::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_handles_infinities() {
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 1.5), 1.5);
        assert_eq!(log_add_exp(-2.0, f64::NEG_INFINITY), -2.0);
        let v = log_add_exp(0.0, 0.0);
        assert!((v - core::f64::consts::LN_2).abs() < 1e-16);
    }

    #[test]
    fn logsumexp_far_below_underflow() {
        let mut acc = LogSumExp::new();
        for _ in 0..1000 {
            acc.push(-5000.0);
        }
        let want = -5000.0 + (1000.0f64).ln();
        assert!((acc.value() - want).abs() < 1e-12);
    }

    #[test]
    fn logsumexp_merge_matches_single_stream() {
        let xs: std::vec::Vec<f64> = (0..200).map(|i| -(i as f64) * 0.37 + (i % 7) as f64).collect();
        let mut whole = LogSumExp::new();
        xs.iter().for_each(|&x| whole.push(x));
        let mut a = LogSumExp::new();
        let mut b = LogSumExp::new();
        xs[..77].iter().for_each(|&x| a.push(x));
        xs[77..].iter().for_each(|&x| b.push(x));
        a.merge(&b);
        assert!((a.value() - whole.value()).abs() < 1e-13);
    }

    #[test]
    fn binomial_table_normalizes() {
        let t = log_binomial_pmf_table(200, 0.3);
        let mut acc = LogSumExp::new();
        t.iter().for_each(|&x| acc.push(x));
        assert!(acc.value().abs() < 1e-12);
    }

    #[test]
    fn erfcx_is_continuous_at_switch() {
        let below = exp(7.999_999 * 7.999_999) * erfc(7.999_999);
        let above = erfcx(8.000_001);
        assert!((below - above).abs() / above < 1e-6);
        // asymptote 1/(x√π)
        let x = 1e6;
        assert!((erfcx(x) * x / FRAC_1_SQRT_PI - 1.0).abs() < 1e-11);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::new();
        s.add(1.0);
        for _ in 0..10 {
            s.add(1e-16);
        }
        s.add(-1.0);
        assert!((s.value() - 1e-15).abs() < 1e-27);
    }
}
