//! Chernoff divergences and the non-asymptotic sandwich on the affinity.
//!
//! For product-Bernoulli hypotheses the Chernoff α-divergence is additive,
//!
//! ```text
//! D_α = Σ_j −log[ p0ⱼ^{1−α} p1ⱼ^α + (1−p0ⱼ)^{1−α} (1−p1ⱼ)^α ],
//! ```
//!
//! concave in α, and maximized at α*. With the tilted law
//! `Yⱼ ~ Bern(p_αⱼ)` the affinity factors as `η = e^{−D_α} · E[g_α(log l(Y))]`,
//! where `g_α(x) = exp(min(αx, (α−1)x))` and `l = φ0/φ1`. The sandwich bounds
//! come from a Berry–Esseen estimate of that expectation at α*.

use libm::{exp, fabs, log, log1p, pow, sqrt};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::dists::{BernoulliProduct, Group, GroupedPair};
use crate::error::{Error, Result};
use crate::math::{erfcx, log_add_exp, softplus, CompensatedSum, SQRT_2PI};

/// Search interval for α*.
pub const ALPHA_MIN: f64 = 1e-6;
pub const ALPHA_MAX: f64 = 1.0 - 1e-6;
/// Bracket width at which golden-section search stops.
pub const ALPHA_TOL: f64 = 1e-12;
/// Berry–Esseen constant for independent, non-identical summands.
pub const BERRY_ESSEEN: f64 = 0.56;

const GOLDEN: f64 = 0.618_033_988_749_894_8;

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

/// Logs of one coordinate's four masses plus its multiplicity.
#[derive(Clone, Copy)]
struct Logs {
    lp0: f64,
    lq0: f64,
    lp1: f64,
    lq1: f64,
    weight: f64,
}

impl Logs {
    fn of(g: Group) -> Self {
        Self { lp0: log(g.p0), lq0: log1p(-g.p0), lp1: log(g.p1), lq1: log1p(-g.p1), weight: g.count as f64 }
    }

    /// Log of the unnormalized tilted masses at x = 1 and x = 0.
    #[inline]
    fn tilted_logs(&self, alpha: f64) -> (f64, f64) {
        let a = (1.0 - alpha) * self.lp0 + alpha * self.lp1;
        let b = (1.0 - alpha) * self.lq0 + alpha * self.lq1;
        (a, b)
    }

    #[inline]
    fn divergence(&self, alpha: f64) -> f64 {
        let (a, b) = self.tilted_logs(alpha);
        // each term is ≥ 0 by Hölder; clamp rounding noise
        (-log_add_exp(a, b)).max(0.0)
    }

    /// `(p_α, 1 − p_α)`, both computed directly to keep the small one accurate.
    #[inline]
    fn tilted(&self, alpha: f64) -> (f64, f64) {
        let (a, b) = self.tilted_logs(alpha);
        let s = log_add_exp(a, b);
        (exp(a - s), exp(b - s))
    }

    /// `log l(1)` and `log l(0)` for `l = φ0/φ1`.
    #[inline]
    fn llr(&self) -> (f64, f64) {
        (self.lp0 - self.lp1, self.lq0 - self.lq1)
    }

    /// `θ0 − θ1 = log[p0(1−p1) / (p1(1−p0))]`.
    #[inline]
    fn natural_gap(&self) -> f64 {
        (self.lp0 - self.lp1) - (self.lq0 - self.lq1)
    }
}

fn logs<P: BernoulliProduct + ?Sized>(pair: &P) -> impl Iterator<Item = Logs> + '_ {
    pair.weighted().map(Logs::of)
}

/// Chernoff α-divergence `D_α(φ0 ‖ φ1)` in nats.
pub fn alpha_divergence<P: BernoulliProduct + ?Sized>(pair: &P, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(divergence_unchecked(pair, alpha))
}

fn divergence_unchecked<P: BernoulliProduct + ?Sized>(pair: &P, alpha: f64) -> f64 {
    logs(pair).map(|c| c.weight * c.divergence(alpha)).collect::<CompensatedSum>().value()
}

/// `Σⱼ E_{Bern(p_αⱼ)}[log lⱼ]`, the α-derivative of `D_α`.
///
/// It vanishes at α*; decreasing in α because `D_α` is concave.
pub fn tilted_llr_mean<P: BernoulliProduct + ?Sized>(pair: &P, alpha: f64) -> f64 {
    logs(pair)
        .map(|c| {
            let (p, q) = c.tilted(alpha);
            let (l1, l0) = c.llr();
            c.weight * (p * l1 + q * l0)
        })
        .collect::<CompensatedSum>()
        .value()
}

/// Tilted success probability `p_α ∝ p0^{1−α} p1^α`.
///
/// Endpoints return the inputs exactly.
pub fn tilted_probability(p0: f64, p1: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return p0;
    }
    if alpha == 1.0 {
        return p1;
    }
    Logs::of(Group { p0, p1, count: 1 }).tilted(alpha).0
}

/// Chernoff information and its maximizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChernoffInfo {
    pub d_star: f64,
    pub alpha_star: f64,
}

/// `D* = max_α D_α` and α*.
///
/// Golden-section search on `[ALPHA_MIN, ALPHA_MAX]` brackets the maximizer;
/// the bracket is then polished by bisection on the sign of
/// [`tilted_llr_mean`], since function values alone cannot resolve α below
/// roughly `sqrt(ε)` near a flat maximum.
pub fn chernoff_information<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<ChernoffInfo> {
    if pair.is_degenerate() {
        return Err(Error::DegeneratePair);
    }
    let f = |a: f64| divergence_unchecked(pair, a);

    let (mut lo, mut hi) = (ALPHA_MIN, ALPHA_MAX);
    let mut c = hi - GOLDEN * (hi - lo);
    let mut d = lo + GOLDEN * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if hi - lo <= ALPHA_TOL {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - GOLDEN * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + GOLDEN * (hi - lo);
            fd = f(d);
        }
    }
    let guess = 0.5 * (lo + hi);

    let alpha = polish(|a| tilted_llr_mean(pair, a), guess);
    Ok(ChernoffInfo { d_star: f(alpha), alpha_star: alpha })
}

/// Refine a root of the decreasing function `slope` near `guess`.
fn polish(slope: impl Fn(f64) -> f64, guess: f64) -> f64 {
    let mut width = 1e-7;
    let mut lo = (guess - width).max(ALPHA_MIN);
    let mut hi = (guess + width).min(ALPHA_MAX);
    while slope(lo) < 0.0 && lo > ALPHA_MIN {
        width *= 4.0;
        lo = (guess - width).max(ALPHA_MIN);
    }
    width = 1e-7;
    while slope(hi) > 0.0 && hi < ALPHA_MAX {
        width *= 4.0;
        hi = (guess + width).min(ALPHA_MAX);
    }
    let (s_lo, s_hi) = (slope(lo), slope(hi));
    if s_lo <= 0.0 {
        return lo;
    }
    if s_hi >= 0.0 {
        return hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = slope(mid);
        if s > 0.0 {
            lo = mid;
        } else if s < 0.0 {
            hi = mid;
        } else {
            return mid;
        }
    }
    if fabs(slope(lo)) <= fabs(slope(hi)) {
        lo
    } else {
        hi
    }
}

/// Root-mean per-coordinate variance of the centered log-likelihood ratio
/// under the tilted law at `alpha`.
pub fn sigma_bar<P: BernoulliProduct + ?Sized>(pair: &P, alpha: f64) -> f64 {
    let n = pair.dim() as f64;
    let total = logs(pair)
        .map(|c| {
            let (p, q) = c.tilted(alpha);
            let gap = c.natural_gap();
            c.weight * gap * gap * p * q
        })
        .collect::<CompensatedSum>()
        .value();
    sqrt(total / n)
}

/// Largest per-coordinate `|log[p0(1−p1) / (p1(1−p0))]|`; bounds the third
/// moment of the centered log-likelihood ratio by this times its variance.
pub fn c1_span<P: BernoulliProduct + ?Sized>(pair: &P) -> f64 {
    logs(pair).map(|c| fabs(c.natural_gap())).fold(0.0, f64::max)
}

/// Sandwich bounds on the affinity η (twice the Bayes error).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub d_star: f64,
    pub alpha_star: f64,
    pub sigma_bar: f64,
    pub c1: f64,
    /// `√n · σ̄ · α*(1 − α*)`.
    pub scale: f64,
    /// Alternative upper-bound constant `2 ∨ 2(0.56 C1)^{3/2} exp(√(2π) C1)`.
    pub c2: f64,
    /// Lower-bound constant `exp(−2 · 0.56 · √(2π) C1) / 30`.
    pub c3: f64,
    /// Upper-bound constant `1 + 0.28 C1`.
    pub c4: f64,
    /// `c3 / scale · e^{−D*}`; only a valid bound when `lower_applicable`.
    pub lower: f64,
    /// `c4 / scale · e^{−D*}`.
    pub upper: f64,
    /// `c2 / scale · e^{−D*}`.
    pub upper_alt: f64,
    pub log_lower: f64,
    pub log_upper: f64,
    pub log_upper_alt: f64,
    /// Both thresholds of the lower-bound argument hold:
    /// `scale ≥ √(2π)·C ∨ 2` and `scale ≥ 2 C^{3/2} exp(√(2π) C)`, `C = 0.56 C1`.
    pub lower_applicable: bool,
}

impl BoundReport {
    /// `log(e^{−D*})`, the Chernoff coefficient in log space.
    pub fn log_chernoff_coefficient(&self) -> f64 {
        -self.d_star
    }

    /// Normalized affinity `η · scale · e^{D*}`, given `log η`.
    pub fn normalized_affinity(&self, log_eta: f64) -> f64 {
        exp(log_eta + self.d_star) * self.scale
    }
}

/// Non-asymptotic lower/upper bounds on η at the Chernoff optimum.
pub fn sandwich_bounds<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<BoundReport> {
    let info = chernoff_information(pair)?;
    let n = pair.dim();
    let alpha = info.alpha_star;
    let sigma = sigma_bar(pair, alpha);
    let c1 = c1_span(pair);
    let scale = sqrt(n as f64) * sigma * alpha * (1.0 - alpha);

    let be = BERRY_ESSEEN * c1;
    let c2 = f64::max(2.0, 2.0 * pow(be, 1.5) * exp(SQRT_2PI * c1));
    let c3 = exp(-2.0 * BERRY_ESSEEN * SQRT_2PI * c1) / 30.0;
    let c4 = 1.0 + 0.5 * be;

    let lower_applicable =
        scale >= f64::max(SQRT_2PI * be, 2.0) && scale >= 2.0 * pow(be, 1.5) * exp(SQRT_2PI * be);

    let log_base = -info.d_star - log(scale);
    let log_lower = log(c3) + log_base;
    let log_upper = log(c4) + log_base;
    let log_upper_alt = log(c2) + log_base;
    Ok(BoundReport {
        n,
        d_star: info.d_star,
        alpha_star: alpha,
        sigma_bar: sigma,
        c1,
        scale,
        c2,
        c3,
        c4,
        lower: exp(log_lower),
        upper: exp(log_upper),
        upper_alt: exp(log_upper_alt),
        log_lower,
        log_upper,
        log_upper_alt,
        lower_applicable,
    })
}

/// Classical lower bound `½ · min(e^{−α*√n σ̄}, e^{−(1−α*)√n σ̄}) · e^{−D*}`
/// on η, in log space.
pub fn log_shannon_lower_bound<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<f64> {
    let info = chernoff_information(pair)?;
    let root = sqrt(pair.dim() as f64) * sigma_bar(pair, info.alpha_star);
    let worst = f64::max(info.alpha_star, 1.0 - info.alpha_star);
    Ok(-core::f64::consts::LN_2 - worst * root - info.d_star)
}

/// Linear-scale form of [`log_shannon_lower_bound`].
pub fn shannon_lower_bound<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<f64> {
    log_shannon_lower_bound(pair).map(exp)
}

/// Bernoulli log-partition `A(θ) = log(1 + e^θ)`.
pub fn bernoulli_log_partition(theta: f64) -> f64 {
    softplus(theta)
}

/// Exponential-family form of the α-divergence,
/// `Σⱼ (1−α)A(θ0ⱼ) + αA(θ1ⱼ) − A((1−α)θ0ⱼ + αθ1ⱼ)`.
///
/// A non-finite value from `log_partition` is reported as
/// [`Error::EvaluationFailure`] with the offending coordinate.
pub fn expfam_alpha_divergence(
    log_partition: impl Fn(f64) -> f64,
    theta0: &[f64],
    theta1: &[f64],
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    if theta0.len() != theta1.len() {
        return Err(Error::LengthMismatch { left: theta0.len(), right: theta1.len() });
    }
    let mut acc = CompensatedSum::new();
    for (j, (&t0, &t1)) in theta0.iter().zip(theta1).enumerate() {
        let ta = (1.0 - alpha) * t0 + alpha * t1;
        let (a0, a1, aa) = (log_partition(t0), log_partition(t1), log_partition(ta));
        if !(a0.is_finite() && a1.is_finite() && aa.is_finite()) {
            return Err(Error::EvaluationFailure { index: j });
        }
        acc.add((1.0 - alpha) * a0 + alpha * a1 - aa);
    }
    Ok(acc.value())
}

/// `g_α(x) = exp(min(αx, (α−1)x))`.
#[inline]
pub fn g_alpha(x: f64, alpha: f64) -> f64 {
    exp(f64::min(alpha * x, (alpha - 1.0) * x))
}

/// `E[g_α(Z)]` for `Z ~ N(0, σ²)`:
/// `e^{σ²α²/2} Φ(−σα) + e^{σ²(1−α)²/2} Φ(−σ(1−α))`, evaluated through the
/// scaled complementary error function so large σ neither overflows nor
/// underflows.
pub fn gaussian_g_expectation(sigma: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if sigma.is_nan() || sigma < 0.0 || sigma.is_infinite() {
        return Err(Error::InvalidArgument("sigma must be finite and non-negative"));
    }
    let s = core::f64::consts::FRAC_1_SQRT_2 * sigma;
    Ok(0.5 * (erfcx(s * alpha) + erfcx(s * (1.0 - alpha))))
}

/// Samples per independently seeded Monte-Carlo stream.
pub const MC_CHUNK: u64 = 1 << 14;

/// Running sums for one Monte-Carlo stream.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct McChunk {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

/// Monte-Carlo estimate of η from the tilted representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub log_estimate: f64,
    pub std_error: f64,
    /// Standard error relative to the estimate (scale-free).
    pub rel_std_error: f64,
    pub samples: u64,
    pub alpha_star: f64,
    pub d_star: f64,
}

/// Shared state for drawing tilted samples.
pub struct TiltedSampler {
    groups: alloc::vec::Vec<(Binomial, f64, f64, u64)>,
    info: ChernoffInfo,
}

impl TiltedSampler {
    pub fn new(pair: &GroupedPair) -> Result<Self> {
        let info = chernoff_information(pair)?;
        let mut groups = alloc::vec::Vec::new();
        for g in pair.groups() {
            let c = Logs::of(*g);
            let (p, _) = c.tilted(info.alpha_star);
            let (l1, l0) = c.llr();
            let dist = Binomial::new(g.count, p).map_err(|_| Error::InvalidArgument("tilted probability"))?;
            groups.push((dist, l1, l0, g.count));
        }
        Ok(Self { groups, info })
    }

    pub fn info(&self) -> ChernoffInfo {
        self.info
    }

    /// Draw stream `index` of `len` samples. Streams are independent
    /// ChaCha8 sequences keyed by `(seed, index)`, so any partition of the
    /// work reproduces the serial result.
    pub fn chunk(&self, seed: u64, index: u64, len: u64) -> McChunk {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let alpha = self.info.alpha_star;
        let mut sum = CompensatedSum::new();
        let mut sum_sq = CompensatedSum::new();
        for _ in 0..len {
            let mut llr = 0.0;
            for (dist, l1, l0, count) in &self.groups {
                let ones = dist.sample(&mut rng);
                llr += ones as f64 * l1 + (count - ones) as f64 * l0;
            }
            let g = g_alpha(llr, alpha);
            sum.add(g);
            sum_sq.add(g * g);
        }
        McChunk { count: len, sum: sum.value(), sum_sq: sum_sq.value() }
    }

    /// Combine chunk sums (in the given order) into an estimate of η.
    pub fn finish(&self, chunks: &[McChunk]) -> MonteCarloEstimate {
        let mut n = 0u64;
        let mut s = CompensatedSum::new();
        let mut ss = CompensatedSum::new();
        for c in chunks {
            n += c.count;
            s.add(c.sum);
            ss.add(c.sum_sq);
        }
        let nf = n as f64;
        let mean = s.value() / nf;
        let var = if n > 1 { ((ss.value() - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
        let se_mean = sqrt(var / nf);
        let d = self.info.d_star;
        MonteCarloEstimate {
            estimate: exp(-d) * mean,
            log_estimate: log(mean) - d,
            std_error: exp(-d) * se_mean,
            rel_std_error: se_mean / mean,
            samples: n,
            alpha_star: self.info.alpha_star,
            d_star: d,
        }
    }

    /// Chunk lengths covering `samples` draws.
    pub fn plan(samples: u64) -> impl Iterator<Item = (u64, u64)> {
        let full = samples / MC_CHUNK;
        let rest = samples % MC_CHUNK;
        (0..full).map(|i| (i, MC_CHUNK)).chain((rest > 0).then_some((full, rest)))
    }
}

/// Unbiased Monte-Carlo estimate of η: draw `Yⱼ ~ Bern(p_{α*ⱼ})` (one
/// binomial per group), average `g_{α*}(log l(Y))`, multiply by `e^{−D*}`.
///
/// Deterministic for a fixed seed.
pub fn tilted_mc_affinity(pair: &GroupedPair, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be positive"));
    }
    let sampler = TiltedSampler::new(pair)?;
    let chunks: alloc::vec::Vec<McChunk> =
        TiltedSampler::plan(samples).map(|(i, len)| sampler.chunk(seed, i, len)).collect();
    Ok(sampler.finish(&chunks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dists::HypothesisPair;
    use alloc::vec;

    // mpmath, 40 digits: -log(2*sqrt(0.55*0.45))
    const D_HALF_55_45: f64 = 0.005_025_167_926_750_721;
    // -log(2*sqrt(0.21))
    const D_HALF_3_7: f64 = 0.087_176_693_572_388_88;
    // log(11/9)
    const LOGIT_55: f64 = 0.200_670_695_462_151_16;

    #[test]
    fn divergence_examples() {
        let same = HypothesisPair::new(vec![0.5], vec![0.5]).unwrap();
        assert_eq!(alpha_divergence(&same, 0.3).unwrap(), 0.0);
        let p = HypothesisPair::new(vec![0.55], vec![0.45]).unwrap();
        assert!((alpha_divergence(&p, 0.5).unwrap() - D_HALF_55_45).abs() < 1e-15);
        let rep = HypothesisPair::iid(0.55, 0.45, 7).unwrap();
        let one = alpha_divergence(&p, 0.37).unwrap();
        assert!((alpha_divergence(&rep, 0.37).unwrap() - 7.0 * one).abs() < 1e-15);
        assert_eq!(alpha_divergence(&p, 0.0), Err(Error::AlphaOutOfRange(0.0)));
        assert_eq!(alpha_divergence(&p, 1.0), Err(Error::AlphaOutOfRange(1.0)));
    }

    #[test]
    fn chernoff_information_symmetric_pairs() {
        let p = HypothesisPair::new(vec![0.55, 0.45], vec![0.45, 0.55]).unwrap();
        let info = chernoff_information(&p).unwrap();
        assert!((info.alpha_star - 0.5).abs() < 1e-10);
        assert!((info.d_star - 2.0 * D_HALF_55_45).abs() < 1e-16);

        let p = HypothesisPair::new(vec![0.3], vec![0.7]).unwrap();
        let info = chernoff_information(&p).unwrap();
        assert!((info.alpha_star - 0.5).abs() < 1e-10);
        assert!((info.d_star - D_HALF_3_7).abs() < 1e-15);

        let same = HypothesisPair::new(vec![0.2, 0.4], vec![0.2, 0.4]).unwrap();
        assert_eq!(chernoff_information(&same), Err(Error::DegeneratePair));
    }

    #[test]
    fn alpha_star_is_a_maximizer() {
        let p = HypothesisPair::new(vec![0.1, 0.6, 0.33], vec![0.5, 0.2, 0.31]).unwrap();
        let info = chernoff_information(&p).unwrap();
        for k in 1..100 {
            let a = k as f64 / 100.0;
            assert!(alpha_divergence(&p, a).unwrap() <= info.d_star + 1e-15);
        }
        assert!(tilted_llr_mean(&p, info.alpha_star).abs() < 1e-12);
    }

    #[test]
    fn tilted_probability_examples() {
        assert!((tilted_probability(0.37, 0.37, 0.6) - 0.37).abs() < 1e-15);
        assert!((tilted_probability(0.55, 0.45, 0.5) - 0.5).abs() < 1e-15);
        assert_eq!(tilted_probability(0.3, 0.7, 0.0), 0.3);
        assert_eq!(tilted_probability(0.3, 0.7, 1.0), 0.7);
    }

    #[test]
    fn sigma_bar_examples() {
        let same = HypothesisPair::new(vec![0.2, 0.9], vec![0.2, 0.9]).unwrap();
        assert_eq!(sigma_bar(&same, 0.4), 0.0);
        // each coordinate: (log(0.55²/0.45²))² · ¼  ⇒  σ̄ = log(11/9)
        let p = HypothesisPair::new(vec![0.55, 0.45], vec![0.45, 0.55]).unwrap();
        assert!((sigma_bar(&p, 0.5) - LOGIT_55).abs() < 1e-15);
        let q = HypothesisPair::new(vec![0.1, 0.6], vec![0.5, 0.2]).unwrap();
        let rep = q.group();
        let rep = GroupedPair::from_groups(rep.groups().iter().map(|g| Group { count: 5, ..*g })).unwrap();
        assert!((sigma_bar(&q, 0.3) - sigma_bar(&rep, 0.3)).abs() < 1e-15);
    }

    #[test]
    fn c1_examples() {
        let same = HypothesisPair::new(vec![0.2], vec![0.2]).unwrap();
        assert_eq!(c1_span(&same), 0.0);
        let p = HypothesisPair::new(vec![0.55], vec![0.45]).unwrap();
        assert!((c1_span(&p) - 2.0 * LOGIT_55).abs() < 1e-15);
        let mixed = HypothesisPair::new(vec![0.55, 0.1, 0.3], vec![0.45, 0.2, 0.9]).unwrap();
        let singles = [(0.55, 0.45), (0.1, 0.2), (0.3, 0.9)]
            .iter()
            .map(|&(a, b)| c1_span(&HypothesisPair::new(vec![a], vec![b]).unwrap()))
            .fold(0.0, f64::max);
        assert_eq!(c1_span(&mixed), singles);
    }

    #[test]
    fn sandwich_constants() {
        let p = GroupedPair::iid(0.55, 0.45, 1600).unwrap();
        let r = sandwich_bounds(&p).unwrap();
        let c1 = 2.0 * LOGIT_55;
        assert!((r.c1 - c1).abs() < 1e-15);
        assert!((r.c4 - (1.0 + 0.28 * c1)).abs() < 1e-15);
        assert!((r.c3 - (-2.0 * 0.56 * SQRT_2PI * c1).exp() / 30.0).abs() < 1e-17);
        assert!((r.scale - 40.0 * LOGIT_55 * 0.25).abs() < 1e-12);
        assert!(r.lower_applicable);
        assert!(r.lower < r.upper);
        assert!((r.log_upper - r.upper.ln()).abs() < 1e-12);
        let small = GroupedPair::iid(0.55, 0.45, 100).unwrap();
        assert!(!sandwich_bounds(&small).unwrap().lower_applicable);
        let same = GroupedPair::iid(0.5, 0.5, 10).unwrap();
        assert_eq!(sandwich_bounds(&same), Err(Error::DegeneratePair));
    }

    #[test]
    fn shannon_symmetric_exponents_coincide() {
        let p = GroupedPair::iid(0.3, 0.7, 50).unwrap();
        let info = chernoff_information(&p).unwrap();
        let root = (50.0f64).sqrt() * sigma_bar(&p, info.alpha_star);
        let want = -core::f64::consts::LN_2 - 0.5 * root - info.d_star;
        assert!((log_shannon_lower_bound(&p).unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn expfam_matches_probability_form() {
        let p = HypothesisPair::new(vec![0.2, 0.9, 0.5], vec![0.6, 0.85, 0.01]).unwrap();
        let nat = p.to_natural();
        for &a in &[0.1, 0.5, 0.77] {
            let e = expfam_alpha_divergence(bernoulli_log_partition, &nat.theta0, &nat.theta1, a).unwrap();
            assert!((e - alpha_divergence(&p, a).unwrap()).abs() < 1e-12);
        }
        assert_eq!(expfam_alpha_divergence(bernoulli_log_partition, &[0.3], &[0.3], 0.4).unwrap(), 0.0);
        let bad = expfam_alpha_divergence(|t| if t > 1.0 { f64::NAN } else { t * t }, &[0.0, 2.0], &[0.5, 0.5], 0.5);
        assert_eq!(bad, Err(Error::EvaluationFailure { index: 1 }));
    }

    #[test]
    fn gaussian_g_limits() {
        assert!((gaussian_g_expectation(1e-12, 0.3).unwrap() - 1.0).abs() < 1e-11);
        assert_eq!(gaussian_g_expectation(0.0, 0.3).unwrap(), 1.0);
        let big = gaussian_g_expectation(1e8, 0.5).unwrap();
        assert!((big * 1e8 * 0.25 * SQRT_2PI - 1.0).abs() < 1e-9);
        assert!(gaussian_g_expectation(-1.0, 0.5).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let p = HypothesisPair::new(vec![0.2, 0.7, 0.4], vec![0.5, 0.3, 0.45]).unwrap().group();
        let a = tilted_mc_affinity(&p, 20_000, 7).unwrap();
        let b = tilted_mc_affinity(&p, 20_000, 7).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert!(a.std_error > 0.0);
        assert_eq!(a.samples, 20_000);
    }
}
