//! Total-variation affinity `η = Σₓ min(φ0(x), φ1(x))` for product-Bernoulli
//! pairs. `η = 1 − TV` and the Bayes error under equal priors is `η / 2`.
//!
//! Within a group of identical coordinates the success count is sufficient,
//! so the sum runs over count vectors with product-binomial masses. Groups
//! with `p0 == p1` factor out (they contribute a factor of one). Of the
//! remaining groups the largest is summed in closed form per cell of the
//! others: its log-likelihood ratio is affine in its count, so the `min`
//! switches sides at a single threshold and each side is a prefix or suffix
//! of a precomputed log-sum table.

use alloc::vec::Vec;

use libm::{exp, log, log1p};

use crate::dists::{BernoulliProduct, Group, GroupedPair, HypothesisPair};
use crate::error::{Error, Result};
use crate::math::{log_add_exp, log_binomial_pmf_table, CompensatedSum, LogSumExp};

/// Largest dimension accepted by [`affinity_bruteforce`].
pub const BRUTE_FORCE_MAX: usize = 20;
/// Largest number of outer grid cells accepted by [`affinity_grouped`].
pub const GRID_MAX: f64 = 1e7;

/// An affinity value with its logarithm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affinity {
    pub eta: f64,
    pub log_eta: f64,
}

impl Affinity {
    fn from_log(log_eta: f64) -> Self {
        // rounding can push a near-one sum a hair above 0
        let log_eta = log_eta.min(0.0);
        Self { eta: exp(log_eta), log_eta }
    }

    /// Bayes error under equal priors, `η / 2`.
    pub fn bayes_error(&self) -> f64 {
        0.5 * self.eta
    }

    pub fn log_bayes_error(&self) -> f64 {
        self.log_eta - core::f64::consts::LN_2
    }

    /// `1 − η`.
    pub fn tv_distance(&self) -> f64 {
        1.0 - self.eta
    }
}

/// Enumerate all `2ⁿ` outcomes. Reference implementation for small `n`.
pub fn affinity_bruteforce(pair: &HypothesisPair) -> Result<f64> {
    let n = pair.len();
    if n > BRUTE_FORCE_MAX {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX });
    }
    let coords: Vec<[f64; 4]> = pair
        .p0()
        .iter()
        .zip(pair.p1())
        .map(|(&a, &b)| [log1p(-a), log(a), log1p(-b), log(b)])
        .collect();
    let mut acc = CompensatedSum::new();
    for x in 0u32..(1u32 << n) {
        let (mut l0, mut l1) = (0.0, 0.0);
        for (j, c) in coords.iter().enumerate() {
            let bit = ((x >> j) & 1) as usize;
            l0 += c[bit];
            l1 += c[2 + bit];
        }
        acc.add(exp(l0.min(l1)));
    }
    Ok(acc.value())
}

/// Per-group log-mass tables under both hypotheses.
struct Tables {
    l0: Vec<f64>,
    l1: Vec<f64>,
}

impl Tables {
    fn of(g: &Group) -> Self {
        Self { l0: log_binomial_pmf_table(g.count, g.p0), l1: log_binomial_pmf_table(g.count, g.p1) }
    }
}

/// The summed-out group: prefix/suffix log-sums plus its affine log-ratio.
struct Inner {
    count: u64,
    /// `log Σ_{x<k} Binom(m, p0)(x)` for `k = 0..=m+1`.
    prefix0: Vec<f64>,
    /// `log Σ_{x≥k} Binom(m, p1)(x)` for `k = 0..=m+1`.
    suffix1: Vec<f64>,
    /// `log[φ0/φ1](x) = x · slope + offset`, with `slope > 0`.
    slope: f64,
    offset: f64,
}

impl Inner {
    fn new(g: &Group) -> Self {
        // orient so the log-ratio increases with the count
        let g = if g.p0 > g.p1 { *g } else { Group { p0: 1.0 - g.p0, p1: 1.0 - g.p1, count: g.count } };
        let t = Tables::of(&g);
        let m = g.count as usize;

        let mut prefix0 = Vec::with_capacity(m + 2);
        let mut acc = LogSumExp::new();
        prefix0.push(f64::NEG_INFINITY);
        for &v in &t.l0 {
            acc.push(v);
            prefix0.push(acc.value());
        }
        let mut suffix1 = alloc::vec![f64::NEG_INFINITY; m + 2];
        let mut acc = LogSumExp::new();
        for k in (0..=m).rev() {
            acc.push(t.l1[k]);
            suffix1[k] = acc.value();
        }

        let (lp0, lq0, lp1, lq1) = (log(g.p0), log1p(-g.p0), log(g.p1), log1p(-g.p1));
        let slope = (lp0 - lp1) - (lq0 - lq1);
        let offset = g.count as f64 * (lq0 - lq1);
        Self { count: g.count, prefix0, suffix1, slope, offset }
    }

    /// `log Σₓ min(e^{s0} Binom(m,p0)(x), e^{s1} Binom(m,p1)(x))`.
    fn cell(&self, s0: f64, s1: f64) -> f64 {
        // φ0 side is the min exactly when x·slope + offset ≤ s1 − s0
        let t = s1 - s0;
        let (mut lo, mut hi) = (0u64, self.count + 1);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if mid as f64 * self.slope + self.offset <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        let k = lo as usize;
        log_add_exp(s0 + self.prefix0[k], s1 + self.suffix1[k])
    }
}

/// Non-degenerate groups in a fixed order that depends only on the multiset
/// of groups, up to swapping the hypotheses. Makes the result bit-identical
/// under coordinate permutations and under `swapped()`.
fn canonical(grouped: &GroupedPair) -> Vec<Group> {
    let key = |g: &Group| (g.p0.to_bits(), g.p1.to_bits(), g.count);
    let mut a: Vec<Group> = grouped.groups().iter().filter(|g| g.p0 != g.p1).copied().collect();
    a.sort_by_key(key);
    let mut b: Vec<Group> = a.iter().map(|g| Group { p0: g.p1, p1: g.p0, count: g.count }).collect();
    b.sort_by_key(key);
    if b.iter().map(key).lt(a.iter().map(key)) {
        b
    } else {
        a
    }
}

/// Exact affinity over count vectors of a grouped pair.
///
/// Cost is `O(cells · log m)` where `m` is the largest group count and
/// `cells` is the product of `count + 1` over the other non-degenerate
/// groups; fails with [`Error::GridTooLarge`] when `cells > GRID_MAX`.
pub fn affinity_grouped(grouped: &GroupedPair) -> Result<Affinity> {
    let mut live = canonical(grouped);
    if live.is_empty() {
        return Ok(Affinity { eta: 1.0, log_eta: 0.0 });
    }
    // largest group first, ties by position
    let at = live.iter().enumerate().max_by(|a, b| a.1.count.cmp(&b.1.count).then(b.0.cmp(&a.0))).unwrap().0;
    let inner = Inner::new(&live.remove(at));

    let cells: f64 = live.iter().map(|g| g.count as f64 + 1.0).product();
    if cells > GRID_MAX {
        return Err(Error::GridTooLarge { cells, max: GRID_MAX });
    }
    let outer: Vec<Tables> = live.iter().map(Tables::of).collect();

    let mut total = LogSumExp::new();
    if outer.is_empty() {
        total.push(inner.cell(0.0, 0.0));
        return Ok(Affinity::from_log(total.value()));
    }

    // odometer over outer counts; partial[g] holds sums over groups 0..=g
    let depth = outer.len();
    let mut digit = alloc::vec![0usize; depth];
    let mut partial0 = alloc::vec![0.0; depth];
    let mut partial1 = alloc::vec![0.0; depth];
    let refresh = |from: usize, digit: &[usize], p0: &mut [f64], p1: &mut [f64]| {
        for g in from..depth {
            let (b0, b1) = if g == 0 { (0.0, 0.0) } else { (p0[g - 1], p1[g - 1]) };
            p0[g] = b0 + outer[g].l0[digit[g]];
            p1[g] = b1 + outer[g].l1[digit[g]];
        }
    };
    refresh(0, &digit, &mut partial0, &mut partial1);
    loop {
        total.push(inner.cell(partial0[depth - 1], partial1[depth - 1]));
        let mut g = depth;
        loop {
            if g == 0 {
                return Ok(Affinity::from_log(total.value()));
            }
            g -= 1;
            if digit[g] + 1 < outer[g].l0.len() {
                digit[g] += 1;
                break;
            }
            digit[g] = 0;
        }
        refresh(g, &digit, &mut partial0, &mut partial1);
    }
}

/// Exact affinity of any product-Bernoulli pair, via its grouped form.
pub fn affinity<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<Affinity> {
    affinity_grouped(&GroupedPair::from_groups(pair.weighted())?)
}

/// Bayes error `η / 2` under equal priors.
pub fn bayes_error<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<f64> {
    affinity(pair).map(|a| a.bayes_error())
}

/// Total-variation distance `1 − η`.
pub fn tv_distance<P: BernoulliProduct + ?Sized>(pair: &P) -> Result<f64> {
    affinity(pair).map(|a| a.tv_distance())
}
