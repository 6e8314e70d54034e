//! Stochastic block models: representation, sampling and the per-node
//! testing quantities.
//!
//! Node `j`'s connection probability to a node of community `k` is
//! `P[k][z_j]`, so the row of community `k` is piecewise constant over
//! communities. Comparing communities `k` and `l` is a product-Bernoulli
//! test with one group per community `r`: `(P[k][r], P[l][r], n_r)`. All `n`
//! coordinates are used (the excluded self-coordinate only changes constants).

use alloc::vec::Vec;

use libm::{exp, log};
use rand::Rng;

use crate::affinity::affinity_grouped;
use crate::chernoff::{chernoff_information, tilted_mc_affinity, ChernoffInfo};
use crate::dists::{Group, GroupedPair};
use crate::error::{Error, Result};
use crate::graph::Adjacency;

#[derive(Clone, Debug, PartialEq)]
pub struct SbmModel {
    z: Vec<usize>,
    p: Vec<f64>,
    k: usize,
}

impl SbmModel {
    /// `z` holds 0-based labels; `p` is row-major `k × k`, exactly symmetric
    /// with entries in (0, 1). Every community must be nonempty.
    pub fn new(z: Vec<usize>, p: Vec<f64>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidModel("need at least one community"));
        }
        if p.len() != k * k {
            return Err(Error::InvalidModel("P must be K x K"));
        }
        for a in 0..k {
            for b in 0..k {
                let v = p[a * k + b];
                if !(v > 0.0 && v < 1.0) {
                    return Err(Error::OutOfRange { index: a * k + b, value: v });
                }
                if v != p[b * k + a] {
                    return Err(Error::InvalidModel("P must be symmetric"));
                }
            }
        }
        let mut sizes = alloc::vec![0usize; k];
        for (i, &l) in z.iter().enumerate() {
            if l >= k {
                return Err(Error::LabelOutOfRange { index: i, label: l, k });
            }
            sizes[l] += 1;
        }
        if sizes.contains(&0) {
            return Err(Error::InvalidModel("every community must be nonempty"));
        }
        Ok(Self { z, p, k })
    }

    /// Contiguous balanced communities, `z_i = ⌊iK/n⌋`.
    pub fn balanced(n: usize, p: Vec<f64>, k: usize) -> Result<Self> {
        Self::new((0..n).map(|i| i * k / n.max(1)).collect(), p, k)
    }

    /// `P = a` on the diagonal and `b` elsewhere.
    pub fn planted(n: usize, k: usize, a: f64, b: f64) -> Result<Self> {
        let p = (0..k * k).map(|i| if i / k == i % k { a } else { b }).collect();
        Self::balanced(n, p, k)
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.z
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn prob(&self, a: usize, b: usize) -> f64 {
        self.p[a * self.k + b]
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = alloc::vec![0usize; self.k];
        self.z.iter().for_each(|&l| s[l] += 1);
        s
    }

    /// Largest entry of `P`.
    pub fn p_star(&self) -> f64 {
        self.p.iter().copied().fold(0.0, f64::max)
    }

    /// `A_ij = A_ji ~ Bern(P[z_i][z_j])` for `i > j`, zero diagonal.
    ///
    /// Row `i` draws its `j < i` entries from ChaCha8 stream `i` of `seed`,
    /// so the result depends only on `(model, seed)`.
    pub fn sample_adjacency(&self, seed: u64) -> Adjacency {
        use rand::SeedableRng;
        let n = self.n();
        let mut edges = Vec::new();
        for i in 0..n {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let row = &self.p[self.z[i] * self.k..(self.z[i] + 1) * self.k];
            for j in 0..i {
                if rng.random::<f64>() < row[self.z[j]] {
                    edges.push((i, j));
                }
            }
        }
        Adjacency::from_edges(n, edges).expect("sampled edges are simple")
    }

    /// `p_{kj} = P[k][z_j]` for every node `j`.
    pub fn row_parameters(&self, k: usize) -> Vec<f64> {
        self.z.iter().map(|&r| self.prob(k, r)).collect()
    }

    /// Grouped form of the test between rows `k` and `l`.
    pub fn row_pair(&self, k: usize, l: usize) -> Result<GroupedPair> {
        let sizes = self.sizes();
        GroupedPair::from_groups((0..self.k).map(|r| Group { p0: self.prob(k, r), p1: self.prob(l, r), count: sizes[r] as u64 }))
    }

    fn distinguishable(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::InvalidModel("need at least two communities"));
        }
        for a in 0..self.k {
            for b in a + 1..self.k {
                if (0..self.k).all(|r| self.prob(a, r) == self.prob(b, r)) {
                    return Err(Error::IndistinguishableCommunities { k: a, l: b });
                }
            }
        }
        Ok(())
    }

    /// Chernoff information between every pair of community rows.
    pub fn pairwise_chernoff(&self) -> Result<PairwiseChernoff> {
        self.distinguishable()?;
        let k = self.k;
        let mut d = alloc::vec![f64::NAN; k * k];
        let mut alpha = alloc::vec![f64::NAN; k * k];
        for a in 0..k {
            for b in a + 1..k {
                let info = chernoff_information(&self.row_pair(a, b)?)?;
                d[a * k + b] = info.d_star;
                d[b * k + a] = info.d_star;
                alpha[a * k + b] = info.alpha_star;
                alpha[b * k + a] = 1.0 - info.alpha_star;
            }
        }
        Ok(PairwiseChernoff { k, d, alpha })
    }

    /// Worst-case pairwise affinity `η* = max_{k≠l} η(p_k, p_l)`.
    ///
    /// Exact when every pair's grid fits; otherwise the offending pairs are
    /// estimated by Monte Carlo with `mc_samples` draws and flagged.
    pub fn eta_star_with(&self, mc_samples: u64, seed: u64) -> Result<EtaStar> {
        self.distinguishable()?;
        let mut best: Option<EtaStar> = None;
        for a in 0..self.k {
            for b in a + 1..self.k {
                let pair = self.row_pair(a, b)?;
                let cand = match affinity_grouped(&pair) {
                    Ok(v) => EtaStar { eta: v.eta, log_eta: v.log_eta, pair: (a, b), mc_std_error: None },
                    Err(Error::GridTooLarge { .. }) => {
                        let mc = tilted_mc_affinity(&pair, mc_samples, seed)?;
                        EtaStar {
                            eta: mc.estimate,
                            log_eta: mc.log_estimate,
                            pair: (a, b),
                            mc_std_error: Some(mc.std_error),
                        }
                    }
                    Err(e) => return Err(e),
                };
                if best.as_ref().map_or(true, |b| cand.log_eta > b.log_eta) {
                    best = Some(cand);
                }
            }
        }
        Ok(best.unwrap())
    }

    pub fn eta_star(&self) -> Result<EtaStar> {
        self.eta_star_with(1_000_000, 0)
    }

    /// Rate `e^{−D*} / √(n p*)` with `D* = min_{k≠l} D*(p_k ‖ p_l)`. The
    /// lower bound holds up to an unspecified constant, reported as 1.
    pub fn minimax_rate(&self) -> Result<MinimaxRate> {
        let pc = self.pairwise_chernoff()?;
        let d_star = pc.min().0;
        let p_star = self.p_star();
        let log_rate = -d_star - 0.5 * log(self.n() as f64 * p_star);
        Ok(MinimaxRate { rate: exp(log_rate), log_rate, d_star, p_star, lower_bound_established: self.k >= 3 })
    }

    /// Measure the model against a parameter class.
    pub fn validate_space(&self, beta: f64, epsilon: f64, omega: f64, omega_prime: f64) -> Result<SpaceReport> {
        let n = self.n() as f64;
        let kf = self.k as f64;
        let sizes = self.sizes();
        let beta_ok = sizes.iter().all(|&s| {
            let s = s as f64;
            s >= n / (beta * kf) && s <= beta * n / kf
        });
        let measured_beta = sizes
            .iter()
            .map(|&s| {
                let r = s as f64 * kf / n;
                r.max(1.0 / r)
            })
            .fold(1.0, f64::max);
        let p_star = self.p_star();
        let p_min = self.p.iter().copied().fold(1.0, f64::min);
        let ratio = p_star / p_min;
        let mut separation = f64::INFINITY;
        for a in 0..self.k {
            for b in a + 1..self.k {
                let s = (0..self.k)
                    .map(|r| {
                        let q = self.prob(a, r) / self.prob(b, r);
                        q.max(1.0 / q)
                    })
                    .fold(1.0, f64::max);
                separation = separation.min(s);
            }
        }
        let d_star = self.pairwise_chernoff()?.min().0;
        Ok(SpaceReport {
            beta_ok,
            sparsity_ok: p_star <= 1.0 - epsilon,
            ratio_ok: ratio <= omega,
            separation_ok: separation >= omega_prime,
            beta: measured_beta,
            p_star,
            omega: ratio,
            omega_prime: separation,
            d_star,
        })
    }
}

/// Chernoff information of `Binom(m, p)` against `Binom(m, q)`, i.e. `m`
/// iid coordinates. Useful for checking separation conditions by hand.
pub fn binomial_chernoff(m: u64, p: f64, q: f64) -> Result<ChernoffInfo> {
    chernoff_information(&GroupedPair::iid(p, q, m)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairwiseChernoff {
    pub k: usize,
    /// `K × K`, NaN on the diagonal.
    pub d: Vec<f64>,
    /// Optimal α for testing row `a` (null) against row `b`.
    pub alpha: Vec<f64>,
}

impl PairwiseChernoff {
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.d[a * self.k + b]
    }

    /// Smallest off-diagonal value and its pair.
    pub fn min(&self) -> (f64, (usize, usize)) {
        let mut best = (f64::INFINITY, (0, 0));
        for a in 0..self.k {
            for b in a + 1..self.k {
                if self.get(a, b) < best.0 {
                    best = (self.get(a, b), (a, b));
                }
            }
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EtaStar {
    pub eta: f64,
    pub log_eta: f64,
    pub pair: (usize, usize),
    /// Set when the value is a Monte-Carlo estimate.
    pub mc_std_error: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinimaxRate {
    pub rate: f64,
    pub log_rate: f64,
    pub d_star: f64,
    pub p_star: f64,
    /// The lower bound is only established for three or more communities.
    pub lower_bound_established: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpaceReport {
    pub beta_ok: bool,
    pub sparsity_ok: bool,
    pub ratio_ok: bool,
    pub separation_ok: bool,
    /// Smallest β for which the size condition holds.
    pub beta: f64,
    pub p_star: f64,
    /// Measured max/min entry ratio.
    pub omega: f64,
    /// Measured `min_{k≠l} max_r` entry ratio between rows.
    pub omega_prime: f64,
    pub d_star: f64,
}

impl SpaceReport {
    pub fn all_ok(&self) -> bool {
        self.beta_ok && self.sparsity_ok && self.ratio_ok && self.separation_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affinity::affinity_bruteforce;
    use crate::dists::HypothesisPair;
    use alloc::vec;

    fn sym() -> Vec<f64> {
        vec![0.55, 0.45, 0.45, 0.55]
    }

    #[test]
    fn model_validation() {
        assert!(SbmModel::new(vec![0, 1], vec![0.5, 0.4, 0.3, 0.5], 2).is_err());
        assert!(SbmModel::new(vec![0, 0], sym(), 2).is_err());
        assert!(matches!(SbmModel::new(vec![0, 2], sym(), 2), Err(Error::LabelOutOfRange { index: 1, .. })));
        assert!(SbmModel::new(vec![0, 1], vec![1.0, 0.4, 0.4, 0.5], 2).is_err());
        let m = SbmModel::balanced(10, sym(), 2).unwrap();
        assert_eq!(m.sizes(), vec![5, 5]);
    }

    #[test]
    fn sample_is_deterministic_and_dense_enough() {
        let m = SbmModel::planted(500, 2, 0.3, 0.3).unwrap();
        let a = m.sample_adjacency(11);
        assert_eq!(a, m.sample_adjacency(11));
        assert_ne!(a, m.sample_adjacency(12));
        let pairs = 500.0 * 499.0 / 2.0;
        assert!((a.density() - 0.3).abs() <= 4.0 * (0.21f64 / pairs).sqrt());
    }

    #[test]
    fn row_parameter_examples() {
        let m = SbmModel::new(vec![0, 0, 1], vec![0.7, 0.2, 0.2, 0.7], 2).unwrap();
        assert_eq!(m.row_parameters(0), vec![0.7, 0.7, 0.2]);
        let one = SbmModel::new(vec![0, 0, 0], vec![0.4], 1).unwrap();
        assert_eq!(one.row_parameters(0), vec![0.4; 3]);
    }

    #[test]
    fn pairwise_chernoff_symmetric_model() {
        let m = SbmModel::balanced(600, sym(), 2).unwrap();
        let pc = m.pairwise_chernoff().unwrap();
        let want = 600.0 * -(2.0 * (0.2475f64).sqrt()).ln();
        assert!((pc.get(0, 1) - want).abs() < 1e-12);
        assert_eq!(pc.get(0, 1), pc.get(1, 0));
        let same = SbmModel::new(vec![0, 1], vec![0.3, 0.3, 0.3, 0.3], 2).unwrap();
        assert_eq!(same.pairwise_chernoff(), Err(Error::IndistinguishableCommunities { k: 0, l: 1 }));
    }

    #[test]
    fn eta_star_matches_bruteforce() {
        let m = SbmModel::new(
            vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2],
            vec![0.6, 0.2, 0.3, 0.2, 0.5, 0.1, 0.3, 0.1, 0.7],
            3,
        )
        .unwrap();
        let mut want: f64 = 0.0;
        for a in 0..3 {
            for b in a + 1..3 {
                let p = HypothesisPair::new(m.row_parameters(a), m.row_parameters(b)).unwrap();
                want = want.max(affinity_bruteforce(&p).unwrap());
            }
        }
        let got = m.eta_star().unwrap();
        assert!((got.eta - want).abs() < 1e-12);
        assert!(got.mc_std_error.is_none());
        let d = m.pairwise_chernoff().unwrap().min().0;
        assert!(got.eta <= (-d).exp() + 1e-12);
    }

    #[test]
    fn minimax_rate_scope() {
        let m = SbmModel::balanced(600, sym(), 2).unwrap();
        let r = m.minimax_rate().unwrap();
        assert!(!r.lower_bound_established);
        let want = (-r.d_star).exp() / (600.0 * 0.55f64).sqrt();
        assert!((r.rate / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn space_checks() {
        let m = SbmModel::balanced(100, sym(), 2).unwrap();
        let r = m.validate_space(2.0, 0.1, 2.0, 1.2).unwrap();
        assert!(r.all_ok());
        assert!((r.omega_prime - 11.0 / 9.0).abs() < 1e-15);
        let mut z = vec![0usize; 100];
        for l in z.iter_mut().take(5) {
            *l = 1;
        }
        let small = SbmModel::new(z, sym(), 2).unwrap();
        assert!(!small.validate_space(2.0, 0.1, 2.0, 1.2).unwrap().beta_ok);
    }

    #[test]
    fn binomial_chernoff_is_single_group() {
        let c = binomial_chernoff(10, 0.3, 0.7).unwrap();
        assert!((c.alpha_star - 0.5).abs() < 1e-10);
        assert!((c.d_star - 10.0 * -(2.0 * (0.21f64).sqrt()).ln()).abs() < 1e-13);
    }
}
