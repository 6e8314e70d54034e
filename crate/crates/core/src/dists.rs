//! Product-Bernoulli hypothesis pairs.
//!
//! A [`HypothesisPair`] holds two success-probability vectors `p0`, `p1`;
//! hypothesis `z` says coordinate `j` is `Bern(p_z[j])`, independently.
//! [`GroupedPair`] is the run-length form used by the exact affinity code and
//! by the SBM analysis, where rows are piecewise constant over communities.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use libm::exp;

use crate::error::{Error, Result};
use crate::math::logit;

/// One coordinate class: `count` coordinates sharing `(p0, p1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Group {
    pub p0: f64,
    pub p1: f64,
    pub count: u64,
}

/// Anything that describes a product of Bernoulli pairs.
///
/// Implementors yield weighted coordinates; every divergence in
/// [`crate::chernoff`] is additive over coordinates, so a group of `c`
/// identical coordinates costs the same as one.
pub trait BernoulliProduct {
    /// Number of coordinates `n`.
    fn dim(&self) -> u64;

    /// `(p0, p1, multiplicity)` triples covering all `n` coordinates.
    fn weighted(&self) -> impl Iterator<Item = Group> + '_;

    /// True when `p0 == p1` on every coordinate.
    fn is_degenerate(&self) -> bool {
        self.weighted().all(|g| g.p0 == g.p1)
    }
}

fn check_prob(index: usize, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::OutOfRange { index, value })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisPair {
    p0: Vec<f64>,
    p1: Vec<f64>,
}

impl HypothesisPair {
    /// Validate two probability vectors. Entries equal to 0 or 1 are rejected,
    /// never clipped: both hypotheses must share their support.
    pub fn new(p0: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        if p0.is_empty() || p1.is_empty() {
            return Err(Error::Empty);
        }
        if p0.len() != p1.len() {
            return Err(Error::LengthMismatch { left: p0.len(), right: p1.len() });
        }
        for (i, (&a, &b)) in p0.iter().zip(&p1).enumerate() {
            check_prob(i, a)?;
            check_prob(i, b)?;
        }
        Ok(Self { p0, p1 })
    }

    /// `n` copies of the coordinate `(p0, p1)`.
    pub fn iid(p0: f64, p1: f64, n: usize) -> Result<Self> {
        Self::new(alloc::vec![p0; n], alloc::vec![p1; n])
    }

    pub fn len(&self) -> usize {
        self.p0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p0.is_empty()
    }

    pub fn p0(&self) -> &[f64] {
        &self.p0
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    /// Swap the roles of the two hypotheses.
    pub fn swapped(&self) -> Self {
        Self { p0: self.p1.clone(), p1: self.p0.clone() }
    }

    /// Group coordinates by exact bit equality of `(p0, p1)`, in order of
    /// first occurrence.
    pub fn group(&self) -> GroupedPair {
        let mut index: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let mut groups: Vec<Group> = Vec::new();
        for (&a, &b) in self.p0.iter().zip(&self.p1) {
            let key = (a.to_bits(), b.to_bits());
            match index.get(&key) {
                Some(&g) => groups[g].count += 1,
                None => {
                    index.insert(key, groups.len());
                    groups.push(Group { p0: a, p1: b, count: 1 });
                }
            }
        }
        GroupedPair { groups }
    }

    /// Log-odds parameterization `theta = log(p / (1 - p))`.
    pub fn to_natural(&self) -> NaturalParams {
        NaturalParams {
            theta0: self.p0.iter().map(|&p| logit(p)).collect(),
            theta1: self.p1.iter().map(|&p| logit(p)).collect(),
        }
    }
}

impl BernoulliProduct for HypothesisPair {
    fn dim(&self) -> u64 {
        self.p0.len() as u64
    }

    fn weighted(&self) -> impl Iterator<Item = Group> + '_ {
        self.p0.iter().zip(&self.p1).map(|(&p0, &p1)| Group { p0, p1, count: 1 })
    }
}

/// Run-length form of a [`HypothesisPair`].
#[derive(Clone, Debug, PartialEq)]
pub struct GroupedPair {
    groups: Vec<Group>,
}

impl GroupedPair {
    /// Build from explicit groups. Groups with equal `(p0, p1)` bits are
    /// merged into the first occurrence; zero-count groups are dropped.
    pub fn from_groups(groups: impl IntoIterator<Item = Group>) -> Result<Self> {
        let mut index: BTreeMap<(u64, u64), usize> = BTreeMap::new();
        let mut out: Vec<Group> = Vec::new();
        for (i, g) in groups.into_iter().enumerate() {
            check_prob(i, g.p0)?;
            check_prob(i, g.p1)?;
            if g.count == 0 {
                continue;
            }
            let key = (g.p0.to_bits(), g.p1.to_bits());
            match index.get(&key) {
                Some(&at) => out[at].count += g.count,
                None => {
                    index.insert(key, out.len());
                    out.push(g);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self { groups: out })
    }

    /// Single group of `n` iid coordinates.
    pub fn iid(p0: f64, p1: f64, n: u64) -> Result<Self> {
        Self::from_groups([Group { p0, p1, count: n }])
    }

    pub fn groups(&self) -> &[Group] {
        &self.groups
    }

    /// Total number of coordinates.
    pub fn len(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn swapped(&self) -> Self {
        Self {
            groups: self.groups.iter().map(|g| Group { p0: g.p1, p1: g.p0, count: g.count }).collect(),
        }
    }

    /// Repeat each group `count` times, in group order.
    pub fn expand(&self) -> HypothesisPair {
        let n = self.len() as usize;
        let mut p0 = Vec::with_capacity(n);
        let mut p1 = Vec::with_capacity(n);
        for g in &self.groups {
            for _ in 0..g.count {
                p0.push(g.p0);
                p1.push(g.p1);
            }
        }
        HypothesisPair { p0, p1 }
    }
}

impl BernoulliProduct for GroupedPair {
    fn dim(&self) -> u64 {
        self.len()
    }

    fn weighted(&self) -> impl Iterator<Item = Group> + '_ {
        self.groups.iter().copied()
    }
}

/// Natural (log-odds) parameters of a Bernoulli pair.
#[derive(Clone, Debug, PartialEq)]
pub struct NaturalParams {
    pub theta0: Vec<f64>,
    pub theta1: Vec<f64>,
}

impl NaturalParams {
    /// Inverse of [`HypothesisPair::to_natural`]; fails if a parameter is so
    /// large that its probability rounds to 0 or 1.
    pub fn to_pair(&self) -> Result<HypothesisPair> {
        let back = |t: &f64| 1.0 / (1.0 + exp(-*t));
        HypothesisPair::new(self.theta0.iter().map(back).collect(), self.theta1.iter().map(back).collect())
    }
}
