//! Community detection: spectral initialization, block-probability
//! estimation, likelihood-ratio refinement and the leave-one-out pipeline.
//!
//! Labels are 0-based throughout. The pipeline:
//!
//! 1. `z̃` = spectral clustering of the whole graph; `P̃` = block estimate.
//! 2. Split the nodes at random into halves `I` (`⌊n/2⌋` nodes) and `J`.
//! 3. Cluster each half on its own subgraph and align it to `z̃`.
//! 4. Relabel each half by likelihood ratio against the other half's labels
//!    under `P̃` (both halves read the labels from step 3).
//! 5. For each node `j`, with `j` left out of steps 3 and 4, assemble
//!    `z̃′` (node `j` keeps `z̃_j`), estimate `P̂` from `z̃′` and classify `j`
//!    by likelihood ratio on its full row.

use alloc::vec::Vec;

use libm::{log, log1p};

use crate::assignment::{for_each_permutation, min_cost_assignment};
use crate::error::{Error, Result};
use crate::graph::Adjacency;
use crate::kmeans::{kmeans, KMeansOptions};
use crate::linalg::{subspace_eigen, SubspaceOptions};
use crate::rng::{derive_seed, stream};

const TAG_GLOBAL: u64 = 0x676c_6f62;
const TAG_SPLIT: u64 = 0x7370_6c74;
const TAG_HALF: u64 = 0x6861_6c66;
const TAG_LOO: u64 = 0x6c6f_6f00;
const TAG_EIGEN: u64 = 1;
const TAG_KMEANS: u64 = 2;
const NONE: usize = usize::MAX;

/// A labeling of `n` nodes into `k` communities, labels in `0..k`.
/// Communities may be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
    k: usize,
}

impl Labeling {
    pub fn new(labels: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("need at least one community"));
        }
        if let Some((index, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
            return Err(Error::LabelOutOfRange { index, label, k });
        }
        Ok(Self { labels, k })
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn into_labels(self) -> Vec<usize> {
        self.labels
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = alloc::vec![0usize; self.k];
        self.labels.iter().for_each(|&l| s[l] += 1);
        s
    }

    /// Apply `perm` to every label.
    pub fn permuted(&self, perm: &[usize]) -> Labeling {
        Labeling { labels: self.labels.iter().map(|&l| perm[l]).collect(), k: self.k }
    }
}

/// `confusion[a * k + b]` counts nodes with `a` in `x` and `b` in `y`.
fn confusion(x: &[usize], y: &[usize], k: usize) -> Vec<usize> {
    let mut c = alloc::vec![0usize; k * k];
    for (&a, &b) in x.iter().zip(y) {
        c[a * k + b] += 1;
    }
    c
}

/// Permutation `π` maximizing `Σ_a confusion[a][π(a)]`.
fn best_permutation(c: &[usize], k: usize) -> Vec<usize> {
    let cost: Vec<f64> = c.iter().map(|&v| -(v as f64)).collect();
    min_cost_assignment(&cost, k)
}

/// Misclassification rate minimized over relabelings of `z_hat`.
///
/// Enumerates all `k!` permutations for `k ≤ 8`, otherwise solves the
/// equivalent assignment problem.
pub fn mis(z_hat: &Labeling, z: &Labeling) -> Result<f64> {
    if z_hat.len() != z.len() {
        return Err(Error::LengthMismatch { left: z_hat.len(), right: z.len() });
    }
    if z_hat.k != z.k {
        return Err(Error::InvalidArgument("labelings have different community counts"));
    }
    if z.is_empty() {
        return Err(Error::Empty);
    }
    let k = z.k;
    let c = confusion(&z_hat.labels, &z.labels, k);
    let agree = if k <= 8 {
        let mut best = 0;
        for_each_permutation(k, |p| {
            best = best.max(p.iter().enumerate().map(|(a, &b)| c[a * k + b]).sum());
        });
        best
    } else {
        best_permutation(&c, k).iter().enumerate().map(|(a, &b)| c[a * k + b]).sum()
    };
    Ok((z.len() - agree) as f64 / z.len() as f64)
}

/// Relabel `candidate` by the permutation that best agrees with
/// `reference`.
pub fn match_labels(reference: &Labeling, candidate: &Labeling) -> Result<Labeling> {
    if reference.len() != candidate.len() {
        return Err(Error::LengthMismatch { left: reference.len(), right: candidate.len() });
    }
    if reference.k != candidate.k {
        return Err(Error::InvalidArgument("labelings have different community counts"));
    }
    let perm = best_permutation(&confusion(&candidate.labels, &reference.labels, candidate.k), candidate.k);
    Ok(candidate.permuted(&perm))
}

/// Block edge-probability estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockEstimate {
    pub k: usize,
    /// Edge frequencies; empty cells hold the global density.
    pub raw: Vec<f64>,
    /// `raw` clipped to `[1/n², 1 − 1/n²]`.
    pub clipped: Vec<f64>,
    /// Cells with no node pairs.
    pub empty: Vec<bool>,
}

/// Ordered-pair edge counts `M[a][b]` between labels and label sizes;
/// updated in place as nodes move between communities.
#[derive(Clone, Debug)]
struct BlockCounts {
    k: usize,
    m: Vec<u64>,
    sizes: Vec<u64>,
}

impl BlockCounts {
    fn new(a: &Adjacency, labels: &[usize], k: usize) -> Self {
        let mut m = alloc::vec![0u64; k * k];
        let mut sizes = alloc::vec![0u64; k];
        for (i, &l) in labels.iter().enumerate() {
            sizes[l] += 1;
            for &j in a.neighbors(i) {
                m[l * k + labels[j as usize]] += 1;
            }
        }
        Self { k, m, sizes }
    }

    /// Move node `v` from `from` to `to`; `labels` still holds the old
    /// label of `v` and is updated here.
    fn relabel(&mut self, a: &Adjacency, labels: &mut [usize], v: usize, to: usize) {
        let from = labels[v];
        if from == to {
            return;
        }
        let k = self.k;
        for &u in a.neighbors(v) {
            let c = labels[u as usize];
            self.m[from * k + c] -= 1;
            self.m[c * k + from] -= 1;
            self.m[to * k + c] += 1;
            self.m[c * k + to] += 1;
        }
        self.sizes[from] -= 1;
        self.sizes[to] += 1;
        labels[v] = to;
    }

    fn estimate(&self, n: usize, edges: usize) -> BlockEstimate {
        let k = self.k;
        let nf = n as f64;
        let density = if n < 2 { 0.0 } else { edges as f64 / (nf * (nf - 1.0) / 2.0) };
        let mut raw = alloc::vec![0.0; k * k];
        let mut empty = alloc::vec![false; k * k];
        for a in 0..k {
            for b in 0..k {
                let (na, nb) = (self.sizes[a] as f64, self.sizes[b] as f64);
                let (count, pairs) = if a == b {
                    (self.m[a * k + a] as f64 / 2.0, na * (na - 1.0) / 2.0)
                } else {
                    (self.m[a * k + b] as f64, na * nb)
                };
                if pairs > 0.0 {
                    raw[a * k + b] = count / pairs;
                } else {
                    raw[a * k + b] = density;
                    empty[a * k + b] = true;
                }
            }
        }
        let lo = 1.0 / (nf * nf);
        let clipped = raw.iter().map(|&p| p.clamp(lo, 1.0 - lo)).collect();
        BlockEstimate { k, raw, clipped, empty }
    }
}

/// Block estimate `P̂[a][b]` = edges between labels `a` and `b` over node
/// pairs between them, counted over unordered pairs.
pub fn estimate_p(a: &Adjacency, z: &Labeling) -> Result<BlockEstimate> {
    if a.n() != z.len() {
        return Err(Error::LengthMismatch { left: a.n(), right: z.len() });
    }
    Ok(BlockCounts::new(a, &z.labels, z.k).estimate(a.n(), a.edge_count()))
}

/// `log P` and `log(1 − P)` of a clipped block matrix.
#[derive(Clone, Debug)]
struct LogBlocks {
    k: usize,
    lp: Vec<f64>,
    lq: Vec<f64>,
}

impl LogBlocks {
    fn new(p: &[f64], k: usize) -> Self {
        Self { k, lp: p.iter().map(|&v| log(v)).collect(), lq: p.iter().map(|&v| log1p(-v)).collect() }
    }

    /// Scores `Σ_r b_r log P[c][r] + (m_r − b_r) log(1 − P[c][r])` for every `c`.
    fn scores(&self, b: &[u64], m: &[u64], out: &mut [f64]) {
        let k = self.k;
        for (c, o) in out.iter_mut().enumerate() {
            *o = (0..k)
                .map(|r| b[r] as f64 * self.lp[c * k + r] + (m[r] - b[r]) as f64 * self.lq[c * k + r])
                .sum();
        }
    }
}

/// First index of the maximum.
fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (c, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = c;
        }
    }
    best
}

/// Column side of a likelihood-ratio step: labels of the column nodes
/// (`NONE` elsewhere) and their community sizes.
struct Columns {
    label: Vec<usize>,
    sizes: Vec<u64>,
}

impl Columns {
    fn new(n: usize, k: usize, cols: &[usize], labels: &[usize]) -> Self {
        let mut label = alloc::vec![NONE; n];
        let mut sizes = alloc::vec![0u64; k];
        for (&c, &l) in cols.iter().zip(labels) {
            label[c] = l;
            sizes[l] += 1;
        }
        Self { label, sizes }
    }

    /// Per-community neighbor counts of `i` and column sizes excluding `i`.
    fn stats(&self, a: &Adjacency, i: usize, b: &mut [u64], m: &mut [u64]) {
        b.iter_mut().for_each(|x| *x = 0);
        for &j in a.neighbors(i) {
            let l = self.label[j as usize];
            if l != NONE {
                b[l] += 1;
            }
        }
        m.copy_from_slice(&self.sizes);
        if self.label[i] != NONE {
            m[self.label[i]] -= 1;
        }
    }
}

/// Likelihood-ratio classification of `rows` against the columns `cols`
/// labeled `z_cols`, under block probabilities `p_hat` (entries in (0,1)).
///
/// Row `i` gets `argmax_c Σ_j A_ij log P̂[c][z_j] + (1 − A_ij) log(1 − P̂[c][z_j])`
/// over columns `j ≠ i`; ties go to the smallest `c`.
pub fn lr_classify(a: &Adjacency, rows: &[usize], cols: &[usize], z_cols: &Labeling, p_hat: &[f64]) -> Result<Vec<usize>> {
    let k = z_cols.k;
    if cols.len() != z_cols.len() {
        return Err(Error::LengthMismatch { left: cols.len(), right: z_cols.len() });
    }
    if p_hat.len() != k * k {
        return Err(Error::InvalidArgument("p_hat must be K x K"));
    }
    if let Some((index, &value)) = p_hat.iter().enumerate().find(|(_, &p)| !(p > 0.0 && p < 1.0)) {
        return Err(Error::OutOfRange { index, value });
    }
    if rows.iter().chain(cols).any(|&v| v >= a.n()) {
        return Err(Error::InvalidArgument("node index out of range"));
    }
    let logs = LogBlocks::new(p_hat, k);
    let columns = Columns::new(a.n(), k, cols, &z_cols.labels);
    let (mut b, mut m, mut s) = (alloc::vec![0; k], alloc::vec![0; k], alloc::vec![0.0; k]);
    Ok(rows
        .iter()
        .map(|&i| {
            columns.stats(a, i, &mut b, &mut m);
            logs.scores(&b, &m, &mut s);
            argmax(&s)
        })
        .collect())
}

#[derive(Clone, Copy, Debug)]
pub struct SpectralOptions {
    /// Nodes with degree above `truncation × average degree` are removed
    /// before the eigen-decomposition.
    pub truncation: f64,
    pub subspace: SubspaceOptions,
    pub kmeans: KMeansOptions,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { truncation: 10.0, subspace: SubspaceOptions::default(), kmeans: KMeansOptions::default() }
    }
}

/// Degree-truncated spectral clustering: top-`k` eigenpairs (by magnitude)
/// of the truncated adjacency, then k-means on the rows of `Û·|Λ̂|`.
pub fn spectral_cluster(a: &Adjacency, k: usize, seed: u64, opts: &SpectralOptions) -> Result<Labeling> {
    let n = a.n();
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one community"));
    }
    if n < k {
        return Err(Error::TooFewNodes { n, k });
    }
    if k == 1 {
        return Labeling::new(alloc::vec![0; n], 1);
    }
    let avg = 2.0 * a.edge_count() as f64 / n as f64;
    let keep: Vec<bool> = (0..n).map(|i| a.degree(i) as f64 <= opts.truncation * avg).collect();
    let apply = |x: &[f64], y: &mut [f64]| {
        for i in 0..n {
            y[i] = if keep[i] {
                a.neighbors(i).iter().filter(|&&j| keep[j as usize]).map(|&j| x[j as usize]).sum()
            } else {
                0.0
            };
        }
    };
    let mut rng = stream(seed, TAG_EIGEN, 0);
    let eig = subspace_eigen(n, k, apply, opts.subspace, &mut rng)?;
    let mut points = alloc::vec![0.0; n * k];
    for c in 0..k {
        let s = eig.values[c].abs();
        for i in 0..n {
            points[i * k + c] = eig.vectors[c * n + i] * s;
        }
    }
    let mut rng = stream(seed, TAG_KMEANS, 0);
    let fit = kmeans(&points, k, k, opts.kmeans, &mut rng);
    Labeling::new(fit.labels, k)
}

/// How the per-node leave-one-out step is carried out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LooMode {
    /// Half clusterings and refinement scores are computed once; for each
    /// node its column is subtracted from the other half's scores.
    Fast,
    /// Re-cluster the half containing `j` without `j` and redo the
    /// refinement and estimate from scratch, for every `j`.
    Exact,
}

#[derive(Clone, Copy, Debug)]
pub struct DetectOptions {
    pub mode: LooMode,
    pub spectral: SpectralOptions,
    /// Extra random splits tried when a half misses a community.
    pub max_split_retries: usize,
}

impl Default for DetectOptions {
    fn default() -> Self {
        Self { mode: LooMode::Fast, spectral: SpectralOptions::default(), max_split_retries: 5 }
    }
}

/// Source of wall-clock readings (seconds) for stage timings.
pub trait Clock {
    fn now(&self) -> f64;
}

/// A clock that always reads zero.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// Seconds spent per stage.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StageTimings {
    pub initial: f64,
    pub split: f64,
    pub refine: f64,
    pub leave_one_out: f64,
    pub total: f64,
}

/// Intermediate results of [`detect_communities`].
#[derive(Clone, Debug, PartialEq)]
pub struct DetectionTrace {
    pub initial_labels: Vec<usize>,
    /// Clipped block estimate from the initial labels.
    pub p_tilde: Vec<f64>,
    pub p_tilde_empty: Vec<bool>,
    /// `true` for nodes in the first half `I`.
    pub in_first_half: Vec<bool>,
    /// Half clusterings, aligned to the initial labels.
    pub half_labels: Vec<usize>,
    /// Cross-half likelihood-ratio labels (no node left out).
    pub refined_labels: Vec<usize>,
    /// Clipped block estimate from the refined labels.
    pub p_hat: Vec<f64>,
    pub final_labels: Vec<usize>,
    pub split_attempts: usize,
    pub timings: StageTimings,
}

struct Split {
    first: Vec<usize>,
    second: Vec<usize>,
    in_first: Vec<bool>,
}

fn random_split(n: usize, seed: u64, attempt: usize) -> Split {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut stream(seed, TAG_SPLIT, attempt as u64));
    let mut in_first = alloc::vec![false; n];
    order[..n / 2].iter().for_each(|&v| in_first[v] = true);
    let first = (0..n).filter(|&v| in_first[v]).collect();
    let second = (0..n).filter(|&v| !in_first[v]).collect();
    Split { first, second, in_first }
}

/// Cluster the subgraph on `nodes` and align it to `reference` on those nodes.
fn cluster_half(a: &Adjacency, nodes: &[usize], reference: &[usize], k: usize, seed: u64, opts: &SpectralOptions) -> Result<Vec<usize>> {
    let sub = a.induced(nodes);
    let labels = spectral_cluster(&sub, k, seed, opts)?;
    let reference = Labeling { labels: nodes.iter().map(|&v| reference[v]).collect(), k };
    Ok(match_labels(&reference, &labels)?.labels)
}

/// Community detection with leave-one-out refinement.
///
/// Requires `n ≥ 8k`. Deterministic in `(a, k, seed, opts)`.
pub fn detect_communities(
    a: &Adjacency,
    k: usize,
    seed: u64,
    opts: &DetectOptions,
    clock: &dyn Clock,
) -> Result<(Labeling, DetectionTrace)> {
    let n = a.n();
    if k == 0 {
        return Err(Error::InvalidArgument("need at least one community"));
    }
    if n < 8 * k {
        return Err(Error::TooFewNodes { n, k });
    }
    let t0 = clock.now();
    let initial = spectral_cluster(a, k, derive_seed(seed, TAG_GLOBAL, 0), &opts.spectral)?;
    let tilde = estimate_p(a, &initial)?;
    let t1 = clock.now();

    // split until both halves see every initial community
    let mut attempt = 0;
    let (split, half_first, half_second) = loop {
        let split = random_split(n, seed, attempt);
        let covers = |nodes: &[usize]| {
            let mut seen = alloc::vec![false; k];
            nodes.iter().for_each(|&v| seen[initial.labels[v]] = true);
            seen.iter().all(|&s| s)
        };
        if covers(&split.first) && covers(&split.second) {
            let s1 = derive_seed(seed, TAG_HALF, 2 * attempt as u64);
            let s2 = derive_seed(seed, TAG_HALF, 2 * attempt as u64 + 1);
            let h1 = cluster_half(a, &split.first, &initial.labels, k, s1, &opts.spectral)?;
            let h2 = cluster_half(a, &split.second, &initial.labels, k, s2, &opts.spectral)?;
            break (split, h1, h2);
        }
        attempt += 1;
        if attempt > opts.max_split_retries {
            return Err(Error::DegenerateSplit { attempts: attempt });
        }
    };
    let mut half_labels = alloc::vec![0usize; n];
    split.first.iter().zip(&half_first).for_each(|(&v, &l)| half_labels[v] = l);
    split.second.iter().zip(&half_second).for_each(|(&v, &l)| half_labels[v] = l);
    let t2 = clock.now();

    let ctx = Context::new(a, k, &tilde.clipped, &split, &half_labels);
    let refined = ctx.refined.clone();
    let p_hat = BlockCounts::new(a, &refined, k).estimate(n, a.edge_count()).clipped;
    let t3 = clock.now();

    let final_labels = match opts.mode {
        LooMode::Fast => ctx.fast_loo(&initial.labels),
        LooMode::Exact => exact_loo(a, k, seed, opts, &initial.labels, &tilde.clipped, &split, &half_labels)?,
    };
    let t4 = clock.now();

    let trace = DetectionTrace {
        initial_labels: initial.labels.clone(),
        p_tilde: tilde.clipped,
        p_tilde_empty: tilde.empty,
        in_first_half: split.in_first,
        half_labels,
        refined_labels: refined,
        p_hat,
        final_labels: final_labels.clone(),
        split_attempts: attempt + 1,
        timings: StageTimings { initial: t1 - t0, split: t2 - t1, refine: t3 - t2, leave_one_out: t4 - t3, total: t4 - t0 },
    };
    Ok((Labeling { labels: final_labels, k }, trace))
}

/// Shared cross-half refinement state.
struct Context<'a> {
    a: &'a Adjacency,
    k: usize,
    logs: LogBlocks,
    in_first: &'a [bool],
    half_labels: &'a [usize],
    /// Refinement scores of each node against the other half, row-major `n × k`.
    scores: Vec<f64>,
    refined: Vec<usize>,
}

impl<'a> Context<'a> {
    fn new(a: &'a Adjacency, k: usize, p_tilde: &[f64], split: &'a Split, half_labels: &'a [usize]) -> Self {
        let n = a.n();
        let logs = LogBlocks::new(p_tilde, k);
        let first_labels: Vec<usize> = split.first.iter().map(|&v| half_labels[v]).collect();
        let second_labels: Vec<usize> = split.second.iter().map(|&v| half_labels[v]).collect();
        let cols_first = Columns::new(n, k, &split.first, &first_labels);
        let cols_second = Columns::new(n, k, &split.second, &second_labels);
        let mut scores = alloc::vec![0.0; n * k];
        let mut refined = alloc::vec![0usize; n];
        let (mut b, mut m) = (alloc::vec![0; k], alloc::vec![0; k]);
        for i in 0..n {
            let cols = if split.in_first[i] { &cols_second } else { &cols_first };
            cols.stats(a, i, &mut b, &mut m);
            logs.scores(&b, &m, &mut scores[i * k..(i + 1) * k]);
            refined[i] = argmax(&scores[i * k..(i + 1) * k]);
        }
        Self { a, k, logs, in_first: &split.in_first, half_labels, scores, refined }
    }

    fn fast_loo(&self, initial: &[usize]) -> Vec<usize> {
        let (a, k) = (self.a, self.k);
        let n = a.n();
        let mut labels = self.refined.clone();
        let mut counts = BlockCounts::new(a, &labels, k);
        let mut adjacent = alloc::vec![false; n];
        let mut moved: Vec<(usize, usize)> = Vec::new();
        let mut s = alloc::vec![0.0; k];
        let (mut b, mut m) = (alloc::vec![0u64; k], alloc::vec![0u64; k]);
        let mut out = alloc::vec![0usize; n];

        for j in 0..n {
            let r = self.half_labels[j];
            let side = self.in_first[j];
            a.neighbors(j).iter().for_each(|&u| adjacent[u as usize] = true);

            moved.clear();
            moved.push((j, labels[j]));
            counts.relabel(a, &mut labels, j, initial[j]);
            // the other half loses column j from its refinement scores
            for i in (0..n).filter(|&i| self.in_first[i] != side) {
                let base = &self.scores[i * k..(i + 1) * k];
                for c in 0..k {
                    let term = if adjacent[i] { self.logs.lp[c * k + r] } else { self.logs.lq[c * k + r] };
                    s[c] = base[c] - term;
                }
                let l = argmax(&s);
                if l != labels[i] {
                    moved.push((i, labels[i]));
                    counts.relabel(a, &mut labels, i, l);
                }
            }

            let p_hat = counts.estimate(n, a.edge_count()).clipped;
            let logs = LogBlocks::new(&p_hat, k);
            b.iter_mut().for_each(|x| *x = 0);
            for &u in a.neighbors(j) {
                b[labels[u as usize]] += 1;
            }
            m.copy_from_slice(&counts.sizes);
            m[labels[j]] -= 1;
            logs.scores(&b, &m, &mut s);
            out[j] = argmax(&s);

            for &(v, old) in moved.iter().rev() {
                counts.relabel(a, &mut labels, v, old);
            }
            a.neighbors(j).iter().for_each(|&u| adjacent[u as usize] = false);
        }
        out
    }
}

#[allow(clippy::too_many_arguments)]
fn exact_loo(
    a: &Adjacency,
    k: usize,
    seed: u64,
    opts: &DetectOptions,
    initial: &[usize],
    p_tilde: &[f64],
    split: &Split,
    half_labels: &[usize],
) -> Result<Vec<usize>> {
    let n = a.n();
    let mut out = alloc::vec![0usize; n];
    for j in 0..n {
        let (own, other) = if split.in_first[j] { (&split.first, &split.second) } else { (&split.second, &split.first) };
        let own_minus: Vec<usize> = own.iter().copied().filter(|&v| v != j).collect();
        let own_labels =
            cluster_half(a, &own_minus, initial, k, derive_seed(seed, TAG_LOO, j as u64), &opts.spectral)?;
        let other_labels: Vec<usize> = other.iter().map(|&v| half_labels[v]).collect();

        let own_z = Labeling { labels: own_labels, k };
        let other_z = Labeling { labels: other_labels, k };
        let own_refined = lr_classify(a, &own_minus, other, &other_z, p_tilde)?;
        let other_refined = lr_classify(a, other, &own_minus, &own_z, p_tilde)?;

        let mut z_prime = alloc::vec![0usize; n];
        own_minus.iter().zip(&own_refined).for_each(|(&v, &l)| z_prime[v] = l);
        other.iter().zip(&other_refined).for_each(|(&v, &l)| z_prime[v] = l);
        z_prime[j] = initial[j];
        let z_prime = Labeling { labels: z_prime, k };
        let p_hat = estimate_p(a, &z_prime)?.clipped;
        let everyone: Vec<usize> = (0..n).collect();
        out[j] = lr_classify(a, &[j], &everyone, &z_prime, &p_hat)?[0];
    }
    Ok(out)
}
