//! Subcommand arguments and their implementations.
//!
//! Every argument struct doubles as the schema of its TOML config table
//! (`[bounds]`, `[section5-symmetric]`, ...). Keys use the flag spelling;
//! flags given on the command line win over the config file.

use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::Deserialize;

use chernoff_sbm_core::affinity::affinity_grouped;
use chernoff_sbm_core::chernoff::{chernoff_information, log_shannon_lower_bound, sandwich_bounds, tilted_mc_affinity};
use chernoff_sbm_core::detect::{detect_communities, mis, Clock, DetectOptions, DetectionTrace, Labeling, LooMode};
use chernoff_sbm_core::rng::derive_seed;
use chernoff_sbm_core::sbm::SbmModel;
use chernoff_sbm_core::{Error, Group, GroupedPair};

use crate::error::{CliError, CliResult};
use crate::io;
use crate::table::Table;

/// Monte-Carlo budget when an exact grid is too large.
pub const MC_FALLBACK_SAMPLES: u64 = 10_000_000;

macro_rules! layered_args {
    ($(#[$m:meta])* pub struct $name:ident { $( $(#[$fm:meta])* pub $f:ident : $t:ty ),* $(,)? }) => {
        $(#[$m])*
        #[derive(Args, Deserialize, Debug, Clone, Default, PartialEq)]
        #[serde(deny_unknown_fields, rename_all = "kebab-case")]
        pub struct $name { $( $(#[$fm])* pub $f: Option<$t> ),* }

        impl $name {
            /// Fill unset fields from `base`.
            pub fn over(self, base: Self) -> Self {
                Self { $( $f: self.$f.or(base.$f) ),* }
            }
        }
    };
}

layered_args! {
    pub struct BoundsArgs {
        /// Success probability under the null, for iid pairs.
        #[arg(long)]
        pub p0: f64,
        #[arg(long)]
        pub p1: f64,
        /// Comma-separated dimensions for iid pairs.
        #[arg(long, value_delimiter = ',')]
        pub n_list: Vec<u64>,
        /// CSV file with header `p0,p1`; overrides the iid settings.
        #[arg(long)]
        pub pairs: PathBuf,
        /// Seed for the Monte-Carlo fallback.
        #[arg(long)]
        pub seed: u64,
        #[arg(long)]
        pub out: PathBuf,
    }
}

layered_args! {
    pub struct SandwichArgs {
        #[arg(long)]
        pub p0: f64,
        #[arg(long)]
        pub p1: f64,
        #[arg(long, value_delimiter = ',')]
        pub n_list: Vec<u64>,
        #[arg(long)]
        pub out: PathBuf,
    }
}

layered_args! {
    pub struct SymmetricArgs {
        /// Community sizes; each model has `2n` nodes.
        #[arg(long, value_delimiter = ',')]
        pub n_list: Vec<u64>,
        /// Detection runs per size (0 skips detection).
        #[arg(long)]
        pub trials: u64,
        #[arg(long)]
        pub seed: u64,
        /// `fast` or `exact` leave-one-out.
        #[arg(long)]
        pub mode: String,
        #[arg(long)]
        pub out: PathBuf,
    }
}

layered_args! {
    pub struct OscillationArgs {
        #[arg(long)]
        pub n_min: u64,
        #[arg(long)]
        pub n_max: u64,
        #[arg(long)]
        pub p0: f64,
        #[arg(long)]
        pub p1: f64,
        #[arg(long)]
        pub out: PathBuf,
    }
}

layered_args! {
    pub struct DetectArgs {
        /// Edge list with header `n K`.
        #[arg(long)]
        pub adjacency: PathBuf,
        /// Dense 0/1 matrix; needs `--k`.
        #[arg(long)]
        pub dense: PathBuf,
        /// Community count; overrides the edge-list header.
        #[arg(long)]
        pub k: usize,
        #[arg(long)]
        pub seed: u64,
        #[arg(long)]
        pub mode: String,
        /// Degree truncation factor.
        #[arg(long)]
        pub truncation: f64,
        /// Labels output (one per line); stdout when absent.
        #[arg(long)]
        pub out: PathBuf,
        /// Stage diagnostics as JSON.
        #[arg(long)]
        pub trace: PathBuf,
        /// True labels; the misclassification rate is reported on stderr.
        #[arg(long)]
        pub truth: PathBuf,
    }
}

layered_args! {
    pub struct SampleArgs {
        /// Total number of nodes.
        #[arg(long)]
        pub n: usize,
        #[arg(long)]
        pub k: usize,
        /// Within-community edge probability.
        #[arg(long)]
        pub a: f64,
        /// Between-community edge probability.
        #[arg(long)]
        pub b: f64,
        #[arg(long)]
        pub seed: u64,
        /// Edge list output; stdout when absent.
        #[arg(long)]
        pub out: PathBuf,
        #[arg(long)]
        pub labels_out: PathBuf,
    }
}

const DEFAULT_N_LIST: [u64; 6] = [100, 200, 400, 800, 1600, 3200];

fn parse_mode(mode: Option<&str>) -> CliResult<LooMode> {
    match mode.unwrap_or("fast") {
        "fast" | "fast_loo" | "fast-loo" => Ok(LooMode::Fast),
        "exact" | "exact_loo" | "exact-loo" => Ok(LooMode::Exact),
        other => Err(CliError::invalid(format!("unknown mode `{other}` (expected fast or exact)"))),
    }
}

/// `(log η, method)` exactly when the grid fits, otherwise by Monte Carlo.
fn log_affinity(pair: &GroupedPair, seed: u64) -> CliResult<(f64, &'static str)> {
    match affinity_grouped(pair) {
        Ok(a) => Ok((a.log_eta, "grouped")),
        Err(Error::GridTooLarge { .. }) => {
            Ok((tilted_mc_affinity(pair, MC_FALLBACK_SAMPLES, seed)?.log_estimate, "monte_carlo"))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn bounds(args: &BoundsArgs) -> CliResult<Table> {
    let seed = args.seed.unwrap_or(0);
    let pairs: Vec<GroupedPair> = match &args.pairs {
        Some(path) => vec![io::read_pairs(path)?.group()],
        None => {
            let (p0, p1) = (args.p0.unwrap_or(0.55), args.p1.unwrap_or(0.45));
            let ns = args.n_list.clone().unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
            ns.iter().map(|&n| GroupedPair::iid(p0, p1, n)).collect::<Result<_, _>>()?
        }
    };
    let mut t = Table::new(&[
        "n",
        "alpha_star",
        "d_star",
        "sigma_bar",
        "log_eta_exact",
        "log_lower",
        "log_upper",
        "lower_applicable",
        "log_shannon",
        "log_upper_alt",
        "method",
    ]);
    for pair in &pairs {
        let r = sandwich_bounds(pair)?;
        let (log_eta, method) = log_affinity(pair, seed)?;
        t.push(vec![
            r.n.into(),
            r.alpha_star.into(),
            r.d_star.into(),
            r.sigma_bar.into(),
            log_eta.into(),
            r.log_lower.into(),
            r.log_upper.into(),
            r.lower_applicable.into(),
            log_shannon_lower_bound(pair)?.into(),
            r.log_upper_alt.into(),
            method.into(),
        ]);
    }
    Ok(t)
}

/// `r_n = η · √n σ̄ α*(1−α*) · e^{D*}` with the bound constants it should
/// fall between.
pub fn sandwich(args: &SandwichArgs) -> CliResult<Table> {
    let (p0, p1) = (args.p0.unwrap_or(0.55), args.p1.unwrap_or(0.45));
    let ns = args.n_list.clone().unwrap_or_else(|| DEFAULT_N_LIST.to_vec());
    let mut t = Table::new(&[
        "n",
        "alpha_star",
        "d_star",
        "sigma_bar",
        "scale",
        "log_eta",
        "r_n",
        "c3",
        "c4",
        "lower_applicable",
        "method",
    ]);
    for n in ns {
        let pair = GroupedPair::iid(p0, p1, n)?;
        let r = sandwich_bounds(&pair)?;
        let (log_eta, method) = log_affinity(&pair, 0)?;
        t.push(vec![
            n.into(),
            r.alpha_star.into(),
            r.d_star.into(),
            r.sigma_bar.into(),
            r.scale.into(),
            log_eta.into(),
            r.normalized_affinity(log_eta).into(),
            r.c3.into(),
            r.c4.into(),
            r.lower_applicable.into(),
            method.into(),
        ]);
    }
    Ok(t)
}

/// The pair `(0.55·1ₙ, 0.45·1ₙ)` against `(0.45·1ₙ, 0.55·1ₙ)`.
pub fn symmetric_pair(n: u64) -> CliResult<GroupedPair> {
    Ok(GroupedPair::from_groups([Group { p0: 0.55, p1: 0.45, count: n }, Group { p0: 0.45, p1: 0.55, count: n }])?)
}

/// Exact log-affinity statistics of the symmetric pair at size `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetricRow {
    pub log_eta: f64,
    pub d_star: f64,
    /// `log η + D*`.
    pub a_n: f64,
    /// `log η − n log(2√(0.55·0.45))`, the single-power convention.
    pub a_n_alt: f64,
    /// `a_n + ½ log n`.
    pub c_n: f64,
    pub method: &'static str,
}

pub fn symmetric_row(n: u64) -> CliResult<SymmetricRow> {
    let pair = symmetric_pair(n)?;
    let info = chernoff_information(&pair)?;
    let (log_eta, method) = log_affinity(&pair, n)?;
    let bc = (2.0 * (0.55f64 * 0.45).sqrt()).ln();
    let a_n = log_eta + info.d_star;
    Ok(SymmetricRow {
        log_eta,
        d_star: info.d_star,
        a_n,
        a_n_alt: log_eta - n as f64 * bc,
        c_n: a_n + 0.5 * (n as f64).ln(),
        method,
    })
}

/// Misclassification rates of independent detection runs on `model`, in
/// trial order. Trial `t` samples with `derive_seed(seed, tag, t)`.
pub fn detection_trials(model: &SbmModel, tag: u64, trials: u64, seed: u64, mode: LooMode) -> CliResult<Vec<f64>> {
    let k = model.k();
    let truth = Labeling::new(model.labels().to_vec(), k)?;
    let opts = DetectOptions { mode, ..Default::default() };
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let trial_seed = derive_seed(seed, tag, t);
            let a = model.sample_adjacency(trial_seed);
            let (z, _) = detect_communities(&a, k, trial_seed ^ 0x5eed, &opts, &StdClock::new())?;
            Ok(mis(&z, &truth)?)
        })
        .collect()
}

/// Detection on the `2n`-node symmetric model.
pub fn symmetric_trials(n: u64, trials: u64, seed: u64, mode: LooMode) -> CliResult<Vec<f64>> {
    let model = SbmModel::planted(2 * n as usize, 2, 0.55, 0.45)?;
    detection_trials(&model, n, trials, seed, mode)
}

pub fn section5_symmetric(args: &SymmetricArgs) -> CliResult<Table> {
    let ns = args.n_list.clone().unwrap_or_else(|| vec![100, 200, 500, 1000]);
    let trials = args.trials.unwrap_or(10);
    let seed = args.seed.unwrap_or(0);
    let mode = parse_mode(args.mode.as_deref())?;
    let mut t = Table::new(&[
        "n",
        "a_n",
        "a_n_alt",
        "c_n",
        "log_eta",
        "d_star",
        "b_n_mean",
        "b_n_stderr",
        "mis_mean",
        "trials",
        "method",
    ]);
    for n in ns {
        if n == 0 {
            return Err(CliError::invalid("n must be positive"));
        }
        let row = symmetric_row(n)?;
        let rates = symmetric_trials(n, trials, seed, mode)?;
        let (b_mean, b_se, mis_mean) = if rates.is_empty() {
            (f64::NAN, f64::NAN, f64::NAN)
        } else {
            let m = rates.iter().sum::<f64>() / rates.len() as f64;
            let var = if rates.len() > 1 {
                rates.iter().map(|r| (r - m) * (r - m)).sum::<f64>() / (rates.len() - 1) as f64
            } else {
                f64::NAN
            };
            // delta method for log of the mean
            let se = (var / rates.len() as f64).sqrt() / m;
            ((2.0 * m).ln() + row.d_star, se, m)
        };
        t.push(vec![
            n.into(),
            row.a_n.into(),
            row.a_n_alt.into(),
            row.c_n.into(),
            row.log_eta.into(),
            row.d_star.into(),
            b_mean.into(),
            b_se.into(),
            mis_mean.into(),
            trials.into(),
            row.method.into(),
        ]);
    }
    Ok(t)
}

/// Single-group statistics at dimension `n` for the oscillation sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscillationRow {
    pub n: u64,
    /// `log η − (n/2) log(p0 p1)`.
    pub a_n_alt: f64,
    /// `log η + D*`.
    pub a_n: f64,
    /// `a_n + ½ log n`.
    pub c_n: f64,
    pub method: &'static str,
}

pub fn oscillation_rows(n_min: u64, n_max: u64, p0: f64, p1: f64) -> CliResult<Vec<OscillationRow>> {
    if n_min == 0 || n_min > n_max {
        return Err(CliError::invalid("need 0 < n-min <= n-max"));
    }
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let pair = GroupedPair::iid(p0, p1, n)?;
            let d = chernoff_information(&pair)?.d_star;
            let (log_eta, method) = log_affinity(&pair, n)?;
            let a_n = log_eta + d;
            Ok(OscillationRow {
                n,
                a_n_alt: log_eta - 0.5 * n as f64 * (p0 * p1).ln(),
                a_n,
                c_n: a_n + 0.5 * (n as f64).ln(),
                method,
            })
        })
        .collect()
}

pub fn section5_oscillation(args: &OscillationArgs) -> CliResult<Table> {
    let rows = oscillation_rows(
        args.n_min.unwrap_or(5000),
        args.n_max.unwrap_or(10000),
        args.p0.unwrap_or(0.3),
        args.p1.unwrap_or(0.7),
    )?;
    let mut t = Table::new(&["n", "a_n_alt", "a_n_alt_minus_half_log_n", "a_n", "c_n", "method"]);
    for r in rows {
        let half_log = 0.5 * (r.n as f64).ln();
        t.push(vec![
            r.n.into(),
            r.a_n_alt.into(),
            (r.a_n_alt - half_log).into(),
            r.a_n.into(),
            r.c_n.into(),
            r.method.into(),
        ]);
    }
    Ok(t)
}

/// Wall clock measured from construction.
pub struct StdClock(Instant);

impl StdClock {
    pub fn new() -> Self {
        Self(Instant::now())
    }
}

impl Default for StdClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for StdClock {
    fn now(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

pub struct DetectOutput {
    pub labels: Labeling,
    pub trace: DetectionTrace,
    pub mis: Option<f64>,
}

pub fn detect(args: &DetectArgs) -> CliResult<DetectOutput> {
    let (a, header_k) = match (&args.adjacency, &args.dense) {
        (Some(p), None) => {
            let (a, k) = io::read_edge_list(p)?;
            (a, Some(k))
        }
        (None, Some(p)) => (io::read_dense(p)?, None),
        _ => return Err(CliError::invalid("give exactly one of --adjacency or --dense")),
    };
    let k = args.k.or(header_k).ok_or_else(|| CliError::invalid("--k is required with --dense"))?;
    let mut opts = DetectOptions { mode: parse_mode(args.mode.as_deref())?, ..Default::default() };
    if let Some(tr) = args.truncation {
        if tr.is_nan() || tr <= 0.0 {
            return Err(CliError::invalid("truncation must be positive"));
        }
        opts.spectral.truncation = tr;
    }
    let (labels, trace) = detect_communities(&a, k, args.seed.unwrap_or(0), &opts, &StdClock::new())?;
    let mis = match &args.truth {
        Some(p) => Some(mis(&labels, &io::read_labels(p, k)?)?),
        None => None,
    };
    Ok(DetectOutput { labels, trace, mis })
}

pub fn trace_json(trace: &DetectionTrace, k: usize) -> String {
    let matrix = |m: &[f64]| m.chunks(k).map(|r| r.to_vec()).collect::<Vec<_>>();
    let v = serde_json::json!({
        "k": k,
        "initial_labels": trace.initial_labels,
        "p_tilde": matrix(&trace.p_tilde),
        "p_tilde_empty": trace.p_tilde_empty.chunks(k).map(|r| r.to_vec()).collect::<Vec<_>>(),
        "in_first_half": trace.in_first_half,
        "half_labels": trace.half_labels,
        "refined_labels": trace.refined_labels,
        "p_hat": matrix(&trace.p_hat),
        "final_labels": trace.final_labels,
        "split_attempts": trace.split_attempts,
        "timings_seconds": {
            "initial": trace.timings.initial,
            "split": trace.timings.split,
            "refine": trace.timings.refine,
            "leave_one_out": trace.timings.leave_one_out,
            "total": trace.timings.total,
        },
    });
    serde_json::to_string(&v).unwrap() + "\n"
}

/// Planted-partition sample: `(edge list, labels)` file contents.
pub fn sample(args: &SampleArgs) -> CliResult<(String, String)> {
    let n = args.n.ok_or_else(|| CliError::invalid("--n is required"))?;
    let k = args.k.unwrap_or(2);
    let model = SbmModel::planted(n, k, args.a.unwrap_or(0.55), args.b.unwrap_or(0.45))?;
    let a = model.sample_adjacency(args.seed.unwrap_or(0));
    Ok((io::write_edge_list(&a, k), io::write_labels(model.labels())))
}
