//! Command-line experiments for Chernoff sandwich bounds and leave-one-out
//! community detection.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod table;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use commands::*;
use error::CliResult;

#[derive(Parser, Debug)]
#[command(name = "chernoff-sbm", version, about = "Chernoff bounds on Bayes error and SBM community detection")]
pub struct Cli {
    /// TOML file with a table per subcommand; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Chernoff information, exact affinity and the sandwich bounds.
    Bounds(BoundsArgs),
    /// Normalized affinity against the bound constants for iid pairs.
    Sandwich(SandwichArgs),
    /// Symmetric two-community experiment: affinity and detection error.
    #[command(name = "section5-symmetric")]
    Symmetric(SymmetricArgs),
    /// Lattice oscillation of the normalized log-affinity.
    #[command(name = "section5-oscillation")]
    Oscillation(OscillationArgs),
    /// Leave-one-out community detection on a graph.
    Detect(DetectArgs),
    /// Sample a planted-partition graph.
    Sample(SampleArgs),
}

fn emit(out: Option<&std::path::Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| error::CliError::Io { path: p.to_path_buf(), source }),
        None => {
            use std::io::Write;
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn run(cli: Cli) -> CliResult<()> {
    let cfg = cli.config.as_deref();
    match cli.command {
        Command::Bounds(a) => {
            let a = a.over(config::load(cfg, "bounds")?);
            emit(a.out.as_deref(), &bounds(&a)?.render())
        }
        Command::Sandwich(a) => {
            let a = a.over(config::load(cfg, "sandwich")?);
            emit(a.out.as_deref(), &sandwich(&a)?.render())
        }
        Command::Symmetric(a) => {
            let a = a.over(config::load(cfg, "section5-symmetric")?);
            emit(a.out.as_deref(), &section5_symmetric(&a)?.render())
        }
        Command::Oscillation(a) => {
            let a = a.over(config::load(cfg, "section5-oscillation")?);
            emit(a.out.as_deref(), &section5_oscillation(&a)?.render())
        }
        Command::Detect(a) => {
            let a = a.over(config::load(cfg, "detect")?);
            let r = detect(&a)?;
            if let Some(p) = &a.trace {
                emit(Some(p), &trace_json(&r.trace, r.labels.k()))?;
            }
            if let Some(m) = r.mis {
                eprintln!("mis={m}");
            }
            emit(a.out.as_deref(), &io::write_labels(r.labels.labels()))
        }
        Command::Sample(a) => {
            let a = a.over(config::load(cfg, "sample")?);
            let (edges, labels) = sample(&a)?;
            if let Some(p) = &a.labels_out {
                emit(Some(p), &labels)?;
            }
            emit(a.out.as_deref(), &edges)
        }
    }
}
