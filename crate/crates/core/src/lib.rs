#![cfg_attr(not(test), no_std)]
extern crate alloc;

pub mod affinity;
pub mod assignment;
pub mod chernoff;
pub mod detect;
pub mod dists;
pub mod error;
pub mod graph;
pub mod kmeans;
pub mod linalg;
pub mod math;
pub mod rng;
pub mod sbm;

pub use affinity::Affinity;
pub use chernoff::{BoundReport, ChernoffInfo, MonteCarloEstimate};
pub use dists::{BernoulliProduct, Group, GroupedPair, HypothesisPair, NaturalParams};
pub use error::{Error, Result};
pub use graph::Adjacency;
