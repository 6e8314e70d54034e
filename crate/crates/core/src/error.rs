use core::fmt;

/// Errors raised by the core library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An input vector was empty.
    Empty,
    /// Two inputs that must have the same length do not.
    LengthMismatch { left: usize, right: usize },
    /// A probability was outside the open interval (0, 1).
    OutOfRange { index: usize, value: f64 },
    /// `alpha` was outside (0, 1).
    AlphaOutOfRange(f64),
    /// The two hypotheses coincide on every coordinate.
    DegeneratePair,
    /// Brute-force enumeration was asked for more than 20 coordinates.
    TooLarge { n: usize, max: usize },
    /// The grouped affinity grid exceeds the cell budget.
    GridTooLarge { cells: f64, max: f64 },
    /// A user-supplied log-partition function returned a non-finite value.
    EvaluationFailure { index: usize },
    /// Two communities have identical connectivity rows.
    IndistinguishableCommunities { k: usize, l: usize },
    /// An SBM parameter or label was invalid.
    InvalidModel(&'static str),
    /// A label exceeded the community count.
    LabelOutOfRange { index: usize, label: usize, k: usize },
    /// Malformed adjacency structure.
    InvalidAdjacency(&'static str),
    /// The iterative SVD did not reach its residual tolerance.
    ConvergenceFailure { iterations: usize, residual: f64 },
    /// A random half split left a community empty after every retry.
    DegenerateSplit { attempts: usize },
    /// Too few nodes for the requested number of communities.
    TooFewNodes { n: usize, k: usize },
    /// A numeric argument was invalid.
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Empty => write!(f, "input is empty"),
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::OutOfRange { index, value } => {
                write!(f, "probability {value} at index {index} is not in (0, 1)")
            }
            Error::AlphaOutOfRange(a) => write!(f, "alpha {a} is not in (0, 1)"),
            Error::DegeneratePair => write!(f, "hypotheses are identical on every coordinate"),
            Error::TooLarge { n, max } => {
                write!(f, "{n} coordinates exceed the brute-force limit of {max}")
            }
            Error::GridTooLarge { cells, max } => {
                write!(f, "affinity grid of {cells:e} cells exceeds the limit of {max:e}")
            }
            Error::EvaluationFailure { index } => {
                write!(f, "log-partition evaluation failed at coordinate {index}")
            }
            Error::IndistinguishableCommunities { k, l } => {
                write!(f, "communities {k} and {l} have identical connectivity rows")
            }
            Error::InvalidModel(why) => write!(f, "invalid model: {why}"),
            Error::LabelOutOfRange { index, label, k } => {
                write!(f, "label {label} at node {index} is not below K = {k}")
            }
            Error::InvalidAdjacency(why) => write!(f, "invalid adjacency: {why}"),
            Error::ConvergenceFailure { iterations, residual } => write!(
                f,
                "truncated SVD did not converge after {iterations} iterations (residual {residual:e})"
            ),
            Error::DegenerateSplit { attempts } => {
                write!(f, "random split lost a community in all {attempts} attempts")
            }
            Error::TooFewNodes { n, k } => write!(f, "{n} nodes is too few for K = {k}"),
            Error::InvalidArgument(why) => write!(f, "invalid argument: {why}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
