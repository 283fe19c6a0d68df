//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while ingesting data, fitting, or writing
/// results.
#[derive(Debug, Error)]
pub enum Error {
    /// Underlying I/O failure while reading or writing a file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// A text input could not be parsed; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse {
        /// 1-based line number where parsing failed.
        line: usize,
        /// What was wrong with that line.
        message: String,
    },

    /// The input describes no usable hypergraph (no hyperedges, or no
    /// vertices ever mentioned).
    #[error("empty hypergraph: {0}")]
    EmptyHypergraph(String),

    /// Two arguments that must agree in shape do not.
    #[error("dimension mismatch: {0}")]
    Dimensions(String),

    /// Parameters violate the model constraints; the message lists every
    /// violation found.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A label vector contains an out-of-range or missing entry.
    #[error("invalid labels: {0}")]
    InvalidLabels(String),

    /// A hyperedge received zero posterior mass across all components, so
    /// responsibilities cannot be normalized. Carries the edge index.
    #[error("degenerate hyperedge {0}: zero posterior mass across all components")]
    DegenerateEdge(usize),

    /// A numerical routine failed to produce a usable value.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The comparability condition linking the two parameterizations does
    /// not hold, so moments cannot be compared.
    #[error("moment condition violated: {0}")]
    ConditionViolated(String),

    /// Cross-validation needs at least two hyperedges to split.
    #[error("too few hyperedges for cross-validation: need at least 2, got {0}")]
    TooFewEdges(usize),

    /// Every cross-validation replicate failed to fit.
    #[error("all {failed} cross-validation replicates failed; last error: {last}")]
    AllReplicatesFailed {
        /// Number of replicates that failed.
        failed: usize,
        /// The last failure message observed.
        last: String,
    },

    /// Every restart of the fitting loop failed.
    #[error("all {tried} restarts failed; last error: {last}")]
    AllRestartsFailed {
        /// Number of restarts attempted.
        tried: usize,
        /// The last failure message observed.
        last: String,
    },

    /// A command-line flag value is outside its admissible range.
    #[error("invalid flag value: {0}")]
    InvalidFlag(String),

    /// A structured document could not be read or written.
    #[error("document error: {0}")]
    Json(#[from] serde_json::Error),
}
