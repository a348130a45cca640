use thiserror::Error;

/// Errors produced by simulation and transform routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configuration violated a stability or consistency constraint.
    #[error("configuration error: {0}")]
    Config(String),
    /// Integration produced a non-finite state; carries the last good time.
    #[error("non-finite state encountered; last good time t = {last_good}")]
    NonFinite { last_good: f64 },
    /// A failure inside one ensemble member.
    #[error("ensemble member {index}: {source}")]
    Member {
        index: usize,
        #[source]
        source: Box<Error>,
    },
    /// Records passed together do not share a common time grid.
    #[error("records do not share a common time grid")]
    GridMismatch,
    /// A least-squares fit could not be performed.
    #[error("fit error: {0}")]
    Fit(String),
    /// A field or state had no usable entries.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
