use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation of {what} at {at} produced non-finite value {value}")]
    NonFinite {
        what: String,
        at: String,
        value: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gauge contract violated: {0}")]
    GaugeContract(String),

    #[error("map leaves the domain at step {step}: T({from}) = {to} not in [{lower}, {upper}]")]
    Closedness {
        step: usize,
        from: f64,
        to: f64,
        lower: f64,
        upper: f64,
    },

    #[error("problem `{0}` is already registered")]
    DuplicateProblem(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// The λ-free factor vanished at a pair where the left side is positive.
    #[error("no finite certificate: {count} pair(s) with vanishing factor, first at ({x}, {y}) with lhs {lhs}")]
    NoFiniteCertificate {
        x: f64,
        y: f64,
        lhs: f64,
        count: usize,
    },

    #[error("target {target} outside attainable range [{low}, {high}]")]
    OutOfRange { target: f64, low: f64, high: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn non_finite(what: impl Into<String>, at: impl Into<String>, value: f64) -> Self {
        Error::NonFinite {
            what: what.into(),
            at: at.into(),
            value,
        }
    }
}
