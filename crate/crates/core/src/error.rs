use std::path::PathBuf;

/// Errors produced while building, fitting or evaluating models.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("need at least {min} knots, got {got}")]
    TooFewKnots { min: usize, got: usize },

    #[error("knot abscissae must be strictly increasing (x[{index}] = {value})")]
    NonIncreasingKnots { index: usize, value: f64 },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("expected {expected} scaling parameters, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("vertical scaling d[{index}] = {value} is not contractive (|d| must be < 1)")]
    NonContractive { index: usize, value: f64 },

    #[error("d_max must lie in (0, 1), got {0}")]
    InvalidDMax(f64),

    #[error("segment index {index} out of range 1..={segments}")]
    SegmentOutOfRange { index: usize, segments: usize },

    #[error("x = {x} lies outside the model domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("grid must start at {a} and end at {b} with at least 2 strictly increasing points")]
    GridMismatch { a: f64, b: f64 },

    #[error("series abscissae must be strictly increasing (z[{index}] = {value})")]
    NonIncreasingSeries { index: usize, value: f64 },

    #[error("series needs at least {min} samples, got {got}")]
    SeriesTooShort { min: usize, got: usize },

    #[error("knot ({x}, {y}) is not a sample of the series")]
    KnotNotInSeries { x: f64, y: f64 },

    #[error("knot endpoints must coincide with the first and last samples of the series")]
    EndpointMismatch,

    #[error("cannot normalize a constant series")]
    ConstantSeries,

    #[error("invalid nucleotide {ch:?} at position {position}")]
    InvalidNucleotide { ch: char, position: usize },

    #[error("sequence contains no nucleotides")]
    EmptySequence,

    #[error("knot index {index} is invalid: {reason}")]
    InvalidKnotIndex { index: usize, reason: &'static str },

    #[error("extrema search found {found} interior candidates, {requested} requested")]
    TooFewExtrema { found: usize, requested: usize },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
