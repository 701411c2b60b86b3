use std::path::PathBuf;

/// Errors surfaced by the library's fallible operations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("the zero vector has no expansion")]
    ZeroVector,
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("alphabet size must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("letter {letter} outside the alphabet 1..={d}")]
    InvalidLetter { letter: usize, d: usize },
    #[error("vector entries must be nonnegative")]
    NegativeEntry,
    #[error("integer overflow in exact arithmetic")]
    Overflow,
    #[error("column {column} of the matrix is zero; the substitution would erase letter {column}")]
    ZeroColumn { column: usize },
    #[error("expansion stopped before reaching a terminal vector")]
    ExpansionIncomplete,
    #[error("expansion exceeded {0} steps without terminating")]
    StepLimit(usize),
    #[error("jacobi-perron is only defined in dimension 3, got {0}")]
    JacobiPerronDimension(usize),
    #[error("operation needs a nonempty word")]
    EmptyWord,
    #[error("factor length {n_max} exceeds word length {len}")]
    FactorLengthTooLarge { n_max: usize, len: usize },
    #[error("frequency vector must have nonnegative components summing to 1")]
    InvalidFrequency,
    #[error("float input must be finite and nonnegative")]
    NonFiniteInput,
    #[error("residual vector is zero; no seed letter")]
    ZeroResidual,
    #[error("sweep needs n >= {min_n} when min_entry = {min_entry}")]
    InfeasibleSweep { min_n: i128, min_entry: i128 },
    #[error("record batch mixes algorithms or denominators")]
    MixedRecords,
    #[error("writing {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Control-flow outcomes of a single continued-fraction step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    /// At most one coordinate is nonzero; the expansion is finished.
    #[error("vector is terminal: at most one nonzero coordinate")]
    Terminal,
    /// The rule's guard fails on this vector (Arnoux-Rauzy only).
    #[error("rule guard fails on this vector")]
    NotApplicable,
    /// The rule does not support this dimension.
    #[error("rule does not support this dimension")]
    UnsupportedDimension,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
