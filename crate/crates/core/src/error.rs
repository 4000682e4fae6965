use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("scalar variant mismatch: cannot combine rational and complex matrices")]
    VariantMismatch,

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("tolerance must be 0 for exact rational checks (got {0})")]
    InvalidTolerance(f64),

    #[error("columns are not orthonormal (max violation {violation:e} > {tol:e})")]
    NotOrthonormal { violation: f64, tol: f64 },

    #[error("numerical degeneracy: found {found} completion vectors, needed {needed}")]
    Degenerate { found: usize, needed: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("unknown machine kind `{0}`")]
    UnknownKind(String),

    #[error("symbol `{0}` is not in the alphabet")]
    ForeignSymbol(char),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported combination: {0}")]
    UnsupportedCombination(String),

    #[error("trial {trial} exceeded the round cap of {cap} rounds")]
    Divergence { trial: u64, cap: u64 },

    #[error("expected runtime diverges: halting probability per round is zero")]
    DivergentRuntime,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
