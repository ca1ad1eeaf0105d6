use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("inverse temperature must be positive and finite, got {0}")]
    NonPositiveBeta(f64),

    #[error("tail epsilon must lie strictly between 0 and 1, got {0}")]
    InvalidTailEpsilon(f64),

    #[error(
        "truncating the thermal state at beta = {beta} needs more than {cap} levels; \
         use closed forms at this temperature"
    )]
    TruncationTooLarge { beta: f64, cap: usize },

    #[error("beta = {beta} is below the numeric range (beta >= {min}); only closed forms are available")]
    BelowNumericRange { beta: f64, min: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix dimension {dim} exceeds the supported maximum {max}")]
    DimensionTooLarge { dim: usize, max: usize },

    #[error("expected a square matrix with {expected} entries, got {got}")]
    BadShape { expected: usize, got: usize },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("not a density matrix: {0}")]
    NotAState(String),

    #[error("eigenvalue {0:e} is below the allowed negative tolerance")]
    NegativeEigenvalue(f64),

    #[error("Jacobi iteration did not converge after {0} sweeps")]
    NotConverged(usize),

    #[error("ensemble mixes diagonal and dense members")]
    MixedRepresentation,

    #[error("ensemble has no members")]
    EmptyEnsemble,

    #[error("the Bayes rule needs every ensemble member to be diagonal")]
    NonDiagonalMember,

    #[error("csv: {0}")]
    Csv(String),

    #[error("not implemented: {0}")]
    NotImplemented(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
