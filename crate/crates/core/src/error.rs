use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Variants fall into three groups that the command-line front end maps to
/// distinct exit codes: malformed input or configuration, numerical failure,
/// and violated invariants (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("dimension mismatch at line {line}, column {column}: {message}")]
    DimensionMismatch {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("undeclared parameter t{index} at line {line}, column {column} (family declares m = {m})")]
    UndeclaredParameter {
        index: usize,
        m: usize,
        line: usize,
        column: usize,
    },

    #[error("parameter point has {got} coordinates, family expects {expected}")]
    ParamLength { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("leading coefficient is singular (|det| = {det_abs:e})")]
    SingularLeadingCoefficient { det_abs: f64 },

    #[error("leading coefficient has 0 in its field of values")]
    DegenerateLeadingCoefficient,

    #[error("interpolated leading coefficient {got} differs from expected {expected}")]
    InterpolationConditioning { got: Complex64, expected: Complex64 },

    #[error("root finder did not converge after {iterations} iterations (worst residual {worst_residual:e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
        best: Vec<Complex64>,
    },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("point set is empty")]
    EmptySet,

    #[error("{value} is not an eigenvalue (distance {distance:e} to the spectrum)")]
    NotAnEigenvalue { value: Complex64, distance: f64 },

    #[error("grid region is not symmetric about the real axis")]
    RegionNotSymmetric,

    #[error("family is neither real nor Hermitian on the sampled ball")]
    NotConjugateSymmetric,

    #[error("insufficient data: {usable} usable pairs, {required} required")]
    InsufficientData { usable: usize, required: usize },

    #[error("rank sequence overshoots multiplicity {multiplicity}: nullity {nullity} at power {power}")]
    RankInconsistency {
        multiplicity: usize,
        nullity: usize,
        power: usize,
    },

    #[error("invalid block counts derived from ranks {ranks:?}")]
    InvalidGamma { ranks: Vec<usize> },

    #[error("could not extract a Jordan chain complement: {0}")]
    NumericalDeficiency(String),

    #[error("chain relation residual {residual:e} exceeds tolerance at column {column}")]
    ChainResidual { residual: f64, column: usize },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status: 2 for input/configuration problems, 3 for
    /// numerical failures, 4 for invariant violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Syntax { .. }
            | Error::DimensionMismatch { .. }
            | Error::UndeclaredParameter { .. }
            | Error::ParamLength { .. }
            | Error::InvalidArgument(_)
            | Error::RegionNotSymmetric
            | Error::NotConjugateSymmetric
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_) => 2,
            Error::InvariantViolation(_) => 4,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
