use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimension(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    /// Some `l x l` row-submatrix of the coefficient matrix is singular.
    #[error("singular submatrix on rows {rows:?}")]
    SingularSubmatrix { rows: Vec<usize> },

    /// No valid index set exists for the given frequency; the constant `M` is wrong.
    #[error("inconsistent norm constant: only {found} of the required {needed} rows satisfy |zeta| <= M |C zeta (i)|")]
    InconsistentM { found: usize, needed: usize },

    #[error("undefined dyadic shell: coordinate {index} is zero")]
    UndefinedShell { index: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("outside the admissible region: {0}")]
    OutsideTypeSet(String),

    #[error("configuration error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("matrix generation gave up after {attempts} attempts (threshold too high)")]
    ThresholdTooHigh { attempts: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
