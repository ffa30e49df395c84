use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different quadratic fields: sqrt({0}) and sqrt({1})")]
    MixedFields(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    /// Surrogate mode could not separate two values at the configured precision.
    #[error("ambiguous comparison: values differ by less than the surrogate tolerance ({context})")]
    AmbiguousComparison { context: String },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("slope is not totally irrational: integer relation {relation:?} among (1, alpha...)")]
    NotTotallyIrrational { relation: Vec<String> },

    #[error("window generators are linearly dependent (det B = 0)")]
    DegenerateWindow,

    #[error("F0 meets the integer lattice: {witness:?}")]
    BadF0 { witness: Vec<String> },

    #[error("projection solve is singular")]
    SingularF0,

    #[error("shift is singular: lattice point {point:?} lies on the boundary of the strip")]
    SingularShift { point: Vec<i64> },

    #[error("internal point lies on the singular set (coordinate {coordinate})")]
    OnSingularSet { coordinate: usize },

    #[error("alpha must be irrational")]
    RationalAlpha,

    #[error("starting point lies in alpha*Z + Z")]
    DegenerateBeta,

    #[error("integer relation found among (1, alpha_1, ..., alpha_d): {relation:?}")]
    RelationFound { relation: Vec<String> },

    #[error("pigeonhole bound violated: no witness below N = {0}")]
    DirichletViolated(u64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularShift { .. }
            | Error::AmbiguousComparison { .. }
            | Error::OnSingularSet { .. } => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
