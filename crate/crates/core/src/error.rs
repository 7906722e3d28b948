use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A violated standing assumption of the integral-dependence tests.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypothesisError {
    #[error("ring dimension {dim} is below 2")]
    DimensionTooSmall { dim: usize },
    #[error("ideal {ideal} has height 0 (it is the zero ideal)")]
    HeightZero { ideal: String },
    #[error("ideal {ideal} has height {height}, which is not below dim R = {dim}")]
    HeightNotBelowDim { ideal: String, height: usize, dim: usize },
    #[error("height I = {height_i} exceeds height J = {height_j}")]
    HeightOrder { height_i: usize, height_j: usize },
    #[error("I is not contained in J: generator {generator} of I is not in J")]
    NotContained { generator: String },
    #[error("ideals {0} and {1} live in different rings")]
    RingMismatch(String, String),
    #[error("ideal {ideal} is not generated in a single degree")]
    NotEquigenerated { ideal: String },
    #[error("R has relations; pass --assert-domain (or `option assert_domain;`) to vouch that it is a domain")]
    DomainNotAsserted,
}

impl HypothesisError {
    /// Stable identifier used in machine-readable error output.
    pub fn name(&self) -> &'static str {
        match self {
            HypothesisError::DimensionTooSmall { .. } => "dimension_too_small",
            HypothesisError::HeightZero { .. } => "height_zero",
            HypothesisError::HeightNotBelowDim { .. } => "height_not_below_dim",
            HypothesisError::HeightOrder { .. } => "height_order",
            HypothesisError::NotContained { .. } => "not_contained",
            HypothesisError::RingMismatch(..) => "ring_mismatch",
            HypothesisError::NotEquigenerated { .. } => "not_equigenerated",
            HypothesisError::DomainNotAsserted => "domain_not_asserted",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{name}` at line {line}, column {col}")]
    UnknownVariable { name: String, line: usize, col: usize },
    #[error("generator {index} of {ideal} is not homogeneous: {text}")]
    NonHomogeneous { ideal: String, index: usize, text: String },
    #[error("dimension mismatch: expected {expected} variables, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(#[from] HypothesisError),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("exponent overflow")]
    Overflow,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Syntax { .. }
                | Error::Parse { .. }
                | Error::UnknownVariable { .. }
                | Error::NonHomogeneous { .. }
                | Error::InvalidField(_)
        )
    }

    /// A stable snake_case identifier for the error.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "invalid_field",
            Error::Syntax { .. } => "syntax",
            Error::Parse { .. } => "parse",
            Error::UnknownVariable { .. } => "unknown_variable",
            Error::NonHomogeneous { .. } => "non_homogeneous",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Precondition(_) => "precondition",
            Error::Hypothesis(h) => h.name(),
            Error::Internal(_) => "internal",
            Error::Overflow => "overflow",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
