use thiserror::Error;

use crate::abelian::GroupElement;

/// Errors produced by the theta-group engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThetaError {
    #[error("malformed group: {0}")]
    MalformedGroup(String),

    #[error("malformed element {coords:?} for divisors {divisors:?}")]
    MalformedElement { coords: Vec<u64>, divisors: Vec<u64> },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),

    #[error("degenerate form: radical has order {}", radical.len())]
    DegenerateForm { radical: Vec<GroupElement> },

    #[error("subgroup is not isotropic: [{x}, {y}] = {value}")]
    NotIsotropic {
        x: GroupElement,
        y: GroupElement,
        value: String,
    },

    #[error("invalid cocycle: {0}")]
    InvalidCocycle(String),

    #[error("invalid character: {0}")]
    InvalidCharacter(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("module is not homogeneous: weights {0:?}")]
    NotHomogeneous(Vec<i64>),

    #[error("level {level} is excluded (divisible by {prime})")]
    ExcludedLevel { level: u64, prime: u64 },

    #[error("size cap exceeded: {what} = {size} > {cap}")]
    SizeExceeded { what: String, size: u64, cap: u64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = ThetaError> = std::result::Result<T, E>;
