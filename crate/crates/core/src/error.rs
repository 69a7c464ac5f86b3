use thiserror::Error;

use crate::model::Symbol;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance contains no words")]
    EmptyInstance,

    #[error("line {line}: word has length {found}, expected {expected}")]
    UnequalLengths {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("words must be non-empty")]
    EmptyWord,

    #[error("reserved symbol '{0}' already occurs in the instance")]
    ReservedSymbolPresent(Symbol),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("strings do not match: forced swap fails at position {position}")]
    NotMatching { position: usize },

    #[error("three-way match needs s1~s2 and s2~s3: {0}")]
    PrerequisiteNotMatching(String),

    #[error("invalid swap string: {0}")]
    InvalidSwapString(String),

    #[error("expected {expected} budgets, got {found}")]
    BudgetCount { expected: usize, found: usize },

    #[error("budget {budget} of string {index} exceeds radius {radius}")]
    BudgetExceedsRadius {
        index: usize,
        budget: usize,
        radius: usize,
    },

    #[error("position {position} out of range (valid: 1..={max})")]
    OutOfRange { position: usize, max: usize },

    #[error("enumeration needs {needed} candidates, cap is {cap}")]
    CapExceeded { needed: u128, cap: u128 },

    #[error("certification failure: {0}")]
    CertificationFailure(String),
}
