use thiserror::Error;

use crate::numeric::{NumericError, Rational};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumericError),

    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("entry ({row}, {col}) is negative")]
    NegativeEntry { row: usize, col: usize },
    #[error("declared {what} = {declared} but data has {actual}")]
    DeclaredSize {
        what: &'static str,
        declared: usize,
        actual: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("statement needs m >= {need}, got m = {got}")]
    TooFewColumns { need: usize, got: usize },
    #[error("exponent p_{index} = {value} is not > 1")]
    ExponentNotAboveOne { index: usize, value: Rational },
    #[error("exponents are not conjugate: |sum 1/p_k - 1| = {defect}")]
    ConjugacyViolated { defect: Rational },
    #[error("Minkowski exponent p = {0} is below 1")]
    ExponentBelowOne(Rational),
    #[error("column {col} increases at row {row}")]
    Unsorted { row: usize, col: usize },
    #[error("negative application input")]
    NegativeInput,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("slack ratio undefined: the dominant side is zero")]
    ZeroDominantSide,

    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),

    #[error("malformed trace: {0}")]
    MalformedTrace(String),

    #[error("invalid generator spec: {0}")]
    BadGenSpec(String),
    #[error("generator gave up after {attempts} attempts")]
    BudgetExhausted { attempts: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
