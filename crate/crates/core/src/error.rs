//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field cardinality {q} exceeds cap {cap}")]
    CapExceeded { q: u64, cap: u64 },

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("the zero polynomial has no leading monomial")]
    ZeroPolynomial,

    #[error("degree {d} out of range ({msg})")]
    BadDegree { d: usize, msg: String },

    #[error("input polynomials are linearly dependent")]
    LinearlyDependent,

    #[error("zero polynomial in input")]
    ZeroInput,

    #[error("polynomial is not homogeneous square-free")]
    NotHomogeneousSquareFree,

    #[error("parameters violate region {0}")]
    RegionViolation(String),

    #[error("enumeration size {required} exceeds cap {cap}")]
    SizeCap { required: u128, cap: u128 },

    #[error("search budget exceeded: {required} candidates, budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("operation is degenerate for q = 2")]
    DegenerateField,

    #[error("inconsistent construction: {0}")]
    Inconsistent(String),

    #[error("exponent vector outside the grid: {0}")]
    OutOfGrid(String),

    #[error("bad parameters: {0}")]
    BadParameters(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
