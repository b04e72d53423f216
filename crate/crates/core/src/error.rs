use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("duplicate abscissa {0} in interpolation data")]
    DuplicateAbscissa(String),
    #[error("polytope is not full-dimensional (affine dimension {found}, ambient {ambient})")]
    NotFullDimensional { found: usize, ambient: usize },
    #[error("vertex {0} does not lie in the lattice")]
    VertexNotInLattice(String),
    #[error("not simple: vertex {0} lies on {1} facets")]
    NotSimple(usize, usize),
    #[error("budget exceeded: {what} needs {needed}, bound is {bound}")]
    BudgetExceeded { what: String, needed: String, bound: String },
    #[error("lattice is not between L and p^-1 L: {0}")]
    NotBetween(String),
    #[error("expected a rational value but got {0}")]
    NotRational(String),
    #[error("combinatorial type of P(h) changed on the sample grid")]
    CombinatorialTypeChanged,
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
