//! Exact sparse multivariate polynomials with block-structured variables.

mod blocks;
mod matrix;
mod monomial;
mod poly;
mod ring;


pub use blocks::{BlockStructure, MultiDegree, VarKind, Variable, Variables};
pub use matrix::{lex_subsets, PolyMatrix};
pub use monomial::{Exponent, Monomial};
pub use poly::{Polynomial, Term};
pub use ring::{
    is_probable_prime, CoeffField, CoeffRing, Integers, PrimeField, Rationals, DEFAULT_PRIME,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("coefficient domains differ: {left} vs {right}")]
    DomainMismatch { left: String, right: String },
    #[error("polynomials live over different variable lists")]
    VariableMismatch,
    #[error("variable index {index} out of range for {nvars} variables")]
    InvalidVariable { index: usize, nvars: usize },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("exponent {0} does not fit the exponent type")]
    ExponentOverflow(u32),
    #[error("multi-degree of the zero polynomial is undefined")]
    ZeroPolynomial,
    #[error("polynomial variables are not compatible with the block structure")]
    IncompatibleBlocks,
    #[error("invalid block structure: {0}")]
    InvalidBlocks(String),
    #[error("determinant of a non-square {rows}x{cols} matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("bad matrix shape: {0}")]
    Shape(String),
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
}
