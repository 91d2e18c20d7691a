//! Algebraic degree of polynomial optimization problems whose variables are
//! split into blocks.
//!
//! The crate covers the whole pipeline:
//!
//! - [`polyring`]: exact sparse multivariate polynomials over ℤ, ℚ and 𝔽_p,
//!   with block-structured variables and multi-degrees.
//! - [`systems`]: multi-homogenization and the two critical-point systems
//!   (Lagrangian gradient and Jacobian minors).
//! - [`chow`]: the truncated series ring ℤ[Y₁..Y_k]/(Y_i^{n_i+1}) and the
//!   closed-form count of complex critical points.
//! - [`oracle`]: random instances over 𝔽_p and a Buchberger-based
//!   standard-monomial count used to cross-check the closed form.
//! - [`certify`]: interval arithmetic and the Krawczyk test for certifying
//!   approximate critical points produced by an external solver.

pub mod certify;
pub mod chow;
pub mod oracle;
pub mod polyring;
pub mod systems;

pub use chow::{algebraic_degree, TruncatedSeries};
pub use systems::{CriticalSystem, ProblemInstance, SystemVariant};
pub use polyring::{
    BlockStructure, CoeffField, CoeffRing, Integers, MultiDegree, PolyError, PolyMatrix,
    Polynomial, PrimeField, Rationals, Variables,
};

/// Serializes big integers as decimal strings.
pub(crate) fn serialize_display<T, S>(value: &T, serializer: S) -> Result<S::Ok, S::Error>
where
    T: std::fmt::Display,
    S: serde::Serializer,
{
    serializer.collect_str(value)
}
