//! Numerical machinery for maximal surfaces in pseudo-hyperbolic space
//! `H^{2,n}` and the Riemannian pairing they induce on spaces of
//! `so(2,n+1)`-valued 1-forms.
//!
//! The crate is organised around small dense matrices (dimensions up to
//! eleven) and closed-form chart maps on the upper half-plane, so all
//! operations are pure functions over immutable values:
//!
//! * [`quadspace`] — indefinite inner products on `R^{p+q}`, isometry and
//!   identity-component tests, signed Gram-Schmidt.
//! * [`liealg`] — the Lie algebra `so(2,n+1)`, its ordered basis, the
//!   trace-formula scalar product and the sharp operator.
//! * [`surfaces`] — the hyperbolic plane, the block and irreducible
//!   representations of `PSL(2,R)`, the two explicit equivariant maximal
//!   embeddings into `H^{2,2}` and numerical surface geometry.
//! * [`forms`] — matrix-valued 1-forms on a chart: Hodge star,
//!   exterior derivative, codifferential residuals, cocycle integrals.
//! * [`metric`] — the pairing `g` on bundle-valued 1-forms and its
//!   comparison with the Weil-Petersson metric.
//! * [`orbifold`] — centralizer enumeration and isometry-invariance
//!   checks for the subgroup shapes appearing in the character variety.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod forms;
pub mod jet;
pub mod liealg;
pub mod metric;
pub mod numeric;
pub mod orbifold;
pub mod quadspace;
pub mod surfaces;

use alloc::string::String;
use core::fmt;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix or vector dimensions do not match the ambient space.
    DimensionMismatch { expected: usize, found: usize },
    /// A parameter was outside its allowed range.
    InvalidParameter(String),
    /// A matrix required to be invertible was numerically singular.
    SingularMatrix,
    /// A vector with |<v,v>| below the degeneracy threshold showed up
    /// where a definite norm was required.
    DegenerateVector { norm: f64 },
    /// Orthonormalization produced a sign different from the requested one.
    SignMismatch { index: usize, expected: f64, found: f64 },
    /// The matrix is not an isometry of the given quadratic space.
    NotAnIsometry,
    /// Conjugation by the given isometry is not monomial on the basis.
    NotMonomial { index: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::SingularMatrix => write!(f, "singular matrix"),
            Error::DegenerateVector { norm } => {
                write!(f, "degenerate vector: |<v,v>| = {norm:e} below threshold")
            }
            Error::SignMismatch { index, expected, found } => write!(
                f,
                "sign mismatch at vector {index}: expected {expected}, found {found}"
            ),
            Error::NotAnIsometry => write!(f, "matrix is not an isometry of the space"),
            Error::NotMonomial { index } => {
                write!(f, "conjugation is not monomial on basis element {index}")
            }
        }
    }
}

#[cfg(test)]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
