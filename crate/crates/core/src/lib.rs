//! Numerical laboratory for integrable brickwork circuits built from
//! Yang-Baxter `R̆`-matrices.
//!
//! The crate constructs the two-component transfer matrices that propagate
//! infinite-temperature correlations at a fixed distance inside the causal
//! light cone of a brickwork circuit, together with the four-component
//! analogue for out-of-time-order correlators. On top of the raw
//! constructions it provides
//!
//! - an exact circuit oracle ([`circuit`]) evolving operators on finite
//!   periodic chains, independent of all transfer-matrix machinery,
//! - the algebraic-Bethe-ansatz layer ([`bethe`]): root finding for the
//!   effective spin-1 Bethe equations, eigenvalue reconstruction and Bethe
//!   eigenvectors from repeated `B(λ)` action,
//! - non-Hermitian spectral analysis ([`spectral`]): commuting-family
//!   checks, Jordan/Weyr block recovery at the homogeneous exceptional
//!   point, the global SU(2) structure and generalized eigenvectors from
//!   inhomogeneity derivatives.
//!
//! All linear algebra is dense double-precision complex; values are
//! immutable after construction and safe to share across threads.

use blas_src as _;

pub mod bethe;
pub mod circuit;
mod error;
pub mod gates;
pub mod numerics;
pub mod spectral;
pub mod transfer;

pub use error::{Error, Result};
pub use gates::Pauli;
pub use numerics::{CMatrix, CVector};
