//! Romanovski-Routh polynomials and the rationally extended Scarf-type
//! potentials built from them.
//!
//! The crate is `no_std` (with `alloc`). It covers:
//!
//! * [`routh`]: complex-parameter Jacobi and Routh polynomials, their
//!   Rodrigues and hypergeometric forms, weights and orthogonal families.
//! * [`geometry`]: tangent polynomials, the Bose invariant, the Liouville
//!   change of variable and the resulting Schrodinger potential.
//! * [`spectral`]: the quartic for the spectral parameter, bound-state
//!   enumeration and the auxiliary (AEH) solutions.
//! * [`darboux`]: Darboux partners and the irregular factorization function.
//! * [`oracle`]: an independent Numerov eigenvalue solver and quadrature.
#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod darboux;
mod error;
pub mod geometry;
pub mod oracle;
pub mod poly;
pub mod roots;
pub mod routh;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::{Complex, Complex64};
pub use num_rational::BigRational;
pub use poly::{RealPolynomial, Scalar};
