//! Exact solution and numerical cross-validation of the three-dimensional
//! Dirac oscillator in a space with Snyder-de Sitter deformed commutation
//! relations.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! * [`deformation`] holds model parameters, derived constants, minimal
//!   uncertainties and the regime classification of ground-state branches.
//! * [`specfun`] provides Jacobi polynomials and Gauss-Jacobi quadrature.
//! * [`radial`] discretizes the radial ladder operators on a compactified
//!   momentum grid.
//! * [`spectrum`] evaluates the closed-form energies of all four branches and
//!   the shape-invariance hierarchy that produces them.
//! * [`wavefun`] builds the Jacobi-polynomial radial wavefunctions.
//! * [`oracle`] diagonalizes the discretized superpartner Hamiltonians and
//!   compares them against the closed forms.
//!
//! IO, file formats and the command-line interface live in the `sds-cli`
//! companion crate.
#![cfg_attr(not(any(test, feature = "std")), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod deformation;
pub mod eigen;
mod error;
mod math;
pub mod oracle;
pub mod quantum;
pub mod radial;
pub mod specfun;
pub mod spectrum;
pub mod wavefun;

pub use deformation::{Branch, BranchKind, DerivedConstants, ModelParams, UncertaintyReport};
pub use error::{Error, Result};
pub use quantum::{HalfInt, QuantumNumbers, Spin};

/// Complex scalar used throughout the crate.
pub type Complex = num_complex::Complex64;
