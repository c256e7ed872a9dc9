//! Exact multisoliton solutions of the focusing nonlinear Schrödinger (NLS)
//! and Heisenberg magnet (HM) equations.
//!
//! Solutions are produced by solving the Birkhoff factorization problem for
//! the loop group of `[[a, b], [-b̄, ā]]` loops concretely: the Baker
//! functions of a finite-pole subspace reduce to two small linear systems per
//! `(x, t)` point, whose solution gives the NLS flow `g₋(x, t)`. Conjugating
//! `σ₃` by the zero-order coefficient of `g₊` then maps the NLS solution to a
//! spin field solving HM.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature. IO, configuration and the command-line surface live in the
//! companion `birkhoff` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod baker;
pub mod gauge;
pub mod lax;
pub mod linalg;
pub mod loop_algebra;
pub mod spectral;
pub mod verify;

pub use num_complex::Complex64 as Complex;

pub use baker::{
    nls_field, nsoliton_determinant_b1, one_soliton_closed_form, solve_baker, BakerCoefficients,
    BakerError, BakerFunctions,
};
pub use gauge::{hm_field, spin_matrix, spin_vector_scalar, GaugeError, SpinMatrix, SpinVector};
pub use lax::{hm_lax_pair, nls_lax_pair, zcc_residual, LaxPair};
pub use loop_algebra::{C2Matrix, LaurentMatrix, Projection};
pub use spectral::{SolitonParams, SpectralData, SpectralError, SpectralPair};
pub use verify::{Field, GridSpec, ResidualReport, TimeConvention, VerifyError};
