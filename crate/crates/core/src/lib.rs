//! Numerical toolkit for the K#(n,m) hierarchy of nonlinearly dispersive
//! generalized KdV equations
//!
//! ```text
//! u_t + u^n u_x + [(u_x)^m]_xx = 0
//! ```
//!
//! The crate is `no_std` (it needs `alloc`). It provides:
//!
//! - [`model`]: hierarchy parameters, Lagrangian/Hamiltonian densities and the
//!   canonical/dimensional scaling transform.
//! - [`specfun`]: log-gamma and the Gauss hypergeometric function in the
//!   shape `2F1(a, b; b+1; z)`.
//! - [`travwave`]: peaked compact traveling waves ("peakompactons") built from
//!   their implicit closed form, plus the KdV `sech^2` soliton.
//! - [`simulate`]: a periodic method-of-lines solver (Fourier collocation or
//!   fourth-order finite differences, classical RK4 in time).
//! - [`diagnostics`]: discrete mass, momentum, energy and `I_k` functionals.
//!
//! The default `std` feature enables the FFT-backed Fourier collocation
//! scheme. Without it only the finite-difference scheme is available.

#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(feature = "std")]
extern crate std;

pub mod diagnostics;
mod error;
pub(crate) mod math;
pub mod model;
pub mod quadrature;
pub mod simulate;
pub mod specfun;
pub mod travwave;

pub use crate::diagnostics::DiagnosticsRecord;
pub use crate::error::Error;
pub use crate::model::{DimensionalForm, HierarchyParams};
pub use crate::simulate::{Grid, NonlinearForm, Scheme, SolverConfig, State};
pub use crate::travwave::Peakompacton;

pub type Result<T> = core::result::Result<T, Error>;
