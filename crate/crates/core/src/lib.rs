//! Numerical core for late-time tails of 1D wave equations
//! `ψ_tt − ψ_xx + V(x)ψ = 0` with inverse-power potentials `V ~ v± |x|^{−m}`.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! - [`potential`]: admissible potential families with a smooth middle bridge.
//! - [`specfun`]: fractional-order modified Bessel functions and the
//!   zero-energy solutions Φ₁, Φ₂ of `f'' = x^{−m} f`.
//! - [`jost`]: decaying Jost solutions `y± = e^{∓εx}(1+s±)`, the Wronskian and
//!   the spectral (bound state / zero resonance) checks.
//! - [`resolvent`]: the Green operator built from Jost solutions and the free
//!   kernels.
//! - [`series`]: the dual-space `F_j` recurrence, the reconstruction of `s`
//!   from its Laplace representation, small-ε coefficient fits and the
//!   logarithmic Laplace-integral identities.
//! - [`ilt`]: Bromwich-line and branch-cut hairpin inverse Laplace transforms.
//! - [`timedomain`]: leapfrog and Duhamel time-domain oracles and decay fits.
//!
//! Enable the `std` feature only to get `std::error::Error` impls; nothing
//! else depends on it.
#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![warn(missing_docs)]

extern crate alloc;

mod error;
mod prelude;
pub mod ilt;
pub mod jost;
pub mod numerics;
pub mod potential;
pub mod resolvent;
pub mod series;
pub mod specfun;
pub mod timedomain;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Principal-branch natural logarithm (cut along the negative real axis).
#[inline]
pub fn clog(z: Complex64) -> Complex64 {
    z.ln()
}
