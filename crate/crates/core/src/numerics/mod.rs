//! Shared numerical building blocks: adaptive Gauss–Kronrod quadrature,
//! exponentially weighted product integration, finite-difference stencils,
//! Wynn's ε-algorithm, a Dormand–Prince integrator and small least squares.

pub mod fd;
pub mod gk;
pub mod lsq;
pub mod ode;
pub mod product;
pub mod wynn;

use core::ops::{Add, Mul, Sub};
use num_complex::Complex64;

/// Scalar types the generic quadrature and interpolation routines accept.
pub trait Scalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + PartialEq
{
    /// Additive identity.
    fn zero() -> Self;
    /// Magnitude used for error control.
    fn norm(self) -> f64;
}

impl Scalar for f64 {
    #[inline]
    fn zero() -> Self {
        0.0
    }
    #[inline]
    fn norm(self) -> f64 {
        libm::fabs(self)
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    #[inline]
    fn norm(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}
