//! Scalar abstraction shared by the real and bi-complex dynamics paths.
//!
//! The baseline algorithms (RNEA, ABA, kinematics) are written once over
//! [`Scalar`] and instantiated for `f64` (the fast path) and for
//! [`BiComplex`](crate::oracles::BiComplex) (the derivative oracle).

use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

/// Field-like scalar usable inside nalgebra fixed-size matrices.
pub trait Scalar:
    nalgebra::Scalar
    + Copy
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn from_f64(x: f64) -> Self;

    /// Real part; the value itself for `f64`.
    fn re(&self) -> f64;

    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn sqrt(self) -> Self;

    /// Whether rotation exponentials may use closed forms with
    /// norm-dependent branches. Only true for plain reals.
    fn closed_form_exp() -> bool {
        false
    }

    #[inline]
    fn scale(self, s: f64) -> Self {
        self * Self::from_f64(s)
    }
}

impl Scalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn re(&self) -> f64 {
        *self
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn closed_form_exp() -> bool {
        true
    }
    #[inline]
    fn scale(self, s: f64) -> Self {
        self * s
    }
}
