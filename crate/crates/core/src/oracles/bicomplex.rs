//! Bi-complex numbers `a + i1 b + i2 c + i1 i2 d` with `i1² = i2² = -1` and
//! `i1 i2 = i2 i1`.
//!
//! Arithmetic is carried out in the Cayley-Dickson form `z1 + i2 z2` with
//! `z1 = a + i1 b`, `z2 = c + i1 d`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BiComplex {
    pub re: f64,
    pub i1: f64,
    pub i2: f64,
    pub i12: f64,
}

impl BiComplex {
    pub const fn new(re: f64, i1: f64, i2: f64, i12: f64) -> Self {
        Self { re, i1, i2, i12 }
    }

    pub const fn real(re: f64) -> Self {
        Self::new(re, 0.0, 0.0, 0.0)
    }

    /// `x + i1 h1 + i2 h2`.
    pub const fn perturbed(x: f64, h1: f64, h2: f64) -> Self {
        Self::new(x, h1, h2, 0.0)
    }

    #[inline]
    fn z1(&self) -> Complex64 {
        Complex64::new(self.re, self.i1)
    }

    #[inline]
    fn z2(&self) -> Complex64 {
        Complex64::new(self.i2, self.i12)
    }

    #[inline]
    fn from_parts(z1: Complex64, z2: Complex64) -> Self {
        Self::new(z1.re, z1.im, z2.re, z2.im)
    }

    /// Conjugate with respect to `i2`.
    #[inline]
    pub fn conj2(self) -> Self {
        Self::new(self.re, self.i1, -self.i2, -self.i12)
    }
}

impl fmt::Display for BiComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:+}i1 {:+}i2 {:+}i1i2",
            self.re, self.i1, self.i2, self.i12
        )
    }
}

impl Add for BiComplex {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.i1 + o.i1, self.i2 + o.i2, self.i12 + o.i12)
    }
}

impl Sub for BiComplex {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.i1 - o.i1, self.i2 - o.i2, self.i12 - o.i12)
    }
}

impl Neg for BiComplex {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.i1, -self.i2, -self.i12)
    }
}

impl Mul for BiComplex {
    type Output = Self;
    #[inline]
    fn mul(self, o: Self) -> Self {
        // (a + i1 b + i2 c + i1i2 d)(e + i1 f + i2 g + i1i2 h), expanded.
        let (a, b, c, d) = (self.re, self.i1, self.i2, self.i12);
        let (e, f, g, h) = (o.re, o.i1, o.i2, o.i12);
        Self::new(
            a * e - b * f - c * g + d * h,
            a * f + b * e - c * h - d * g,
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )
    }
}

impl Div for BiComplex {
    type Output = Self;
    #[inline]
    fn div(self, o: Self) -> Self {
        let (w1, w2) = (o.z1(), o.z2());
        let den = w1 * w1 + w2 * w2;
        let num = self * o.conj2();
        Self::from_parts(num.z1() / den, num.z2() / den)
    }
}

macro_rules! assign_op {
    ($tr:ident, $f:ident, $op:tt) => {
        impl $tr for BiComplex {
            #[inline]
            fn $f(&mut self, o: Self) {
                *self = *self $op o;
            }
        }
    };
}
assign_op!(AddAssign, add_assign, +);
assign_op!(SubAssign, sub_assign, -);
assign_op!(MulAssign, mul_assign, *);
assign_op!(DivAssign, div_assign, /);

impl Zero for BiComplex {
    fn zero() -> Self {
        Self::real(0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.i1 == 0.0 && self.i2 == 0.0 && self.i12 == 0.0
    }
}

impl One for BiComplex {
    fn one() -> Self {
        Self::real(1.0)
    }
}

impl Scalar for BiComplex {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Self::real(x)
    }

    #[inline]
    fn re(&self) -> f64 {
        self.re
    }

    fn sin(self) -> Self {
        // sin(z1 + i2 z2) = sin z1 cosh z2 + i2 cos z1 sinh z2
        let (z1, z2) = (self.z1(), self.z2());
        Self::from_parts(z1.sin() * z2.cosh(), z1.cos() * z2.sinh())
    }

    fn cos(self) -> Self {
        // cos(z1 + i2 z2) = cos z1 cosh z2 - i2 sin z1 sinh z2
        let (z1, z2) = (self.z1(), self.z2());
        Self::from_parts(z1.cos() * z2.cosh(), -(z1.sin() * z2.sinh()))
    }

    fn exp(self) -> Self {
        // exp(z1 + i2 z2) = exp(z1) (cos z2 + i2 sin z2)
        let (z1, z2) = (self.z1(), self.z2());
        let e = z1.exp();
        Self::from_parts(e * z2.cos(), e * z2.sin())
    }

    fn sqrt(self) -> Self {
        // Newton iteration seeded with the principal root of the i2-free part.
        let mut s = Self::from_parts(self.z1().sqrt(), Complex64::new(0.0, 0.0));
        if s.is_zero() {
            return s;
        }
        let half = Self::real(0.5);
        for _ in 0..8 {
            let next = half * (s + self / s);
            if next == s {
                break;
            }
            s = next;
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_bc(rng: &mut ChaCha8Rng) -> BiComplex {
        // Small integers keep every product exactly representable.
        BiComplex::new(
            rng.gen_range(-8..=8) as f64,
            rng.gen_range(-8..=8) as f64,
            rng.gen_range(-8..=8) as f64,
            rng.gen_range(-8..=8) as f64,
        )
    }

    #[test]
    fn unit_relations() {
        let i1 = BiComplex::new(0.0, 1.0, 0.0, 0.0);
        let i2 = BiComplex::new(0.0, 0.0, 1.0, 0.0);
        let i12 = BiComplex::new(0.0, 0.0, 0.0, 1.0);
        assert_eq!(i1 * i1, BiComplex::real(-1.0));
        assert_eq!(i2 * i2, BiComplex::real(-1.0));
        assert_eq!(i1 * i2, i2 * i1);
        assert_eq!(i1 * i2, i12);
        assert_eq!(i12 * i12, BiComplex::real(1.0));
    }

    #[test]
    fn ring_axioms_randomized() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let (a, b, c) = (rand_bc(&mut rng), rand_bc(&mut rng), rand_bc(&mut rng));
            assert_eq!((a * b) * c, a * (b * c));
            assert_eq!(a * (b + c), a * b + a * c);
            assert_eq!(a * b, b * a);
            assert_eq!(a + b, b + a);
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let a = BiComplex::new(rng.gen(), rng.gen(), rng.gen(), rng.gen());
            let b = BiComplex::new(1.0 + rng.gen::<f64>(), rng.gen(), rng.gen(), rng.gen());
            let back = (a * b) / b;
            for (x, y) in [(back.re, a.re), (back.i1, a.i1), (back.i2, a.i2), (back.i12, a.i12)] {
                assert!((x - y).abs() < 1e-13, "{back} vs {a}");
            }
        }
    }

    fn series_sin(x: BiComplex) -> BiComplex {
        let mut term = x;
        let mut sum = x;
        for k in 1..30 {
            let d = ((2 * k) * (2 * k + 1)) as f64;
            term = -(term * x * x) / BiComplex::real(d);
            sum += term;
        }
        sum
    }

    fn series_exp(x: BiComplex) -> BiComplex {
        let mut term = BiComplex::one();
        let mut sum = term;
        for k in 1..40 {
            term = term * x / BiComplex::real(k as f64);
            sum += term;
        }
        sum
    }

    fn close(a: BiComplex, b: BiComplex, tol: f64) -> bool {
        (a.re - b.re).abs() < tol
            && (a.i1 - b.i1).abs() < tol
            && (a.i2 - b.i2).abs() < tol
            && (a.i12 - b.i12).abs() < tol
    }

    #[test]
    fn elementary_functions_match_series() {
        let x = BiComplex::new(0.4, -0.3, 0.2, 0.7);
        assert!(close(x.sin(), series_sin(x), 1e-14));
        assert!(close(x.exp(), series_exp(x), 1e-14));
        let c = BiComplex::one() - BiComplex::real(2.0) * (x * BiComplex::real(0.5)).sin()
            * (x * BiComplex::real(0.5)).sin();
        assert!(close(x.cos(), c, 1e-14));
        let r = x.sqrt();
        assert!(close(r * r, x, 1e-14));
    }

    #[test]
    fn second_derivative_of_square() {
        let h = 1e-20;
        let x = BiComplex::perturbed(3.0, h, h);
        let f = x * x;
        assert_eq!(f.i12 / (h * h), 2.0);
    }

    #[test]
    fn cross_partial_of_sin_cos() {
        let h = 1e-20;
        let x = BiComplex::perturbed(0.3, h, 0.0);
        let y = BiComplex::perturbed(0.7, 0.0, h);
        let f = x.sin() * y.cos();
        let expected = -(0.3f64.cos()) * 0.7f64.sin();
        assert!((f.i12 / (h * h) - expected).abs() < 1e-15);
    }
}
