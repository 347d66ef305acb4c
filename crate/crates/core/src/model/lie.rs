//! Exponential and logarithm maps on SO(3) and SE(3).
//!
//! Real scalars use the closed forms. Any other scalar goes through a
//! truncated Taylor series with scaling and squaring, which is analytic in
//! every component and therefore safe under complex-step perturbation.

use nalgebra::{Matrix3, Matrix4, Vector3};

use crate::scalar::Scalar;
use crate::spatial::{hat, skew, Motion};

/// Number of Taylor terms used by the series exponential.
pub const SERIES_TERMS: usize = 12;

/// Squarings needed so that the scaled argument has real norm below 1/8,
/// where twelve terms leave a truncation error below 1e-19.
fn squarings(norm: f64) -> u32 {
    let mut s = 0;
    let mut n = norm;
    while n > 0.125 {
        n *= 0.5;
        s += 1;
    }
    s
}

/// `exp` of a square matrix by scaled Taylor series.
fn expm_series<T: Scalar, const D: usize>(a: &nalgebra::SMatrix<T, D, D>) -> nalgebra::SMatrix<T, D, D> {
    let norm = a.iter().fold(0.0f64, |m, x| m.max(x.re().abs())) * D as f64;
    let s = squarings(norm);
    let scaled = a * T::from_f64(0.5f64.powi(s as i32));
    let mut term = nalgebra::SMatrix::<T, D, D>::identity();
    let mut sum = term;
    for k in 1..SERIES_TERMS {
        term = term * scaled * T::from_f64(1.0 / k as f64);
        sum += term;
    }
    for _ in 0..s {
        sum = sum * sum;
    }
    sum
}

/// Rotation matrix `exp([w]×)`.
pub fn exp_so3<T: Scalar>(w: &Vector3<T>) -> Matrix3<T> {
    if T::closed_form_exp() {
        let theta2 = w.dot(w);
        let t2 = theta2.re();
        let (a, b) = if t2 < 1e-12 {
            // Taylor coefficients of sinθ/θ and (1−cosθ)/θ².
            (
                T::one() - theta2 * T::from_f64(1.0 / 6.0),
                T::from_f64(0.5) - theta2 * T::from_f64(1.0 / 24.0),
            )
        } else {
            let theta = theta2.sqrt();
            (theta.sin() / theta, (T::one() - theta.cos()) / theta2)
        };
        let k = skew(w);
        Matrix3::identity() + k * a + k * k * b
    } else {
        expm_series(&skew(w))
    }
}

/// Homogeneous transform `exp(hat(ξ))` for a twist `ξ = (ω, v)`.
pub fn exp_se3<T: Scalar>(xi: &Motion<T>) -> (Matrix3<T>, Vector3<T>) {
    if T::closed_form_exp() {
        let w = xi.angular();
        let v = xi.linear();
        let theta2 = w.dot(&w);
        let t2 = theta2.re();
        let k = skew(&w);
        let (b, c) = if t2 < 1e-12 {
            (
                T::from_f64(0.5) - theta2 * T::from_f64(1.0 / 24.0),
                T::from_f64(1.0 / 6.0) - theta2 * T::from_f64(1.0 / 120.0),
            )
        } else {
            let theta = theta2.sqrt();
            (
                (T::one() - theta.cos()) / theta2,
                (theta - theta.sin()) / (theta2 * theta),
            )
        };
        let rot = exp_so3(&w);
        let vmat = Matrix3::identity() + k * b + k * k * c;
        (rot, vmat * v)
    } else {
        let m: Matrix4<T> = expm_series(&hat(xi));
        (
            m.fixed_view::<3, 3>(0, 0).into_owned(),
            m.fixed_view::<3, 1>(0, 3).into_owned(),
        )
    }
}

/// Principal logarithm of a rotation, returned as a rotation vector.
pub fn log_so3(r: &Matrix3<f64>) -> Vector3<f64> {
    let cos = ((r.trace() - 1.0) * 0.5).clamp(-1.0, 1.0);
    let theta = cos.acos();
    let axial = Vector3::new(r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]);
    if theta < 1e-6 {
        return axial * (0.5 + theta * theta / 12.0);
    }
    if std::f64::consts::PI - theta < 1e-6 {
        // Near π the axial part vanishes; read the axis from R + I.
        let b = (r + Matrix3::identity()) * 0.5;
        let col = (0..3).max_by(|&a, &c| b[(a, a)].total_cmp(&b[(c, c)])).unwrap_or(0);
        let mut axis = b.column(col).into_owned() / b[(col, col)].max(1e-300).sqrt();
        axis /= axis.norm();
        if axis.dot(&axial) < 0.0 {
            axis = -axis;
        }
        return axis * theta;
    }
    axial * (theta / (2.0 * theta.sin()))
}

/// Logarithm of a pose, as a twist `(ω, v)`.
pub fn log_se3(r: &Matrix3<f64>, p: &Vector3<f64>) -> Motion<f64> {
    let w = log_so3(r);
    let theta = w.norm();
    let k = skew(&w);
    let coeff = if theta < 1e-6 {
        1.0 / 12.0 + theta * theta / 720.0
    } else {
        let half = 0.5 * theta;
        (1.0 - half * half.cos() / half.sin()) / (theta * theta)
    };
    let vinv = Matrix3::identity() - k * 0.5 + k * k * coeff;
    Motion::new(w, vinv * p)
}

/// Closest rotation in the Frobenius sense (polar factor from the SVD).
pub fn project_to_so3(r: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = r.svd(true, true);
    let (u, vt) = (svd.u.unwrap_or_default(), svd.v_t.unwrap_or_default());
    let mut d = Matrix3::identity();
    if (u * vt).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    u * d * vt
}
