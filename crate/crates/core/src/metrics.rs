//! Accuracy metrics between a computed tensor and a reference.
//!
//! Relative errors divide by `max(|ref|, 1)`, which under-reports the
//! relative error of derivatives smaller than one in magnitude.

use crate::error::{shape_err, Result};
use crate::tensor::Tensor3;

/// Maximum and root-mean-square absolute and relative errors.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ErrorReport {
    pub mae: f64,
    pub rmsae: f64,
    pub mre: f64,
    pub rmsre: f64,
    /// Number of elements in the RMS denominators.
    pub count: usize,
}

impl ErrorReport {
    /// Combines the errors of a flat pair of slices.
    pub fn from_slices(a: &[f64], reference: &[f64]) -> Result<Self> {
        if a.len() != reference.len() {
            return Err(shape_err("error_report", reference.len(), a.len()));
        }
        let mut r = ErrorReport {
            count: a.len(),
            ..Default::default()
        };
        let (mut sum_abs, mut sum_rel) = (0.0, 0.0);
        for (&x, &y) in a.iter().zip(reference) {
            let abs = (x - y).abs();
            let rel = abs / y.abs().max(1.0);
            r.mae = r.mae.max(abs);
            r.mre = r.mre.max(rel);
            sum_abs += abs * abs;
            sum_rel += rel * rel;
        }
        if r.count > 0 {
            r.rmsae = (sum_abs / r.count as f64).sqrt();
            r.rmsre = (sum_rel / r.count as f64).sqrt();
        }
        Ok(r)
    }
}

/// Errors of `a` against `reference`; shapes must match.
///
/// For a stacked `n × 3n × 3n` Hessian the element count is `9n³`.
pub fn error_report(a: &Tensor3, reference: &Tensor3) -> Result<ErrorReport> {
    if a.dims() != reference.dims() {
        return Err(shape_err(
            "error_report",
            format!("{:?}", reference.dims()),
            format!("{:?}", a.dims()),
        ));
    }
    ErrorReport::from_slices(a.as_slice(), reference.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_tensors_have_zero_error() {
        let t = Tensor3::from_fn(2, 3, 4, |i, j, k| (i + 2 * j + 3 * k) as f64 - 4.0);
        let r = error_report(&t, &t).unwrap();
        assert_eq!((r.mae, r.rmsae, r.mre, r.rmsre, r.count), (0.0, 0.0, 0.0, 0.0, 24));
    }

    #[test]
    fn zero_reference_uses_unit_denominator() {
        let z = Tensor3::zeros(2, 2, 2);
        let c = Tensor3::from_fn(2, 2, 2, |_, _, _| 0.25);
        let r = error_report(&c, &z).unwrap();
        for v in [r.mae, r.rmsae, r.mre, r.rmsre] {
            assert!((v - 0.25).abs() < 1e-16);
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        assert!(error_report(&Tensor3::zeros(1, 2, 3), &Tensor3::zeros(1, 3, 2)).is_err());
    }

    #[test]
    fn empty_tensors_report_zero() {
        let e = Tensor3::zeros(0, 0, 0);
        assert_eq!(error_report(&e, &e).unwrap().count, 0);
    }
}
