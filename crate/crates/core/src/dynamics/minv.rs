use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dynamics::aba::aba;
use crate::dynamics::crba::crba;
use crate::error::{shape_err, Error, Result};
use crate::model::{Configuration, Model};
use crate::spatial::Motion;

/// How `M⁻¹B` is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MinvStrategy {
    /// Dense Cholesky factorization of the CRBA mass matrix.
    #[default]
    Cholesky,
    /// One ABA call per column with zero velocity and zero gravity.
    Aza,
}

/// Cholesky factor of the mass matrix, reusable across many solves.
#[derive(Clone, Debug)]
pub struct MassFactor {
    chol: Cholesky<f64, Dyn>,
}

impl MassFactor {
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        Cholesky::new(m)
            .map(|chol| Self { chol })
            .ok_or(Error::Singular("mass matrix"))
    }

    pub fn from_model(model: &Model, q: &Configuration<f64>) -> Result<Self> {
        Self::new(crba(model, q)?)
    }

    pub fn solve(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.chol.solve(b)
    }

    pub fn solve_in_place(&self, b: &mut DMatrix<f64>) {
        self.chol.solve_mut(b);
    }

    pub fn solve_vec(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    pub fn inverse(&self) -> DMatrix<f64> {
        self.chol.inverse()
    }
}

/// `M⁻¹b` via ABA with zero velocity and zero gravity.
pub fn aza(model: &Model, q: &Configuration<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let zero = DVector::zeros(model.nv());
    aba(model, q, &zero, b, Some(Motion::zero()))
}

/// `M⁻¹B`.
pub fn minv_apply(
    model: &Model,
    q: &Configuration<f64>,
    b: &DMatrix<f64>,
    strategy: MinvStrategy,
) -> Result<DMatrix<f64>> {
    if b.nrows() != model.nv() {
        return Err(shape_err("minv_apply", format!("{} rows", model.nv()), b.nrows()));
    }
    match strategy {
        MinvStrategy::Cholesky => Ok(MassFactor::from_model(model, q)?.solve(b)),
        MinvStrategy::Aza => {
            let mut out = DMatrix::zeros(b.nrows(), b.ncols());
            for c in 0..b.ncols() {
                out.set_column(c, &aza(model, q, &b.column(c).into_owned())?);
            }
            Ok(out)
        }
    }
}
