//! Complex-step reference derivatives.
//!
//! A page variable is perturbed by `i2 h` and a column variable by `i1 h`;
//! the `i1 i2` part of the output divided by `h²` is the mixed second
//! derivative, free of subtractive cancellation. Configuration variables are
//! perturbed through the exponential map, `q · exp(E_k i2 h) · exp(E_j i1 h)`.

use nalgebra::DVector;

use super::bicomplex::BiComplex;
use crate::derivatives::{FdSecondOrder, IdFirstOrder, IdSecondOrder};
use crate::dynamics::{aba, rnea};
use crate::error::Result;
use crate::model::{Configuration, Model};
use crate::scalar::Scalar;
use crate::tensor::Tensor3;

/// Default complex step.
pub const COMPLEX_STEP: f64 = 1e-20;

/// A dynamics map `(q, v, u) ↦ y` that can be evaluated over any scalar.
pub trait DynamicsFn {
    fn eval<T: Scalar>(&self, model: &Model, q: &Configuration<T>, v: &DVector<T>, u: &DVector<T>)
        -> Result<DVector<T>>;
}

/// `τ = ID(q, q̇, q̈)` with the model's gravity.
#[derive(Clone, Copy, Debug, Default)]
pub struct InverseDynamics;

/// `q̈ = FD(q, q̇, τ)` with the model's gravity.
#[derive(Clone, Copy, Debug, Default)]
pub struct ForwardDynamics;

impl DynamicsFn for InverseDynamics {
    fn eval<T: Scalar>(&self, model: &Model, q: &Configuration<T>, v: &DVector<T>, u: &DVector<T>)
        -> Result<DVector<T>> {
        rnea(model, q, v, u, None)
    }
}

impl DynamicsFn for ForwardDynamics {
    fn eval<T: Scalar>(&self, model: &Model, q: &Configuration<T>, v: &DVector<T>, u: &DVector<T>)
        -> Result<DVector<T>> {
        aba(model, q, v, u, None)
    }
}

/// Differentiation variable: a configuration DoF, a velocity entry, or an
/// entry of the third input (`q̈` for ID, `τ` for FD).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Config(usize),
    Velocity(usize),
    Input(usize),
}

/// A state point `(q, v, u)` in the inputs of a [`DynamicsFn`].
#[derive(Clone, Debug)]
pub struct EvalPoint<'a> {
    pub q: &'a Configuration<f64>,
    pub v: &'a DVector<f64>,
    pub u: &'a DVector<f64>,
}

struct Lifted<T: Scalar> {
    q: Configuration<T>,
    v: DVector<T>,
    u: DVector<T>,
}

impl<T: Scalar> Lifted<T> {
    fn new(x: &EvalPoint<'_>) -> Self {
        Self {
            q: x.q.lift(),
            v: x.v.map(T::from_f64),
            u: x.u.map(T::from_f64),
        }
    }

    fn perturb(&mut self, model: &Model, var: Var, eps: T) -> Result<()> {
        match var {
            Var::Config(g) => self.q = self.q.perturb_dof(model, g, eps)?,
            Var::Velocity(g) => self.v[g] += eps,
            Var::Input(g) => self.u[g] += eps,
        }
        Ok(())
    }

    fn eval(&self, f: &impl DynamicsFn, model: &Model) -> Result<DVector<T>> {
        f.eval(model, &self.q, &self.v, &self.u)
    }
}

/// First derivative of every output with respect to `var`.
pub fn bicomplex_fo(f: &impl DynamicsFn, model: &Model, x: &EvalPoint<'_>, var: Var, h: f64) -> Result<DVector<f64>> {
    let mut p = Lifted::<BiComplex>::new(x);
    p.perturb(model, var, BiComplex::new(0.0, h, 0.0, 0.0))?;
    Ok(p.eval(f, model)?.map(|y| y.i1 / h))
}

/// Second derivative of every output, first along `col` then along `page`.
pub fn bicomplex_so(
    f: &impl DynamicsFn,
    model: &Model,
    x: &EvalPoint<'_>,
    col: Var,
    page: Var,
    h: f64,
) -> Result<DVector<f64>> {
    let mut p = Lifted::<BiComplex>::new(x);
    p.perturb(model, page, BiComplex::new(0.0, 0.0, h, 0.0))?;
    p.perturb(model, col, BiComplex::new(0.0, h, 0.0, 0.0))?;
    Ok(p.eval(f, model)?.map(|y| y.i12 / (h * h)))
}

/// The four second-order tensors of a dynamics map: `(q, q)`, `(v, v)`,
/// `v`-column `q`-page, and `u`-column `q`-page.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderSet {
    pub qq: Tensor3,
    pub vv: Tensor3,
    pub vq: Tensor3,
    pub uq: Tensor3,
}

impl SecondOrderSet {
    pub fn into_id(self) -> IdSecondOrder {
        IdSecondOrder {
            d2tau_dq2: self.qq,
            d2tau_dqd2: self.vv,
            d2tau_dq_dqd: self.vq,
            dm_dq: self.uq,
        }
    }

    pub fn into_fd(self) -> FdSecondOrder {
        FdSecondOrder {
            d2fd_dq2: self.qq,
            d2fd_dqd2: self.vv,
            d2fd_dqd_dq: self.vq.transpose_r(),
            d2fd_dq_dqd: self.vq,
            dminv_dq: self.uq,
        }
    }
}

/// Fills an `n × n × n` tensor column by column from a per-(column, page)
/// output vector.
pub(crate) fn fill_tensor(n: usize, mut f: impl FnMut(usize, usize) -> Result<DVector<f64>>) -> Result<Tensor3> {
    let mut t = Tensor3::zeros(n, n, n);
    for k in 0..n {
        for j in 0..n {
            let y = f(j, k)?;
            for i in 0..n {
                t[(i, j, k)] = y[i];
            }
        }
    }
    Ok(t)
}

/// All four second-order tensors by complex step.
pub fn bicomplex_so_set(f: &impl DynamicsFn, model: &Model, x: &EvalPoint<'_>, h: f64) -> Result<SecondOrderSet> {
    let n = model.nv();
    let so = |c: fn(usize) -> Var, p: fn(usize) -> Var| {
        fill_tensor(n, |j, k| bicomplex_so(f, model, x, c(j), p(k), h))
    };
    Ok(SecondOrderSet {
        qq: so(Var::Config, Var::Config)?,
        vv: so(Var::Velocity, Var::Velocity)?,
        vq: so(Var::Velocity, Var::Config)?,
        uq: so(Var::Input, Var::Config)?,
    })
}

/// Reference second-order ID derivatives.
pub fn bicomplex_id_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
) -> Result<IdSecondOrder> {
    let x = EvalPoint { q, v: qd, u: qdd };
    Ok(bicomplex_so_set(&InverseDynamics, model, &x, COMPLEX_STEP)?.into_id())
}

/// Reference second-order FD derivatives.
pub fn bicomplex_fd_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
) -> Result<FdSecondOrder> {
    let x = EvalPoint { q, v: qd, u: tau };
    Ok(bicomplex_so_set(&ForwardDynamics, model, &x, COMPLEX_STEP)?.into_fd())
}

/// Reference first-order ID derivatives.
pub fn bicomplex_id_fo(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
) -> Result<IdFirstOrder> {
    let x = EvalPoint { q, v: qd, u: qdd };
    let n = model.nv();
    let jac = |var: fn(usize) -> Var| -> Result<nalgebra::DMatrix<f64>> {
        let mut m = nalgebra::DMatrix::zeros(n, n);
        for j in 0..n {
            m.set_column(j, &bicomplex_fo(&InverseDynamics, model, &x, var(j), COMPLEX_STEP)?);
        }
        Ok(m)
    };
    Ok(IdFirstOrder {
        dtau_dq: jac(Var::Config)?,
        dtau_dqd: jac(Var::Velocity)?,
        dtau_dqdd: jac(Var::Input)?,
    })
}
