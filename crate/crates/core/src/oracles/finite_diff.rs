//! Finite-difference reference derivatives.
//!
//! FD1 differences the dynamics map itself with central second-difference
//! stencils. FD2 differences an analytical first-order derivative once.

use nalgebra::{DMatrix, DVector};

use super::complex_step::{fill_tensor, DynamicsFn, EvalPoint, ForwardDynamics, InverseDynamics, SecondOrderSet, Var};
use crate::derivatives::{fd_fo, idsva_fo, FdSecondOrder, IdSecondOrder};
use crate::error::{Error, Result};
use crate::model::{Configuration, Model};
use crate::tensor::Tensor3;

/// Step sizes for the FD1 stencils: `h` along the column variable and `k`
/// along the page variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepConfig {
    pub h: f64,
    pub k: f64,
}

impl Default for StepConfig {
    fn default() -> Self {
        Self { h: 3e-4, k: 3e-4 }
    }
}

impl StepConfig {
    pub fn uniform(h: f64) -> Self {
        Self { h, k: h }
    }

    fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.k > 0.0 && self.h.is_finite() && self.k.is_finite()) {
            return Err(Error::InvalidArgument(format!("step sizes must be positive, got {self:?}")));
        }
        Ok(())
    }
}

/// Default FD2 step.
pub const FD2_STEP: f64 = 1e-5;

fn shifted(model: &Model, x: &EvalPoint<'_>, moves: &[(Var, f64)]) -> Result<(Configuration<f64>, DVector<f64>, DVector<f64>)> {
    let (mut q, mut v, mut u) = (x.q.clone(), x.v.clone(), x.u.clone());
    for &(var, eps) in moves {
        match var {
            Var::Config(g) => q = q.perturb_dof(model, g, eps)?,
            Var::Velocity(g) => v[g] += eps,
            Var::Input(g) => u[g] += eps,
        }
    }
    Ok((q, v, u))
}

fn eval_at(f: &impl DynamicsFn, model: &Model, x: &EvalPoint<'_>, moves: &[(Var, f64)]) -> Result<DVector<f64>> {
    let (q, v, u) = shifted(model, x, moves)?;
    f.eval(model, &q, &v, &u)
}

/// Second derivative by central differences, first along `col` then along
/// `page`. The page move is applied first so configuration pairs follow
/// `q · exp(ε_k E_k) · exp(ε_j E_j)`.
pub fn finite_diff1(
    f: &impl DynamicsFn,
    model: &Model,
    x: &EvalPoint<'_>,
    col: Var,
    page: Var,
    step: StepConfig,
) -> Result<DVector<f64>> {
    step.validate()?;
    if col == page {
        let h = step.h;
        let plus = eval_at(f, model, x, &[(col, h)])?;
        let mid = f.eval(model, x.q, x.v, x.u)?;
        let minus = eval_at(f, model, x, &[(col, -h)])?;
        return Ok((plus - mid * 2.0 + minus) / (h * h));
    }
    let (h, k) = (step.h, step.k);
    let g = |sj: f64, sk: f64| eval_at(f, model, x, &[(page, sk * k), (col, sj * h)]);
    Ok((g(1.0, 1.0)? - g(1.0, -1.0)? - g(-1.0, 1.0)? + g(-1.0, -1.0)?) / (4.0 * h * k))
}

/// All four second-order tensors by FD1.
pub fn finite_diff1_set(f: &impl DynamicsFn, model: &Model, x: &EvalPoint<'_>, step: StepConfig) -> Result<SecondOrderSet> {
    let n = model.nv();
    let so = |c: fn(usize) -> Var, p: fn(usize) -> Var| fill_tensor(n, |j, k| finite_diff1(f, model, x, c(j), p(k), step));
    Ok(SecondOrderSet {
        qq: so(Var::Config, Var::Config)?,
        vv: so(Var::Velocity, Var::Velocity)?,
        vq: so(Var::Velocity, Var::Config)?,
        uq: so(Var::Input, Var::Config)?,
    })
}

/// Second-order ID derivatives by FD1 over inverse dynamics.
pub fn finite_diff1_id_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
    step: StepConfig,
) -> Result<IdSecondOrder> {
    let x = EvalPoint { q, v: qd, u: qdd };
    Ok(finite_diff1_set(&InverseDynamics, model, &x, step)?.into_id())
}

/// Second-order FD derivatives by FD1 over forward dynamics.
pub fn finite_diff1_fd_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
    step: StepConfig,
) -> Result<FdSecondOrder> {
    let x = EvalPoint { q, v: qd, u: tau };
    Ok(finite_diff1_set(&ForwardDynamics, model, &x, step)?.into_fd())
}

/// Jacobians `(∂y/∂q, ∂y/∂v, ∂y/∂u)` of a dynamics map at a point.
pub type FirstOrderFn<'a> = dyn Fn(&Configuration<f64>, &DVector<f64>, &DVector<f64>) -> Result<[DMatrix<f64>; 3]> + 'a;

/// All four second-order tensors by one central difference of a
/// first-order derivative, taken along the page variable.
pub fn finite_diff2_set(model: &Model, x: &EvalPoint<'_>, first: &FirstOrderFn<'_>, h: f64) -> Result<SecondOrderSet> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    let n = model.nv();
    let mut set = SecondOrderSet {
        qq: Tensor3::zeros(n, n, n),
        vv: Tensor3::zeros(n, n, n),
        vq: Tensor3::zeros(n, n, n),
        uq: Tensor3::zeros(n, n, n),
    };
    let diff = |plus: &DMatrix<f64>, minus: &DMatrix<f64>, out: &mut Tensor3, k: usize| {
        out.page_mut(k).copy_from(&((plus - minus) / (2.0 * h)));
    };
    for k in 0..n {
        let (qp, ..) = shifted(model, x, &[(Var::Config(k), h)])?;
        let (qm, ..) = shifted(model, x, &[(Var::Config(k), -h)])?;
        let [dq_p, dv_p, du_p] = first(&qp, x.v, x.u)?;
        let [dq_m, dv_m, du_m] = first(&qm, x.v, x.u)?;
        diff(&dq_p, &dq_m, &mut set.qq, k);
        diff(&dv_p, &dv_m, &mut set.vq, k);
        diff(&du_p, &du_m, &mut set.uq, k);
        let (_, vp, _) = shifted(model, x, &[(Var::Velocity(k), h)])?;
        let (_, vm, _) = shifted(model, x, &[(Var::Velocity(k), -h)])?;
        let [_, dv_p, _] = first(x.q, &vp, x.u)?;
        let [_, dv_m, _] = first(x.q, &vm, x.u)?;
        diff(&dv_p, &dv_m, &mut set.vv, k);
    }
    Ok(set)
}

/// Second-order ID derivatives by differencing the analytical first-order
/// ID derivatives.
pub fn finite_diff2_id_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
    h: f64,
) -> Result<IdSecondOrder> {
    let x = EvalPoint { q, v: qd, u: qdd };
    let first = |q: &Configuration<f64>, v: &DVector<f64>, u: &DVector<f64>| {
        let fo = idsva_fo(model, q, v, u, None)?;
        Ok([fo.dtau_dq, fo.dtau_dqd, fo.dtau_dqdd])
    };
    Ok(finite_diff2_set(model, &x, &first, h)?.into_id())
}

/// Second-order FD derivatives by differencing the analytical first-order
/// FD derivatives.
pub fn finite_diff2_fd_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
    h: f64,
) -> Result<FdSecondOrder> {
    let x = EvalPoint { q, v: qd, u: tau };
    let first = |q: &Configuration<f64>, v: &DVector<f64>, u: &DVector<f64>| {
        let fo = fd_fo(model, q, v, u)?;
        Ok([fo.dfd_dq, fo.dfd_dqd, fo.dfd_dtau])
    };
    Ok(finite_diff2_set(model, &x, &first, h)?.into_fd())
}
