use nalgebra::{DVector, Vector6};

use crate::error::Result;
use crate::model::{Configuration, Model};
use crate::scalar::Scalar;
use crate::spatial::{cross_motion_vec, Motion, SpatialTransform};

/// Recursive Newton-Euler inverse dynamics, `τ = M(q)q̈ + C(q,q̇)q̇ + g(q)`.
///
/// Gravity enters through the root acceleration `a₀ = −a_g`; `gravity`
/// overrides the model's value.
pub fn rnea<T: Scalar>(
    model: &Model,
    q: &Configuration<T>,
    qd: &DVector<T>,
    qdd: &DVector<T>,
    gravity: Option<Motion<f64>>,
) -> Result<DVector<T>> {
    model.check_configuration(q)?;
    model.check_len("velocity", qd.len())?;
    model.check_len("acceleration", qdd.len())?;
    let nb = model.num_bodies();
    let a0 = -gravity.unwrap_or_else(|| model.gravity()).0.map(T::from_f64);
    let mut x: Vec<SpatialTransform<T>> = Vec::with_capacity(nb);
    let mut v: Vec<Vector6<T>> = Vec::with_capacity(nb);
    let mut a: Vec<Vector6<T>> = Vec::with_capacity(nb);
    let mut f: Vec<Vector6<T>> = Vec::with_capacity(nb);
    let mut s: Vec<Vector6<T>> = Vec::with_capacity(model.nv());
    for i in 0..nb {
        let local = model.local_transform(i, &q[i])?;
        let (xi, v_par, a_par) = match model.parent(i) {
            Some(p) => (x[p].compose(&local), v[p], a[p]),
            None => (local, Vector6::zeros(), a0),
        };
        let mut vj = Vector6::zeros();
        let mut aj = Vector6::zeros();
        for g in model.dof_range(i) {
            let sg = xi.apply_motion_vec(&model.joint(i).axis(g - model.dof_offset(i)).map(T::from_f64));
            vj += sg * qd[g];
            aj += sg * qdd[g];
            s.push(sg);
        }
        let vi = v_par + vj;
        let ai = a_par + aj + cross_motion_vec(&vi, &vj);
        let inertia = xi.apply_inertia(&model.body(i).inertia.map(T::from_f64));
        let fi = inertia.apply(&Motion(ai)).0
            + Motion(vi).cross_force(&inertia.apply(&Motion(vi))).0;
        x.push(xi);
        v.push(vi);
        a.push(ai);
        f.push(fi);
    }
    let mut tau = DVector::from_element(model.nv(), T::zero());
    for i in (0..nb).rev() {
        for g in model.dof_range(i) {
            tau[g] = s[g].dot(&f[i]);
        }
        if let Some(p) = model.parent(i) {
            let fi = f[i];
            f[p] += fi;
        }
    }
    Ok(tau)
}
