use nalgebra::{DVector, Matrix6, Vector6};

use crate::error::{Error, Result};
use crate::model::{Configuration, Model};
use crate::scalar::Scalar;
use crate::spatial::{cross_force_vec, cross_motion_vec, Motion, SpatialTransform};

/// In-place LDLᵀ factorization of a small symmetric positive-definite
/// matrix stored row-major in `d`, followed by solves for each right-hand
/// side. Used for the joint-space articulated inertia `D = SᵀIᴬS`.
fn ldl_inverse<T: Scalar>(d: &mut [T], n: usize) -> Result<Vec<T>> {
    let mut diag = vec![T::zero(); n];
    // Unit lower factor stored in the strict lower triangle of `d`.
    for j in 0..n {
        let mut dj = d[j * n + j];
        for k in 0..j {
            dj -= d[j * n + k] * d[j * n + k] * diag[k];
        }
        let re = dj.re();
        if !(re > 0.0 && re.is_finite()) {
            return Err(Error::Singular("articulated joint inertia"));
        }
        diag[j] = dj;
        for i in j + 1..n {
            let mut lij = d[i * n + j];
            for k in 0..j {
                lij -= d[i * n + k] * d[j * n + k] * diag[k];
            }
            d[i * n + j] = lij / dj;
        }
    }
    let mut inv = vec![T::zero(); n * n];
    for c in 0..n {
        let mut y = vec![T::zero(); n];
        y[c] = T::one();
        for i in 0..n {
            for k in 0..i {
                let t = d[i * n + k] * y[k];
                y[i] -= t;
            }
        }
        for i in 0..n {
            y[i] /= diag[i];
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let t = d[k * n + i] * y[k];
                y[i] -= t;
            }
        }
        for r in 0..n {
            inv[r * n + c] = y[r];
        }
    }
    Ok(inv)
}

/// Articulated-body forward dynamics, `q̈ = M⁻¹(τ − C q̇ − g)`, with
/// ground-frame articulated inertias.
pub fn aba<T: Scalar>(
    model: &Model,
    q: &Configuration<T>,
    qd: &DVector<T>,
    tau: &DVector<T>,
    gravity: Option<Motion<f64>>,
) -> Result<DVector<T>> {
    model.check_configuration(q)?;
    model.check_len("velocity", qd.len())?;
    model.check_len("torque", tau.len())?;
    let nb = model.num_bodies();
    let a0 = -gravity.unwrap_or_else(|| model.gravity()).0.map(T::from_f64);

    let mut x: Vec<SpatialTransform<T>> = Vec::with_capacity(nb);
    let mut v: Vec<Vector6<T>> = Vec::with_capacity(nb);
    let mut c: Vec<Vector6<T>> = Vec::with_capacity(nb);
    let mut ia: Vec<Matrix6<T>> = Vec::with_capacity(nb);
    let mut pa: Vec<Vector6<T>> = Vec::with_capacity(nb);
    let mut s: Vec<Vector6<T>> = Vec::with_capacity(model.nv());
    for i in 0..nb {
        let local = model.local_transform(i, &q[i])?;
        let (xi, v_par) = match model.parent(i) {
            Some(p) => (x[p].compose(&local), v[p]),
            None => (local, Vector6::zeros()),
        };
        let mut vj = Vector6::zeros();
        for g in model.dof_range(i) {
            let sg = xi.apply_motion_vec(&model.joint(i).axis(g - model.dof_offset(i)).map(T::from_f64));
            vj += sg * qd[g];
            s.push(sg);
        }
        let vi = v_par + vj;
        let inertia = xi.apply_inertia(&model.body(i).inertia.map(T::from_f64)).to_matrix();
        c.push(cross_motion_vec(&vi, &vj));
        pa.push(cross_force_vec(&vi, &(inertia * vi)));
        ia.push(inertia);
        x.push(xi);
        v.push(vi);
    }

    // Per body: U = IᴬS, D⁻¹ and u = τ − Sᵀpᴬ, kept for the forward sweep.
    let mut u_cols: Vec<Vector6<T>> = vec![Vector6::zeros(); model.nv()];
    let mut dinv: Vec<Vec<T>> = vec![Vec::new(); nb];
    let mut u_bias: Vec<T> = vec![T::zero(); model.nv()];
    for i in (0..nb).rev() {
        let r = model.dof_range(i);
        let n = r.len();
        let off = r.start;
        for g in r.clone() {
            u_cols[g] = ia[i] * s[g];
            u_bias[g] = tau[g] - s[g].dot(&pa[i]);
        }
        let mut d = vec![T::zero(); n * n];
        for a in 0..n {
            for b in 0..n {
                d[a * n + b] = s[off + a].dot(&u_cols[off + b]);
            }
        }
        let di = ldl_inverse(&mut d, n)?;
        if let Some(p) = model.parent(i) {
            let mut ia_child = ia[i];
            let mut p_child = pa[i];
            for a in 0..n {
                let mut w = Vector6::zeros();
                let mut ub = T::zero();
                for b in 0..n {
                    w += u_cols[off + b] * di[a * n + b];
                    ub += di[a * n + b] * u_bias[off + b];
                }
                // w = U D⁻¹ column a (D⁻¹ symmetric).
                ia_child -= w * u_cols[off + a].transpose();
                p_child += u_cols[off + a] * ub;
            }
            p_child += ia_child * c[i];
            ia[p] += ia_child;
            pa[p] += p_child;
        }
        dinv[i] = di;
    }

    let mut qdd = DVector::from_element(model.nv(), T::zero());
    let mut a: Vec<Vector6<T>> = Vec::with_capacity(nb);
    for i in 0..nb {
        let a_par = model.parent(i).map_or(a0, |p| a[p]);
        let ap = a_par + c[i];
        let r = model.dof_range(i);
        let n = r.len();
        let off = r.start;
        let mut ai = ap;
        for row in 0..n {
            let mut acc = T::zero();
            for b in 0..n {
                acc += dinv[i][row * n + b] * (u_bias[off + b] - u_cols[off + b].dot(&ap));
            }
            qdd[off + row] = acc;
        }
        for g in r {
            ai += s[g] * qdd[g];
        }
        a.push(ai);
    }
    Ok(qdd)
}
