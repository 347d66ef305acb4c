//! Second-order partial derivatives of inverse dynamics.
//!
//! Tensor conventions: element `(i, j, k)` is the derivative of `τᵢ`
//! first with respect to the column variable `j`, then the page variable
//! `k`. For configuration pairs this is `L_{X_k}(L_{X_j} τᵢ)`, which is not
//! symmetric in `j, k` for multi-DoF joints.
//!
//! The traversal visits every triple `i ⪰ j ⪰ k` once and fills all
//! symmetric slots from it, so the cost is `O(N d³)` in the tree depth `d`.

use nalgebra::{DVector, Matrix6, Vector6};

use crate::dynamics::{compute_kinematics_cache, KinematicsCache};
use crate::error::{Error, Result};
use crate::model::{Configuration, Model};
use crate::spatial::{body_coriolis_doubled, cross_force_mat, cross_motion_mat, crossbar_star_mat, Motion};
use crate::tensor::Tensor3;

/// Second-order ID derivatives. All tensors are `n × n × n`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdSecondOrder {
    pub d2tau_dq2: Tensor3,
    pub d2tau_dqd2: Tensor3,
    /// Columns `q̇`, pages `q`: `∂/∂q_k (∂τᵢ/∂q̇ⱼ)`.
    pub d2tau_dq_dqd: Tensor3,
    /// `∂M_ij/∂q_k`, equal to the `q̈`-column, `q`-page cross derivative.
    pub dm_dq: Tensor3,
}

impl IdSecondOrder {
    pub fn zeros(n: usize) -> Self {
        Self {
            d2tau_dq2: Tensor3::zeros(n, n, n),
            d2tau_dqd2: Tensor3::zeros(n, n, n),
            d2tau_dq_dqd: Tensor3::zeros(n, n, n),
            dm_dq: Tensor3::zeros(n, n, n),
        }
    }

    pub fn nv(&self) -> usize {
        self.d2tau_dq2.dims().0
    }

    /// Columns `q`, pages `q̇`.
    pub fn d2tau_dqd_dq(&self) -> Tensor3 {
        self.d2tau_dq_dqd.transpose_r()
    }

    /// Full Hessian over `x = (q, q̇, q̈)` as an `n × 3n × 3n` tensor.
    pub fn stacked(&self) -> Tensor3 {
        let n = self.nv();
        stack_blocks(n, |cb, pb| match (cb, pb) {
            (0, 0) => Some((&self.d2tau_dq2, false)),
            (1, 1) => Some((&self.d2tau_dqd2, false)),
            (1, 0) => Some((&self.d2tau_dq_dqd, false)),
            (0, 1) => Some((&self.d2tau_dq_dqd, true)),
            (2, 0) => Some((&self.dm_dq, false)),
            (0, 2) => Some((&self.dm_dq, true)),
            _ => None,
        })
    }
}

/// Assembles an `n × 3n × 3n` tensor from `n³` blocks indexed by
/// (column block, page block); `true` takes the `R̃` transpose.
pub(crate) fn stack_blocks<'a>(n: usize, block: impl Fn(usize, usize) -> Option<(&'a Tensor3, bool)>) -> Tensor3 {
    let mut out = Tensor3::zeros(n, 3 * n, 3 * n);
    for cb in 0..3 {
        for pb in 0..3 {
            let Some((t, swap)) = block(cb, pb) else { continue };
            for k in 0..n {
                for j in 0..n {
                    for i in 0..n {
                        out[(i, cb * n + j, pb * n + k)] = if swap { t[(i, k, j)] } else { t[(i, j, k)] };
                    }
                }
            }
        }
    }
    out
}

/// Reusable output buffers for [`idsva_so_into`].
///
/// Only topology-determined slots are written, so the buffers are zeroed
/// once per model and then overwritten in place on every call.
#[derive(Clone, Debug)]
pub struct IdsvaSoWorkspace {
    out: IdSecondOrder,
    topology: Vec<(usize, usize)>,
}

impl IdsvaSoWorkspace {
    pub fn new(model: &Model) -> Self {
        Self {
            out: IdSecondOrder::zeros(model.nv()),
            topology: topology_key(model),
        }
    }

    pub fn result(&self) -> &IdSecondOrder {
        &self.out
    }

    pub fn into_result(self) -> IdSecondOrder {
        self.out
    }

    fn prepare(&mut self, model: &Model) {
        let key = topology_key(model);
        if key != self.topology {
            *self = Self::new(model);
        }
    }
}

fn topology_key(model: &Model) -> Vec<(usize, usize)> {
    (0..model.num_bodies())
        .map(|i| (model.parent(i).map_or(0, |p| p + 1), model.joint(i).dof()))
        .collect()
}

/// Analytical second-order ID derivatives at `(q, q̇, q̈)` with the model's
/// gravity.
pub fn idsva_so(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
) -> Result<IdSecondOrder> {
    let cache = compute_kinematics_cache(model, q, qd, qdd, None)?;
    let mut ws = IdsvaSoWorkspace::new(model);
    idsva_so_into(model, &cache, &mut ws)?;
    Ok(ws.into_result())
}

/// `∂M/∂q` alone. Depends on `q` only.
pub fn d2tau_cross_qdd(model: &Model, q: &Configuration<f64>) -> Result<Tensor3> {
    let zero = DVector::zeros(model.nv());
    Ok(idsva_so(model, q, &zero, &zero)?.dm_dq)
}

/// Companion orderings recovered by index transposition: returns the
/// `q`-column, `q̇`-page mixed tensor and `∂²τ/∂q̈∂q` (columns `q`, pages `q̈`).
pub fn so_symmetry_views(so: &IdSecondOrder) -> (Tensor3, Tensor3) {
    (so.d2tau_dq_dqd.transpose_r(), so.dm_dq.transpose_r())
}

/// Runs the second-order pass on a fully populated cache, writing into the
/// workspace buffers.
pub fn idsva_so_into(model: &Model, c: &KinematicsCache<f64>, ws: &mut IdsvaSoWorkspace) -> Result<()> {
    if c.s.len() != model.nv() || c.ic.len() != model.num_bodies() {
        return Err(Error::InvalidArgument("kinematics cache does not belong to this model".into()));
    }
    ws.prepare(model);
    let IdSecondOrder {
        d2tau_dq2: qq,
        d2tau_dqd2: vv,
        d2tau_dq_dqd: mixed,
        dm_dq: dm,
    } = &mut ws.out;

    // SAFETY (all writes below): every index is a DoF index < nv, and all
    // four tensors are nv × nv × nv.
    macro_rules! put {
        ($t:expr, $a:expr, $b:expr, $c:expr, $v:expr) => {
            unsafe { $t.set_unchecked($a, $b, $c, $v) }
        };
    }
    macro_rules! get {
        ($t:expr, $a:expr, $b:expr, $c:expr) => {
            unsafe { $t.get_unchecked($a, $b, $c) }
        };
    }

    for i in 0..model.num_bodies() {
        let ic = &c.ic[i];
        let bc = &c.bc[i];
        let fc = &c.fc[i];
        for p in model.dof_range(i) {
            let sp = c.s[p];
            let psid_p = c.psi_dot[p];
            let b_sp = body_coriolis_doubled(ic, &sp);
            let b_psid = body_coriolis_doubled(ic, &psid_p);
            let sp_cross = cross_motion_mat(&sp);
            let sp_cross_star = cross_force_mat(&sp);
            let a0 = crossbar_star_mat(&(ic * sp));
            let a1 = sp_cross_star * ic - ic * sp_cross;
            let a2 = a0 * 2.0 - b_sp;
            let a3 = b_psid + sp_cross_star * bc - bc * sp_cross;
            let a4 = crossbar_star_mat(&(bc.transpose() * sp));
            let a5 = crossbar_star_mat(&(bc * psid_p + ic * c.psi_ddot[p] + sp_cross_star * fc));
            let a6 = sp_cross_star * ic + a0;
            let a7 = crossbar_star_mat(&(bc * sp + ic * (psid_p + c.phi_dot[p])));
            let b_sp_t: Matrix6<f64> = b_sp.transpose();

            for j in model.support(i) {
                for t in model.dof_range(j) {
                    let st = c.s[t];
                    let psid_t = c.psi_dot[t];
                    let psidd_t = c.psi_ddot[t];
                    let u1 = a3.tr_mul(&st);
                    let u2 = a1.tr_mul(&st);
                    let u3 = a3 * psid_t + a1 * psidd_t + a5 * st;
                    let u4 = a6 * st;
                    let u5 = a2 * psid_t + a4 * st;
                    let u6 = b_sp * psid_t + a7 * st;
                    let u7 = a3 * st + a1 * (psid_t + c.phi_dot[t]);
                    let u8 = a4 * st - b_sp_t * psid_t;
                    let u9 = a0 * st;
                    let u10 = b_sp * st;
                    let u11 = b_sp_t * st;
                    let u12 = a1 * st;

                    for k in model.support(j) {
                        for r in model.dof_range(k) {
                            let sr = c.s[r];
                            let psid_r = c.psi_dot[r];
                            let psidd_r = c.psi_ddot[r];
                            let vel_r: Vector6<f64> = c.phi_dot[r] + psid_r;
                            let p1 = u11.dot(&psid_r);
                            let p2 = u8.dot(&psid_r) + u9.dot(&psidd_r);

                            put!(qq, p, t, r, p2);
                            put!(mixed, p, t, r, -p1);

                            if j != i {
                                let v = u1.dot(&psid_r) + u2.dot(&psidd_r);
                                put!(qq, t, r, p, v);
                                put!(qq, t, p, r, v);
                                put!(mixed, t, r, p, u1.dot(&sr) + u2.dot(&vel_r));
                                put!(mixed, t, p, r, p1);
                                let v = u11.dot(&sr);
                                put!(vv, t, r, p, v);
                                put!(vv, t, p, r, v);
                                let v = sr.dot(&u12);
                                put!(dm, r, t, p, v);
                                put!(dm, t, r, p, v);
                            }

                            if k != j {
                                put!(qq, p, r, t, p2);
                                put!(qq, r, p, t, sr.dot(&u3));
                                let v = -u11.dot(&sr);
                                put!(vv, p, t, r, v);
                                put!(vv, p, r, t, v);
                                put!(mixed, p, r, t, sr.dot(&u5) + u9.dot(&vel_r));
                                put!(mixed, r, p, t, sr.dot(&u6));
                                let v = sr.dot(&u9);
                                put!(dm, r, p, t, v);
                                put!(dm, p, r, t, v);
                                if j != i {
                                    let v = get!(qq, r, p, t);
                                    put!(qq, r, t, p, v);
                                    put!(mixed, r, t, p, sr.dot(&u7));
                                    let v = sr.dot(&u10);
                                    put!(vv, r, p, t, v);
                                    put!(vv, r, t, p, v);
                                } else {
                                    put!(vv, r, t, p, sr.dot(&u4));
                                }
                            } else {
                                put!(vv, p, t, r, -u2.dot(&sr));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Convenience wrapper with an explicit gravity override.
pub fn idsva_so_with_gravity(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
    gravity: Motion<f64>,
) -> Result<IdSecondOrder> {
    let cache = compute_kinematics_cache(model, q, qd, qdd, Some(gravity))?;
    let mut ws = IdsvaSoWorkspace::new(model);
    idsva_so_into(model, &cache, &mut ws)?;
    Ok(ws.into_result())
}
