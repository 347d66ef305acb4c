//! Ground-frame kinematic and composite quantities shared by the derivative
//! algorithms.

use nalgebra::{DVector, Matrix6, Vector6};

use crate::error::Result;
use crate::model::{Configuration, Model};
use crate::scalar::Scalar;
use crate::spatial::{
    body_coriolis_doubled, cross_force_vec, cross_motion_vec, Motion, SpatialTransform,
};

/// Per-body quantities, all expressed in the ground frame.
///
/// DoF-indexed fields (`s`, `psi_dot`, `psi_ddot`, `phi_dot`) are flat over
/// the global DoF numbering; body `i` owns `model.dof_range(i)`.
///
/// `bc` holds the composite body-Coriolis matrices **without** the ½ factor,
/// i.e. `Σ (v×*)I − I(v×) + (Iv)×̄*` over the subtree.
#[derive(Clone, Debug)]
pub struct KinematicsCache<T: Scalar> {
    /// `⁰Xᵢ`.
    pub x: Vec<SpatialTransform<T>>,
    /// Motion subspace columns `Sᵢ`.
    pub s: Vec<Vector6<T>>,
    /// Body spatial inertia `𝓘ᵢ` in 6×6 form.
    pub inertia: Vec<Matrix6<T>>,
    /// Composite inertia `𝓘ᵢᶜ` of the subtree rooted at `i`.
    pub ic: Vec<Matrix6<T>>,
    pub v: Vec<Vector6<T>>,
    pub a: Vec<Vector6<T>>,
    /// `Ψ̇ᵢ = v_λ(i) × Sᵢ`.
    pub psi_dot: Vec<Vector6<T>>,
    /// `Ψ̈ᵢ = a_λ(i) × Sᵢ + v_λ(i) × Ψ̇ᵢ`.
    pub psi_ddot: Vec<Vector6<T>>,
    /// `Φ̇ᵢ = vᵢ × Sᵢ`.
    pub phi_dot: Vec<Vector6<T>>,
    /// Composite body-Coriolis matrix, unhalved.
    pub bc: Vec<Matrix6<T>>,
    /// Composite force `fᵢᶜ = Σ_{k⪰i} 𝓘ₖaₖ + vₖ×*𝓘ₖvₖ`.
    pub fc: Vec<Vector6<T>>,
}

impl<T: Scalar> KinematicsCache<T> {
    /// Configuration-dependent part: transforms, subspaces and inertias.
    /// Motion fields are zero until [`update_motion`](Self::update_motion).
    pub fn from_configuration(model: &Model, q: &Configuration<T>) -> Result<Self> {
        model.check_configuration(q)?;
        let nb = model.num_bodies();
        let nv = model.nv();
        let mut x: Vec<SpatialTransform<T>> = Vec::with_capacity(nb);
        let mut s = Vec::with_capacity(nv);
        let mut inertia = Vec::with_capacity(nb);
        for i in 0..nb {
            let local = model.local_transform(i, &q[i])?;
            let xi = match model.parent(i) {
                Some(p) => x[p].compose(&local),
                None => local,
            };
            for p in 0..model.joint(i).dof() {
                let axis = model.joint(i).axis(p).map(T::from_f64);
                s.push(xi.apply_motion_vec(&axis));
            }
            inertia.push(xi.apply_inertia(&model.body(i).inertia.map(T::from_f64)).to_matrix());
            x.push(xi);
        }
        let mut ic = inertia.clone();
        for i in (0..nb).rev() {
            if let Some(p) = model.parent(i) {
                let child = ic[i];
                ic[p] += child;
            }
        }
        Ok(Self {
            x,
            s,
            inertia,
            ic,
            v: vec![Vector6::zeros(); nb],
            a: vec![Vector6::zeros(); nb],
            psi_dot: vec![Vector6::zeros(); nv],
            psi_ddot: vec![Vector6::zeros(); nv],
            phi_dot: vec![Vector6::zeros(); nv],
            bc: vec![Matrix6::zeros(); nb],
            fc: vec![Vector6::zeros(); nb],
        })
    }

    /// Recomputes every velocity- and acceleration-dependent field for the
    /// configuration this cache was built with. `gravity` overrides the
    /// model's gravity (pass a zero motion for the zero-gravity variants).
    pub fn update_motion(
        &mut self,
        model: &Model,
        qd: &DVector<T>,
        qdd: &DVector<T>,
        gravity: Option<Motion<f64>>,
    ) -> Result<()> {
        model.check_len("velocity", qd.len())?;
        model.check_len("acceleration", qdd.len())?;
        let a0 = -gravity.unwrap_or_else(|| model.gravity()).0.map(T::from_f64);
        let zero = Vector6::zeros();
        for i in 0..model.num_bodies() {
            let (v_par, a_par) = match model.parent(i) {
                Some(p) => (self.v[p], self.a[p]),
                None => (zero, a0),
            };
            let mut vj = zero;
            let mut aj = zero;
            for g in model.dof_range(i) {
                vj += self.s[g] * qd[g];
                aj += self.s[g] * qdd[g];
            }
            let vi = v_par + vj;
            let ai = a_par + aj + cross_motion_vec(&vi, &vj);
            for g in model.dof_range(i) {
                let sg = self.s[g];
                let pd = cross_motion_vec(&v_par, &sg);
                self.psi_dot[g] = pd;
                self.psi_ddot[g] = cross_motion_vec(&a_par, &sg) + cross_motion_vec(&v_par, &pd);
                self.phi_dot[g] = cross_motion_vec(&vi, &sg);
            }
            let ii = &self.inertia[i];
            self.bc[i] = body_coriolis_doubled(ii, &vi);
            self.fc[i] = ii * ai + cross_force_vec(&vi, &(ii * vi));
            self.v[i] = vi;
            self.a[i] = ai;
        }
        for i in (0..model.num_bodies()).rev() {
            if let Some(p) = model.parent(i) {
                let (b, f) = (self.bc[i], self.fc[i]);
                self.bc[p] += b;
                self.fc[p] += f;
            }
        }
        Ok(())
    }
}

/// Builds the full cache for a state.
pub fn compute_kinematics_cache<T: Scalar>(
    model: &Model,
    q: &Configuration<T>,
    qd: &DVector<T>,
    qdd: &DVector<T>,
    gravity: Option<Motion<f64>>,
) -> Result<KinematicsCache<T>> {
    let mut c = KinematicsCache::from_configuration(model, q)?;
    c.update_motion(model, qd, qdd, gravity)?;
    Ok(c)
}
