//! First-order partial derivatives of inverse and forward dynamics.
//!
//! Configuration derivatives of multi-DoF joints are Lie derivatives along
//! the right-invariant generators, matching [`JointConfig::integrate`].
//!
//! With `Bᶜ` unhalved, the four ancestor-pair families are
//!
//! ```text
//! ∂τᵢ/∂qⱼ = Sᵢᵀ(Bᶜᵢ Ψ̇ⱼ + 𝓘ᶜᵢ Ψ̈ⱼ)                      j ⪯ i
//! ∂τⱼ/∂qᵢ = Sⱼᵀ(Bᶜᵢ Ψ̇ᵢ + 𝓘ᶜᵢ Ψ̈ᵢ + fᶜᵢ ×̄* Sᵢ)          j ≺ i
//! ∂τᵢ/∂q̇ⱼ = Sᵢᵀ(Bᶜᵢ Sⱼ + 𝓘ᶜᵢ(Ψ̇ⱼ + Φ̇ⱼ))                j ⪯ i
//! ∂τⱼ/∂q̇ᵢ = Sⱼᵀ(Bᶜᵢ Sᵢ + 𝓘ᶜᵢ(Ψ̇ᵢ + Φ̇ᵢ))                j ≺ i
//! ```
//!
//! [`JointConfig::integrate`]: crate::model::JointConfig::integrate

use nalgebra::{DMatrix, DVector, Vector6};

use crate::dynamics::{aba, KinematicsCache, MassFactor};
use crate::error::Result;
use crate::model::{Configuration, Model};
use crate::spatial::{cross_force_vec, cross_motion_vec, Motion};

/// First-order derivatives of inverse dynamics.
#[derive(Clone, Debug, PartialEq)]
pub struct IdFirstOrder {
    pub dtau_dq: DMatrix<f64>,
    pub dtau_dqd: DMatrix<f64>,
    /// `∂τ/∂q̈`, the mass matrix.
    pub dtau_dqdd: DMatrix<f64>,
}

/// First-order derivatives of forward dynamics at `q̈₀ = FD(q, q̇, τ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FdFirstOrder {
    pub qdd: DVector<f64>,
    pub dfd_dq: DMatrix<f64>,
    pub dfd_dqd: DMatrix<f64>,
    /// `∂FD/∂τ = M⁻¹`.
    pub dfd_dtau: DMatrix<f64>,
}

/// Which blocks [`idsva_fo_from_cache`] fills.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FoSelect {
    pub dq: bool,
    pub dqd: bool,
    pub mass: bool,
}

impl FoSelect {
    pub const ALL: FoSelect = FoSelect { dq: true, dqd: true, mass: true };
}

/// Analytical first-order ID derivatives.
pub fn idsva_fo(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    qdd: &DVector<f64>,
    gravity: Option<Motion<f64>>,
) -> Result<IdFirstOrder> {
    let cache = crate::dynamics::compute_kinematics_cache(model, q, qd, qdd, gravity)?;
    Ok(idsva_fo_from_cache(model, &cache, FoSelect::ALL))
}

/// First-order ID derivatives from a fully populated cache. Blocks not
/// selected are returned as zero matrices.
pub fn idsva_fo_from_cache(model: &Model, c: &KinematicsCache<f64>, sel: FoSelect) -> IdFirstOrder {
    let n = model.nv();
    let mut dq = DMatrix::zeros(n, n);
    let mut dqd = DMatrix::zeros(n, n);
    let mut mass = DMatrix::zeros(n, n);
    for i in 0..model.num_bodies() {
        let (ic, bc, fc) = (&c.ic[i], &c.bc[i], &c.fc[i]);
        for gp in model.dof_range(i) {
            let sp = c.s[gp];
            let t1 = bc.transpose() * sp;
            let t2 = ic * sp;
            let t3 = bc * c.psi_dot[gp] + ic * c.psi_ddot[gp] + cross_force_vec(&sp, fc);
            let t4 = bc * sp + ic * (c.psi_dot[gp] + c.phi_dot[gp]);
            for j in model.support(i) {
                for gt in model.dof_range(j) {
                    let st = c.s[gt];
                    if sel.dq {
                        dq[(gp, gt)] = t1.dot(&c.psi_dot[gt]) + t2.dot(&c.psi_ddot[gt]);
                        if j != i {
                            dq[(gt, gp)] = st.dot(&t3);
                        }
                    }
                    if sel.dqd {
                        dqd[(gp, gt)] = t1.dot(&st) + t2.dot(&(c.psi_dot[gt] + c.phi_dot[gt]));
                        if j != i {
                            dqd[(gt, gp)] = st.dot(&t4);
                        }
                    }
                    if sel.mass {
                        let m = st.dot(&t2);
                        mass[(gt, gp)] = m;
                        mass[(gp, gt)] = m;
                    }
                }
            }
        }
    }
    IdFirstOrder {
        dtau_dq: dq,
        dtau_dqd: dqd,
        dtau_dqdd: mass,
    }
}

/// `(∂M/∂q) b` by the zero-velocity, zero-gravity first-order pass:
/// element `(i, k)` is `Σⱼ ∂M_ij/∂q_k bⱼ`.
///
/// Holds a configuration-only cache so repeated products at the same `q`
/// cost `O(N d)` each.
pub struct Idfoza<'m> {
    model: &'m Model,
    cache: KinematicsCache<f64>,
    a: Vec<Vector6<f64>>,
    psi_ddot: Vec<Vector6<f64>>,
    fc: Vec<Vector6<f64>>,
}

impl<'m> Idfoza<'m> {
    pub fn new(model: &'m Model, q: &Configuration<f64>) -> Result<Self> {
        Ok(Self::from_cache(model, KinematicsCache::from_configuration(model, q)?))
    }

    /// Reuses the configuration part of an existing cache.
    pub fn from_cache(model: &'m Model, cache: KinematicsCache<f64>) -> Self {
        Self {
            model,
            cache,
            a: vec![Vector6::zeros(); model.num_bodies()],
            psi_ddot: vec![Vector6::zeros(); model.nv()],
            fc: vec![Vector6::zeros(); model.num_bodies()],
        }
    }

    /// Writes `(∂M/∂q) b` into `out` (`n × n`); every entry is overwritten.
    pub fn apply_into(&mut self, b: &[f64], out: &mut DMatrix<f64>) {
        let m = self.model;
        let c = &self.cache;
        debug_assert_eq!(b.len(), m.nv());
        for i in 0..m.num_bodies() {
            let a_par = m.parent(i).map_or(Vector6::zeros(), |p| self.a[p]);
            let mut ai = a_par;
            for g in m.dof_range(i) {
                ai += c.s[g] * b[g];
                self.psi_ddot[g] = cross_motion_vec(&a_par, &c.s[g]);
            }
            self.a[i] = ai;
            self.fc[i] = c.inertia[i] * ai;
        }
        for i in (0..m.num_bodies()).rev() {
            if let Some(p) = m.parent(i) {
                let f = self.fc[i];
                self.fc[p] += f;
            }
        }
        out.fill(0.0);
        for i in 0..m.num_bodies() {
            let ic = &c.ic[i];
            for gp in m.dof_range(i) {
                let t2 = ic * c.s[gp];
                let t3 = ic * self.psi_ddot[gp] + cross_force_vec(&c.s[gp], &self.fc[i]);
                for j in m.support(i) {
                    for gt in m.dof_range(j) {
                        out[(gp, gt)] = t2.dot(&self.psi_ddot[gt]);
                        if j != i {
                            out[(gt, gp)] = c.s[gt].dot(&t3);
                        }
                    }
                }
            }
        }
    }

    pub fn apply(&mut self, b: &[f64]) -> DMatrix<f64> {
        let n = self.model.nv();
        let mut out = DMatrix::zeros(n, n);
        self.apply_into(b, &mut out);
        out
    }
}

/// One-shot `(∂M/∂q) b`.
pub fn idfoza(model: &Model, q: &Configuration<f64>, b: &DVector<f64>) -> Result<DMatrix<f64>> {
    model.check_len("b", b.len())?;
    Ok(Idfoza::new(model, q)?.apply(b.as_slice()))
}

/// First-order FD derivatives together with the cache and factorization
/// they were computed from, for reuse by the second-order pass.
pub(crate) struct FdFoContext {
    pub fo: FdFirstOrder,
    pub cache: KinematicsCache<f64>,
    pub factor: MassFactor,
}

pub(crate) fn fd_fo_context(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
) -> Result<FdFoContext> {
    let qdd = aba(model, q, qd, tau, None)?;
    let cache = crate::dynamics::compute_kinematics_cache(model, q, qd, &qdd, None)?;
    let id = idsva_fo_from_cache(model, &cache, FoSelect::ALL);
    let factor = MassFactor::new(id.dtau_dqdd.clone())?;
    let dfd_dq = -factor.solve(&id.dtau_dq);
    let dfd_dqd = -factor.solve(&id.dtau_dqd);
    let dfd_dtau = factor.inverse();
    Ok(FdFoContext {
        fo: FdFirstOrder {
            qdd,
            dfd_dq,
            dfd_dqd,
            dfd_dtau,
        },
        cache,
        factor,
    })
}

/// First-order FD derivatives, `∂FD/∂u = −M⁻¹ ∂ID/∂u` at `q̈₀ = FD(q, q̇, τ)`.
pub fn fd_fo(
    model: &Model,
    q: &Configuration<f64>,
    qd: &DVector<f64>,
    tau: &DVector<f64>,
) -> Result<FdFirstOrder> {
    Ok(fd_fo_context(model, q, qd, tau)?.fo)
}
