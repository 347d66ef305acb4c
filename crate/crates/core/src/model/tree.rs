use std::ops::Index;

use nalgebra::{DVector, Vector3};
use rand::Rng;

use crate::error::{Error, Result};
use crate::model::joint::{JointConfig, JointKind};
use crate::scalar::Scalar;
use crate::spatial::{Motion, SpatialInertia, SpatialTransform};

/// Standard gravity as a spatial acceleration, pointing along -z.
pub fn default_gravity() -> Motion<f64> {
    Motion::new(Vector3::zeros(), Vector3::new(0.0, 0.0, -9.81))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Body {
    pub name: String,
    /// Parent body index, `None` for a body attached to the fixed root.
    pub parent: Option<usize>,
    pub joint: JointKind,
    /// Pose of the joint frame in the parent body frame.
    pub placement: SpatialTransform<f64>,
    /// Inertia in the body frame.
    pub inertia: SpatialInertia<f64>,
}

/// Kinematic tree with bodies numbered so that parents precede children.
#[derive(Clone, Debug)]
pub struct Model {
    bodies: Vec<Body>,
    gravity: Motion<f64>,
    offsets: Vec<usize>,
    nv: usize,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
}

impl Model {
    pub fn new(bodies: Vec<Body>, gravity: Motion<f64>) -> Result<Self> {
        if bodies.is_empty() {
            return Err(Error::InvalidModel("model has no bodies".into()));
        }
        let mut offsets = Vec::with_capacity(bodies.len());
        let mut children = vec![Vec::new(); bodies.len()];
        let mut depth = Vec::with_capacity(bodies.len());
        let mut nv = 0;
        for (i, b) in bodies.iter().enumerate() {
            if let Some(p) = b.parent {
                if p >= i {
                    return Err(Error::InvalidModel(format!(
                        "body {i} ('{}') has parent {p}; parents must precede children",
                        b.name
                    )));
                }
                children[p].push(i);
                depth.push(depth[p] + 1);
            } else {
                depth.push(1);
            }
            offsets.push(nv);
            nv += b.joint.dof();
        }
        Ok(Self {
            bodies,
            gravity,
            offsets,
            nv,
            children,
            depth,
        })
    }

    /// Number of bodies (and joints), `N`.
    #[inline]
    pub fn num_bodies(&self) -> usize {
        self.bodies.len()
    }

    /// Total degrees of freedom, `n`.
    #[inline]
    pub fn nv(&self) -> usize {
        self.nv
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    #[inline]
    pub fn body(&self, i: usize) -> &Body {
        &self.bodies[i]
    }

    #[inline]
    pub fn parent(&self, i: usize) -> Option<usize> {
        self.bodies[i].parent
    }

    #[inline]
    pub fn joint(&self, i: usize) -> JointKind {
        self.bodies[i].joint
    }

    /// First global DoF index of body `i`.
    #[inline]
    pub fn dof_offset(&self, i: usize) -> usize {
        self.offsets[i]
    }

    #[inline]
    pub fn dof_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i] + self.bodies[i].joint.dof()
    }

    /// Body owning global DoF `g`, and the local index within that joint.
    pub fn dof_owner(&self, g: usize) -> (usize, usize) {
        let i = self.offsets.partition_point(|&o| o <= g) - 1;
        (i, g - self.offsets[i])
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    /// Number of bodies on the path from the root to `i`, inclusive.
    pub fn depth(&self, i: usize) -> usize {
        self.depth[i]
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    /// `i` followed by its ancestors up to the root.
    pub fn support(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        std::iter::successors(Some(i), move |&j| self.bodies[j].parent)
    }

    /// `j ⪯ i`: `j` lies on the path from the root to `i`.
    pub fn is_ancestor_or_self(&self, j: usize, i: usize) -> bool {
        self.support(i).any(|k| k == j)
    }

    /// Parent array with 1-based body numbers and 0 for the root.
    pub fn parent_array(&self) -> Vec<usize> {
        self.bodies.iter().map(|b| b.parent.map_or(0, |p| p + 1)).collect()
    }

    pub fn gravity(&self) -> Motion<f64> {
        self.gravity
    }

    pub fn set_gravity(&mut self, g: Motion<f64>) {
        self.gravity = g;
    }

    /// Whether every joint has a single DoF.
    pub fn all_single_dof(&self) -> bool {
        self.bodies.iter().all(|b| b.joint.dof() == 1)
    }

    pub fn neutral_configuration(&self) -> Configuration<f64> {
        Configuration(self.bodies.iter().map(|b| b.joint.neutral_config()).collect())
    }

    pub fn random_configuration(&self, rng: &mut impl Rng) -> Configuration<f64> {
        Configuration(self.bodies.iter().map(|b| b.joint.random_config(rng)).collect())
    }

    /// Random configuration, velocity and acceleration with rates drawn
    /// uniformly from `[-1, 1]`.
    pub fn random_state(&self, rng: &mut impl Rng) -> State {
        let q = self.random_configuration(rng);
        let qd = DVector::from_fn(self.nv, |_, _| rng.gen_range(-1.0..1.0));
        let qdd = DVector::from_fn(self.nv, |_, _| rng.gen_range(-1.0..1.0));
        State { q, qd, qdd }
    }

    /// Checks that `q` has one configuration of the right shape per joint.
    pub fn check_configuration<T: Scalar>(&self, q: &Configuration<T>) -> Result<()> {
        if q.0.len() != self.num_bodies() {
            return Err(Error::InvalidArgument(format!(
                "configuration has {} joints, model has {}",
                q.0.len(),
                self.num_bodies()
            )));
        }
        for (i, (c, b)) in q.0.iter().zip(&self.bodies).enumerate() {
            if c.dof() != b.joint.dof() {
                return Err(Error::BadConfig {
                    joint: i,
                    reason: format!("{} expects {} DoF, got {}", b.joint, b.joint.dof(), c.dof()),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, what: &str, len: usize) -> Result<()> {
        if len != self.nv {
            return Err(Error::InvalidArgument(format!(
                "{what} has length {len}, model has {} DoF",
                self.nv
            )));
        }
        Ok(())
    }

    /// Joint transform of body `i` composed with its placement.
    pub fn local_transform<T: Scalar>(&self, i: usize, q: &JointConfig<T>) -> Result<SpatialTransform<T>> {
        let b = &self.bodies[i];
        let xj = b.joint.transform(q).map_err(|e| match e {
            Error::BadConfig { reason, .. } => Error::BadConfig { joint: i, reason },
            other => other,
        })?;
        Ok(b.placement.map(T::from_f64).compose(&xj))
    }
}

/// One configuration per joint.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration<T: Scalar>(pub Vec<JointConfig<T>>);

impl<T: Scalar> Configuration<T> {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Moves global DoF `g` of `model` along its generator by `eps`.
    pub fn perturb_dof(&self, model: &Model, g: usize, eps: T) -> Result<Self> {
        let (i, p) = model.dof_owner(g);
        let mut delta = vec![0.0; model.joint(i).dof()];
        delta[p] = 1.0;
        let mut out = self.clone();
        out.0[i] = self.0[i].integrate(&delta, eps)?;
        Ok(out)
    }

    pub fn real_part(&self) -> Configuration<f64> {
        Configuration(self.0.iter().map(|c| c.real_part()).collect())
    }
}

impl Configuration<f64> {
    pub fn lift<T: Scalar>(&self) -> Configuration<T> {
        Configuration(self.0.iter().map(|c| c.lift()).collect())
    }

    /// `q_i · exp(Σ δ E)` for every joint, with `δ` a global tangent vector.
    pub fn integrate(&self, model: &Model, delta: &DVector<f64>, eps: f64) -> Result<Self> {
        model.check_len("tangent", delta.len())?;
        let joints = self
            .0
            .iter()
            .enumerate()
            .map(|(i, c)| c.integrate(&delta.as_slice()[model.dof_range(i)], eps))
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration(joints))
    }

    pub fn renormalized(&self) -> Self {
        Configuration(self.0.iter().map(|c| c.renormalized()).collect())
    }
}

impl<T: Scalar> Index<usize> for Configuration<T> {
    type Output = JointConfig<T>;
    fn index(&self, i: usize) -> &JointConfig<T> {
        &self.0[i]
    }
}

/// Joint-space state: configuration, velocity and acceleration.
#[derive(Clone, Debug, PartialEq)]
pub struct State {
    pub q: Configuration<f64>,
    pub qd: DVector<f64>,
    pub qdd: DVector<f64>,
}
