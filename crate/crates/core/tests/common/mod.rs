#![allow(dead_code)]

use nalgebra::{DVector, Vector3};
use sorbd::oracles::BiComplex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sorbd::model::{binary_tree, serial_chain, Body, GenOptions, JointKind, JointPattern, Model, State};
use sorbd::spatial::{SpatialInertia, SpatialTransform};

pub const G: f64 = 9.81;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Point mass `m` hanging at distance `l` below a revolute-x joint.
pub fn pendulum(m: f64, l: f64) -> Model {
    double_pendulum_like(&[(m, l)])
}

/// Planar chain of point masses on revolute-x joints; link `i` has length
/// `lᵢ` and its mass at the far end.
pub fn double_pendulum_like(links: &[(f64, f64)]) -> Model {
    let mut bodies = Vec::new();
    let mut prev_len = 0.0;
    for (i, &(m, l)) in links.iter().enumerate() {
        bodies.push(Body {
            name: format!("link{i}"),
            parent: i.checked_sub(1),
            joint: JointKind::RevoluteX,
            placement: SpatialTransform::translation(Vector3::new(0.0, 0.0, -prev_len)),
            inertia: SpatialInertia::point_mass(m, Vector3::new(0.0, 0.0, -l)),
        });
        prev_len = l;
    }
    Model::new(bodies, sorbd::model::default_gravity()).unwrap()
}

pub fn chain(n: usize, pattern: JointPattern, floating: bool) -> Model {
    serial_chain(n, &GenOptions::with_pattern(pattern).floating(floating)).unwrap()
}

pub fn tree(n: usize, pattern: JointPattern, floating: bool) -> Model {
    binary_tree(n, &GenOptions::with_pattern(pattern).floating(floating)).unwrap()
}

/// Models covering every joint kind, both topologies and a floating base.
pub fn model_zoo() -> Vec<(String, Model)> {
    vec![
        ("chain5-revolute".into(), chain(5, JointPattern::revolute_cycle(), false)),
        ("chain4-mixed".into(), chain(4, JointPattern::mixed(), false)),
        ("tree7-revolute".into(), tree(7, JointPattern::revolute_cycle(), false)),
        ("tree6-mixed-floating".into(), tree(6, JointPattern::mixed(), true)),
        (
            "chain4-prismatic-spherical".into(),
            chain(
                4,
                JointPattern::Cycle(vec![JointKind::PrismaticX, JointKind::Spherical, JointKind::PrismaticZ, JointKind::RevoluteY]),
                true,
            ),
        ),
    ]
}

pub fn state(model: &Model, seed: u64) -> State {
    model.random_state(&mut rng(seed))
}

pub fn max_abs(v: &DVector<f64>) -> f64 {
    v.amax()
}

/// Masses and link lengths of a planar double pendulum.
#[derive(Clone, Copy, Debug)]
pub struct DoublePendulum {
    pub m1: f64,
    pub m2: f64,
    pub l1: f64,
    pub l2: f64,
}

impl DoublePendulum {
    pub const DEFAULT: DoublePendulum = DoublePendulum { m1: 1.3, m2: 0.7, l1: 0.9, l2: 0.6 };

    pub fn model(&self) -> Model {
        double_pendulum_like(&[(self.m1, self.l1), (self.m2, self.l2)])
    }

    /// Mass matrix, velocity product and gravity terms from the Lagrangian.
    fn terms<T: sorbd::Scalar>(&self, q: [T; 2], qd: [T; 2]) -> ([[T; 2]; 2], [T; 2]) {
        let c = |x: f64| T::from_f64(x);
        let (m1, m2, l1, l2) = (c(self.m1), c(self.m2), c(self.l1), c(self.l2));
        let g = c(G);
        let (c2, s2) = (q[1].cos(), q[1].sin());
        let s1 = q[0].sin();
        let s12 = (q[0] + q[1]).sin();
        let m11 = m1 * l1 * l1 + m2 * (l1 * l1 + l2 * l2 + c(2.0) * l1 * l2 * c2);
        let m12 = m2 * (l2 * l2 + l1 * l2 * c2);
        let m22 = m2 * l2 * l2;
        let h = m2 * l1 * l2 * s2;
        let bias1 = -h * (c(2.0) * qd[0] * qd[1] + qd[1] * qd[1]) + (m1 + m2) * g * l1 * s1 + m2 * g * l2 * s12;
        let bias2 = h * qd[0] * qd[0] + m2 * g * l2 * s12;
        ([[m11, m12], [m12, m22]], [bias1, bias2])
    }

    pub fn tau<T: sorbd::Scalar>(&self, q: [T; 2], qd: [T; 2], qdd: [T; 2]) -> [T; 2] {
        let (m, b) = self.terms(q, qd);
        [m[0][0] * qdd[0] + m[0][1] * qdd[1] + b[0], m[1][0] * qdd[0] + m[1][1] * qdd[1] + b[1]]
    }

    pub fn qdd<T: sorbd::Scalar>(&self, q: [T; 2], qd: [T; 2], tau: [T; 2]) -> [T; 2] {
        let (m, b) = self.terms(q, qd);
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let r = [tau[0] - b[0], tau[1] - b[1]];
        [(m[1][1] * r[0] - m[0][1] * r[1]) / det, (m[0][0] * r[1] - m[1][0] * r[0]) / det]
    }
}

/// Inputs `(q, v, u)` of a two-DoF closed form flattened as `x[0..6]`.
pub type Closed2 = dyn Fn([BiComplex; 2], [BiComplex; 2], [BiComplex; 2]) -> [BiComplex; 2];

/// Exact second derivative of a closed form along flat inputs `col` then
/// `page` (indices into `[q, v, u]`).
pub fn closed_form_so(f: &Closed2, x: [f64; 6], col: usize, page: usize) -> [f64; 2] {
    const H: f64 = 1e-20;
    let mut z: [BiComplex; 6] = x.map(BiComplex::real);
    z[page].i2 += H;
    z[col].i1 += H;
    let y = f([z[0], z[1]], [z[2], z[3]], [z[4], z[5]]);
    [y[0].i12 / (H * H), y[1].i12 / (H * H)]
}

/// Exact first derivative of a closed form along flat input `col`.
pub fn closed_form_fo(f: &Closed2, x: [f64; 6], col: usize) -> [f64; 2] {
    const H: f64 = 1e-20;
    let mut z: [BiComplex; 6] = x.map(BiComplex::real);
    z[col].i1 += H;
    let y = f([z[0], z[1]], [z[2], z[3]], [z[4], z[5]]);
    [y[0].i1 / H, y[1].i1 / H]
}
