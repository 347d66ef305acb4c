mod common;

use std::f64::consts::FRAC_PI_2;

use common::*;
use nalgebra::{DMatrix, DVector, Vector6};
use sorbd::dynamics::*;
use sorbd::model::{Configuration, JointConfig, JointPattern};
use sorbd::oracles::BiComplex;
use sorbd::spatial::{cross_force_vec, Motion};

fn pendulum_q(q: f64) -> Configuration<f64> {
    Configuration(vec![JointConfig::Scalar(q)])
}

fn v1(x: f64) -> DVector<f64> {
    DVector::from_element(1, x)
}

#[test]
fn pendulum_inverse_dynamics() {
    let (m, l) = (1.5, 0.8);
    let p = pendulum(m, l);
    let tau = rnea(&p, &pendulum_q(0.0), &v1(0.0), &v1(0.0), None).unwrap();
    assert!(tau[0].abs() < 1e-15);
    let tau = rnea(&p, &pendulum_q(FRAC_PI_2), &v1(0.0), &v1(0.0), None).unwrap();
    assert!((tau[0] - m * G * l).abs() < 1e-12);
    let tau = rnea(&p, &pendulum_q(0.4), &v1(0.3), &v1(-1.2), None).unwrap();
    let expected = m * l * l * -1.2 + m * G * l * 0.4f64.sin();
    assert!((tau[0] - expected).abs() < 1e-12);
}

#[test]
fn pendulum_forward_dynamics_and_mass() {
    let (m, l) = (1.5, 0.8);
    let p = pendulum(m, l);
    let qdd = aba(&p, &pendulum_q(0.0), &v1(0.0), &v1(0.0), None).unwrap();
    assert!(qdd[0].abs() < 1e-15);
    let qdd = aba(&p, &pendulum_q(FRAC_PI_2), &v1(0.0), &v1(0.0), None).unwrap();
    assert!((qdd[0] + G / l).abs() < 1e-12);
    let mm = crba(&p, &pendulum_q(1.1)).unwrap();
    assert!((mm[(0, 0)] - m * l * l).abs() < 1e-14);
}

#[test]
fn double_pendulum_matches_lagrangian() {
    let dp = DoublePendulum::DEFAULT;
    let model = dp.model();
    let (q, qd, qdd) = ([0.3, -0.8], [0.5, 1.1], [-0.4, 0.9]);
    let cfg = Configuration(vec![JointConfig::Scalar(q[0]), JointConfig::Scalar(q[1])]);
    let tau = rnea(&model, &cfg, &DVector::from_row_slice(&qd), &DVector::from_row_slice(&qdd), None).unwrap();
    let expected = dp.tau(q, qd, qdd);
    assert!((tau[0] - expected[0]).abs() < 1e-12 && (tau[1] - expected[1]).abs() < 1e-12);
}

#[test]
fn zero_gravity_zero_velocity_inverse_dynamics_is_mass_times_acceleration() {
    let m = chain(7, JointPattern::mixed(), false);
    let s = state(&m, 4);
    let zero = DVector::zeros(m.nv());
    let tau = rnea(&m, &s.q, &zero, &s.qdd, Some(Motion::zero())).unwrap();
    let mm = crba(&m, &s.q).unwrap();
    assert!((tau - &mm * &s.qdd).amax() < 1e-12);
}

#[test]
fn inverse_forward_round_trip() {
    let mut rng = rng(11);
    for trial in 0..500 {
        let n = 1 + trial % 12;
        let pattern = if trial % 3 == 0 { JointPattern::mixed() } else { JointPattern::revolute_cycle() };
        let m = chain(n, pattern, trial % 5 == 0);
        let s = m.random_state(&mut rng);
        let tau = rnea(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
        let qdd = aba(&m, &s.q, &s.qd, &tau, None).unwrap();
        let back = rnea(&m, &s.q, &s.qd, &qdd, None).unwrap();
        let res = (&back - &tau).amax() / tau.amax().max(1.0);
        assert!(res <= 1e-10, "trial {trial}: residual {res}");
    }
}

#[test]
fn crba_is_symmetric_and_matches_acceleration_probe() {
    for (name, m) in model_zoo() {
        let s = state(&m, 5);
        let mm = crba(&m, &s.q).unwrap();
        assert_eq!(mm, mm.transpose(), "{name}");
        assert!(mm.clone().cholesky().is_some(), "{name} not SPD");
        let zero = DVector::zeros(m.nv());
        for c in 0..m.nv() {
            let mut e = DVector::zeros(m.nv());
            e[c] = 1.0;
            let col = rnea(&m, &s.q, &zero, &e, Some(Motion::zero())).unwrap();
            let (bc, _) = m.dof_owner(c);
            for r in 0..m.nv() {
                assert!((col[r] - mm[(r, c)]).abs() <= 1e-12, "{name} ({r},{c})");
                let (br, _) = m.dof_owner(r);
                if !m.is_ancestor_or_self(br, bc) && !m.is_ancestor_or_self(bc, br) {
                    assert_eq!((col[r], mm[(r, c)]), (0.0, 0.0), "{name} structural zero ({r},{c})");
                }
            }
        }
    }
}

#[test]
fn minv_strategies_agree() {
    let m = tree(7, JointPattern::mixed(), true);
    let s = state(&m, 6);
    let mm = crba(&m, &s.q).unwrap();
    let id = minv_apply(&m, &s.q, &mm, MinvStrategy::Cholesky).unwrap();
    assert!((id - DMatrix::identity(m.nv(), m.nv())).amax() < 1e-10);
    let zero = DMatrix::zeros(m.nv(), 3);
    assert_eq!(minv_apply(&m, &s.q, &zero, MinvStrategy::Aza).unwrap().amax(), 0.0);
    let b = DMatrix::from_fn(m.nv(), 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 2.0);
    let a = minv_apply(&m, &s.q, &b, MinvStrategy::Cholesky).unwrap();
    let z = minv_apply(&m, &s.q, &b, MinvStrategy::Aza).unwrap();
    assert!((&a - &z).amax() / a.amax() <= 1e-9);
    assert!(minv_apply(&m, &s.q, &DMatrix::zeros(m.nv() + 1, 1), MinvStrategy::Cholesky).is_err());
}

#[test]
fn kinematics_cache_fields() {
    let m = chain(4, JointPattern::mixed(), true);
    let s = state(&m, 7);
    let zero = DVector::zeros(m.nv());
    let c = compute_kinematics_cache(&m, &s.q, &zero, &s.qdd, None).unwrap();
    for i in 0..m.num_bodies() {
        let a_par = m.parent(i).map_or(-m.gravity().0, |p| c.a[p]);
        for g in m.dof_range(i) {
            assert_eq!(c.phi_dot[g], Vector6::zeros());
            assert_eq!(c.psi_dot[g], Vector6::zeros());
            assert!((c.psi_ddot[g] - sorbd::spatial::cross_motion_vec(&a_par, &c.s[g])).amax() < 1e-14);
        }
    }

    let c = compute_kinematics_cache(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
    for i in 0..m.num_bodies() {
        let v_par = m.parent(i).map_or(Vector6::zeros(), |p| c.v[p]);
        let vj: Vector6<f64> = m.dof_range(i).map(|g| c.s[g] * s.qd[g]).sum();
        assert!((c.v[i] - v_par - vj).amax() < 1e-14);
        assert!((c.ic[i] - c.ic[i].transpose()).amax() < 1e-14);
        let direct: Vector6<f64> = (i..m.num_bodies())
            .filter(|&k| m.is_ancestor_or_self(i, k))
            .map(|k| c.inertia[k] * c.a[k] + cross_force_vec(&c.v[k], &(c.inertia[k] * c.v[k])))
            .sum();
        assert!((c.fc[i] - direct).amax() < 1e-12);
    }

    let one = pendulum(2.0, 0.5);
    let c = compute_kinematics_cache(&one, &pendulum_q(0.3), &v1(0.1), &v1(0.2), None).unwrap();
    assert_eq!(c.ic[0], c.inertia[0]);
}

#[test]
fn generic_dynamics_real_part_matches_f64() {
    let m = tree(6, JointPattern::mixed(), true);
    let s = state(&m, 8);
    let lift = |v: &DVector<f64>| v.map(BiComplex::real);
    let tau = rnea(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
    let tau_b = rnea(&m, &s.q.lift::<BiComplex>(), &lift(&s.qd), &lift(&s.qdd), None).unwrap();
    assert!(tau.iter().zip(tau_b.iter()).all(|(a, b)| (a - b.re).abs() < 1e-12 && b.i1 == 0.0 && b.i12 == 0.0));
    let qdd_b = aba(&m, &s.q.lift::<BiComplex>(), &lift(&s.qd), &lift(&tau), None).unwrap();
    assert!(s.qdd.iter().zip(qdd_b.iter()).all(|(a, b)| (a - b.re).abs() < 1e-10));
}

#[test]
fn malformed_inputs_are_rejected() {
    let m = chain(3, JointPattern::revolute_cycle(), false);
    let s = state(&m, 9);
    assert!(rnea(&m, &s.q, &DVector::zeros(2), &s.qdd, None).is_err());
    assert!(aba(&m, &s.q, &s.qd, &DVector::zeros(4), None).is_err());
    let short = Configuration(s.q.0[..2].to_vec());
    assert!(crba(&m, &short).is_err());
}
