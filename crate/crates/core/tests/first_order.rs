mod common;

use common::*;
use nalgebra::{DMatrix, DVector};
use sorbd::derivatives::*;
use sorbd::dynamics::{aba, crba, rnea};
use sorbd::model::{Configuration, JointConfig, JointPattern};
use sorbd::oracles::bicomplex_id_fo;

fn scalar_q(q: f64) -> Configuration<f64> {
    Configuration(vec![JointConfig::Scalar(q)])
}

fn v1(x: f64) -> DVector<f64> {
    DVector::from_element(1, x)
}

#[test]
fn pendulum_first_order() {
    let (m, l) = (1.5, 0.8);
    let p = pendulum(m, l);
    for q in [-2.0, 0.0, 0.7, 2.5] {
        let fo = idsva_fo(&p, &scalar_q(q), &v1(0.0), &v1(0.0), None).unwrap();
        assert!((fo.dtau_dq[(0, 0)] - m * G * l * q.cos()).abs() < 1e-12);
        assert_eq!(fo.dtau_dqd[(0, 0)], 0.0);
        let fo = idsva_fo(&p, &scalar_q(q), &v1(1.3), &v1(0.2), None).unwrap();
        assert!(fo.dtau_dqd[(0, 0)].abs() < 1e-14);

        let fd = fd_fo(&p, &scalar_q(q), &v1(0.0), &v1(0.3)).unwrap();
        assert!((fd.dfd_dq[(0, 0)] + G / l * q.cos()).abs() < 1e-12);
        assert!((fd.dfd_dtau[(0, 0)] - 1.0 / (m * l * l)).abs() < 1e-12);
        let tau = rnea(&p, &scalar_q(q), &v1(0.0), &v1(0.0), None).unwrap();
        let fd = fd_fo(&p, &scalar_q(q), &v1(0.0), &tau).unwrap();
        assert!(fd.qdd[0].abs() < 1e-12 && fd.dfd_dqd[(0, 0)].abs() < 1e-14);
    }
}

#[test]
fn first_order_matches_complex_step_tightly() {
    let m = chain(3, JointPattern::revolute_cycle(), false);
    for seed in 0..5 {
        let s = state(&m, seed);
        let fo = idsva_fo(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
        let r = bicomplex_id_fo(&m, &s.q, &s.qd, &s.qdd).unwrap();
        for (a, b) in [(&fo.dtau_dq, &r.dtau_dq), (&fo.dtau_dqd, &r.dtau_dqd), (&fo.dtau_dqdd, &r.dtau_dqdd)] {
            assert!((a - b).amax() / b.amax().max(1.0) <= 1e-12);
        }
    }
}

#[test]
fn mass_block_equals_crba() {
    for (name, m) in model_zoo() {
        let s = state(&m, 12);
        let fo = idsva_fo(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
        let mm = crba(&m, &s.q).unwrap();
        assert!((&fo.dtau_dqdd - &mm).amax() <= 1e-13, "{name}");
        assert_eq!(fo.dtau_dqdd, fo.dtau_dqdd.transpose(), "{name}");
    }
}

#[test]
fn idfoza_contracts_mass_derivative() {
    let p = pendulum(1.0, 1.0);
    assert_eq!(idfoza(&p, &scalar_q(0.4), &v1(2.0)).unwrap()[(0, 0)], 0.0);
    for (name, m) in model_zoo() {
        let s = state(&m, 13);
        assert_eq!(idfoza(&m, &s.q, &DVector::zeros(m.nv())).unwrap().amax(), 0.0, "{name}");
        let z = idfoza(&m, &s.q, &s.qdd).unwrap();
        let dm = idsva_so(&m, &s.q, &s.qd, &s.qdd).unwrap().dm_dq;
        let b = DMatrix::from_column_slice(m.nv(), 1, s.qdd.as_slice());
        let t = dm.tensor_matmul(&b).unwrap();
        let expected = DMatrix::from_fn(m.nv(), m.nv(), |i, k| t[(i, 0, k)]);
        assert!((&z - &expected).amax() <= 1e-12 * expected.amax().max(1.0), "{name}");
    }
    let m = chain(3, JointPattern::revolute_cycle(), false);
    let s = state(&m, 0);
    assert!(idfoza(&m, &s.q, &DVector::zeros(2)).is_err());
}

#[test]
fn forward_first_order_matches_central_difference_of_aba() {
    let m = chain(10, JointPattern::revolute_cycle(), false);
    let s = state(&m, 14);
    let tau = rnea(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
    let fd = fd_fo(&m, &s.q, &s.qd, &tau).unwrap();
    let h = 1e-6;
    for k in 0..m.nv() {
        let qp = s.q.perturb_dof(&m, k, h).unwrap();
        let qm = s.q.perturb_dof(&m, k, -h).unwrap();
        let col = (aba(&m, &qp, &s.qd, &tau, None).unwrap() - aba(&m, &qm, &s.qd, &tau, None).unwrap()) / (2.0 * h);
        assert!((col - fd.dfd_dq.column(k)).amax() < 1e-6);
        let mut vp = s.qd.clone();
        vp[k] += h;
        let mut vm = s.qd.clone();
        vm[k] -= h;
        let col = (aba(&m, &s.q, &vp, &tau, None).unwrap() - aba(&m, &s.q, &vm, &tau, None).unwrap()) / (2.0 * h);
        assert!((col - fd.dfd_dqd.column(k)).amax() < 1e-6);
    }
}

#[test]
fn forward_and_inverse_first_order_are_consistent() {
    let mut rng = rng(15);
    for trial in 0..40 {
        let n = 1 + trial % 12;
        let m = if trial % 2 == 0 {
            chain(n, JointPattern::mixed(), trial % 4 == 0)
        } else {
            tree(n, JointPattern::revolute_cycle(), false)
        };
        let s = m.random_state(&mut rng);
        let tau = rnea(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
        let fd = fd_fo(&m, &s.q, &s.qd, &tau).unwrap();
        let id = idsva_fo(&m, &s.q, &s.qd, &fd.qdd, None).unwrap();
        let mm = &id.dtau_dqdd;
        for (dfd, did) in [(&fd.dfd_dq, &id.dtau_dq), (&fd.dfd_dqd, &id.dtau_dqd)] {
            let r = mm * dfd + did;
            assert!(r.amax() <= 1e-10 * did.amax().max(1.0), "trial {trial}");
        }
        let eye = mm * &fd.dfd_dtau;
        assert!((eye - DMatrix::identity(m.nv(), m.nv())).amax() < 1e-10);
    }
}

#[test]
fn disjoint_branches_have_zero_first_order_blocks() {
    let m = tree(15, JointPattern::mixed(), false);
    let s = state(&m, 16);
    let fo = idsva_fo(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
    for r in 0..m.nv() {
        for c in 0..m.nv() {
            let (i, j) = (m.dof_owner(r).0, m.dof_owner(c).0);
            if !m.is_ancestor_or_self(i, j) && !m.is_ancestor_or_self(j, i) {
                assert_eq!(fo.dtau_dq[(r, c)], 0.0);
                assert_eq!(fo.dtau_dqd[(r, c)], 0.0);
                assert_eq!(fo.dtau_dqdd[(r, c)], 0.0);
            }
        }
    }
}

#[test]
fn gravity_override_only_changes_configuration_block() {
    let m = chain(5, JointPattern::revolute_cycle(), false);
    let s = state(&m, 17);
    let a = idsva_fo(&m, &s.q, &s.qd, &s.qdd, None).unwrap();
    let b = idsva_fo(&m, &s.q, &s.qd, &s.qdd, Some(sorbd::spatial::Motion::zero())).unwrap();
    assert_eq!(a.dtau_dqd, b.dtau_dqd);
    assert_eq!(a.dtau_dqdd, b.dtau_dqdd);
    assert!((&a.dtau_dq - &b.dtau_dq).amax() > 1e-3);
}
