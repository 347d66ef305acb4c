//! First- and second-order partial derivatives of rigid-body inverse and
//! forward dynamics for kinematic trees.
//!
//! Models are trees of bodies connected by revolute, prismatic, spherical
//! or floating joints ([`model`]). [`dynamics`] provides RNEA, ABA, CRBA and
//! the shared kinematics cache; [`derivatives`] builds the analytical
//! first-order Jacobians and the second-order tensors on top of it.
//! [`oracles`] holds complex-step and finite-difference references, and
//! [`metrics`] and [`mod@bench`] measure accuracy and runtime scaling.
//!
//! Second-order results are `n × n × n` [`tensor::Tensor3`] values whose
//! element `(i, j, k)` differentiates output `i` first along column
//! variable `j`, then page variable `k`. Configuration derivatives are Lie
//! derivatives under right perturbation `q · exp(εE)`.

pub mod bench;
pub mod derivatives;
pub mod dynamics;
pub mod error;
pub mod metrics;
pub mod model;
pub mod oracles;
pub mod scalar;
pub mod spatial;
pub mod tensor;

pub use error::{Error, Result};
pub use scalar::Scalar;
