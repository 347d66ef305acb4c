//! Baseline rigid-body dynamics: inverse and forward dynamics, mass matrix
//! and its inverse.

mod aba;
mod crba;
mod kinematics;
mod minv;
mod rnea;

pub use aba::aba;
pub use crba::{crba, mass_matrix_from_cache};
pub use kinematics::{compute_kinematics_cache, KinematicsCache};
pub use minv::{aza, minv_apply, MassFactor, MinvStrategy};
pub use rnea::rnea;
