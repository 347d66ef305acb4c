//! Kinematic trees, joint models and model construction.

pub mod generate;
pub mod joint;
pub mod lie;
pub mod loader;
mod tree;

pub use generate::{binary_tree, serial_chain, GenOptions, JointPattern};
pub use joint::{JointConfig, JointKind};
pub use loader::{load_model, parse_model, write_model};
pub use tree::{default_gravity, Body, Configuration, Model, State};
