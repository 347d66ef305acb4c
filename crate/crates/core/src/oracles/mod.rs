//! Independent reference derivatives: complex step and finite differences.

mod bicomplex;
mod complex_step;
mod finite_diff;

pub use bicomplex::BiComplex;
pub use complex_step::{
    bicomplex_fd_so, bicomplex_fo, bicomplex_id_fo, bicomplex_id_so, bicomplex_so, bicomplex_so_set, DynamicsFn,
    EvalPoint, ForwardDynamics, InverseDynamics, SecondOrderSet, Var, COMPLEX_STEP,
};
pub use finite_diff::{
    finite_diff1, finite_diff1_fd_so, finite_diff1_id_so, finite_diff1_set, finite_diff2_fd_so, finite_diff2_id_so,
    finite_diff2_set, FirstOrderFn, StepConfig, FD2_STEP,
};
