//! Analytical first- and second-order derivatives of rigid-body dynamics.

pub mod first_order;
pub mod second_order_fd;
pub mod second_order_id;

pub use first_order::{fd_fo, idfoza, idsva_fo, idsva_fo_from_cache, FdFirstOrder, FoSelect, IdFirstOrder, Idfoza};
pub use second_order_fd::{
    dminv_dq, fdsva_so, inner_term, outer_term, DmProduct, FdSecondOrder, InnerStrategy, OuterStrategy, Pair,
    StrategyConfig,
};
pub use second_order_id::{
    d2tau_cross_qdd, idsva_so, idsva_so_into, idsva_so_with_gravity, so_symmetry_views, IdSecondOrder,
    IdsvaSoWorkspace,
};
