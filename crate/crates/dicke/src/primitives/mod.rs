//! Reusable sub-circuits: Toffolis, parity and copy networks, grid routing
//! and controlled state preparation.

mod arith;
mod cqsp;
pub(crate) mod gates;
mod route;
mod toffoli;

pub use arith::{emit_fanout_copy, emit_parity_add, fanout_copy, parity_add};
pub use cqsp::{cqsp_multiplexor, emit_cqsp, emit_cqsp_ancilla, emit_ucry, emit_ucry_ancilla};
pub(crate) use route::emit_relocate;
pub use route::{emit_grid_route, grid_route};
pub use toffoli::{emit_toffoli, toffoli, ToffoliMode};
