//! Measure side: the weighted objective, extremal measures built from fiber
//! weights, a kernel optimizer and closed forms for product towers.

mod extremal;
mod objective;
mod optimize;
mod oracle;
mod vpcheck;

pub use extremal::{extremal_block_frequencies, extremal_measure};
pub use objective::{weighted_objective, ObjectiveTerms, ObjectiveValue};
pub use optimize::{optimize, OptimizerConfig, VariationalResult, FD_STEP};
pub use oracle::{closed_form_product_tower, product_potential, weighted_jensen_gap};
pub use vpcheck::{vp_check, VpReport, VpRow};
