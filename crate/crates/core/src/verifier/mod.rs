//! Independent checks of the construction and the witness search.

mod construction;
mod witness;

pub use construction::{check_construction, diagnostics_367, ratio_31, ClaimSummary, ClusterMargins, ConstructionReport};
pub use witness::{minindex_bounds_check, proposition_witness, Witness, WitnessQuery};
