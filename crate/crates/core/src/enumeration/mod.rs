//! The denumeration of ℚ built from a prescription, plus an independent
//! Calkin–Wilf enumeration behind the same interface.

pub mod calkin_wilf;
pub mod denumeration;
pub mod encoding;
pub mod params;
pub mod prescription;
pub mod slots;

pub use calkin_wilf::CalkinWilf;
pub use denumeration::{integer_of_rank, rank_of_integer, Denumeration, IndexClass, ValidationDepth};
pub use encoding::{decompose_odd, encode_odd, fraction_delta, EncodedIndex};
pub use params::{grid_point, nth_prime, progressions, select_m, separation_lower_bound, ClusterParams, ConstructionParams};
pub use prescription::{parse_prescription, Prescription, PrescriptionPoint, MAX_POINTS};
pub use slots::{choose_grid_rational, classify_structured, slot_interval, structured_index, Side};

use crate::exact::Rational;

/// A bijection `ℕ → ℚ` (indices from 1), queried by index.
pub trait Denumerate: Send + Sync {
    fn name(&self) -> &str;

    fn rational_at(&self, n: u64) -> Rational;

    /// `[φ(1), …, φ(len)]`.
    fn prefix(&self, len: usize) -> Vec<Rational> {
        (1..=len as u64).map(|n| self.rational_at(n)).collect()
    }
}
