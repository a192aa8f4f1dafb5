//! Certified evaluation of saltus functions `Σ_{φ(n) < x} weight(n)`.
//!
//! Two strategies are provided. [`eval_saltus`] walks indices in order and
//! truncates by the weight tail, which is fine for global values. Windows at
//! scale `x_m` need absolute precision far below `x_m`, so [`window_mass`]
//! walks values instead, using the structure of the construction.

pub mod quotients;
pub mod saltus;
pub mod window;

pub use crate::exact::Point;
pub use quotients::{quotient_sequence, quotients_csv, EpsRule, QuotientRow, CSV_HEADER};
pub use saltus::{eval_saltus, jump_at, truncation_for};
pub use window::{first_crossing, offset_enclosure, slot_range, window_mass, WindowReport};
