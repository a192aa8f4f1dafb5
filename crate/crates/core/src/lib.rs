pub mod enumeration;
pub mod cache;
pub mod error;
pub mod evaluator;
pub mod exact;
pub mod verifier;

pub use enumeration::{Denumerate, Denumeration, Prescription};
pub use error::{Error, Result};
pub use exact::{Point, QuadraticIrrational, Rational, Weight};

/// Certified enclosure with exact rational endpoints.
pub type Enclosure = exact::Interval<Rational>;
