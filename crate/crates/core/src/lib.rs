//! Certified computation of the volume-growth thresholds `alpha(k, n)`
//! above which the k-th homotopy group of an open manifold with
//! nonnegative Ricci curvature vanishes.
//!
//! The pipeline runs entirely in exact rational arithmetic:
//!
//! * [`recurrences`] builds the integer constants `C_{k,n}(i)` and audits
//!   the identities and inequalities they are meant to satisfy;
//! * [`thresholds`] holds the barrier function `h_{k,n}`, its asymptote
//!   `delta_{k,n}`, its inverse, the volume defect `gamma` and the excess bound;
//! * [`beta`] expands `beta(k, c, n)` into its nested terms and evaluates
//!   `epsilon_{k,n}` and `alpha(k, n)`;
//! * [`search`] minimizes `beta` over `c` directly as a cross-check;
//! * [`table`] assembles and renders the reference tables.

pub mod beta;
pub mod error;
pub mod exact;
pub mod recurrences;
pub mod search;
pub mod table;
pub mod thresholds;

pub use error::{Error, Result};
pub use exact::{Enc, Rat, SciDec};
pub use recurrences::Variant;
