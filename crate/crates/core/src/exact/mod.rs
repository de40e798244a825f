//! Exact rational arithmetic, certified enclosures and decimal rendering.
//!
//! Every scalar in the crate is a [`Rat`]. Quantities that are only defined
//! implicitly (roots, inverses, limits) are carried as an [`Enc`], a closed
//! rational interval that provably contains the true value. Nothing in here
//! touches floating point: the values of interest range from about 10^-20180
//! to 10^1828.

mod enc;
mod rat;
mod root;
mod scidec;

pub use enc::Enc;
pub use rat::Rat;
pub use root::root_enclosure;
pub use scidec::{decimal_exponent, within_one_ulp, SciDec};

/// Exact power, re-exported as a free function for call sites that read
/// better that way.
pub fn rat_pow(x: &Rat, e: i64) -> crate::Result<Rat> {
    x.pow(e)
}
