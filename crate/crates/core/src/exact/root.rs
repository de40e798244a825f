use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{Error, Result};
use crate::exact::{Enc, Rat};

/// Certified enclosure of the real `r`-th root of `x >= 0`.
///
/// Returns `[lo, hi]` with `lo^r <= x <= hi^r` and relative width at most
/// `rel_width`. Perfect `r`-th powers of rationals come back as exact points.
pub fn root_enclosure(x: &Rat, r: u32, rel_width: &Rat) -> Result<Enc> {
    if x.is_negative() {
        return Err(Error::domain(format!("real root of negative value {x}")));
    }
    if r == 0 {
        return Err(Error::domain("zeroth root"));
    }
    if !rel_width.is_positive() {
        return Err(Error::domain("relative width must be positive"));
    }
    if r == 1 || x.is_zero() {
        return Ok(Enc::point(x.clone()));
    }

    // x = a/b in lowest terms is a perfect power iff a and b both are.
    let (a, b) = (x.numer(), x.denom());
    let (ra, rb) = (a.nth_root(r), b.nth_root(r));
    if Pow::pow(&ra, r) == *a && Pow::pow(&rb, r) == *b {
        return Ok(Enc::point(Rat::new(ra, rb)?));
    }

    // Scale to an integer problem: with N = a * b^(r-1) * 2^(r*s) and
    // m = floor(N^(1/r)), the root lies in [m, m+1] / (b * 2^s).
    let scaled_base = a * Pow::pow(b, r - 1);
    // Enough bits that 1/m <= rel_width on the first try in most cases.
    let want_bits = rel_width.recip()?.ceil().bits() + 2;
    let root_bits = (scaled_base.bits() / u64::from(r)) as i64;
    let mut s = (want_bits as i64 - root_bits).max(0) as u64;
    loop {
        let n = &scaled_base << (u64::from(r) * s);
        let m = n.nth_root(r);
        if m > BigInt::from(0) && Rat::new(BigInt::one(), m.clone())? <= *rel_width {
            let den = b << s;
            let lo = Rat::new(m.clone(), den.clone())?;
            let hi = Rat::new(m + 1, den)?;
            return Enc::new(lo, hi);
        }
        s += 16;
    }
}
