use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{Enc, Rat};

/// A decimal in scientific notation with an unbounded exponent.
///
/// `one_minus` renders the value as `1 - m×10^e`, for numbers just below one
/// whose interesting digits sit in the distance to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SciDec {
    pub negative: bool,
    /// Significant digits, the first being the single integer digit.
    pub mantissa: String,
    pub exp10: i64,
    pub one_minus: bool,
}

/// `floor(log10 v)` for `v > 0`.
pub fn decimal_exponent(v: &Rat) -> i64 {
    debug_assert!(v.is_positive());
    let l2 = v.log2_estimate().unwrap_or(0);
    let mut e = (l2 * 30103).div_euclid(100_000);
    while v < &Rat::pow10(e) {
        e -= 1;
    }
    while v >= &Rat::pow10(e + 1) {
        e += 1;
    }
    e
}

impl SciDec {
    /// Round `v` half-even to `digits` significant digits.
    pub fn from_rat(v: &Rat, digits: usize, one_minus: bool) -> Result<Self> {
        if digits == 0 {
            return Err(Error::usage("at least one significant digit is required"));
        }
        if one_minus {
            check_one_minus_range(v, v)?;
            let mut d = Self::round_plain(&(Rat::one() - v), digits);
            d.one_minus = true;
            return Ok(d);
        }
        Ok(Self::round_plain(v, digits))
    }

    /// Render an enclosure. Both endpoints must round to the same digits,
    /// otherwise the first ambiguous significant digit is reported.
    pub fn from_enc(e: &Enc, digits: usize, one_minus: bool) -> Result<Self> {
        if digits == 0 {
            return Err(Error::usage("at least one significant digit is required"));
        }
        let (a, b) = if one_minus {
            check_one_minus_range(e.lo(), e.hi())?;
            (Rat::one() - e.hi(), Rat::one() - e.lo())
        } else {
            (e.lo().clone(), e.hi().clone())
        };
        let mut lo = Self::round_plain(&a, digits);
        let hi = Self::round_plain(&b, digits);
        if lo != hi {
            let digit = if lo.negative != hi.negative || lo.exp10 != hi.exp10 {
                1
            } else {
                lo.mantissa
                    .bytes()
                    .zip(hi.mantissa.bytes())
                    .position(|(x, y)| x != y)
                    .map_or(digits, |p| p + 1)
            };
            return Err(Error::Precision { digit });
        }
        lo.one_minus = one_minus;
        Ok(lo)
    }

    fn round_plain(v: &Rat, digits: usize) -> Self {
        if v.is_zero() {
            return SciDec {
                negative: false,
                mantissa: "0".repeat(digits),
                exp10: 0,
                one_minus: false,
            };
        }
        let mag = v.abs();
        let mut exp10 = decimal_exponent(&mag);
        let shift = digits as i64 - 1 - exp10;
        let mut m = (&mag * Rat::pow10(shift)).round_half_even();
        let limit = BigInt::from(10u32).pow(digits as u32);
        if m == limit {
            m = BigInt::from(10u32).pow(digits as u32 - 1);
            exp10 += 1;
        }
        SciDec {
            negative: v.is_negative(),
            mantissa: m.to_string(),
            exp10,
            one_minus: false,
        }
    }

    pub fn digits(&self) -> usize {
        self.mantissa.len()
    }

    /// Value of one unit in the last mantissa digit.
    pub fn ulp(&self) -> Rat {
        Rat::pow10(self.exp10 - (self.digits() as i64 - 1))
    }

    /// The signed `m×10^e` part, ignoring the one-minus flag.
    pub fn magnitude_part(&self) -> Rat {
        let m = BigInt::parse_bytes(self.mantissa.as_bytes(), 10).expect("mantissa digits");
        let m = if self.negative { -m } else { m };
        Rat::from_int(m) * self.ulp()
    }

    /// Exact rational value of the rendered string.
    pub fn to_rat(&self) -> Rat {
        let v = self.magnitude_part();
        if self.one_minus {
            Rat::one() - v
        } else {
            v
        }
    }
}

fn check_one_minus_range(lo: &Rat, hi: &Rat) -> Result<()> {
    let half = Rat::new(1, 2).unwrap();
    if lo <= &half || hi >= &Rat::one() {
        return Err(Error::domain("one-minus display needs a value strictly between 1/2 and 1"));
    }
    Ok(())
}

impl fmt::Display for SciDec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.one_minus {
            f.write_str("1 - ")?;
        }
        if self.negative {
            f.write_str("-")?;
        }
        let (head, tail) = self.mantissa.split_at(1);
        if tail.is_empty() {
            write!(f, "{head}e{}", self.exp10)
        } else {
            write!(f, "{head}.{tail}e{}", self.exp10)
        }
    }
}

impl FromStr for SciDec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::usage(format!("cannot parse '{s}' as a scientific decimal"));
        let t = s.trim();
        let (one_minus, t) = match t.strip_prefix("1 - ") {
            Some(rest) => (true, rest),
            None => (false, t),
        };
        let (negative, t) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (mant, exp) = t.split_once(['e', 'E']).ok_or_else(bad)?;
        let exp10: i64 = exp.parse().map_err(|_| bad())?;
        let (head, tail) = mant.split_once('.').unwrap_or((mant, ""));
        if head.len() != 1 || !head.chars().chain(tail.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        Ok(SciDec {
            negative,
            mantissa: format!("{head}{tail}"),
            exp10,
            one_minus,
        })
    }
}

/// Sanity helper for tests and table checks: is `v` within one unit in the
/// last place of the rendered value?
pub fn within_one_ulp(d: &SciDec, v: &Rat) -> bool {
    let diff = (d.to_rat() - v).abs();
    diff <= d.ulp()
}
