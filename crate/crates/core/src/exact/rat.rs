use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number with unbounded numerator and denominator.
///
/// Always kept in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        Ok(Rat(BigRational::new(numer.into(), denom)))
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Rat(BigRational::from_integer(v.into()))
    }

    /// `numer / 2^shift`, for dyadic values produced by bisection.
    pub fn dyadic(numer: BigInt, shift: u64) -> Self {
        Rat(dyadic_reduced(numer, shift))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `10^e` for any signed `e`.
    pub fn pow10(e: i64) -> Self {
        let p = BigInt::from(10u32).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            Rat::from_int(p)
        } else {
            Rat(BigRational::new_raw(BigInt::one(), p))
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::domain("reciprocal of zero"));
        }
        Ok(Rat(self.0.recip()))
    }

    /// Exact integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::domain("zero raised to a negative power"));
        }
        let mag = i32::try_from(e.unsigned_abs())
            .map_err(|_| Error::domain(format!("exponent {e} out of range")))?;
        let p = num_traits::pow::Pow::pow(&self.0, mag);
        Ok(if e < 0 { Rat(p.recip()) } else { Rat(p) })
    }

    pub fn floor(&self) -> BigInt {
        self.0.numer().div_floor(self.0.denom())
    }

    pub fn ceil(&self) -> BigInt {
        -((-self.0.numer()).div_floor(self.0.denom()))
    }

    /// Nearest integer, ties to even.
    pub fn round_half_even(&self) -> BigInt {
        let (q, r) = self.0.numer().div_mod_floor(self.0.denom());
        match (r * 2u32).cmp(self.0.denom()) {
            Ordering::Less => q,
            Ordering::Greater => q + 1,
            Ordering::Equal if q.is_even() => q,
            Ordering::Equal => q + 1,
        }
    }

    /// `floor(log2 |self|)` up to an error of one; `None` for zero.
    pub fn log2_estimate(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.numer().bits() as i64 - self.denom().bits() as i64)
    }

    /// Round outward onto a dyadic grid carrying `bits` significant bits.
    /// `up` selects the rounding direction (towards +inf or -inf).
    pub fn round_dyadic(&self, bits: u64, up: bool) -> Self {
        let Some(l2) = self.log2_estimate() else {
            return Rat::zero();
        };
        let shift = bits as i64 - l2;
        let scaled = if shift >= 0 {
            self * &Rat::from_int(BigInt::one() << shift as u64)
        } else {
            self / &Rat::from_int(BigInt::one() << (-shift) as u64)
        };
        let m = if up { scaled.ceil() } else { scaled.floor() };
        if shift >= 0 {
            Rat::dyadic(m, shift as u64)
        } else {
            Rat::from_int(m << (-shift) as u64)
        }
    }

    pub fn min(a: &Rat, b: &Rat) -> Rat {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Rat, b: &Rat) -> Rat {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl From<i64> for Rat {
    fn from(v: i64) -> Self {
        Rat::from_int(v)
    }
}

impl From<BigInt> for Rat {
    fn from(v: BigInt) -> Self {
        Rat::from_int(v)
    }
}

impl From<BigRational> for Rat {
    fn from(v: BigRational) -> Self {
        Rat(v)
    }
}

/// `s` when `d = 2^s`.
fn pow2_exponent(d: &BigInt) -> Option<u64> {
    let tz = d.trailing_zeros()?;
    (d.bits() == tz + 1).then_some(tz)
}

/// `numer / 2^shift` in lowest terms. Cancelling powers of two only needs a
/// shift, which keeps dyadic arithmetic clear of gcd computations.
fn dyadic_reduced(numer: BigInt, shift: u64) -> BigRational {
    if numer.is_zero() {
        return BigRational::zero();
    }
    let z = numer.trailing_zeros().unwrap_or(0).min(shift);
    BigRational::new_raw(numer >> z, BigInt::one() << (shift - z))
}

fn dyadic_parts(x: &BigRational) -> Option<(&BigInt, u64)> {
    pow2_exponent(x.denom()).map(|s| (x.numer(), s))
}

fn fast_add(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    let ((p, s), (q, t)) = (dyadic_parts(a)?, dyadic_parts(b)?);
    let u = s.max(t);
    Some(dyadic_reduced((p << (u - s)) + (q << (u - t)), u))
}

fn fast_sub(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    let ((p, s), (q, t)) = (dyadic_parts(a)?, dyadic_parts(b)?);
    let u = s.max(t);
    Some(dyadic_reduced((p << (u - s)) - (q << (u - t)), u))
}

fn fast_mul(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    let ((p, s), (q, t)) = (dyadic_parts(a)?, dyadic_parts(b)?);
    Some(dyadic_reduced(p * q, s + t))
}

/// Dyadic divided by `+-2^r / 2^t`.
fn fast_div(a: &BigRational, b: &BigRational) -> Option<BigRational> {
    let ((p, s), (q, t)) = (dyadic_parts(a)?, dyadic_parts(b)?);
    let r = pow2_exponent(&q.abs())?;
    let num = p << t;
    Some(dyadic_reduced(if q.is_negative() { -num } else { num }, s + r))
}

macro_rules! binop {
    ($tr:ident, $method:ident, $fast:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat($fast(&self.0, &rhs.0).unwrap_or_else(|| $tr::$method(&self.0, &rhs.0)))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $tr::$method(&self, &rhs)
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                $tr::$method(&self, rhs)
            }
        }
        impl $tr<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                $tr::$method(self, &rhs)
            }
        }
    };
}

binop!(Add, add, fast_add);
binop!(Sub, sub, fast_sub);
binop!(Mul, mul, fast_mul);
// Division by zero panics, as with the integer types; use `recip` for a checked form.
binop!(Div, div, fast_div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `p/q`, plain integers and decimals with an optional exponent
/// (`-12`, `3/7`, `0.25`, `1.5e-7`).
impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::usage(format!("cannot parse '{s}' as a rational"));
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            return Rat::new(p, q).map_err(|_| bad());
        }
        let (mant, exp) = match s.find(['e', 'E']) {
            Some(pos) => (&s[..pos], s[pos + 1..].parse::<i64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (neg, mant) = match mant.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, mant.strip_prefix('+').unwrap_or(mant)),
        };
        let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let m = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(bad)?;
        let m = if neg { -m } else { m };
        let scale = exp - frac_part.len() as i64;
        Ok(Rat::from_int(m) * Rat::pow10(scale))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn normalizes() {
        let x = Rat::new(6, -4).unwrap();
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert!(Rat::new(1, 0).is_err());
    }

    #[test]
    fn powers() {
        assert_eq!(r("3/2").pow(2).unwrap(), r("9/4"));
        assert_eq!(r("11").pow(2).unwrap(), r("121"));
        assert_eq!(r("-5/7").pow(0).unwrap(), Rat::one());
        assert_eq!(r("2/3").pow(-3).unwrap(), r("27/8"));
        assert!(matches!(Rat::zero().pow(-1), Err(Error::Domain(_))));
        assert_eq!(Rat::zero().pow(3).unwrap(), Rat::zero());
    }

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(r("0.25"), r("1/4"));
        assert_eq!(r("-1.5e-3"), r("-3/2000"));
        assert_eq!(r("2E3"), r("2000"));
        assert_eq!(r(".5"), r("1/2"));
        assert!("abc".parse::<Rat>().is_err());
        assert!("1/0".parse::<Rat>().is_err());
        assert!("".parse::<Rat>().is_err());
    }

    #[test]
    fn rounding() {
        assert_eq!(r("5/2").round_half_even(), BigInt::from(2));
        assert_eq!(r("7/2").round_half_even(), BigInt::from(4));
        assert_eq!(r("-5/2").round_half_even(), BigInt::from(-2));
        assert_eq!(r("13/5").round_half_even(), BigInt::from(3));
        assert_eq!(r("-7/3").floor(), BigInt::from(-3));
        assert_eq!(r("-7/3").ceil(), BigInt::from(-2));
    }

    #[test]
    fn dyadic_rounding_brackets() {
        let x = r("1/3");
        let lo = x.round_dyadic(20, false);
        let hi = x.round_dyadic(20, true);
        assert!(lo < x && x < hi);
        assert!((&hi - &lo) * Rat::from_int(1 << 20) <= Rat::from_int(2));
        let big = r("123456789123456789/7");
        assert!(big.round_dyadic(8, false) <= big && big <= big.round_dyadic(8, true));
    }

    #[test]
    fn display() {
        assert_eq!(r("4/6").to_string(), "2/3");
        assert_eq!(r("-8/2").to_string(), "-4");
    }
}
