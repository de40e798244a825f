//! The scalar analytic layer: the volume defect `gamma`, the barrier function
//! `h_{k,n}`, its asymptote `delta_{k,n}` and inverse, and the excess bound.
//!
//! Everything reduces to the polynomial
//!
//! ```text
//! p(x) = 10^(k+2) * C_{k,n} * x * (1 + x/2k)^k,     h_{k,n}(x) = 1 / (1 - p(x))
//! ```
//!
//! which is strictly increasing on `x >= 0`. `delta_{k,n}` solves `p = 1` and
//! `h^-1(c)` solves `p = 1 - 1/c`; both are found by bisection on dyadic
//! rationals with exact comparisons, so every returned [`Enc`] is certified.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::{binomial, Integer};
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exact::{root_enclosure, Enc, Rat};
use crate::recurrences::{c_top, Variant};

/// Default relative width for inversions: `10^-(6 + 3)`.
pub fn default_rel_width() -> Rat {
    Rat::pow10(-9)
}

/// `p(x) = 10^(k+2) C_{k,n} x (1 + x/2k)^k` for one `(k, n, variant)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BarrierPoly {
    pub k: u32,
    pub n: u32,
    pub variant: Variant,
    /// `10^(k+2) * C_{k,n}`.
    scale: BigInt,
}

type CacheKey = (u32, u32, Variant);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<BarrierPoly>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<BarrierPoly>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared, memoized barrier polynomial.
pub fn barrier(k: u32, n: u32, variant: Variant) -> Result<Arc<BarrierPoly>> {
    if k == 0 || n == 0 {
        return Err(Error::domain("k and n must be positive"));
    }
    let key = (k, n, variant);
    if let Some(p) = cache().read().unwrap().get(&key) {
        return Ok(Arc::clone(p));
    }
    let built = Arc::new(BarrierPoly::new(k, n, variant));
    let mut guard = cache().write().unwrap();
    Ok(Arc::clone(guard.entry(key).or_insert(built)))
}

impl BarrierPoly {
    /// # Panics
    /// If `k` or `n` is zero.
    pub fn new(k: u32, n: u32, variant: Variant) -> Self {
        assert!(k >= 1 && n >= 1, "k and n must be positive");
        let scale = Pow::pow(BigInt::from(10u32), k + 2) * c_top(k, n, variant);
        BarrierPoly { k, n, variant, scale }
    }

    /// `10^(k+2) C_{k,n}`, the slope of `p` at zero.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    /// Coefficients of `p` by ascending power; degree `k + 1`, constant term zero.
    pub fn coefficients(&self) -> Vec<Rat> {
        let k = self.k;
        let mut out = vec![Rat::zero()];
        for j in 0..=k {
            let c = BigInt::from(binomial(k, j)) * &self.scale;
            let d = Pow::pow(BigInt::from(2 * k), j);
            out.push(Rat::new(c, d).unwrap());
        }
        out
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let two_k = Rat::from_int(2 * self.k as i64);
        let factor = (Rat::one() + x / &two_k).pow(self.k as i64).unwrap();
        Rat::from_int(self.scale.clone()) * x * factor
    }

    /// Sign of `p(m / 2^e) - a/b` using integer arithmetic only
    /// (`m >= 0`, `b > 0`).
    fn cmp_dyadic(&self, m: &BigInt, e: u64, a: &BigInt, b: &BigInt) -> Ordering {
        let k = self.k;
        let two_k = BigInt::from(2 * k);
        let base = (&two_k << e) + m;
        let lhs = &self.scale * m * Pow::pow(base, k) * b;
        let rhs = (a * Pow::pow(two_k, k)) << (e * u64::from(k + 1));
        lhs.cmp(&rhs)
    }

    /// Certified enclosure of the unique `x > 0` with `p(x) = target`,
    /// `0 < target <= 1`, to relative width `rel_width`.
    ///
    /// The result satisfies `p(lo) < target < p(hi)`, or is a point when the
    /// bisection happens to land on the root exactly.
    pub fn solve(&self, target: &Rat, rel_width: &Rat) -> Result<Enc> {
        if !target.is_positive() {
            return Err(Error::domain(format!("barrier target {target} must be positive")));
        }
        if !rel_width.is_positive() {
            return Err(Error::domain("relative width must be positive"));
        }
        let (a, b) = (target.numer(), target.denom());
        let scale = Rat::from_int(self.scale.clone());

        // p(x) >= scale * x, so x0 = target/scale overshoots; halve until under.
        let x_hi = target / &scale;
        let mut x_lo = &x_hi * Rat::new(1, 2).unwrap();
        while self.eval(&x_lo) >= *target {
            x_lo = &x_lo * Rat::new(1, 2).unwrap();
        }

        let rel_bits = rel_width.recip()?.ceil().bits();
        let mag = x_lo.log2_estimate().unwrap();
        let mut e = (rel_bits as i64 + 8 - mag).max(8) as u64;
        let pow2 = |e: u64| Rat::from_int(BigInt::one() << e);
        let mut lo = (&x_lo * pow2(e)).floor();
        let mut hi = (&x_hi * pow2(e)).ceil();
        debug_assert_eq!(self.cmp_dyadic(&lo, e, a, b), Ordering::Less);

        let (rw_num, rw_den) = (rel_width.numer(), rel_width.denom());
        loop {
            let gap = &hi - &lo;
            if lo > BigInt::zero() && &gap * rw_den <= rw_num * &lo {
                break;
            }
            if gap <= BigInt::one() {
                lo <<= 8u32;
                hi <<= 8u32;
                e += 8;
                continue;
            }
            let mid: BigInt = (&lo + &hi) >> 1u32;
            match self.cmp_dyadic(&mid, e, a, b) {
                Ordering::Less => lo = mid,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Ok(Enc::point(Rat::dyadic(mid, e))),
            }
        }
        Enc::new(Rat::dyadic(lo, e), Rat::dyadic(hi, e))
    }
}

/// `gamma(c, eps, n) = [1 + (c/eps)^n]^-1`.
pub fn gamma(c: &Rat, eps: &Rat, n: u32) -> Result<Rat> {
    if c <= &Rat::one() {
        return Err(Error::domain(format!("gamma needs c > 1, got {c}")));
    }
    if !eps.is_positive() {
        return Err(Error::domain(format!("gamma needs eps > 0, got {eps}")));
    }
    if n == 0 {
        return Err(Error::domain("gamma needs n >= 1"));
    }
    Ok(gamma_unchecked(c, eps, n))
}

fn gamma_unchecked(c: &Rat, eps: &Rat, n: u32) -> Rat {
    // eps^n / (eps^n + c^n)
    let en = eps.pow(i64::from(n)).unwrap();
    let cn = c.pow(i64::from(n)).unwrap();
    &en / (&en + cn)
}

/// Bound on `eps^n / (eps^n + c^n)` rounded outward to `bits` significant
/// bits, built from raw numerators and denominators.
fn gamma_bound(c: &Rat, eps: &Rat, n: u32, bits: u64, up: bool) -> Rat {
    let a = Pow::pow(eps.numer() * c.denom(), n);
    let den = &a + Pow::pow(c.numer() * eps.denom(), n);
    let shift = bits + den.bits() - a.bits() + 1;
    let (q, r) = (a << shift).div_rem(&den);
    let q = if up && !r.is_zero() { q + 1 } else { q };
    Rat::dyadic(q, shift)
}

/// `gamma` over enclosures: decreasing in `c`, increasing in `eps`.
///
/// Non-degenerate enclosures are rounded outward, keeping 64 bits beyond
/// the significant bits of `eps`.
pub fn gamma_enc(c: &Enc, eps: &Enc, n: u32) -> Result<Enc> {
    if c.lo() <= &Rat::one() || !eps.lo().is_positive() {
        return Err(Error::domain("gamma needs c > 1 and eps > 0"));
    }
    if n == 0 {
        return Err(Error::domain("gamma needs n >= 1"));
    }
    if c.is_point() && eps.is_point() {
        return Ok(Enc::point(gamma_unchecked(c.lo(), eps.lo(), n)));
    }
    let bits = 64 + eps.lo().numer().bits().max(eps.hi().numer().bits());
    Enc::new(
        gamma_bound(c.hi(), eps.lo(), n, bits, false),
        gamma_bound(c.lo(), eps.hi(), n, bits, true),
    )
}

/// Exact `h_{k,n}(x) = 1 / (1 - p(x))` for `x >= 0` left of the asymptote.
pub fn h_eval(k: u32, n: u32, variant: Variant, x: &Rat) -> Result<Rat> {
    if x.is_negative() {
        return Err(Error::domain(format!("h is defined for x >= 0, got {x}")));
    }
    let p = barrier(k, n, variant)?.eval(x);
    if p >= Rat::one() {
        return Err(Error::domain(format!(
            "x = {x} is at or beyond the asymptote of h_{{{k},{n}}}"
        )));
    }
    (Rat::one() - p).recip()
}

/// The asymptote `delta_{k,n}`: root of `p(x) = 1`.
pub fn delta_kn(k: u32, n: u32, variant: Variant, rel_width: &Rat) -> Result<Enc> {
    barrier(k, n, variant)?.solve(&Rat::one(), rel_width)
}

/// `h_{k,n}^-1(c)` for `c > 1`: root of `p(x) = 1 - 1/c`.
pub fn h_inv(k: u32, n: u32, variant: Variant, c: &Rat, rel_width: &Rat) -> Result<Enc> {
    if c <= &Rat::one() {
        return Err(Error::domain(format!("h^-1 needs c > 1, got {c}")));
    }
    let target = (c - Rat::one()) / c;
    barrier(k, n, variant)?.solve(&target, rel_width)
}

/// `h^-1` over an enclosure of `c`, endpoint-wise (it is increasing).
pub fn h_inv_enc(k: u32, n: u32, variant: Variant, c: &Enc, rel_width: &Rat) -> Result<Enc> {
    if c.is_point() {
        return h_inv(k, n, variant, c.lo(), rel_width);
    }
    let lo = h_inv(k, n, variant, c.lo(), rel_width)?;
    let hi = h_inv(k, n, variant, c.hi(), rel_width)?;
    Enc::new(lo.lo().clone(), hi.hi().clone())
}

/// Excess bound `8 (h^n / s)^(1/(n-1))` for `0 <= h <= s/2`, `n >= 2`.
pub fn excess_bound(h: &Rat, s: &Rat, n: u32, rel_width: &Rat) -> Result<Enc> {
    if n < 2 {
        return Err(Error::domain("excess bound needs n >= 2"));
    }
    if !s.is_positive() || h.is_negative() {
        return Err(Error::domain("excess bound needs s > 0 and h >= 0"));
    }
    if h * Rat::from_int(2) > *s {
        return Err(Error::domain(format!("height {h} exceeds half of s = {s}")));
    }
    let inner = h.pow(i64::from(n))? / s;
    let root = root_enclosure(&inner, n - 1, rel_width)?;
    let eight = Rat::from_int(8);
    Ok(root.map_increasing(|v| v * &eight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::SciDec;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(&r("3"), &r("3"), 7).unwrap(), r("1/2"));
        assert_eq!(gamma(&r("30"), &r("3"), 2).unwrap(), r("1/101"));
        assert!(gamma(&r("1"), &r("3"), 2).is_err());
        assert!(gamma(&r("2"), &r("0"), 2).is_err());
    }

    #[test]
    fn coefficients_match_eval() {
        let p = BarrierPoly::new(2, 3, Variant::Section3);
        let coeffs = p.coefficients();
        assert_eq!(coeffs.len(), 4);
        assert!(coeffs[0].is_zero());
        let x = r("3/7");
        let horner = coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * &x + c);
        assert_eq!(horner, p.eval(&x));
    }

    #[test]
    fn h_at_zero_and_past_asymptote() {
        assert_eq!(h_eval(2, 3, Variant::Appendix, &Rat::zero()).unwrap(), Rat::one());
        assert!(matches!(h_eval(1, 1, Variant::Section3, &r("1/1000")), Err(Error::Domain(_))));
        assert!(h_eval(1, 1, Variant::Section3, &r("-1/1000")).is_err());
    }

    #[test]
    fn delta_certificate() {
        let d = delta_kn(1, 1, Variant::Section3, &r("1e-12")).unwrap();
        let p = barrier(1, 1, Variant::Section3).unwrap();
        assert!(p.eval(d.lo()) < Rat::one() && p.eval(d.hi()) > Rat::one());
        assert!(d.rel_width() <= r("1e-12"));
        assert_eq!(SciDec::from_enc(&d, 3, false).unwrap().to_string(), "4.17e-5");
    }

    /// Independent oracle: plain rational bisection of 24000 x (1 + x/2) = 1/2
    /// on [0, 1e-4], no dyadic scaling.
    #[test]
    fn h_inv_matches_plain_bisection() {
        let f = |x: &Rat| r("24000") * x * (Rat::one() + x * r("1/2"));
        let target = r("1/2");
        let (mut lo, mut hi) = (Rat::zero(), r("1e-4"));
        for _ in 0..60 {
            let mid = (&lo + &hi) * r("1/2");
            if f(&mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let e = h_inv(1, 1, Variant::Section3, &r("2"), &r("1e-12")).unwrap();
        assert!(e.overlaps(&Enc::new(lo, hi).unwrap()));
        // 1/48000 * (1 - ~1e-5) = 2.08331...e-5
        assert_eq!(SciDec::from_enc(&e, 5, false).unwrap().to_string(), "2.0833e-5");
        let h = h_eval(1, 1, Variant::Section3, e.lo()).unwrap();
        let h2 = h_eval(1, 1, Variant::Section3, e.hi()).unwrap();
        assert!(h < r("2") && r("2") < h2);
    }

    #[test]
    fn h_inv_rejects_c_at_most_one() {
        assert!(h_inv(1, 2, Variant::Section3, &r("1"), &r("1e-6")).is_err());
    }

    #[test]
    fn excess_bound_cases() {
        let eps = r("1e-9");
        assert_eq!(excess_bound(&r("0"), &r("5"), 3, &eps).unwrap(), Enc::point(r("0")));
        assert_eq!(excess_bound(&r("1"), &r("2"), 2, &eps).unwrap(), Enc::point(r("4")));
        let e = excess_bound(&r("1"), &r("8"), 3, &eps).unwrap();
        // 8 / sqrt(8) = 2.828427...
        assert!(e.lo() > &r("2.828427") && e.hi() < &r("2.828428"));
        assert!(matches!(excess_bound(&r("2"), &r("3"), 3, &eps), Err(Error::Domain(_))));
    }

    #[test]
    fn cache_returns_shared_instance() {
        let a = barrier(2, 2, Variant::Section3).unwrap();
        let b = barrier(2, 2, Variant::Section3).unwrap();
        assert!(matches!(barrier(0, 2, Variant::Section3), Err(Error::Domain(_))));
        assert!(Arc::ptr_eq(&a, &b));
    }
}
