use std::fmt;

use crate::error::{Error, Result};
use crate::exact::Rat;

/// Closed rational interval `[lo, hi]` certified to contain a real value.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Enc {
    lo: Rat,
    hi: Rat,
}

impl Enc {
    pub fn new(lo: Rat, hi: Rat) -> Result<Self> {
        if lo > hi {
            return Err(Error::domain(format!("empty enclosure [{lo}, {hi}]")));
        }
        Ok(Enc { lo, hi })
    }

    pub fn point(v: Rat) -> Self {
        Enc { lo: v.clone(), hi: v }
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rat, Rat) {
        (self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) * Rat::new(1, 2).unwrap()
    }

    /// `(hi - lo) / min(|lo|, |hi|)` for enclosures away from zero. When the
    /// enclosure touches or straddles zero the larger magnitude is used instead,
    /// and `[0, 0]` has relative width zero.
    pub fn rel_width(&self) -> Rat {
        let w = self.width();
        if w.is_zero() {
            return Rat::zero();
        }
        let (a, b) = (self.lo.abs(), self.hi.abs());
        let straddles = !self.lo.is_positive() && !self.hi.is_negative();
        let scale = if straddles { Rat::max(&a, &b) } else { Rat::min(&a, &b) };
        w / scale
    }

    pub fn rel_width_within(&self, bound: &Rat) -> bool {
        &self.rel_width() <= bound
    }

    /// Image under a nondecreasing map, evaluated at the two endpoints.
    pub fn map_increasing(&self, mut f: impl FnMut(&Rat) -> Rat) -> Enc {
        if self.is_point() {
            return Enc::point(f(&self.lo));
        }
        Enc { lo: f(&self.lo), hi: f(&self.hi) }
    }

    /// Image under a nonincreasing map.
    pub fn map_decreasing(&self, mut f: impl FnMut(&Rat) -> Rat) -> Enc {
        if self.is_point() {
            return Enc::point(f(&self.lo));
        }
        Enc { lo: f(&self.hi), hi: f(&self.lo) }
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Enc {
        self.map_decreasing(|v| Rat::one() - v)
    }

    /// Hull of two enclosures.
    pub fn hull(&self, other: &Enc) -> Enc {
        Enc {
            lo: Rat::min(&self.lo, &other.lo),
            hi: Rat::max(&self.hi, &other.hi),
        }
    }

    /// Endpoint-wise maximum: encloses `max(a, b)` for `a` in `self`, `b` in `other`.
    pub fn max(&self, other: &Enc) -> Enc {
        Enc {
            lo: Rat::max(&self.lo, &other.lo),
            hi: Rat::max(&self.hi, &other.hi),
        }
    }

    /// Endpoint-wise minimum.
    pub fn min(&self, other: &Enc) -> Enc {
        Enc {
            lo: Rat::min(&self.lo, &other.lo),
            hi: Rat::min(&self.hi, &other.hi),
        }
    }

    /// Every point of `self` is strictly below every point of `other`.
    pub fn certainly_below(&self, other: &Enc) -> bool {
        self.hi < other.lo
    }

    pub fn overlaps(&self, other: &Enc) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

impl fmt::Debug for Enc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn rejects_inverted() {
        assert!(Enc::new(r("2"), r("1")).is_err());
        assert!(Enc::new(r("1"), r("1")).unwrap().is_point());
    }

    #[test]
    fn relative_width() {
        let e = Enc::new(r("100"), r("101")).unwrap();
        assert_eq!(e.rel_width(), r("1/100"));
        let e = Enc::new(r("-101"), r("-100")).unwrap();
        assert_eq!(e.rel_width(), r("1/100"));
        let e = Enc::new(r("0"), r("1/4")).unwrap();
        assert_eq!(e.rel_width(), r("1"));
        assert_eq!(Enc::point(r("0")).rel_width(), r("0"));
    }

    #[test]
    fn monotone_maps() {
        let e = Enc::new(r("1"), r("2")).unwrap();
        let sq = e.map_increasing(|x| x * x);
        assert_eq!((sq.lo().clone(), sq.hi().clone()), (r("1"), r("4")));
        let inv = e.map_decreasing(|x| x.recip().unwrap());
        assert_eq!((inv.lo().clone(), inv.hi().clone()), (r("1/2"), r("1")));
        let om = Enc::new(r("1/4"), r("1/3")).unwrap().one_minus();
        assert_eq!((om.lo().clone(), om.hi().clone()), (r("2/3"), r("3/4")));
    }

    #[test]
    fn ordering_helpers() {
        let a = Enc::new(r("1"), r("2")).unwrap();
        let b = Enc::new(r("3"), r("4")).unwrap();
        let c = Enc::new(r("3/2"), r("7/2")).unwrap();
        assert!(a.certainly_below(&b));
        assert!(!a.certainly_below(&c));
        assert!(a.overlaps(&c) && c.overlaps(&b));
        let m = a.max(&c);
        assert_eq!((m.lo().clone(), m.hi().clone()), (r("3/2"), r("7/2")));
    }
}
