//! The integer constants `C_{k,n}(i)` and the scale sequences `d_i`, `b_i`
//! built from them.
//!
//! Two recurrences are in circulation and they disagree for `n >= 2`:
//!
//! ```text
//! Section3:  C(i) = (16k)^(n-1) * (1 + 10*C(i-1)^n + 3 + 10*C(i-1))
//! Appendix:  C(i) = (16k)^(n-1) * (1 + 10*C(i-1))^n + 3 + 10*C(i-1)
//! ```
//!
//! both starting from `C(0) = 1`. The first reproduces the published table of
//! constants; only the second makes the Moving-In identities exact. Both are
//! kept and every caller picks one explicitly.

mod audit;
mod optimality;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::Error;
use crate::exact::Rat;

pub use audit::{audit, default_d0_samples, AuditReport, Check, CheckRecord, Relation};
pub use optimality::{lemma_a2_check, DominanceReport};

/// Which statement of the constant recurrence to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Section3,
    Appendix,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Section3 => "section3",
            Variant::Appendix => "appendix",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "section3" => Ok(Variant::Section3),
            "appendix" => Ok(Variant::Appendix),
            other => Err(Error::usage(format!("unknown variant '{other}'"))),
        }
    }
}

fn step(k: u32, n: u32, prev: &BigInt, variant: Variant) -> BigInt {
    let lead = Pow::pow(BigInt::from(16 * k), n - 1);
    let ten_prev = prev * 10u32;
    match variant {
        Variant::Section3 => lead * (Pow::pow(prev, n) * 10u32 + &ten_prev + 4u32),
        Variant::Appendix => lead * Pow::pow(&ten_prev + 1u32, n) + ten_prev + 3u32,
    }
}

/// `C_{k,n}(0..=upto)`.
///
/// # Panics
/// If `k` or `n` is zero.
pub fn c_sequence(k: u32, n: u32, upto: u32, variant: Variant) -> Vec<BigInt> {
    assert!(k >= 1 && n >= 1, "k and n must be positive");
    let mut seq = Vec::with_capacity(upto as usize + 1);
    seq.push(BigInt::one());
    for _ in 0..upto {
        let next = step(k, n, seq.last().unwrap(), variant);
        seq.push(next);
    }
    seq
}

/// `C_{k,n}(i)`, exact.
pub fn c_kn(k: u32, n: u32, i: u32, variant: Variant) -> BigInt {
    c_sequence(k, n, i, variant).pop().unwrap()
}

/// The headline constant `C_{k,n} = C_{k,n}(k)`.
pub fn c_top(k: u32, n: u32, variant: Variant) -> BigInt {
    c_kn(k, n, k, variant)
}

/// Constants and scale sequences for one `(k, n, variant)`.
///
/// `d_i = C(i) * d0`, so only the coefficients are stored; `b_i` is
/// `[16k(1 + 10 C(i))]^-(n-1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqBundle {
    pub k: u32,
    pub n: u32,
    pub variant: Variant,
    /// `C(0..=k)`, which are also the `d_i` coefficients.
    pub c: Vec<BigInt>,
    /// `b_0..=b_k`.
    pub b: Vec<Rat>,
}

impl SeqBundle {
    pub fn new(k: u32, n: u32, variant: Variant) -> Self {
        let c = c_sequence(k, n, k, variant);
        let b = c
            .iter()
            .map(|ci| {
                let base = BigInt::from(16 * k) * (ci * 10u32 + 1u32);
                Rat::new(BigInt::one(), Pow::pow(base, n - 1)).unwrap()
            })
            .collect();
        SeqBundle { k, n, variant, c, b }
    }

    pub fn i_max(&self) -> u32 {
        self.k
    }

    /// `d_i = C(i) * d0`.
    pub fn d(&self, i: usize, d0: &Rat) -> Rat {
        Rat::from_int(self.c[i].clone()) * d0
    }

    /// `b_i^(1/(n-1))` through its closed form `1 / (16k(1 + 10 C(i)))`.
    pub fn b_root(&self, i: usize) -> Rat {
        let base = BigInt::from(16 * self.k) * (&self.c[i] * 10u32 + 1u32);
        Rat::new(BigInt::one(), base).unwrap()
    }
}

/// Shorthand for [`SeqBundle::new`].
pub fn seq_bundle(k: u32, n: u32, variant: Variant) -> SeqBundle {
    SeqBundle::new(k, n, variant)
}
