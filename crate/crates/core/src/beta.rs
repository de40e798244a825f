//! `beta(k, c, n)` and the quantities derived from it.
//!
//! `beta` is defined recursively:
//!
//! ```text
//! beta(k, c, n) = max { 1 - gamma(c, h_k^-1(c), n),
//!                       beta(j, 1 + h_k^-1(c)/2k, n)  for j = 1..k-1 }
//! ```
//!
//! Fully unfolded it is a maximum over `2^(k-1)` leaf terms, one per
//! strictly decreasing chain `k = k_0 > k_1 > ... > k_m >= 1`. Along a chain
//! `c_0 = c` and `c_{j+1} = 1 + h_{k_j}^-1(c_j) / 2k_j`; the leaf value is
//! `1 - gamma(c_m, h_{k_m}^-1(c_m), n)`.
//!
//! `epsilon_{k,n}` is the `c -> infinity` limit of the `gamma` of the
//! full-descent chain `[k, k-1, ..., 1]`, obtained by substituting
//! `delta_{k,n}` for `h_k^-1(c)`, and `alpha(k, n) = 1 - epsilon_{k,n}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{Enc, Rat};
use crate::recurrences::Variant;
use crate::thresholds::{delta_kn, gamma_enc, h_inv_enc};

/// Maximum number of thousand-fold refinements when resolving an argmax or
/// reaching a requested output width.
pub const REFINEMENT_CAP: u32 = 4;

/// One leaf of the expansion: a strictly decreasing list of levels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermChain(Vec<u32>);

impl TermChain {
    pub fn new(levels: Vec<u32>) -> Result<Self> {
        let ok = !levels.is_empty()
            && levels.last().copied().unwrap_or(0) >= 1
            && levels.windows(2).all(|w| w[0] > w[1]);
        if !ok {
            return Err(Error::usage(format!("{levels:?} is not a strictly decreasing chain")));
        }
        Ok(TermChain(levels))
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn top(&self) -> u32 {
        self.0[0]
    }

    pub fn is_leading(&self) -> bool {
        self.0.len() == 1
    }

    /// `[k, k-1, ..., 1]`.
    pub fn is_full_descent(&self) -> bool {
        self.0.len() == self.top() as usize
    }

    pub fn leading(k: u32) -> Self {
        TermChain(vec![k])
    }

    pub fn full_descent(k: u32) -> Self {
        TermChain((1..=k).rev().collect())
    }
}

impl fmt::Display for TermChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All `2^(k-1)` chains for level `k`, in lexicographic order of levels
/// (so the full-descent chain comes last).
pub fn beta_terms(k: u32) -> Vec<TermChain> {
    assert!(k >= 1, "chains start at level k >= 1");
    let mut out = Vec::with_capacity(1 << (k - 1));
    for mask in 0u64..(1u64 << (k - 1)) {
        let mut levels = vec![k];
        levels.extend((1..k).rev().filter(|j| mask & (1 << (j - 1)) != 0));
        out.push(TermChain(levels));
    }
    out.sort();
    out
}

/// `1 + x / 2j`, applied to an enclosure.
fn next_c(x: &Enc, level: u32) -> Enc {
    let two_j = Rat::from_int(2 * i64::from(level));
    x.map_increasing(|v| Rat::one() + v / &two_j)
}

/// `gamma` of a single chain at `c`.
pub fn chain_gamma(chain: &TermChain, n: u32, c: &Rat, variant: Variant, rel_width: &Rat) -> Result<Enc> {
    if c <= &Rat::one() {
        return Err(Error::domain(format!("beta needs c > 1, got {c}")));
    }
    let mut cj = Enc::point(c.clone());
    let levels = chain.levels();
    for (idx, &level) in levels.iter().enumerate() {
        let x = h_inv_enc(level, n, variant, &cj, rel_width)?;
        if idx + 1 == levels.len() {
            return gamma_enc(&cj, &x, n);
        }
        cj = next_c(&x, level);
    }
    unreachable!("chains are nonempty")
}

/// One evaluated leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainValue {
    pub chain: TermChain,
    /// Enclosure of the leaf's `gamma`.
    pub gamma: Enc,
    /// Enclosure of `1 - gamma`.
    pub value: Enc,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaResult {
    pub k: u32,
    pub n: u32,
    pub c: Rat,
    pub value: Enc,
    pub chains: Vec<ChainValue>,
    /// Chains that may attain the maximum. More than one means the
    /// enclosures could not separate them within the refinement cap.
    pub argmax: Vec<TermChain>,
}

impl BetaResult {
    pub fn is_tie(&self) -> bool {
        self.argmax.len() > 1
    }

    /// Enclosure of `1 - beta`, the smallest leaf `gamma`.
    pub fn gamma_part(&self) -> Enc {
        self.value.one_minus()
    }
}

fn expand(
    level: u32,
    n: u32,
    c: &Enc,
    variant: Variant,
    rel_width: &Rat,
    prefix: &[u32],
    out: &mut Vec<(TermChain, Enc)>,
) -> Result<()> {
    let x = h_inv_enc(level, n, variant, c, rel_width)?;
    let mut levels = prefix.to_vec();
    levels.push(level);
    out.push((TermChain(levels.clone()), gamma_enc(c, &x, n)?));
    if level > 1 {
        let child_c = next_c(&x, level);
        for j in 1..level {
            expand(j, n, &child_c, variant, rel_width, &levels, out)?;
        }
    }
    Ok(())
}

/// Chains whose `gamma` may be the smallest.
fn minimal_gammas(chains: &[ChainValue]) -> Vec<TermChain> {
    let ceiling = chains.iter().map(|cv| cv.gamma.hi()).min().expect("at least one chain");
    chains
        .iter()
        .filter(|cv| cv.gamma.lo() <= ceiling)
        .map(|cv| cv.chain.clone())
        .collect()
}

/// Evaluate every chain of `beta(k, c, n)` with certified enclosures.
///
/// Inversions run at `rel_width`; if the maximum is ambiguous the width is
/// tightened a thousand-fold up to [`REFINEMENT_CAP`] times, after which the
/// remaining candidates are reported as a tie.
pub fn beta_eval(k: u32, n: u32, c: &Rat, variant: Variant, rel_width: &Rat) -> Result<BetaResult> {
    if c <= &Rat::one() {
        return Err(Error::domain(format!("beta needs c > 1, got {c}")));
    }
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if k == 0 {
        return Ok(BetaResult {
            k,
            n,
            c: c.clone(),
            value: Enc::point(Rat::zero()),
            chains: Vec::new(),
            argmax: Vec::new(),
        });
    }

    let mut rw = rel_width.clone();
    let mut round = 0;
    loop {
        let mut raw = Vec::with_capacity(1 << (k - 1));
        expand(k, n, &Enc::point(c.clone()), variant, &rw, &[], &mut raw)?;
        raw.sort_by(|a, b| a.0.cmp(&b.0));
        let chains: Vec<ChainValue> = raw
            .into_iter()
            .map(|(chain, gamma)| ChainValue { value: gamma.one_minus(), chain, gamma })
            .collect();
        let argmax = minimal_gammas(&chains);
        if argmax.len() == 1 || round >= REFINEMENT_CAP {
            let value = chains
                .iter()
                .skip(1)
                .fold(chains[0].value.clone(), |acc, cv| acc.max(&cv.value));
            return Ok(BetaResult { k, n, c: c.clone(), value, chains, argmax });
        }
        rw = rw * Rat::new(1, 1000).unwrap();
        round += 1;
    }
}

fn epsilon_at(k: u32, n: u32, variant: Variant, rw: &Rat) -> Result<Enc> {
    if k == 1 {
        let two = Enc::point(Rat::from_int(2));
        let x = h_inv_enc(1, n, variant, &two, rw)?;
        return gamma_enc(&two, &x, n);
    }
    let delta = delta_kn(k, n, variant, rw)?;
    let mut c = next_c(&delta, k);
    for level in (2..k).rev() {
        let x = h_inv_enc(level, n, variant, &c, rw)?;
        c = next_c(&x, level);
    }
    let x = h_inv_enc(1, n, variant, &c, rw)?;
    gamma_enc(&c, &x, n)
}

/// Certified enclosure of `epsilon_{k,n}` with relative width at most `rel_width`.
///
/// For `k = 1` this is `gamma(2, h_1^-1(2), n)`; for `k >= 2` the nested limit
/// form with `delta_{k,n}` at the top of the full-descent chain.
pub fn epsilon_kn(k: u32, n: u32, variant: Variant, rel_width: &Rat) -> Result<Enc> {
    if k == 0 || n == 0 {
        return Err(Error::domain("k and n must be positive"));
    }
    if !rel_width.is_positive() {
        return Err(Error::domain("relative width must be positive"));
    }
    // gamma ~ x^n amplifies relative error by n at every level.
    let mut rw = rel_width / Rat::from_int(10 * i64::from(n) * i64::from(k));
    for _ in 0..=REFINEMENT_CAP {
        let eps = epsilon_at(k, n, variant, &rw)?;
        if eps.rel_width_within(rel_width) {
            return Ok(eps);
        }
        rw = rw * Rat::new(1, 1000).unwrap();
    }
    Err(Error::Precision { digit: 1 })
}

/// `alpha(k, n) = 1 - epsilon_{k,n}`. Render with the one-minus display mode.
pub fn alpha_kn(k: u32, n: u32, variant: Variant, rel_width: &Rat) -> Result<Enc> {
    Ok(epsilon_kn(k, n, variant, rel_width)?.one_minus())
}

/// Entry of the revised threshold table, which overlays known exact results
/// on the computed values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RevisedAlpha {
    /// `(1, 1)`: no threshold is given.
    Undefined,
    /// `k > n`: outside the populated triangle.
    NotApplicable,
    /// Exact `0` (all `n <= 3`).
    Zero,
    /// Exact `1/2` (`k = 1`, `n >= 4`).
    Half,
    Computed(Enc),
}

/// Revised table value for `1 <= k <= 3`, `1 <= n <= 10`.
pub fn alpha_revised(k: u32, n: u32, variant: Variant, rel_width: &Rat) -> Result<RevisedAlpha> {
    if !(1..=3).contains(&k) || !(1..=10).contains(&n) {
        return Err(Error::domain(format!("revised table covers 1<=k<=3, 1<=n<=10; got ({k},{n})")));
    }
    Ok(match (k, n) {
        (1, 1) => RevisedAlpha::Undefined,
        _ if k > n => RevisedAlpha::NotApplicable,
        _ if n <= 3 => RevisedAlpha::Zero,
        (1, _) => RevisedAlpha::Half,
        _ => RevisedAlpha::Computed(alpha_kn(k, n, variant, rel_width)?),
    })
}
