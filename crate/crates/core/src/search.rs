//! Direct minimization of `beta(k, c, n)` over `c` as a cross-check on the
//! closed-form thresholds.
//!
//! `beta` is a maximum of smooth terms, so only a derivative-free search is
//! used: a grid scan followed by ternary bracketing around the best grid
//! point. The bracketing assumes the single-dip profile seen in practice and
//! falls back to returning the raw profile when the grid contradicts it.

use crate::beta::{beta_eval, epsilon_kn, BetaResult, TermChain};
use crate::error::{Error, Result};
use crate::exact::{root_enclosure, Enc, Rat, SciDec};
use crate::recurrences::Variant;

/// Significant bits kept for generated sample locations.
const SAMPLE_BITS: u64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    /// Evenly spaced in `c`.
    LinearC,
    /// Evenly spaced in `1 / (c - 1)`.
    LinearInvGap,
    /// Geometric in `c - 1`.
    Log,
}

impl std::str::FromStr for Spacing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linear" | "linear-c" => Ok(Spacing::LinearC),
            "inverse" | "linear-inv-gap" => Ok(Spacing::LinearInvGap),
            "log" => Ok(Spacing::Log),
            other => Err(Error::usage(format!("unknown spacing '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub c_min: Rat,
    pub c_max: Rat,
    pub steps: usize,
    pub spacing: Spacing,
    /// Decades by which the bracket around the best grid point is shrunk.
    pub refine_decades: u32,
    /// Relative width of every inversion.
    pub rel_width: Rat,
}

impl Default for GridSpec {
    /// `c - 1` log-spaced over `[1e-3, 1e9]`, ten points per decade.
    fn default() -> Self {
        GridSpec {
            c_min: Rat::one() + Rat::pow10(-3),
            c_max: Rat::one() + Rat::pow10(9),
            steps: 121,
            spacing: Spacing::Log,
            refine_decades: 3,
            rel_width: Rat::pow10(-14),
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.c_min <= Rat::one() {
            return Err(Error::domain(format!("scan needs c_min > 1, got {}", self.c_min)));
        }
        if self.c_max < self.c_min {
            return Err(Error::domain("scan needs c_max >= c_min"));
        }
        if self.steps == 0 {
            return Err(Error::usage("scan needs at least one grid point"));
        }
        Ok(())
    }

    /// Sample locations, ascending, with both ends exact.
    pub fn points(&self) -> Result<Vec<Rat>> {
        self.validate()?;
        if self.steps == 1 || self.c_min == self.c_max {
            return Ok(vec![self.c_min.clone()]);
        }
        let last = self.steps - 1;
        let one = Rat::one();
        let mut pts = Vec::with_capacity(self.steps);
        match self.spacing {
            Spacing::LinearC => {
                let step = (&self.c_max - &self.c_min) / Rat::from_int(last as i64);
                for j in 0..=last {
                    pts.push(&self.c_min + &step * Rat::from_int(j as i64));
                }
            }
            Spacing::LinearInvGap => {
                let u0 = (&self.c_min - &one).recip()?;
                let u1 = (&self.c_max - &one).recip()?;
                let step = (&u0 - &u1) / Rat::from_int(last as i64);
                for j in 0..=last {
                    let u = &u0 - &step * Rat::from_int(j as i64);
                    pts.push(&one + u.recip()?);
                }
            }
            Spacing::Log => {
                let g0 = &self.c_min - &one;
                let ratio = (&self.c_max - &one) / &g0;
                let q = root_enclosure(&ratio, last as u32, &Rat::pow10(-18))?
                    .lo()
                    .round_dyadic(SAMPLE_BITS, false);
                let mut g = g0.clone();
                pts.push(self.c_min.clone());
                for _ in 1..last {
                    g = (&g * &q).round_dyadic(SAMPLE_BITS, false);
                    pts.push(&one + &g);
                }
                pts.push(self.c_max.clone());
            }
        }
        Ok(pts)
    }
}

/// `beta` at one sample location.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfilePoint {
    pub c: Rat,
    pub beta: Enc,
    pub argmax: Vec<TermChain>,
}

impl ProfilePoint {
    fn from_result(r: BetaResult) -> Self {
        ProfilePoint { c: r.c, beta: r.value, argmax: r.argmax }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub k: u32,
    pub n: u32,
    pub variant: Variant,
    pub grid: GridSpec,
    /// One entry per grid point, in grid order.
    pub profile: Vec<ProfilePoint>,
    /// Points evaluated while bracketing, in evaluation order.
    pub refined: Vec<ProfilePoint>,
    pub best_c: Rat,
    pub best_beta: Enc,
    /// Set when the grid profile is not single-dip and no refinement was done.
    pub warning: Option<String>,
}

impl ScanResult {
    /// Every evaluated point, grid first.
    pub fn all_points(&self) -> impl Iterator<Item = &ProfilePoint> {
        self.profile.iter().chain(self.refined.iter())
    }

    /// Profile as CSV with columns `c,beta_lo,beta_hi`: `c` as an exact
    /// rational, the endpoints in scientific form with `digits` digits.
    pub fn profile_csv(&self, digits: usize) -> Result<String> {
        let mut out = String::from("c,beta_lo,beta_hi\n");
        for p in &self.profile {
            let lo = render_beta(p.beta.lo(), digits)?;
            let hi = render_beta(p.beta.hi(), digits)?;
            out.push_str(&format!("{},{lo},{hi}\n", p.c));
        }
        Ok(out)
    }
}

/// `1 - x` form when it applies, plain otherwise.
pub fn render_beta(v: &Rat, digits: usize) -> Result<SciDec> {
    SciDec::from_rat(v, digits, true).or_else(|_| SciDec::from_rat(v, digits, false))
}

fn eval_point(k: u32, n: u32, variant: Variant, c: &Rat, rw: &Rat) -> Result<ProfilePoint> {
    beta_eval(k, n, c, variant, rw).map(ProfilePoint::from_result)
}

fn better(a: &Enc, b: &Enc) -> bool {
    a.midpoint() < b.midpoint()
}

/// A certified rise followed later by a certified fall (or the reverse
/// around the minimum) means the profile is not single-dip.
fn single_dip(profile: &[ProfilePoint], best: usize) -> bool {
    let left_ok = profile[..=best]
        .windows(2)
        .all(|w| !w[0].beta.certainly_below(&w[1].beta));
    let right_ok = profile[best..]
        .windows(2)
        .all(|w| !w[1].beta.certainly_below(&w[0].beta));
    left_ok && right_ok
}

/// Scan `beta(k, ., n)` over the grid and bracket the minimum.
pub fn scan(k: u32, n: u32, variant: Variant, grid: &GridSpec) -> Result<ScanResult> {
    if k == 0 || n == 0 {
        return Err(Error::domain("k and n must be positive"));
    }
    let rw = &grid.rel_width;
    let points = grid.points()?;
    let profile = points
        .iter()
        .map(|c| eval_point(k, n, variant, c, rw))
        .collect::<Result<Vec<_>>>()?;

    let mut best = 0;
    for (i, p) in profile.iter().enumerate().skip(1) {
        if better(&p.beta, &profile[best].beta) {
            best = i;
        }
    }
    let mut best_c = profile[best].c.clone();
    let mut best_beta = profile[best].beta.clone();
    let mut refined = Vec::new();
    let mut warning = None;

    if !single_dip(&profile, best) {
        warning = Some("beta profile is not single-dip on this grid; refinement skipped".into());
    } else if profile.len() > 1 {
        let mut lo = profile[best.saturating_sub(1)].c.clone();
        let mut hi = profile[(best + 1).min(profile.len() - 1)].c.clone();
        let stop = (&hi - &lo) * Rat::pow10(-i64::from(grid.refine_decades));
        let third = Rat::new(1, 3).unwrap();
        while &hi - &lo > stop {
            let span = &hi - &lo;
            let m1 = (&lo + &span * &third).round_dyadic(SAMPLE_BITS, false);
            let m2 = (&hi - &span * &third).round_dyadic(SAMPLE_BITS, true);
            if m1 <= lo || m2 >= hi || m1 >= m2 {
                break;
            }
            let p1 = eval_point(k, n, variant, &m1, rw)?;
            let p2 = eval_point(k, n, variant, &m2, rw)?;
            if better(&p1.beta, &p2.beta) {
                hi = m2;
            } else {
                lo = m1;
            }
            for p in [p1, p2] {
                if better(&p.beta, &best_beta) {
                    best_c = p.c.clone();
                    best_beta = p.beta.clone();
                }
                refined.push(p);
            }
        }
    }

    Ok(ScanResult {
        k,
        n,
        variant,
        grid: grid.clone(),
        profile,
        refined,
        best_c,
        best_beta,
        warning,
    })
}

/// The sampled infimum of `beta` against `1 - epsilon_{k,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub k: u32,
    pub n: u32,
    pub best_c: Rat,
    pub inf_estimate: Enc,
    pub one_minus_epsilon: Enc,
    pub epsilon: Enc,
    /// `(inf - (1 - epsilon)) / epsilon`.
    pub relative_gap: Enc,
    /// Every evaluated `beta` lies certifiably at or above `1 - epsilon`.
    pub certified: bool,
}

/// Scan with `grid` and compare against the limit value.
pub fn gap_report_with(k: u32, n: u32, variant: Variant, grid: &GridSpec) -> Result<GapReport> {
    if k < 2 {
        return Err(Error::domain("the limit gap is only meaningful for k >= 2"));
    }
    let result = scan(k, n, variant, grid)?;
    let eps = epsilon_kn(k, n, variant, &grid.rel_width)?;
    let ome = eps.one_minus();
    let certified = result.all_points().all(|p| p.beta.lo() >= ome.hi());
    let inf = result.best_beta.clone();
    let diff_lo = inf.lo() - ome.hi();
    let diff_hi = inf.hi() - ome.lo();
    let div = |d: &Rat, small_if_pos: bool| {
        let e = if d.is_negative() == small_if_pos { eps.lo() } else { eps.hi() };
        d / e
    };
    let relative_gap = Enc::new(div(&diff_lo, false), div(&diff_hi, true))?;
    Ok(GapReport {
        k,
        n,
        best_c: result.best_c,
        inf_estimate: inf,
        one_minus_epsilon: ome,
        epsilon: eps,
        relative_gap,
        certified,
    })
}

/// [`gap_report_with`] on the default grid.
pub fn gap_report(k: u32, n: u32, variant: Variant) -> Result<GapReport> {
    gap_report_with(k, n, variant, &GridSpec::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn grid_endpoints_exact() {
        let g = GridSpec::default();
        let pts = g.points().unwrap();
        assert_eq!(pts.len(), 121);
        assert_eq!(pts[0], g.c_min);
        assert_eq!(pts[120], g.c_max);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        // 10 points per decade: c - 1 at index 30 is close to 1.
        let mid = &pts[30] - Rat::one();
        assert!(mid > r("0.999") && mid < r("1.001"));
    }

    #[test]
    fn other_spacings() {
        let g = GridSpec {
            c_min: r("3/2"),
            c_max: r("3"),
            steps: 4,
            spacing: Spacing::LinearC,
            ..GridSpec::default()
        };
        assert_eq!(g.points().unwrap(), vec![r("3/2"), r("2"), r("5/2"), r("3")]);
        let g = GridSpec { spacing: Spacing::LinearInvGap, steps: 3, ..g };
        // 1/(c-1) runs 2, 1.25, 0.5
        assert_eq!(g.points().unwrap(), vec![r("3/2"), r("9/5"), r("3")]);
    }

    #[test]
    fn rejects_bad_grid() {
        let g = GridSpec { c_min: r("1"), ..GridSpec::default() };
        assert!(matches!(scan(1, 1, Variant::Section3, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn single_point_grid() {
        let g = GridSpec { c_min: r("2"), c_max: r("2"), steps: 1, ..GridSpec::default() };
        let res = scan(1, 2, Variant::Section3, &g).unwrap();
        let direct = beta_eval(1, 2, &r("2"), Variant::Section3, &g.rel_width).unwrap();
        assert_eq!(res.best_beta, direct.value);
        assert_eq!(res.best_c, r("2"));
        assert!(res.refined.is_empty());
        let csv = res.profile_csv(3).unwrap();
        assert!(csv.starts_with("c,beta_lo,beta_hi\n2,1 - "), "{csv}");
    }

    #[test]
    fn level_one_minimizer_near_two() {
        let g = GridSpec {
            c_min: r("3/2"),
            c_max: r("3"),
            steps: 16,
            spacing: Spacing::LinearC,
            ..GridSpec::default()
        };
        let res = scan(1, 1, Variant::Section3, &g).unwrap();
        assert!(res.warning.is_none());
        assert!((&res.best_c - r("2")).abs() <= r("0.05"), "c* = {}", res.best_c);
    }

    #[test]
    fn deterministic() {
        let g = GridSpec { steps: 13, ..GridSpec::default() };
        let a = scan(2, 2, Variant::Section3, &g).unwrap();
        let b = scan(2, 2, Variant::Section3, &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gap_needs_level_two() {
        assert!(gap_report(1, 2, Variant::Section3).is_err());
    }
}
