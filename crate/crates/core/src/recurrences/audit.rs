use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exact::{Enc, Rat};
use crate::recurrences::{SeqBundle, Variant};
use crate::thresholds::h_eval;

/// The identities and inequalities of the Moving-In construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// `d0 + 10 d_i = b_i (d_{i+1} - 3 d0 - 10 d_i)`
    Eq1,
    /// `8 b_i^(1/(n-1)) (d0 + 10 d_i) = d0 / 2k`
    Eq3,
    /// `d0 + 10 d_i <= b_i (d_{i+1} - 3 d0 - 10 d_i)`
    Ineq1,
    /// `d0 + 10 d_i <= b_i (c - 1 + d0 (2 - i/k))` with `c = h(d0)`
    Ineq2,
    /// `8 b_i^(1/(n-1)) (d0 + 10 d_i) <= d0 / 2k`
    Ineq3,
    /// `10 d_k = 10^(-k-1) (1 + d0/2k)^-k (1 - 1/h(d0))`; equality by construction.
    Ineq4,
    /// `0 < b_i <= 1/2`
    BRange,
    /// `d_k < 1`
    DkBelowOne,
    /// `d_i < d_{i+1}`
    DMonotone,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Eq1 => "Eq1",
            Check::Eq3 => "Eq3",
            Check::Ineq1 => "Ineq1",
            Check::Ineq2 => "Ineq2",
            Check::Ineq3 => "Ineq3",
            Check::Ineq4 => "Ineq4",
            Check::BRange => "b-range",
            Check::DkBelowOne => "dk<1",
            Check::DMonotone => "d-monotone",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Lt,
}

impl Relation {
    fn holds(self, left: &Rat, right: &Rat) -> bool {
        match self {
            Relation::Eq => left == right,
            Relation::Le => left <= right,
            Relation::Lt => left < right,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Lt => "<",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRecord {
    pub check: Check,
    pub index: usize,
    pub relation: Relation,
    pub left: Rat,
    pub right: Rat,
    pub holds: bool,
}

/// Outcome of every check at one `(k, n, variant, d0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub k: u32,
    pub n: u32,
    pub variant: Variant,
    pub d0: Rat,
    pub records: Vec<CheckRecord>,
}

impl AuditReport {
    fn push(&mut self, check: Check, index: usize, relation: Relation, left: Rat, right: Rat) {
        let holds = relation.holds(&left, &right);
        self.records.push(CheckRecord { check, index, relation, left, right, holds });
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| !r.holds)
    }

    pub fn record(&self, check: Check, index: usize) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check == check && r.index == index)
    }

    pub fn passes(&self, check: Check) -> bool {
        self.records.iter().filter(|r| r.check == check).all(|r| r.holds)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "audit k={} n={} variant={} d0={}\n",
            self.k, self.n, self.variant, self.d0
        );
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:<10} i={:<2} {:<4} {} {} {}",
                r.check.name(),
                r.index,
                if r.holds { "PASS" } else { "FAIL" },
                r.left,
                r.relation.symbol(),
                r.right,
            );
        }
        let fails = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.records.len(), fails);
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,i,relation,left,right,verdict\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                r.check.name(),
                r.index,
                r.relation.symbol(),
                r.left,
                r.right,
                if r.holds { "pass" } else { "fail" },
            );
        }
        out
    }
}

/// The three audit points `{delta/10, delta/2, 9 delta/10}`, taken off the
/// lower end of the `delta` enclosure so they stay inside `(0, delta)`.
pub fn default_d0_samples(delta: &Enc) -> [Rat; 3] {
    let d = delta.lo();
    [
        d * Rat::new(1, 10).unwrap(),
        d * Rat::new(1, 2).unwrap(),
        d * Rat::new(9, 10).unwrap(),
    ]
}

/// Evaluate both sides of every check in exact arithmetic.
///
/// `d0` must lie in `(0, delta_{k,n})`, which is tested exactly as
/// `p(d0) < 1` rather than against an enclosure of `delta`.
pub fn audit(k: u32, n: u32, variant: Variant, d0: &Rat) -> Result<AuditReport> {
    if k == 0 || n == 0 {
        return Err(Error::domain("k and n must be positive"));
    }
    if !d0.is_positive() {
        return Err(Error::domain(format!("d0 must be positive, got {d0}")));
    }
    let c = h_eval(k, n, variant, d0)
        .map_err(|_| Error::domain(format!("d0 = {d0} is not below delta_{{{k},{n}}}")))?;

    let seq = SeqBundle::new(k, n, variant);
    let mut report = AuditReport { k, n, variant, d0: d0.clone(), records: Vec::new() };
    let ten = Rat::from_int(10);
    let two_k = Rat::from_int(2 * i64::from(k));
    let d = |i: usize| seq.d(i, d0);

    for i in 0..k as usize {
        let lhs = d0 + &ten * d(i);
        let eq1_rhs = &seq.b[i] * (d(i + 1) - Rat::from_int(3) * d0 - &ten * d(i));
        report.push(Check::Eq1, i, Relation::Eq, lhs.clone(), eq1_rhs.clone());

        let eq3_lhs = Rat::from_int(8) * seq.b_root(i) * &lhs;
        let eq3_rhs = d0 / &two_k;
        report.push(Check::Eq3, i, Relation::Eq, eq3_lhs.clone(), eq3_rhs.clone());

        report.push(Check::Ineq1, i, Relation::Le, lhs.clone(), eq1_rhs);

        let frac = Rat::new(i as i64, i64::from(k)).unwrap();
        let slack = &c - Rat::one() + d0 * (Rat::from_int(2) - frac);
        report.push(Check::Ineq2, i, Relation::Le, lhs, &seq.b[i] * slack);

        report.push(Check::Ineq3, i, Relation::Le, eq3_lhs, eq3_rhs);
    }

    let kk = k as usize;
    let dk = d(kk);
    let ineq4_rhs = Rat::pow10(-i64::from(k) - 1)
        * (Rat::one() + d0 / &two_k).pow(-i64::from(k))?
        * (Rat::one() - c.recip()?);
    report.push(Check::Ineq4, kk, Relation::Eq, &ten * &dk, ineq4_rhs);

    let half = Rat::new(1, 2).unwrap();
    for (i, b) in seq.b.iter().enumerate().take(kk) {
        report.push(Check::BRange, i, Relation::Le, b.clone(), half.clone());
    }
    report.push(Check::DkBelowOne, kk, Relation::Lt, dk, Rat::one());
    for i in 0..kk {
        report.push(Check::DMonotone, i, Relation::Lt, d(i), d(i + 1));
    }
    Ok(report)
}
