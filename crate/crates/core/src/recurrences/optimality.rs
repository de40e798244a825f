use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::recurrences::{Check, SeqBundle, Variant};

/// Result of testing candidate `d_i`, `b_i` sequences against the canonical ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DominanceReport {
    /// Ineq1 or Ineq3 fails for the candidates, so nothing can be concluded.
    HypothesesNotSatisfied { check: Check, index: usize },
    /// `d_i >= C(i)` and `b_i <= canonical b_i` everywhere; `tight` when every
    /// comparison is an equality.
    Dominates { tight: bool },
    /// Hypotheses hold yet a bound fails. Never expected; reported rather than assumed away.
    Violation { sequence: char, index: usize },
}

impl DominanceReport {
    pub fn summary(&self) -> String {
        match self {
            DominanceReport::HypothesesNotSatisfied { check, index } => {
                format!("hypotheses not satisfied: {check} fails at i={index}")
            }
            DominanceReport::Dominates { tight: true } => "dominance holds with equality".into(),
            DominanceReport::Dominates { tight: false } => "dominance holds".into(),
            DominanceReport::Violation { sequence, index } => {
                format!("dominance violated: {sequence}_{index}")
            }
        }
    }
}

/// Optimality test: sequences satisfying Ineq1 and Ineq3 (normalized to
/// `d0 = 1`) must dominate the Appendix-variant constants.
///
/// `d_seq` has `k + 1` entries, `b_seq` has `k`. Ineq3 is tested in the
/// root-free form `8^(n-1) b_i (d0 + 10 d_i)^(n-1) <= (d0/2k)^(n-1)`, which
/// needs `n >= 2`.
pub fn lemma_a2_check(k: u32, n: u32, d_seq: &[Rat], b_seq: &[Rat]) -> Result<DominanceReport> {
    let kk = k as usize;
    if d_seq.len() != kk + 1 || b_seq.len() != kk {
        return Err(Error::usage(format!(
            "expected {} d values and {} b values, got {} and {}",
            kk + 1,
            kk,
            d_seq.len(),
            b_seq.len()
        )));
    }
    if d_seq[0] != Rat::one() {
        return Err(Error::usage("d sequence must be normalized to d0 = 1"));
    }
    if n < 2 {
        return Err(Error::domain("the optimality check needs n >= 2"));
    }

    let d0 = &d_seq[0];
    let ten = Rat::from_int(10);
    let e = i64::from(n - 1);
    let bound3 = (d0 / Rat::from_int(2 * i64::from(k))).pow(e)?;
    let eight = Rat::from_int(8).pow(e)?;
    for i in 0..kk {
        let lhs = d0 + &ten * &d_seq[i];
        let rhs = &b_seq[i] * (&d_seq[i + 1] - Rat::from_int(3) * d0 - &ten * &d_seq[i]);
        if lhs > rhs {
            return Ok(DominanceReport::HypothesesNotSatisfied { check: Check::Ineq1, index: i });
        }
        let lhs3 = &eight * &b_seq[i] * lhs.pow(e)?;
        if !b_seq[i].is_positive() || lhs3 > bound3 {
            return Ok(DominanceReport::HypothesesNotSatisfied { check: Check::Ineq3, index: i });
        }
    }

    let canon = SeqBundle::new(k, n, Variant::Appendix);
    let mut tight = true;
    for (i, d) in d_seq.iter().enumerate() {
        let c = Rat::from_int(canon.c[i].clone());
        if d < &c {
            return Ok(DominanceReport::Violation { sequence: 'd', index: i });
        }
        tight &= d == &c;
    }
    for (i, b) in b_seq.iter().enumerate() {
        if b > &canon.b[i] {
            return Ok(DominanceReport::Violation { sequence: 'b', index: i });
        }
        tight &= b == &canon.b[i];
    }
    Ok(DominanceReport::Dominates { tight })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical(k: u32, n: u32, v: Variant) -> (Vec<Rat>, Vec<Rat>) {
        let s = SeqBundle::new(k, n, v);
        let d = s.c.iter().map(|c| Rat::from_int(c.clone())).collect();
        let b = s.b[..k as usize].to_vec();
        (d, b)
    }

    #[test]
    fn canonical_sequences_are_tight() {
        for k in 1..=3 {
            for n in 2..=4 {
                let (d, b) = canonical(k, n, Variant::Appendix);
                assert_eq!(
                    lemma_a2_check(k, n, &d, &b).unwrap(),
                    DominanceReport::Dominates { tight: true }
                );
            }
        }
    }

    #[test]
    fn enlarged_last_d_still_dominates() {
        let (mut d, b) = canonical(1, 3, Variant::Appendix);
        d[1] = &d[1] * Rat::from_int(2);
        assert_eq!(
            lemma_a2_check(1, 3, &d, &b).unwrap(),
            DominanceReport::Dominates { tight: false }
        );
        let (mut d, b) = canonical(3, 2, Variant::Appendix);
        d[3] = &d[3] * Rat::from_int(2);
        assert_eq!(
            lemma_a2_check(3, 2, &d, &b).unwrap(),
            DominanceReport::Dominates { tight: false }
        );
    }

    #[test]
    fn section3_sequences_fail_hypotheses() {
        let (d, b) = canonical(1, 2, Variant::Section3);
        let rep = lemma_a2_check(1, 2, &d, &b).unwrap();
        assert_eq!(rep, DominanceReport::HypothesesNotSatisfied { check: Check::Ineq1, index: 0 });
        assert!(rep.summary().contains("hypotheses not satisfied"));
    }

    #[test]
    fn length_mismatch_is_usage_error() {
        let (d, b) = canonical(2, 2, Variant::Appendix);
        assert!(matches!(lemma_a2_check(2, 2, &d[..2], &b), Err(Error::Usage(_))));
        assert!(matches!(lemma_a2_check(2, 2, &d, &b[..1]), Err(Error::Usage(_))));
    }
}
