use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use ricci_alpha::exact::{root_enclosure, within_one_ulp};
use ricci_alpha::recurrences::{audit, c_sequence, Check};
use ricci_alpha::thresholds::{delta_kn, gamma, gamma_enc, h_eval, h_inv};
use ricci_alpha::{Enc, Rat, SciDec, Variant};

fn rat() -> impl Strategy<Value = Rat> {
    prop_oneof![
        (any::<i64>(), 1i64..1_000_000).prop_map(|(p, q)| Rat::new(p, q).unwrap()),
        (any::<i64>(), 0u64..300).prop_map(|(p, s)| Rat::dyadic(BigInt::from(p), s)),
        (prop::collection::vec(any::<u32>(), 1..8), 0u64..400, any::<bool>()).prop_map(|(d, s, neg)| {
            let m = BigInt::from_slice(if neg { num_bigint::Sign::Minus } else { num_bigint::Sign::Plus }, &d);
            Rat::dyadic(m, s)
        }),
    ]
}

fn nonzero_rat() -> impl Strategy<Value = Rat> {
    rat().prop_filter("nonzero", |r| !r.is_zero())
}

fn plain(x: &Rat) -> BigRational {
    BigRational::new(x.numer().clone(), x.denom().clone())
}

fn same(x: &Rat, y: &BigRational) -> bool {
    x.numer() == y.numer() && x.denom() == y.denom()
}

fn positive_rat() -> impl Strategy<Value = Rat> {
    (1u64..1_000_000_000, 1u64..1_000_000_000, -40i64..40)
        .prop_map(|(p, q, e)| Rat::new(p, q).unwrap() * Rat::pow10(e))
}

fn cell() -> impl Strategy<Value = (u32, u32)> {
    (1u32..=3, 1u32..=6)
}

fn variant() -> impl Strategy<Value = Variant> {
    prop_oneof![Just(Variant::Section3), Just(Variant::Appendix)]
}

proptest! {
    #[test]
    fn field_identities_are_exact(a in rat(), b in nonzero_rat()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&(&a * &b) / &b, a);
    }

    #[test]
    fn arithmetic_matches_reference_rationals(a in rat(), b in nonzero_rat()) {
        let (pa, pb) = (plain(&a), plain(&b));
        prop_assert!(same(&(&a + &b), &(&pa + &pb)));
        prop_assert!(same(&(&a - &b), &(&pa - &pb)));
        prop_assert!(same(&(&a * &b), &(&pa * &pb)));
        prop_assert!(same(&(&a / &b), &(&pa / &pb)));
    }

    #[test]
    fn dyadic_rounding_brackets(a in rat(), bits in 1u64..200) {
        let lo = a.round_dyadic(bits, false);
        let hi = a.round_dyadic(bits, true);
        prop_assert!(lo <= a && a <= hi);
    }

    #[test]
    fn root_enclosure_brackets(x in positive_rat(), r in 1u32..12, w in 2i64..40) {
        let wide = root_enclosure(&x, r, &Rat::pow10(-w)).unwrap();
        let narrow = root_enclosure(&x, r, &Rat::pow10(-w - 5)).unwrap();
        for e in [&wide, &narrow] {
            prop_assert!(e.lo().pow(i64::from(r)).unwrap() <= x);
            prop_assert!(e.hi().pow(i64::from(r)).unwrap() >= x);
        }
        prop_assert!(wide.rel_width_within(&Rat::pow10(-w)));
    }

    #[test]
    fn scidec_is_monotone(a in positive_rat(), b in positive_rat(), digits in 1usize..8) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let dl = SciDec::from_rat(&lo, digits, false).unwrap();
        let dh = SciDec::from_rat(&hi, digits, false).unwrap();
        prop_assert!(dl.to_rat() <= dh.to_rat());
    }

    #[test]
    fn scidec_round_trips_within_half_ulp(a in positive_rat(), digits in 1usize..10, neg in any::<bool>()) {
        let v = if neg { -a } else { a };
        let d = SciDec::from_rat(&v, digits, false).unwrap();
        let back: SciDec = d.to_string().parse().unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert!((d.to_rat() - &v).abs() * Rat::from_int(2) <= d.ulp());
        prop_assert!(within_one_ulp(&d, &v));
    }

    #[test]
    fn one_minus_rendering_round_trips(e in 1i64..400, m in 1u64..1000) {
        let v = Rat::one() - Rat::from_int(m) * Rat::pow10(-e - 3);
        let d = SciDec::from_rat(&v, 3, true).unwrap();
        prop_assert!(d.to_string().starts_with("1 - "));
        prop_assert_eq!(d.to_string().parse::<SciDec>().unwrap(), d.clone());
        prop_assert!(within_one_ulp(&d, &v));
    }

    #[test]
    fn monotone_maps_keep_containment(a in positive_rat(), b in positive_rat(), t in 0u32..=100) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let e = Enc::new(lo.clone(), hi.clone()).unwrap();
        let x = &lo + (&hi - &lo) * Rat::new(t, 100).unwrap();
        let sq = e.map_increasing(|v| v * v);
        let inv = e.map_decreasing(|v| v.recip().unwrap());
        prop_assert!(sq.contains(&(&x * &x)));
        prop_assert!(inv.contains(&x.recip().unwrap()));
    }

    #[test]
    fn gamma_is_monotone(c1 in 1u32..1000, dc in 1u32..1000, e1 in 1u32..1000, de in 1u32..1000, n in 1u32..8) {
        let c = Rat::one() + Rat::new(c1, 100).unwrap();
        let c2 = &c + Rat::new(dc, 100).unwrap();
        let eps = Rat::new(e1, 1000).unwrap();
        let eps2 = &eps + Rat::new(de, 1000).unwrap();
        prop_assert!(gamma(&c2, &eps, n).unwrap() < gamma(&c, &eps, n).unwrap());
        prop_assert!(gamma(&c, &eps2, n).unwrap() > gamma(&c, &eps, n).unwrap());
        let g = gamma_enc(&Enc::new(c.clone(), c2.clone()).unwrap(), &Enc::new(eps.clone(), eps2.clone()).unwrap(), n).unwrap();
        let mid_c = (&c + &c2) * Rat::new(1, 2).unwrap();
        let mid_e = (&eps + &eps2) * Rat::new(1, 2).unwrap();
        prop_assert!(g.contains(&gamma(&mid_c, &mid_e, n).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn h_inverse_round_trips((k, n) in cell(), v in variant(), c_exp in -6i64..9, m in 1u32..10) {
        let c = Rat::one() + Rat::from_int(m) * Rat::pow10(c_exp);
        let x = h_inv(k, n, v, &c, &Rat::pow10(-12)).unwrap();
        prop_assert!(h_eval(k, n, v, x.lo()).unwrap() <= c);
        prop_assert!(h_eval(k, n, v, x.hi()).unwrap() >= c);
        prop_assert!(x.rel_width_within(&Rat::pow10(-12)));
    }

    #[test]
    fn barrier_is_strictly_increasing((k, n) in cell(), v in variant(), a in 1u32..1000, b in 1u32..1000) {
        let delta = delta_kn(k, n, v, &Rat::pow10(-9)).unwrap();
        let x1 = delta.lo() * Rat::new(a.min(b) - 1, 1000).unwrap();
        let x2 = delta.lo() * Rat::new(a.max(b), 1000).unwrap();
        if x1 < x2 {
            prop_assert!(h_eval(k, n, v, &x1).unwrap() < h_eval(k, n, v, &x2).unwrap());
        }
    }

    #[test]
    fn appendix_identities_hold_at_random_d0((k, n) in cell(), t in 1u32..1000) {
        let delta = delta_kn(k, n, Variant::Appendix, &Rat::pow10(-9)).unwrap();
        let d0 = delta.lo() * Rat::new(t, 1000).unwrap();
        let rep = audit(k, n, Variant::Appendix, &d0).unwrap();
        for check in [Check::Eq1, Check::Eq3, Check::Ineq1, Check::Ineq2, Check::Ineq3, Check::Ineq4] {
            prop_assert!(rep.passes(check), "{} fails at ({},{}) d0={}", check, k, n, d0);
        }
    }

    #[test]
    fn section3_keeps_eq3_and_ineq4((k, n) in cell(), t in 1u32..1000) {
        let delta = delta_kn(k, n, Variant::Section3, &Rat::pow10(-9)).unwrap();
        let d0 = delta.lo() * Rat::new(t, 1000).unwrap();
        let rep = audit(k, n, Variant::Section3, &d0).unwrap();
        prop_assert!(rep.passes(Check::Eq3));
        prop_assert!(rep.passes(Check::Ineq4));
    }

    #[test]
    fn recurrences_grow(k in 1u32..=4, n in 1u32..=8, v in variant()) {
        let c = c_sequence(k, n, k, v);
        prop_assert!(c.windows(2).all(|w| w[0] < w[1]));
    }
}
