use num_bigint::{BigInt, BigUint};
use num_traits::One;
use proptest::prelude::*;
use syzygy_cert::arith::{
    binom, binom_mod_p_lucas, digits_value, dim_sym, h0, is_binom_unit_mod_p, padic_digits, Prime,
};
use syzygy_cert::bundle::{
    degree_decomposition, expansion, frobenius_slope_scale, sym_identity_check, syzygy_slope,
};
use syzygy_cert::criteria::{certify_case, classify, Certificate};
use syzygy_cert::lattice::{
    crude_margin, dominance_leq, enumerate_supports, is_downward_closed, margin_coefficient,
    minimal_block_dim, SupportSet,
};
use syzygy_cert::Rat;

fn prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13]).prop_map(|p| Prime::new(p).unwrap())
}

proptest! {
    #[test]
    fn digits_round_trip(x in 0u64..1_000_000_000, p in prime()) {
        let dv = padic_digits(x, p);
        prop_assert_eq!(digits_value(&dv), BigUint::from(x));
        prop_assert!(dv.digits().iter().all(|&a| a < p.get()));
        prop_assert!(dv.digits().last().is_none_or(|&a| a != 0));
    }

    #[test]
    fn expansion_strips_valuation(d in 1u64..10_000_000, p in prime()) {
        let e = expansion(d, p).unwrap();
        prop_assert_eq!(e.value(), d);
        prop_assert!(e.core_digits()[0] != 0);
    }

    #[test]
    fn dominance_is_a_partial_order(a in 0u64..500, b in 0u64..500, c in 0u64..500, p in prime()) {
        prop_assert!(dominance_leq(a, a, p));
        if dominance_leq(a, b, p) && dominance_leq(b, a, p) {
            prop_assert_eq!(a, b);
        }
        if dominance_leq(a, b, p) && dominance_leq(b, c, p) {
            prop_assert!(dominance_leq(a, c, p));
        }
        if dominance_leq(a, b, p) {
            prop_assert!(a <= b);
        }
    }

    #[test]
    fn lucas_unit_iff_dominance(i in 0u64..400, k in 0u64..400, p in prime()) {
        prop_assume!(k <= i);
        let unit = is_binom_unit_mod_p(i, k, p).unwrap();
        prop_assert_eq!(unit, dominance_leq(k, i, p));
        prop_assert_eq!(unit, binom_mod_p_lucas(i, k, p) != 0);
        let big = binom(i, k as i64) % BigUint::from(p.get());
        prop_assert_eq!(big, BigUint::from(binom_mod_p_lucas(i, k, p)));
    }

    #[test]
    fn blocks_sum_to_bundle(n in 2u64..7, d in 1u64..40) {
        let blocks = degree_decomposition(n, d).unwrap();
        let deg: BigInt = blocks.iter().map(|b| b.degree.clone()).sum();
        let rank: BigUint = blocks.iter().map(|b| b.rank.clone()).sum();
        prop_assert_eq!(deg, BigInt::from(-(d as i64)));
        prop_assert_eq!(&rank, &(h0(n, d) - BigUint::one()));
        // the rank-weighted mean of block slopes is the bundle slope
        let weighted: Rat = blocks.iter().map(|b| &b.slope * &Rat::from(b.rank.clone())).sum();
        prop_assert_eq!(weighted / Rat::from(rank), syzygy_slope(n, d).unwrap());
    }

    #[test]
    fn sym_identity_holds(n in 1u64..8, a in 0u64..80) {
        prop_assert!(sym_identity_check(n, a));
    }

    #[test]
    fn frobenius_scaling_composes(num in -500i64..500, den in 1i64..500, s in 0u32..4, t in 0u32..4, p in prime()) {
        let r = Rat::new(num, den).unwrap();
        let twice = frobenius_slope_scale(&frobenius_slope_scale(&r, s, p), t, p);
        prop_assert_eq!(twice, frobenius_slope_scale(&r, s + t, p));
    }

    #[test]
    fn minimal_block_equality_cases(n in 2u64..6, e in 0u64..200, p in prime()) {
        let lo = minimal_block_dim(n, p, e);
        let hi = dim_sym(n, e);
        prop_assert!(lo <= hi);
        if e < p.get() {
            prop_assert_eq!(&lo, &hi);
        }
        if n >= 3 {
            prop_assert_eq!(lo == hi, e < p.get());
        } else {
            // on the line the product of (t_j + 1) is e + 1 exactly when every
            // digit below the top one is p - 1
            let dv = padic_digits(e, p);
            let k = dv.len().saturating_sub(1);
            let low_full = dv.digits()[..k].iter().all(|&t| t == p.get() - 1);
            prop_assert_eq!(lo == hi, low_full);
        }
        prop_assert!(minimal_block_dim(n, p, p.get()) < dim_sym(n, p.get()));
    }

    #[test]
    fn crude_margin_is_the_box_minimum(
        n in 2u64..5,
        p in prime(),
        d in 1u64..11,
        pick in any::<u64>(),
        flips in any::<u64>(),
    ) {
        let supports = enumerate_supports(n, p, d, 100_000).unwrap();
        prop_assume!(!supports.is_empty());
        let s = &supports[(pick % supports.len() as u64) as usize];
        prop_assert!(is_downward_closed(s.indices(), p, d));
        let m = crude_margin(s).unwrap();
        prop_assert_eq!(m.conclusive, m.margin > Rat::zero());
        // any admissible dimension vector gives a value at least the margin
        let mut value = Rat::zero();
        for (bit, b) in s.profile().bounds.iter().enumerate() {
            let w = if flips >> (bit % 64) & 1 == 1 { &b.hi } else { &b.lo };
            value = value + margin_coefficient(n, d, b.twist).unwrap() * Rat::from(w.clone());
        }
        prop_assert!(value >= m.margin);
    }

    #[test]
    fn shrinking_support_keeps_margin_within_box(n in 2u64..5, p in prime(), d in 2u64..10) {
        // dropping a maximal twist from a support changes the margin by
        // exactly that twist's extreme term
        let supports = enumerate_supports(n, p, d, 100_000).unwrap();
        for s in supports.iter().filter(|s| s.len() > 1) {
            let top = *s.indices().last().unwrap();
            let rest: Vec<u64> = s.indices()[..s.len() - 1].to_vec();
            if let Ok(smaller) = SupportSet::new(n, p, d, rest) {
                let c = margin_coefficient(n, d, top).unwrap();
                let b = s.profile().bounds.last().unwrap().clone();
                let w = if c < Rat::zero() { b.hi } else { b.lo };
                let diff = crude_margin(s).unwrap().margin - crude_margin(&smaller).unwrap().margin;
                prop_assert_eq!(diff, c * Rat::from(w));
            }
        }
    }

    #[test]
    fn rational_text_round_trip(num in -1_000_000i64..1_000_000, den in 1i64..1_000_000) {
        let r = Rat::new(num, den).unwrap();
        let back: Rat = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn certificate_json_round_trip(n in 2u64..6, p in prime(), d in 1u64..200) {
        let c = certify_case(n, p, d).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Certificate = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), json);
    }

    #[test]
    fn stable_verdict_needs_case_and_obligations(n in 2u64..6, p in prime(), d in 1u64..300) {
        let c = certify_case(n, p, d).unwrap();
        prop_assert_eq!(c.case, classify(n, p, d).unwrap().case());
        prop_assert_eq!(c.all_hold, c.obligations.iter().all(|o| o.holds));
        prop_assert_eq!(c.stability().is_stable(), c.case.is_some() && c.all_hold);
    }
}
