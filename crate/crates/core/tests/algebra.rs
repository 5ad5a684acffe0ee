//! Algebraic laws of the exact element layer, checked on seeded random
//! inputs.

mod common;

use std::collections::BTreeMap;

use common::{random_element, random_poly, rng};
use deltatower_core::relations::exponents;
use deltatower_core::{
    d_twist, derive, expand, logd, qlinear_independent, reduce_step, ConstExpr, ConstSymbol, EigenVar,
    FactoredOperator, LinearFactor, MonomialRelation, ReductionTrace, TowerElement, TowerSpec, Verdict,
};
use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn spec() -> TowerSpec {
    TowerSpec::new(vec![2, 2]).unwrap()
}

fn c(i: u32, j: u32) -> ConstExpr {
    ConstExpr::symbol(ConstSymbol::c(i, j))
}

fn random_const(rng: &mut ChaCha8Rng) -> ConstExpr {
    let syms = [c(1, 1), c(1, 2), c(2, 1), ConstExpr::symbol(ConstSymbol::u(1, 1))];
    let mut out = ConstExpr::int(rng.gen_range(-3..=3));
    for _ in 0..rng.gen_range(1..=3) {
        let mut t = ConstExpr::int(rng.gen_range(1..=4));
        for _ in 0..rng.gen_range(0..=2) {
            t = t.mul(&syms[rng.gen_range(0..syms.len())]);
        }
        out = if rng.gen_bool(0.5) { out.add(&t) } else { out.sub(&t) };
    }
    if rng.gen_bool(0.3) {
        let d = syms[rng.gen_range(0..syms.len())].add(&ConstExpr::int(rng.gen_range(1..=2)));
        out = out.checked_div(&d).unwrap();
    }
    out
}

fn consts() -> impl Strategy<Value = ConstExpr> {
    any::<u64>().prop_map(|s| random_const(&mut rng(s)))
}

fn elements() -> impl Strategy<Value = TowerElement> {
    any::<u64>().prop_map(|s| random_element(&spec(), &mut rng(s)))
}

/// Any integer relation among at most four rows with entries in
/// {-1, 0, 1} has a kernel vector made of minors of size at most 3,
/// whose entries are bounded by 4 (Hadamard). Searching [-5, 5] is exact.
fn has_small_relation(rows: &[[i64; 3]]) -> bool {
    let k = rows.len();
    let mut coef = vec![-5i64; k];
    loop {
        if coef.iter().any(|&x| x != 0) {
            let combo: Vec<i64> = (0..3).map(|m| (0..k).map(|i| coef[i] * rows[i][m]).sum()).collect();
            if combo.iter().all(|&x| x == 0) {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return false;
            }
            if coef[i] < 5 {
                coef[i] += 1;
                break;
            }
            coef[i] = -5;
            i += 1;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn constants_form_a_field(a in consts(), b in consts(), x in consts()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&x), a.add(&b.add(&x)));
        prop_assert_eq!(a.mul(&b).mul(&x), a.mul(&b.mul(&x)));
        prop_assert_eq!(a.mul(&b.add(&x)), a.mul(&b).add(&a.mul(&x)));
        prop_assert_eq!(a.sub(&a), ConstExpr::zero());
        prop_assert_eq!(a.add(&a.neg()), ConstExpr::zero());
        if !a.is_zero() {
            prop_assert_eq!(a.checked_div(&a).unwrap(), ConstExpr::one());
            prop_assert_eq!(b.checked_div(&a).unwrap().mul(&a), b.clone());
        } else {
            prop_assert!(b.checked_div(&a).is_err());
        }
    }

    #[test]
    fn constants_round_trip_through_text(a in consts()) {
        prop_assert_eq!(ConstExpr::parse(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn qlinear_independence_matches_brute_force(
        rows in prop::collection::vec(prop::array::uniform3(-1i64..=1), 1..=4)
    ) {
        let v: Vec<ConstExpr> = rows
            .iter()
            .map(|r| c(1, 1).mul(&ConstExpr::int(r[0])).add(&c(1, 2).mul(&ConstExpr::int(r[1]))).add(&ConstExpr::int(r[2])))
            .collect();
        prop_assert_eq!(qlinear_independent(&v).unwrap(), !has_small_relation(&rows));
    }

    #[test]
    fn elements_round_trip_through_text(x in elements()) {
        let s = spec();
        prop_assert_eq!(TowerElement::parse(&x.to_string(), &s).unwrap(), x);
    }

    #[test]
    fn derivation_obeys_leibniz(x in elements(), y in elements()) {
        let s = spec();
        let lhs = derive(&x.mul(&y), &s);
        prop_assert_eq!(lhs, x.mul(&derive(&y, &s)).add(&y.mul(&derive(&x, &s))));
        for i in 1..=2 {
            let lhs = d_twist(&x.mul(&y), i, &s);
            prop_assert_eq!(lhs, x.mul(&d_twist(&y, i, &s)).add(&y.mul(&d_twist(&x, i, &s))));
        }
    }

    #[test]
    fn derivation_obeys_the_quotient_rule(x in elements(), y in elements()) {
        let s = spec();
        let q = x.div(&y).unwrap();
        let rhs = derive(&x, &s).mul(&y).sub(&x.mul(&derive(&y, &s))).div(&y.mul(&y)).unwrap();
        prop_assert_eq!(derive(&q, &s), rhs);
    }

    #[test]
    fn derivation_is_constant_linear(x in elements(), a in consts()) {
        let s = spec();
        prop_assert_eq!(derive(&x.scale(&a), &s), derive(&x, &s).scale(&a));
        prop_assert!(derive(&TowerElement::from_const(&a), &s).is_zero());
    }

    #[test]
    fn twisted_derivations_differ_by_e(x in elements()) {
        let s = spec();
        prop_assert_eq!(d_twist(&x, 2, &s).mul(&s.e(1)), d_twist(&x, 1, &s));
        prop_assert_eq!(d_twist(&x, 1, &s), derive(&x, &s));
    }

    #[test]
    fn logd_turns_products_into_sums(x in elements(), y in elements()) {
        let s = spec();
        for i in 1..=2 {
            let lhs = logd(&x.mul(&y), i, &s).unwrap();
            prop_assert_eq!(lhs, logd(&x, i, &s).unwrap().add(&logd(&y, i, &s).unwrap()));
        }
    }

    #[test]
    fn expand_agrees_with_apply(seed in any::<u64>(), level in 1u32..=2, picks in prop::collection::vec(0usize..3, 1..=3)) {
        let s = spec();
        let choices = [c(level, 1), c(level, 2), c(level, 1).add(&ConstExpr::int(1))];
        let op = FactoredOperator::new(picks.iter().map(|&k| LinearFactor::new(level, choices[k].clone())).collect()).unwrap();
        let x = random_poly(&s, &mut rng(seed), 2);
        prop_assert_eq!(expand(&op).apply(&x, &s), op.apply(&x, &s));
        prop_assert_eq!(FactoredOperator::parse(&op.to_string()).unwrap(), op);
    }

    #[test]
    fn reduce_step_is_sound(seed in any::<u64>()) {
        let s = spec();
        let mut r = rng(seed);
        let vars = EigenVar::generators(&s, 2);
        let support = exponents(2, 0, 2);
        let mut coeffs = BTreeMap::new();
        for e in &support {
            if r.gen_bool(0.5) {
                coeffs.insert(e.clone(), random_poly(&s, &mut r, 1));
            }
        }
        coeffs.retain(|_, v: &mut TowerElement| !v.is_zero());
        prop_assume!(coeffs.len() >= 2);
        let g = MonomialRelation::new(vars, coeffs).unwrap();
        let pivot = g.support()[r.gen_range(0..g.len())].clone();
        let h = reduce_step(&g, &pivot, &s).unwrap();
        prop_assert!(h.term(&pivot).is_none());
        prop_assert!(h.len() < g.len());
        let gy = g.evaluate();
        let expected = g.functional(&pivot, &s).unwrap().mul(&gy).sub(&d_twist(&gy, 2, &s));
        prop_assert_eq!(h.evaluate(), expected);
    }

    #[test]
    fn traces_replay(seed in any::<u64>(), d in 1u32..=2) {
        let s = spec();
        let mut r = rng(seed);
        let vars = EigenVar::generators(&s, 1);
        let support: Vec<_> = exponents(2, 0, d).into_iter().filter(|_| r.gen_bool(0.7)).collect();
        prop_assume!(!support.is_empty());
        let g = MonomialRelation::unit(vars, &support).unwrap();
        let t = ReductionTrace::run(g, Verdict::NoNontrivialRelation, &s).unwrap();
        prop_assert!(t.replay(&s).unwrap());
        prop_assert!(t.last().len() <= 1);
        for w in t.steps.windows(2) {
            prop_assert!(w[1].result.len() < w[0].result.len());
        }
    }
}
