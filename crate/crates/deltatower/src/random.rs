//! Seeded random tower elements for the property checks.

use deltatower_core::{ConstExpr, ConstSymbol, TowerElement, TowerSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `±k · c · b · b'` with at most one eigenvalue symbol and up to two
/// generators, each possibly inverted.
fn term(spec: &TowerSpec, rng: &mut ChaCha8Rng) -> TowerElement {
    let k = rng.gen_range(1..=3);
    let mut t = TowerElement::int(if rng.gen_bool(0.5) { k } else { -k });
    if rng.gen_bool(0.3) {
        let level = rng.gen_range(1..=spec.ell());
        let index = rng.gen_range(1..=spec.rank(level));
        t = t.scale(&ConstExpr::symbol(ConstSymbol::c(level, index)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let level = rng.gen_range(1..=spec.ell());
        let b = spec.generator(level, rng.gen_range(1..=spec.rank(level)));
        t = t.mul(&if rng.gen_bool(0.2) { b.inv().expect("generators are nonzero") } else { b });
    }
    t
}

fn poly(spec: &TowerSpec, rng: &mut ChaCha8Rng, max_terms: usize) -> TowerElement {
    (0..rng.gen_range(1..=max_terms)).fold(TowerElement::zero(), |acc, _| acc.add(&term(spec, rng)))
}

/// A polynomial or a quotient of two; never zero.
pub fn element(spec: &TowerSpec, rng: &mut ChaCha8Rng) -> TowerElement {
    loop {
        let p = poly(spec, rng, 3);
        if p.is_zero() {
            continue;
        }
        if rng.gen_bool(0.5) {
            return p;
        }
        if let Ok(x) = p.div(&poly(spec, rng, 2)) {
            return x;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_elements() {
        let spec = TowerSpec::new(vec![2, 1]).unwrap();
        let a: Vec<_> = (0..5).map({
            let mut r = rng(7);
            move |_| element(&spec, &mut r)
        }).collect();
        let spec = TowerSpec::new(vec![2, 1]).unwrap();
        let mut r = rng(7);
        for x in a {
            assert!(!x.is_zero());
            assert_eq!(x, element(&spec, &mut r));
        }
    }
}
