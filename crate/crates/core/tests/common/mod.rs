//! Seeded random tower elements shared by the integration tests.
#![allow(dead_code)]

use deltatower_core::{ConstExpr, ConstSymbol, TowerElement, TowerSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn nonzero_int(rng: &mut ChaCha8Rng) -> i64 {
    let k = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        k
    } else {
        -k
    }
}

/// `k · c^a · b · b'` with at most one eigenvalue symbol and up to two
/// generators, each possibly inverted.
pub fn random_term(spec: &TowerSpec, rng: &mut ChaCha8Rng) -> TowerElement {
    let mut t = TowerElement::int(nonzero_int(rng));
    if rng.gen_bool(0.3) {
        let level = rng.gen_range(1..=spec.ell());
        let index = rng.gen_range(1..=spec.rank(level));
        t = t.scale(&ConstExpr::symbol(ConstSymbol::c(level, index)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let level = rng.gen_range(1..=spec.ell());
        let index = rng.gen_range(1..=spec.rank(level));
        let b = spec.generator(level, index);
        let b = if rng.gen_bool(0.2) { b.inv().expect("generators are nonzero") } else { b };
        t = t.mul(&b);
    }
    t
}

pub fn random_poly(spec: &TowerSpec, rng: &mut ChaCha8Rng, max_terms: usize) -> TowerElement {
    (0..rng.gen_range(1..=max_terms)).fold(TowerElement::zero(), |acc, _| acc.add(&random_term(spec, rng)))
}

/// A polynomial or a quotient of two; never zero.
pub fn random_element(spec: &TowerSpec, rng: &mut ChaCha8Rng) -> TowerElement {
    loop {
        let p = random_poly(spec, rng, 3);
        if p.is_zero() {
            continue;
        }
        if rng.gen_bool(0.5) {
            return p;
        }
        let q = random_poly(spec, rng, 2);
        if let Ok(x) = p.div(&q) {
            return x;
        }
    }
}

/// Every rank vector with `1 ≤ ℓ ≤ max_ell` and `1 ≤ n_i ≤ max_rank`.
pub fn all_utypes(max_ell: u32, max_rank: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..max_ell {
        let mut next = Vec::new();
        for v in &frontier {
            for n in 1..=max_rank {
                let mut w = v.clone();
                w.push(n);
                next.push(w);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
