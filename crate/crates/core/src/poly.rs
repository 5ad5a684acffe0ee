//! Sparse multivariate polynomials over Q.
//!
//! Terms are kept sorted by a graded-lexicographic monomial order, leading
//! term first. Variables are ordered by kind (`c` < `u` < `b`), then level,
//! then index; under lex the smaller variable weighs more, so `c[1][1]`
//! outranks `c[1][2]`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// What a variable stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// Eigenvalue constant `c[i][j]`.
    Eigen,
    /// Free constant `u[i][j]` (scalar multiples of eigencomponents).
    Free,
    /// Tower generator `b[i][j]`.
    Generator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub kind: VarKind,
    pub level: u32,
    pub index: u32,
}

impl Var {
    pub const fn eigen(level: u32, index: u32) -> Self {
        Var { kind: VarKind::Eigen, level, index }
    }

    pub const fn free(level: u32, index: u32) -> Self {
        Var { kind: VarKind::Free, level, index }
    }

    pub const fn generator(level: u32, index: u32) -> Self {
        Var { kind: VarKind::Generator, level, index }
    }

    /// Constants are killed by every derivation of the tower.
    pub fn is_constant(&self) -> bool {
        self.kind != VarKind::Generator
    }

    pub(crate) fn prefix(&self) -> char {
        match self.kind {
            VarKind::Eigen => 'c',
            VarKind::Free => 'u',
            VarKind::Generator => 'b',
        }
    }
}

impl core::fmt::Display for Var {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}[{}][{}]", self.prefix(), self.level, self.index)
    }
}

/// A power product of variables, sorted by variable, all exponents positive.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|&(_, e)| e > 0);
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|p| p.0.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        let mut j = 0;
        for &(v, e) in &self.0 {
            while j < other.0.len() && other.0[j].0 < v {
                j += 1;
            }
            if j < other.0.len() && other.0[j].0 == v {
                out.push((v, e.min(other.0[j].1)));
            }
        }
        Monomial(out)
    }

    /// Drops every occurrence of `v`, returning the removed exponent.
    fn split_var(&self, v: Var) -> (u32, Monomial) {
        let mut rest = self.0.clone();
        match rest.binary_search_by(|p| p.0.cmp(&v)) {
            Ok(i) => {
                let e = rest.remove(i).1;
                (e, Monomial(rest))
            }
            Err(_) => (0, Monomial(rest)),
        }
    }

    fn with_var(&self, v: Var, e: u32) -> Monomial {
        if e == 0 {
            return self.clone();
        }
        self.mul(&Monomial(vec![(v, e)]))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = self.degree().cmp(&other.degree());
        if d != Ordering::Equal {
            return d;
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => {
                    let c = a[i].1.cmp(&b[j].1);
                    if c != Ordering::Equal {
                        return c;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        (a.len() - i).cmp(&(b.len() - j))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial with rational coefficients; terms sorted descending, no zero
/// coefficients. Structural equality is mathematical equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(q: Rational) -> Self {
        if q.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), q)] }
        }
    }

    pub fn var(v: Var) -> Self {
        Poly { terms: vec![(Monomial::var(v), Rational::one())] }
    }

    pub fn term(m: Monomial, q: Rational) -> Self {
        if q.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, q)] }
        }
    }

    pub fn from_terms(mut terms: Vec<(Monomial, Rational)>) -> Self {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, Rational)> = Vec::with_capacity(terms.len());
        for (m, q) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 += q,
                _ => out.push((m, q)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        Poly { terms: out }
    }

    pub fn terms(&self) -> &[(Monomial, Rational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 if self.terms[0].0.is_one() => Some(self.terms[0].1.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Rational)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| t.0.degree()).unwrap_or(0)
    }

    /// Sorted, deduplicated list of variables that occur.
    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|t| t.0.factors().iter().map(|p| p.0))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn has_var_where(&self, pred: impl Fn(&Var) -> bool) -> bool {
        self.terms
            .iter()
            .any(|t| t.0.factors().iter().any(|p| pred(&p.0)))
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }

    pub fn scale(&self, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, q: &Rational) -> Poly {
        if q.is_zero() {
            return Poly::zero();
        }
        // Monomial orders are multiplicative, so the result stays sorted.
        Poly { terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * q)).collect() }
    }

    fn merge(&self, other: &Poly, negate_other: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let q = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), q));
                    j += 1;
                }
                Ordering::Equal => {
                    let q = if negate_other { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !q.is_zero() {
                        out.push((a[i].0.clone(), q));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let q = if negate_other { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), q));
        }
        Poly { terms: out }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if other.terms.len() == 1 {
            return self.mul_term(&other.terms[0].0, &other.terms[0].1);
        }
        if self.terms.len() == 1 {
            return other.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let mut acc = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (m, p) in &self.terms {
            for (n, q) in &other.terms {
                acc.push((m.mul(n), p * q));
            }
        }
        Poly::from_terms(acc)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => Poly::zero(),
            Some((_, lc)) if lc.is_one() => self.clone(),
            Some((_, lc)) => self.scale(&lc.recip()),
        }
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (lm, lc) = d.leading()?;
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, q) in &self.terms {
                out.push((m.div(lm)?, q / lc));
            }
            return Some(Poly { terms: out });
        }
        let mut rem = self.clone();
        let mut quot = Vec::new();
        while let Some((rm, rc)) = rem.terms.first() {
            let m = rm.div(lm)?;
            let q = rc / lc;
            rem = rem.sub(&d.mul_term(&m, &q));
            quot.push((m, q));
        }
        Some(Poly { terms: quot })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    /// `v * d/dv`, the Euler operator in `v`.
    pub fn euler(&self, v: Var) -> Poly {
        let mut out = Vec::new();
        for (m, q) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.push((m.clone(), q * rat(e as i64)));
            }
        }
        Poly { terms: out }
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `v`.
    pub fn to_univariate(&self, v: Var) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, Rational)>> = vec![Vec::new(); deg + 1];
        for (m, q) in &self.terms {
            let (e, rest) = m.split_var(v);
            buckets[e as usize].push((rest, q.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_univariate(v: Var, coeffs: &[Poly]) -> Poly {
        let mut acc = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, q) in &c.terms {
                acc.push((m.with_var(v, e as u32), q.clone()));
            }
        }
        Poly::from_terms(acc)
    }
}

/// Greatest common divisor, normalized monic (leading coefficient 1).
/// `gcd(0, 0) = 0`.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let m = ma.gcd(&mb);
    let a1 = strip_monomial(a, &ma);
    let b1 = strip_monomial(b, &mb);
    let g = gcd_rec(&a1, &b1);
    g.mul_term(&m, &Rational::one()).monic()
}

fn strip_monomial(p: &Poly, m: &Monomial) -> Poly {
    if m.is_one() {
        return p.clone();
    }
    p.div_exact(&Poly::term(m.clone(), Rational::one()))
        .expect("monomial content divides")
}

/// gcd up to a rational scalar; both inputs nonzero.
fn gcd_rec(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a.monic() == b.monic() {
        return a.clone();
    }
    let (small, big) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.clone();
    }
    if coprime_by_evaluation(a, b) {
        return Poly::one();
    }
    let va = a.vars();
    let vb = b.vars();
    // A common factor only involves variables present in both.
    if let Some(&y) = va.iter().find(|v| vb.binary_search(v).is_err()) {
        let ca = content_in(a, y);
        return gcd_rec(&ca, b);
    }
    if let Some(&y) = vb.iter().find(|v| va.binary_search(v).is_err()) {
        let cb = content_in(b, y);
        return gcd_rec(a, &cb);
    }
    // Main variable: the one with the smallest combined degree.
    let x = *va
        .iter()
        .min_by_key(|&&v| (a.degree_in(v).max(b.degree_in(v)), v.kind, v.level, v.index))
        .expect("nonconstant");
    let ca = content_in(a, x);
    let cb = content_in(b, x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let gc = gcd_rec(&ca, &cb);
    let pg = primitive_prs(&pa, &pb, x);
    pg.mul(&gc)
}

/// Sufficient test for `gcd(a, b) = 1`. A common factor `G` involves only
/// shared variables; for each shared `x`, specialize the others at a point
/// where both leading coefficients in `x` survive. Then `lc_x(G)` survives
/// too, so `deg_x G` is at most the degree of the univariate image gcd.
fn coprime_by_evaluation(a: &Poly, b: &Poly) -> bool {
    let vb = b.vars();
    let shared: Vec<Var> = a.vars().into_iter().filter(|v| vb.binary_search(v).is_ok()).collect();
    shared.iter().all(|&x| {
        (0..4u32).any(|attempt| {
            let ia = specialize(a, x, attempt);
            let ib = specialize(b, x, attempt);
            let top = |p: &Poly, img: &[Rational]| img.len() == p.degree_in(x) as usize + 1;
            top(a, &ia) && top(b, &ib) && univariate_gcd_degree(ia, ib) == 0
        })
    })
}

/// Univariate image in `x`, trailing zeros trimmed; other variables take
/// small pseudo-random integers that depend on `attempt`.
fn specialize(p: &Poly, x: Var, attempt: u32) -> Vec<Rational> {
    let point = |v: &Var| -> i64 {
        let h = (v.kind as u32 * 7919 + v.level * 104_729 + v.index * 1_299_709 + attempt * 15_485_863) % 89;
        h as i64 + 2
    };
    let mut out = vec![Rational::zero(); p.degree_in(x) as usize + 1];
    for (m, q) in &p.terms {
        let mut val = q.clone();
        let mut e = 0;
        for (v, k) in m.factors() {
            if *v == x {
                e = *k;
            } else {
                val *= rat(point(v)).pow(*k as i32);
            }
        }
        out[e as usize] += val;
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Degree of the gcd of two nonzero dense univariate polynomials.
fn univariate_gcd_degree(mut f: Vec<Rational>, mut g: Vec<Rational>) -> usize {
    if f.len() < g.len() {
        core::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let lc = g[g.len() - 1].clone();
        while f.len() >= g.len() {
            let s = &f[f.len() - 1] / &lc;
            let shift = f.len() - g.len();
            for (k, gk) in g.iter().enumerate() {
                let d = &s * gk;
                f[k + shift] -= d;
            }
            f.pop();
            while f.last().is_some_and(|c| c.is_zero()) {
                f.pop();
            }
        }
        core::mem::swap(&mut f, &mut g);
    }
    f.len().saturating_sub(1)
}

/// gcd of the coefficients of `p` viewed in `v`.
fn content_in(p: &Poly, v: Var) -> Poly {
    let coeffs = p.to_univariate(v);
    let mut g = Poly::zero();
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        if g.is_zero() {
            g = c.clone();
        } else {
            g = gcd_rec(&g, c);
        }
        if g.is_constant() {
            return Poly::one();
        }
    }
    g.monic()
}

fn primitive_part_in(p: &Poly, v: Var) -> Poly {
    let c = content_in(p, v);
    p.div_exact(&c).expect("content divides")
}

fn primitive_prs(a: &Poly, b: &Poly, x: Var) -> Poly {
    let (mut f, mut g) = if a.degree_in(x) >= b.degree_in(x) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if g.degree_in(x) == 0 {
            return Poly::one();
        }
        let r = pseudo_rem(&f, &g, x);
        if r.is_zero() {
            return primitive_part_in(&g, x);
        }
        f = g;
        g = primitive_part_in(&r, x);
    }
}

fn pseudo_rem(f: &Poly, g: &Poly, x: Var) -> Poly {
    let mut r = f.to_univariate(x);
    let gc = g.to_univariate(x);
    let n = gc.len() - 1;
    let lc = &gc[n];
    let mut e = r.len() as i64 - n as i64;
    while r.len() > n && !r.is_empty() {
        let d = r.len() - 1;
        let lr = r[d].clone();
        for c in r.iter_mut() {
            *c = c.mul(lc);
        }
        for k in 0..=n {
            r[k + d - n] = r[k + d - n].sub(&lr.mul(&gc[k]));
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
        e -= 1;
    }
    let mut out = Poly::from_univariate(x, &r);
    if e > 0 {
        out = out.mul(&lc.pow(e as u32));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32, j: u32) -> Poly {
        Poly::var(Var::eigen(i, j))
    }
    fn b(i: u32, j: u32) -> Poly {
        Poly::var(Var::generator(i, j))
    }

    #[test]
    fn grlex_orders_smaller_variables_first() {
        let x = Monomial::var(Var::eigen(1, 1));
        let y = Monomial::var(Var::eigen(1, 2));
        assert!(x > y);
        assert!(x.mul(&y) > x);
        assert!(y.mul(&y) < x.mul(&x));
        assert!(y.mul(&y) < x.mul(&y));
    }

    #[test]
    fn arithmetic_cancels() {
        let p = c(1, 1).add(&c(1, 2)).sub(&c(1, 2));
        assert_eq!(p, c(1, 1));
        assert!(c(1, 1).sub(&c(1, 1)).is_zero());
    }

    #[test]
    fn exact_division_of_difference_of_squares() {
        let num = c(1, 1).pow(2).sub(&c(1, 2).pow(2));
        let den = c(1, 1).sub(&c(1, 2));
        let q = num.div_exact(&den).unwrap();
        assert_eq!(q, c(1, 1).add(&c(1, 2)));
        assert_eq!(q.mul(&den), num);
        assert!(num.div_exact(&c(1, 1)).is_none());
    }

    #[test]
    fn gcd_finds_shared_factor() {
        let f = c(1, 1).add(&b(1, 1));
        let g1 = f.mul(&b(1, 2).add(&Poly::one()));
        let g2 = f.mul(&c(1, 2).sub(&b(1, 1)));
        assert_eq!(gcd(&g1, &g2), f.monic());
        let h = b(1, 1).mul(&b(1, 2)).mul(&c(1, 1));
        assert_eq!(gcd(&h, &b(1, 2).pow(2)), b(1, 2));
        assert!(gcd(&c(1, 1), &c(1, 2)).is_one());
    }

    #[test]
    fn gcd_of_coprime_multivariate_is_one() {
        let p = b(1, 1).pow(2).add(&b(1, 2)).add(&c(1, 1));
        let q = b(1, 1).sub(&b(1, 2).mul(&c(1, 2)));
        assert!(gcd(&p, &q).is_one());
    }

    #[test]
    fn univariate_view_round_trips() {
        let p = b(1, 1).pow(3).mul(&c(1, 1)).add(&b(1, 1)).add(&c(1, 2));
        let v = Var::generator(1, 1);
        let coeffs = p.to_univariate(v);
        assert_eq!(coeffs.len(), 4);
        assert_eq!(Poly::from_univariate(v, &coeffs), p);
    }
}
