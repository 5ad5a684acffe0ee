//! Term minimization: from a relation `G = Σ s_r y^r` among eigen-elements
//! `y_k` (`D_i y_k = λ_k y_k`) pass to `G* = φ(r*) G - D_i G`, which has the
//! same zero set and strictly smaller support, where
//! `φ(r) = logD_i(s_r) + r·λ`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::constants::ConstExpr;
use crate::series::{eval_series, Series, SeriesContext, SeriesError};
use crate::tower::{logd, TowerElement, TowerError, TowerSpec};

/// Exponent vector over the relation's variables.
pub type Exponent = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelationError {
    #[error("reduction needs at least two terms")]
    SupportTooSmall,
    #[error("relation has empty support")]
    EmptySupport,
    #[error("pivot {0:?} is not in the support")]
    PivotNotInSupport(Exponent),
    #[error("exponent {exponent:?} has length {found}, expected {expected}")]
    LengthMismatch { exponent: Exponent, expected: usize, found: usize },
    #[error("coefficient of {0:?} is zero")]
    ZeroCoefficient(Exponent),
    #[error("{element} is not an eigen-element of D_{level}")]
    NotEigen { element: String, level: u32 },
    #[error("variables live at different levels")]
    MixedLevels,
    #[error("at least one variable is required")]
    NoVariables,
    #[error("exponent vectors must differ")]
    EqualExponents,
    #[error("invariant monomial check failed for {0}")]
    InvariantCheck(String),
    #[error("{rows} monomials exceed truncation order {order}")]
    TruncationTooShort { rows: usize, order: usize },
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// Nonzero `y` with `D_level y = eigenvalue · y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenVar {
    pub element: TowerElement,
    pub level: u32,
    pub eigenvalue: ConstExpr,
}

impl EigenVar {
    /// Computes the eigenvalue as `logD_level(element)` and requires it constant.
    pub fn new(element: TowerElement, level: u32, spec: &TowerSpec) -> Result<Self, RelationError> {
        spec.check_level(level)?;
        let not_eigen = || RelationError::NotEigen { element: format!("{element}"), level };
        let l = logd(&element, level, spec).map_err(|_| not_eigen())?;
        let eigenvalue = l.to_const().ok_or_else(not_eigen)?;
        Ok(EigenVar { element, level, eigenvalue })
    }

    pub fn generator(spec: &TowerSpec, level: u32, index: u32) -> Self {
        EigenVar {
            element: spec.generator(level, index),
            level,
            eigenvalue: ConstExpr::symbol(spec.eigenvalue(level, index)),
        }
    }

    pub fn generators(spec: &TowerSpec, level: u32) -> Vec<Self> {
        (1..=spec.rank(level)).map(|j| Self::generator(spec, level, j)).collect()
    }
}

/// `G(y) = Σ_{r ∈ I} s_r y^r` at one level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialRelation {
    level: u32,
    vars: Vec<EigenVar>,
    coeffs: BTreeMap<Exponent, TowerElement>,
}

fn common_level(vars: &[EigenVar]) -> Result<u32, RelationError> {
    let level = vars.first().ok_or(RelationError::NoVariables)?.level;
    if vars.iter().any(|v| v.level != level) {
        return Err(RelationError::MixedLevels);
    }
    Ok(level)
}

impl MonomialRelation {
    pub fn new(vars: Vec<EigenVar>, coeffs: BTreeMap<Exponent, TowerElement>) -> Result<Self, RelationError> {
        let level = common_level(&vars)?;
        if coeffs.is_empty() {
            return Err(RelationError::EmptySupport);
        }
        for (r, s) in &coeffs {
            if r.len() != vars.len() {
                return Err(RelationError::LengthMismatch { exponent: r.clone(), expected: vars.len(), found: r.len() });
            }
            if s.is_zero() {
                return Err(RelationError::ZeroCoefficient(r.clone()));
            }
        }
        Ok(MonomialRelation { level, vars, coeffs })
    }

    /// Same as [`MonomialRelation::new`] with every coefficient 1.
    pub fn unit(vars: Vec<EigenVar>, support: &[Exponent]) -> Result<Self, RelationError> {
        let coeffs = support.iter().map(|r| (r.clone(), TowerElement::one())).collect();
        Self::new(vars, coeffs)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn vars(&self) -> &[EigenVar] {
        &self.vars
    }

    pub fn coeffs(&self) -> &BTreeMap<Exponent, TowerElement> {
        &self.coeffs
    }

    pub fn support(&self) -> Vec<Exponent> {
        self.coeffs.keys().cloned().collect()
    }

    /// Only a reduction can empty the support; it then stands for `G* = 0`.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// `y^r` in the tower.
    pub fn monomial(&self, r: &[u32]) -> TowerElement {
        self.vars.iter().zip(r).fold(TowerElement::one(), |acc, (v, e)| {
            acc.mul(&v.element.pow(*e as i64).expect("nonnegative power"))
        })
    }

    pub fn term(&self, r: &[u32]) -> Option<TowerElement> {
        self.coeffs.get(r).map(|s| s.mul(&self.monomial(r)))
    }

    /// `G(y)` evaluated in the tower.
    pub fn evaluate(&self) -> TowerElement {
        self.coeffs.keys().fold(TowerElement::zero(), |acc, r| acc.add(&self.term(r).expect("in support")))
    }

    /// `r·λ`.
    pub fn weight(&self, r: &[u32]) -> ConstExpr {
        self.vars.iter().zip(r).fold(ConstExpr::zero(), |acc, (v, e)| {
            acc.add(&v.eigenvalue.scale(&crate::poly::rat(*e as i64)))
        })
    }

    /// `φ(r) = logD_i(s_r) + r·λ`.
    pub fn functional(&self, r: &[u32], spec: &TowerSpec) -> Result<TowerElement, RelationError> {
        let s = self.coeffs.get(r).ok_or_else(|| RelationError::PivotNotInSupport(r.to_vec()))?;
        let w = TowerElement::from_const(&self.weight(r));
        if s.is_constant() {
            return Ok(w);
        }
        Ok(logd(s, self.level, spec)?.add(&w))
    }
}

/// `G* = φ(r*) G - D_i G`: the coefficient of `r` becomes `(φ(r*) - φ(r)) s_r`.
pub fn reduce_step(g: &MonomialRelation, pivot: &[u32], spec: &TowerSpec) -> Result<MonomialRelation, RelationError> {
    if !g.coeffs.contains_key(pivot) {
        return Err(RelationError::PivotNotInSupport(pivot.to_vec()));
    }
    if g.len() < 2 {
        return Err(RelationError::SupportTooSmall);
    }
    let phi_star = g.functional(pivot, spec)?;
    let mut coeffs = BTreeMap::new();
    for (r, s) in &g.coeffs {
        if r.as_slice() == pivot {
            continue;
        }
        let c = phi_star.sub(&g.functional(r, spec)?).mul(s);
        if !c.is_zero() {
            coeffs.insert(r.clone(), c);
        }
    }
    Ok(MonomialRelation { level: g.level, vars: g.vars.clone(), coeffs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NoNontrivialRelation,
    /// `y^diff` has constant logarithmic derivative zero: a new constant.
    InvariantMonomialFound(Vec<i64>),
    /// Two variable positions carry the same eigenvalue.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionStep {
    pub pivot: Exponent,
    /// `φ(r)` for every `r` in the support before the step.
    pub functionals: Vec<(Exponent, TowerElement)>,
    pub eliminated_term: TowerElement,
    pub result: MonomialRelation,
}

impl ReductionStep {
    pub fn remaining_support(&self) -> Vec<Exponent> {
        self.result.support()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionTrace {
    pub initial: MonomialRelation,
    pub steps: Vec<ReductionStep>,
    pub verdict: Verdict,
}

impl ReductionTrace {
    /// Reduces with the lexicographically least pivot until one term is left.
    pub fn run(initial: MonomialRelation, verdict: Verdict, spec: &TowerSpec) -> Result<Self, RelationError> {
        let mut steps = Vec::new();
        let mut cur = initial.clone();
        while cur.len() >= 2 {
            let pivot = cur.coeffs.keys().next().expect("nonempty").clone();
            let functionals = cur
                .coeffs
                .keys()
                .map(|r| Ok((r.clone(), cur.functional(r, spec)?)))
                .collect::<Result<Vec<_>, RelationError>>()?;
            let eliminated_term = cur.term(&pivot).expect("pivot in support");
            let next = reduce_step(&cur, &pivot, spec)?;
            steps.push(ReductionStep { pivot, functionals, eliminated_term, result: next.clone() });
            cur = next;
        }
        Ok(ReductionTrace { initial, steps, verdict })
    }

    pub fn last(&self) -> &MonomialRelation {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.initial)
    }

    /// Re-executes every step and compares with the stored relations.
    pub fn replay(&self, spec: &TowerSpec) -> Result<bool, RelationError> {
        let mut cur = self.initial.clone();
        for s in &self.steps {
            if cur.len() <= s.result.len() {
                return Ok(false);
            }
            let next = reduce_step(&cur, &s.pivot, spec)?;
            if next != s.result {
                return Ok(false);
            }
            cur = next;
        }
        Ok(true)
    }
}

/// All exponent vectors of length `k` with total degree in `lo..=hi`, in
/// lexicographic order.
pub fn exponents(k: usize, lo: u32, hi: u32) -> Vec<Exponent> {
    fn go(k: usize, budget: u32, prefix: &mut Exponent, out: &mut Vec<Exponent>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for e in 0..=budget {
            prefix.push(e);
            go(k, budget - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(k, hi, &mut Vec::with_capacity(k), &mut out);
    out.retain(|r| r.iter().sum::<u32>() >= lo);
    out
}

fn diff(r2: &[u32], r1: &[u32]) -> Vec<i64> {
    r2.iter().zip(r1).map(|(a, b)| *a as i64 - *b as i64).collect()
}

/// Certifies that no nonzero constant-coefficient polynomial of degree at
/// most `d` vanishes on `vars`. First all weights `r·λ`, `|r| ≤ d`, are
/// compared; when they are pairwise distinct every reduction step keeps all
/// other terms, so any relation collapses to a single term `s y^r = 0`,
/// forcing `s = 0`. The trace reduces the full degree-`1..=d` support.
pub fn certify_independence(vars: &[EigenVar], d: u32, spec: &TowerSpec) -> Result<ReductionTrace, RelationError> {
    common_level(vars)?;
    let k = vars.len();
    let mut verdict = Verdict::NoNontrivialRelation;
    'outer: for a in 0..k {
        for b in a + 1..k {
            if vars[a].eigenvalue == vars[b].eigenvalue {
                verdict = Verdict::Degenerate;
                break 'outer;
            }
        }
    }
    let all = exponents(k, 0, d);
    let support: Vec<Exponent> = all.iter().filter(|r| r.iter().sum::<u32>() >= 1).cloned().collect();
    let initial = MonomialRelation::unit(vars.to_vec(), &support)?;
    if verdict == Verdict::NoNontrivialRelation {
        let mut seen: BTreeMap<String, &Exponent> = BTreeMap::new();
        for r in &all {
            // canonical forms make the printed weight a faithful key
            let key = format!("{}", initial.weight(r));
            if let Some(prev) = seen.insert(key, r) {
                verdict = Verdict::InvariantMonomialFound(diff(r, prev));
                break;
            }
        }
    }
    ReductionTrace::run(initial, verdict, spec)
}

/// `h = y^{r2 - r1}`, checked to satisfy `logD_i h = (r2 - r1)·λ`.
pub fn invariant_monomial(g: &MonomialRelation, r1: &[u32], r2: &[u32], spec: &TowerSpec) -> Result<TowerElement, RelationError> {
    for r in [r1, r2] {
        if !g.coeffs.contains_key(r) {
            return Err(RelationError::PivotNotInSupport(r.to_vec()));
        }
    }
    if r1 == r2 {
        return Err(RelationError::EqualExponents);
    }
    let dv = diff(r2, r1);
    let mut h = TowerElement::one();
    let mut lambda = ConstExpr::zero();
    for (v, e) in g.vars.iter().zip(&dv) {
        h = h.mul(&v.element.pow(*e)?);
        lambda = lambda.add(&v.eigenvalue.scale(&crate::poly::rat(*e)));
    }
    if logd(&h, g.level, spec)? != TowerElement::from_const(&lambda) {
        return Err(RelationError::InvariantCheck(format!("{h}")));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankReport {
    pub rows: usize,
    pub rank: usize,
    /// Smallest accepted pivot after row normalization; 0 when rank-deficient.
    pub min_pivot: f64,
}

impl RankReport {
    pub fn full_rank(&self) -> bool {
        self.rank == self.rows
    }
}

pub const RANK_THRESHOLD: f64 = 1e-6;

/// Rank of a dense matrix by full-pivot elimination; rows are scaled to
/// unit max-norm first.
pub fn numeric_rank(mut m: Vec<Vec<f64>>, threshold: f64) -> (usize, f64) {
    for row in &mut m {
        let s = row.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if s > 0.0 {
            row.iter_mut().for_each(|x| *x /= s);
        }
    }
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut row_left: Vec<usize> = (0..rows).collect();
    let mut col_left: Vec<usize> = (0..cols).collect();
    let mut min_pivot = f64::INFINITY;
    let mut rank = 0;
    while !row_left.is_empty() && !col_left.is_empty() {
        let mut best = (0, 0, 0.0f64);
        for (ri, &r) in row_left.iter().enumerate() {
            for (ci, &c) in col_left.iter().enumerate() {
                if m[r][c].abs() > best.2 {
                    best = (ri, ci, m[r][c].abs());
                }
            }
        }
        if best.2 <= threshold {
            break;
        }
        let pr = row_left.swap_remove(best.0);
        let pc = col_left.swap_remove(best.1);
        min_pivot = min_pivot.min(best.2);
        rank += 1;
        let pivot_row = m[pr].clone();
        for &r in &row_left {
            let f = m[r][pc] / pivot_row[pc];
            if f != 0.0 {
                for &c in &col_left {
                    m[r][c] -= f * pivot_row[c];
                }
                m[r][pc] = 0.0;
            }
        }
    }
    if rank < rows || rank == 0 {
        min_pivot = 0.0;
    }
    (rank, min_pivot)
}

/// Numerical cross-check: rank of the coefficient vectors of all `y^r`,
/// `|r| ≤ d`, including the constant monomial.
pub fn series_rank_check(vars: &[EigenVar], d: u32, ctx: &SeriesContext, spec: &TowerSpec) -> Result<RankReport, RelationError> {
    let monos = exponents(vars.len(), 0, d);
    let order = ctx.order();
    if monos.len() > order {
        return Err(RelationError::TruncationTooShort { rows: monos.len(), order });
    }
    let ys = vars.iter().map(|v| eval_series(&v.element, ctx, spec)).collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<Vec<f64>> = monos
        .iter()
        .map(|r| {
            ys.iter()
                .zip(r)
                .fold(Series::constant(1.0, order), |acc, (y, e)| &acc * &y.pow(*e))
                .coeffs()
                .to_vec()
        })
        .collect();
    let (rank, min_pivot) = numeric_rank(rows, RANK_THRESHOLD);
    Ok(RankReport { rows: monos.len(), rank, min_pivot })
}

/// Writes `r` as `(1,0,2)`.
pub fn format_exponent(r: &[i64]) -> String {
    let parts: Vec<String> = r.iter().map(|e| format!("{e}")).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> TowerSpec {
        TowerSpec::new(vec![3, 1]).unwrap()
    }

    fn el(s: &str) -> TowerElement {
        TowerElement::parse(s, &spec()).unwrap()
    }

    fn rel(pairs: &[(&[u32], &str)], k: u32) -> MonomialRelation {
        let s = spec();
        let vars = (1..=k).map(|j| EigenVar::generator(&s, 1, j)).collect();
        let coeffs = pairs.iter().map(|(r, c)| (r.to_vec(), el(c))).collect();
        MonomialRelation::new(vars, coeffs).unwrap()
    }

    #[test]
    fn reduce_step_examples() {
        let s = spec();
        let g = rel(&[(&[1, 0], "1"), (&[0, 1], "-1")], 2);
        let h = reduce_step(&g, &[1, 0], &s).unwrap();
        assert_eq!(h.support(), vec![vec![0, 1]]);
        assert_eq!(h.coeffs()[&vec![0, 1]], el("c[1][2] - c[1][1]"));

        let g = rel(&[(&[2, 0], "1"), (&[1, 1], "-1")], 2);
        let h = reduce_step(&g, &[2, 0], &s).unwrap();
        assert_eq!(h.support(), vec![vec![1, 1]]);
        // (φ(2,0) - φ(1,1)) · s_(1,1) = (c[1][1] - c[1][2]) · (-1)
        assert_eq!(h.coeffs()[&vec![1, 1]], el("c[1][2] - c[1][1]"));

        assert_eq!(reduce_step(&h, &[1, 1], &s), Err(RelationError::SupportTooSmall));
    }

    #[test]
    fn reduction_preserves_true_relations() {
        let s = spec();
        // y_1 - h y_2 = 0 for h = b[1][1]/b[1][2] with tower coefficients
        let g = rel(&[(&[1, 0], "1"), (&[0, 1], "-b[1][1]/b[1][2]")], 2);
        assert!(g.evaluate().is_zero());
        let h = reduce_step(&g, &[1, 0], &s).unwrap();
        assert!(h.evaluate().is_zero());
        assert!(h.is_empty());
    }

    #[test]
    fn certificates() {
        let s = spec();
        let t = certify_independence(&EigenVar::generators(&s, 1)[..2], 1, &s).unwrap();
        assert_eq!(t.verdict, Verdict::NoNontrivialRelation);
        assert_eq!(t.steps.len(), 1);
        assert!(t.replay(&s).unwrap());
        let t = certify_independence(&EigenVar::generators(&s, 1), 2, &s).unwrap();
        assert_eq!(t.verdict, Verdict::NoNontrivialRelation);
        assert_eq!(t.last().len(), 1);
        let dup = [EigenVar::generator(&s, 1, 1), EigenVar::generator(&s, 1, 1)];
        assert_eq!(certify_independence(&dup, 1, &s).unwrap().verdict, Verdict::Degenerate);
        let prod = EigenVar::new(el("b[1][1]*b[1][2]"), 1, &s).unwrap();
        let vars = [EigenVar::generator(&s, 1, 1), EigenVar::generator(&s, 1, 2), prod];
        let t = certify_independence(&vars, 2, &s).unwrap();
        assert!(matches!(t.verdict, Verdict::InvariantMonomialFound(_)));
    }

    #[test]
    fn eigen_vars_are_checked() {
        let s = spec();
        assert!(EigenVar::new(el("b[1][1] + b[1][2]"), 1, &s).is_err());
        assert!(EigenVar::new(el("b[1][1]"), 2, &s).is_err());
        let v = EigenVar::new(el("3*b[2][1]"), 2, &s).unwrap();
        assert_eq!(v.eigenvalue, ConstExpr::parse("c[2][1]").unwrap());
    }

    #[test]
    fn invariant_monomial_examples() {
        let s = spec();
        let g = rel(&[(&[1, 0], "1"), (&[0, 1], "1")], 2);
        assert_eq!(invariant_monomial(&g, &[1, 0], &[0, 1], &s).unwrap(), el("b[1][2]/b[1][1]"));
        assert_eq!(invariant_monomial(&g, &[1, 0], &[1, 0], &s), Err(RelationError::EqualExponents));
        let vars = vec![EigenVar::generator(&s, 2, 1)];
        let g = MonomialRelation::unit(vars, &[vec![0], vec![1]]).unwrap();
        assert_eq!(invariant_monomial(&g, &[0], &[1], &s).unwrap(), el("b[2][1]"));
    }

    #[test]
    fn exponent_enumeration() {
        assert_eq!(exponents(2, 0, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(exponents(3, 0, 3).len(), 20);
        assert_eq!(exponents(3, 1, 2).len(), 9);
    }

    #[test]
    fn numeric_rank_examples() {
        let s = TowerSpec::new(vec![2]).unwrap();
        let ctx = SeriesContext::with_level_values(8, 1, &[2.0, 3.0]).unwrap();
        let r = series_rank_check(&EigenVar::generators(&s, 1), 1, &ctx, &s).unwrap();
        assert_eq!((r.rows, r.rank), (3, 3));
        assert!(r.min_pivot > RANK_THRESHOLD);
        let dup = [EigenVar::generator(&s, 1, 1), EigenVar::generator(&s, 1, 1)];
        assert!(!series_rank_check(&dup, 1, &ctx, &s).unwrap().full_rank());
        let ctx4 = SeriesContext::with_level_values(4, 1, &[2.0, 3.0, 5.0]).unwrap();
        let s3 = TowerSpec::new(vec![3]).unwrap();
        assert_eq!(
            series_rank_check(&EigenVar::generators(&s3, 1), 3, &ctx4, &s3),
            Err(RelationError::TruncationTooShort { rows: 20, order: 4 })
        );
    }
}
