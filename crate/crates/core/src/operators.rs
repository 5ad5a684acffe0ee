//! Linear differential operators `(D_i - c_1)…(D_i - c_m)` with constant
//! eigenvalues, their expansions, eigen-decompositions, Wronskians and the
//! prolonged logarithmic-derivative system.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::constants::ConstExpr;
use crate::poly::{Poly, VarKind};
use crate::ratfun::RatFun;
use crate::series::{eval_series, Series, SeriesContext, SeriesError};
use crate::text::{grouped, ParseError, Parser, Tok};
use crate::tower::{d_twist, TowerElement, TowerError, TowerSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("level {level} out of range 1..={ell}")]
    LevelOutOfRange { level: u32, ell: u32 },
    #[error("operator needs at least one factor")]
    Empty,
    #[error("factor {index} is at level {found}, expected {expected}")]
    MixedLevels { index: usize, expected: u32, found: u32 },
    #[error("eigenvalue is not constant: {0}")]
    NonConstantEigenvalue(String),
    #[error("not a constant-linear combination of level-{level} generators: {element}")]
    NotNormalForm { level: u32, element: String },
    #[error("decomposition check failed: {0}")]
    DecompositionCheck(String),
    #[error("system dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {expected} initial values, got {found}")]
    InitialCount { expected: usize, found: usize },
    #[error("initial value x_{0}(0) is zero")]
    ZeroInitialValue(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `D_level - eigenvalue`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearFactor {
    pub level: u32,
    pub eigenvalue: ConstExpr,
}

impl LinearFactor {
    pub fn new(level: u32, eigenvalue: ConstExpr) -> Self {
        LinearFactor { level, eigenvalue }
    }

    pub fn apply(&self, x: &TowerElement, spec: &TowerSpec) -> TowerElement {
        d_twist(x, self.level, spec).sub(&x.scale(&self.eigenvalue))
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(D[{}] - {})", self.level, grouped(self.eigenvalue.as_ratfun()))
    }
}

/// Ordered product of factors at one level; applied rightmost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredOperator {
    level: u32,
    factors: Vec<LinearFactor>,
}

impl FactoredOperator {
    pub fn new(factors: Vec<LinearFactor>) -> Result<Self, OperatorError> {
        let level = factors.first().ok_or(OperatorError::Empty)?.level;
        if let Some((index, f)) = factors.iter().enumerate().find(|(_, f)| f.level != level) {
            return Err(OperatorError::MixedLevels { index, expected: level, found: f.level });
        }
        Ok(FactoredOperator { level, factors })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn factors(&self) -> &[LinearFactor] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.factors.len()
    }

    pub fn apply(&self, x: &TowerElement, spec: &TowerSpec) -> TowerElement {
        self.factors.iter().rev().fold(x.clone(), |y, f| f.apply(&y, spec))
    }

    /// Text form `(D[i] - a) * (D[i] - b) * …`.
    pub fn parse(src: &str) -> Result<Self, OperatorError> {
        let mut p = Parser::new(src)?;
        let mut factors = Vec::new();
        loop {
            p.expect_tok(Tok::LParen, "'('")?;
            p.expect_tok(Tok::D, "'D'")?;
            let level = p.bracket_index()?;
            let tail = p.signed_tail()?;
            p.expect_tok(Tok::RParen, "')'")?;
            let eigenvalue = ConstExpr::from_ratfun(tail.neg())
                .map_err(|e| OperatorError::NonConstantEigenvalue(format!("{e}")))?;
            factors.push(LinearFactor::new(level, eigenvalue));
            if !p.eat(Tok::Star) {
                break;
            }
        }
        p.finish()?;
        Self::new(factors)
    }
}

impl fmt::Display for FactoredOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, fac) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str(" * ")?;
            }
            fac.fmt(f)?;
        }
        Ok(())
    }
}

/// `Σ_k a_k D_level^k`, monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpandedOperator {
    level: u32,
    coeffs: Vec<ConstExpr>,
}

impl ExpandedOperator {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `a_0, …, a_m` with `a_m = 1`.
    pub fn coeffs(&self) -> &[ConstExpr] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn apply(&self, x: &TowerElement, spec: &TowerSpec) -> TowerElement {
        let mut acc = TowerElement::zero();
        let mut dk = x.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                dk = d_twist(&dk, self.level, spec);
            }
            if !a.is_zero() {
                acc = acc.add(&dk.scale(a));
            }
        }
        acc
    }
}

impl fmt::Display for ExpandedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let d = match k {
                0 => String::new(),
                1 => format!("D[{}]", self.level),
                _ => format!("D[{}]^{}", self.level, k),
            };
            match (a.is_one(), k) {
                (true, 0) => f.write_str("1")?,
                (true, _) => f.write_str(&d)?,
                (false, 0) => f.write_str(&grouped(a.as_ratfun()))?,
                (false, _) => write!(f, "{}*{}", grouped(a.as_ratfun()), d)?,
            }
        }
        Ok(())
    }
}

/// `(D_i - c[i][1]) … (D_i - c[i][n_i])`.
pub fn build_e(spec: &TowerSpec, level: u32) -> Result<FactoredOperator, OperatorError> {
    if level == 0 || level > spec.ell() {
        return Err(OperatorError::LevelOutOfRange { level, ell: spec.ell() });
    }
    let factors = spec
        .eigenvalues(level)
        .into_iter()
        .map(|c| LinearFactor::new(level, ConstExpr::symbol(c)))
        .collect();
    FactoredOperator::new(factors)
}

/// Multiplies out the factors; constant eigenvalues commute with `D_i`, so
/// the coefficients are signed elementary symmetric functions.
pub fn expand(op: &FactoredOperator) -> ExpandedOperator {
    let mut coeffs = vec![ConstExpr::one()];
    for f in op.factors() {
        let mut next = vec![ConstExpr::zero(); coeffs.len() + 1];
        for (k, a) in coeffs.iter().enumerate() {
            next[k + 1] = next[k + 1].add(a);
            next[k] = next[k].sub(&a.mul(&f.eigenvalue));
        }
        coeffs = next;
    }
    ExpandedOperator { level: op.level(), coeffs }
}

/// Components `f_j = u_j b[i][j]` of a solution of `(E_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenDecomposition {
    pub level: u32,
    pub components: Vec<TowerElement>,
}

impl EigenDecomposition {
    pub fn sum(&self) -> TowerElement {
        self.components.iter().fold(TowerElement::zero(), |a, f| a.add(f))
    }
}

/// Splits `f = Σ_j u_j b[i][j]` into its eigen-components.
pub fn decompose(f: &TowerElement, level: u32, spec: &TowerSpec) -> Result<EigenDecomposition, OperatorError> {
    spec.check_level(level).map_err(|_| OperatorError::LevelOutOfRange { level, ell: spec.ell() })?;
    let not_normal = || OperatorError::NotNormalForm { level, element: format!("{f}") };
    let r = f.as_ratfun();
    if r.denom().has_var_where(|v| v.kind == VarKind::Generator) {
        return Err(not_normal());
    }
    let n = spec.rank(level) as usize;
    let mut parts = vec![Vec::new(); n];
    for (m, q) in r.numer().terms() {
        let gens: Vec<_> = m.factors().iter().filter(|(v, _)| v.kind == VarKind::Generator).collect();
        let [(v, 1)] = gens.as_slice() else {
            return Err(not_normal());
        };
        if v.level != level {
            return Err(not_normal());
        }
        let rest = m.div(&crate::poly::Monomial::var(*v)).expect("factor present");
        parts[v.index as usize - 1].push((rest, q.clone()));
    }
    let mut components = Vec::with_capacity(n);
    for (j, terms) in parts.into_iter().enumerate() {
        let u = RatFun::new(Poly::from_terms(terms), r.denom().clone()).expect("nonzero denominator");
        let u = ConstExpr::from_ratfun(u).expect("generator-free");
        let fj = spec.generator(level, j as u32 + 1).scale(&u);
        let fac = LinearFactor::new(level, ConstExpr::symbol(spec.eigenvalue(level, j as u32 + 1)));
        if !fac.apply(&fj, spec).is_zero() {
            return Err(OperatorError::DecompositionCheck(format!("component {} is not an eigenvector", j + 1)));
        }
        components.push(fj);
    }
    let d = EigenDecomposition { level, components };
    if &d.sum() != f {
        return Err(OperatorError::DecompositionCheck("components do not sum to the input".into()));
    }
    Ok(d)
}

/// Every component present and nonzero.
pub fn is_generic(d: &EigenDecomposition) -> bool {
    !d.components.is_empty() && d.components.iter().all(|f| !f.is_zero())
}

fn det_laplace(m: &[Vec<TowerElement>]) -> TowerElement {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = TowerElement::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<TowerElement>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != col).map(|(_, x)| x.clone()).collect())
            .collect();
        let t = m[0][col].mul(&det_laplace(&minor));
        acc = if col % 2 == 0 { acc.add(&t) } else { acc.sub(&t) };
    }
    acc
}

fn det_elimination(mut m: Vec<Vec<TowerElement>>) -> TowerElement {
    let n = m.len();
    let mut det = TowerElement::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return TowerElement::zero();
        };
        if p != col {
            m.swap(p, col);
            det = det.neg();
        }
        let pivot = m[col][col].clone();
        det = det.mul(&pivot);
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].div(&pivot).expect("nonzero pivot");
            for k in col..n {
                let d = f.mul(&m[col][k]);
                m[r][k] = m[r][k].sub(&d);
            }
        }
    }
    det
}

/// `det [D_i^k x_j]`, `k = 0..m-1`.
pub fn wronskian(xs: &[TowerElement], level: u32, spec: &TowerSpec) -> TowerElement {
    assert!(!xs.is_empty(), "wronskian of an empty list");
    let m = xs.len();
    let mut rows = Vec::with_capacity(m);
    rows.push(xs.to_vec());
    for k in 1..m {
        let next = rows[k - 1].iter().map(|x| d_twist(x, level, spec)).collect();
        rows.push(next);
    }
    if m <= 4 {
        det_laplace(&rows)
    } else {
        det_elimination(rows)
    }
}

/// `δx_k = x_k x_{k+1}` for `k < n`, `δx_n = h x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProlongedSystem {
    pub n: usize,
    pub h: TowerElement,
}

impl fmt::Display for ProlongedSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 1..self.n {
            writeln!(f, "d(x_{k}) = x_{k}*x_{}", k + 1)?;
        }
        write!(f, "d(x_{n}) = {}*x_{n}", grouped(self.h.as_ratfun()), n = self.n)
    }
}

pub fn logd_system(n: usize, h: TowerElement) -> Result<ProlongedSystem, OperatorError> {
    if n == 0 {
        return Err(OperatorError::ZeroDimension);
    }
    Ok(ProlongedSystem { n, h })
}

impl ProlongedSystem {
    /// Solves order by order given the series of `h`.
    pub fn solve_with(&self, initial: &[f64], h: &Series) -> Result<Vec<Series>, OperatorError> {
        if initial.len() != self.n {
            return Err(OperatorError::InitialCount { expected: self.n, found: initial.len() });
        }
        if let Some(k) = initial.iter().position(|v| *v == 0.0) {
            return Err(OperatorError::ZeroInitialValue(k + 1));
        }
        let order = h.order();
        let mut x: Vec<Vec<f64>> = initial.iter().map(|v| {
            let mut c = vec![0.0; order];
            c[0] = *v;
            c
        }).collect();
        let hc = h.coeffs();
        for k in 0..order - 1 {
            for i in 0..self.n {
                let other: &[f64] = if i + 1 < self.n { &x[i + 1] } else { hc };
                let prod: f64 = (0..=k).map(|a| x[i][a] * other[k - a]).sum();
                x[i][k + 1] = prod / (k + 1) as f64;
            }
        }
        Ok(x.into_iter().map(Series::from_coeffs).collect())
    }

    /// Solves with `h` interpreted through the tower's series oracle.
    pub fn solve(&self, initial: &[f64], ctx: &SeriesContext, spec: &TowerSpec) -> Result<Vec<Series>, OperatorError> {
        let h = eval_series(&self.h, ctx, spec)?;
        self.solve_with(initial, &h)
    }

    /// Largest coefficient of `δx_k - rhs_k` over the reliable prefix.
    pub fn residual(&self, xs: &[Series], h: &Series) -> f64 {
        let len = h.order() - 1;
        (0..self.n)
            .map(|i| {
                let rhs = if i + 1 < self.n { &xs[i] * &xs[i + 1] } else { h * &xs[i] };
                xs[i].derivative().max_diff(&rhs, len)
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> TowerSpec {
        TowerSpec::new(vec![2, 1]).unwrap()
    }

    fn el(s: &str) -> TowerElement {
        TowerElement::parse(s, &spec()).unwrap()
    }

    #[test]
    fn e_annihilates_e() {
        let s = spec();
        let e1 = build_e(&s, 1).unwrap();
        assert_eq!(e1.to_string(), "(D[1] - c[1][1]) * (D[1] - c[1][2])");
        assert!(e1.apply(&s.e(1), &s).is_zero());
        assert!(build_e(&s, 2).unwrap().apply(&s.e(2), &s).is_zero());
        assert_eq!(build_e(&s, 3), Err(OperatorError::LevelOutOfRange { level: 3, ell: 2 }));
        assert!(!e1.apply(&s.e(2), &s).is_zero());
    }

    #[test]
    fn expansion_is_symmetric() {
        let s = spec();
        let op = build_e(&s, 1).unwrap();
        let ex = expand(&op);
        assert_eq!(ex.to_string(), "D[1]^2 + (-c[1][1] - c[1][2])*D[1] + c[1][1]*c[1][2]");
        let mut rev = op.factors().to_vec();
        rev.reverse();
        assert_eq!(expand(&FactoredOperator::new(rev).unwrap()), ex);
        let x = el("b[1][1]^2/(b[2][1] + 1)");
        assert_eq!(ex.apply(&x, &s), op.apply(&x, &s));
    }

    #[test]
    fn operator_text_round_trips() {
        let src = "(D[2] - c[2][1]) * (D[2] - (c[1][1] - 1/2)) * (D[2] - (-u[1][1]))";
        let op = FactoredOperator::parse(src).unwrap();
        assert_eq!(op.to_string(), src);
        assert_eq!(op.factors()[1].eigenvalue, ConstExpr::parse("c[1][1] - 1/2").unwrap());
        assert!(FactoredOperator::parse("(D[1] - b[1][1])").is_err());
        assert!(matches!(
            FactoredOperator::parse("(D[1] - c[1][1]) * (D[2] - c[2][1])"),
            Err(OperatorError::MixedLevels { .. })
        ));
    }

    #[test]
    fn decomposition_examples() {
        let s = spec();
        let d = decompose(&el("b[1][1] + b[1][2]"), 1, &s).unwrap();
        assert_eq!(d.components, vec![el("b[1][1]"), el("b[1][2]")]);
        assert!(is_generic(&d));
        let d = decompose(&el("u[1][1]*b[1][1]"), 1, &s).unwrap();
        assert_eq!(d.components, vec![el("u[1][1]*b[1][1]"), TowerElement::zero()]);
        assert!(!is_generic(&d));
        let d = decompose(&el("b[1][1]/(c[1][1] - c[1][2]) - 3*b[1][2]"), 1, &s).unwrap();
        assert_eq!(d.sum(), el("b[1][1]/(c[1][1] - c[1][2]) - 3*b[1][2]"));
        assert!(matches!(decompose(&el("b[1][1]*b[1][2]"), 1, &s), Err(OperatorError::NotNormalForm { .. })));
        assert!(matches!(decompose(&el("b[2][1]"), 1, &s), Err(OperatorError::NotNormalForm { .. })));
        assert!(!is_generic(&decompose(&TowerElement::zero(), 1, &s).unwrap()));
    }

    #[test]
    fn wronskian_examples() {
        let s = spec();
        let w = wronskian(&s.generators(1), 1, &s);
        assert_eq!(w, el("(c[1][2] - c[1][1])*b[1][1]*b[1][2]"));
        assert_eq!(wronskian(&[el("b[2][1]/3")], 2, &s), el("b[2][1]/3"));
        assert!(wronskian(&[el("b[1][1]"), el("2*b[1][1]")], 1, &s).is_zero());
    }

    #[test]
    fn elimination_matches_laplace() {
        let s = TowerSpec::new(vec![4]).unwrap();
        let xs = s.generators(1);
        let mut rows = vec![xs.clone()];
        for k in 1..4 {
            let next = rows[k - 1].iter().map(|x| d_twist(x, 1, &s)).collect();
            rows.push(next);
        }
        assert_eq!(det_elimination(rows.clone()), det_laplace(&rows));
    }

    #[test]
    fn prolonged_system_solution() {
        let sys = logd_system(2, TowerElement::zero()).unwrap();
        assert_eq!(sys.to_string(), "d(x_1) = x_1*x_2\nd(x_2) = 0*x_2");
        let xs = sys.solve_with(&[1.0, 1.0], &Series::zero(5)).unwrap();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0, 1.0 / 24.0];
        assert!(xs[0].coeffs().iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
        assert_eq!(xs[1].coeffs(), &[1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(sys.residual(&xs, &Series::zero(5)), 0.0);
        assert_eq!(sys.solve_with(&[1.0, 0.0], &Series::zero(5)), Err(OperatorError::ZeroInitialValue(2)));
        assert_eq!(logd_system(0, TowerElement::zero()), Err(OperatorError::ZeroDimension));
    }
}
