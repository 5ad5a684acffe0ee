//! The field of formal constants Q(c̄, ū) and Q-linear algebra over its
//! symbols.
//!
//! Eigenvalues `c[i][j]` are independent indeterminates rather than chosen
//! algebraic numbers, so distinct integer combinations of them never
//! coincide. `u[i][j]` are further free constants used as scalar multiples.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::poly::{rat, Poly, Rational, Var, VarKind};
use crate::ratfun::RatFun;
use crate::text::{parse_ratfun, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("length mismatch: {left} coefficients for {right} symbols")]
    LengthMismatch { left: usize, right: usize },
    #[error("input {index} is not Q-linear in the constant symbols")]
    NotLinear { index: usize },
    #[error("expression is not a constant: {0}")]
    NotConstant(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A named constant: eigenvalue `c[i][j]` or free scalar `u[i][j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstSymbol(Var);

impl ConstSymbol {
    pub const fn c(level: u32, index: u32) -> Self {
        ConstSymbol(Var::eigen(level, index))
    }

    pub const fn u(level: u32, index: u32) -> Self {
        ConstSymbol(Var::free(level, index))
    }

    pub fn from_var(v: Var) -> Option<Self> {
        v.is_constant().then_some(ConstSymbol(v))
    }

    pub fn var(&self) -> Var {
        self.0
    }

    pub fn level(&self) -> u32 {
        self.0.level
    }

    pub fn index(&self) -> u32 {
        self.0.index
    }

    pub fn is_eigenvalue(&self) -> bool {
        self.0.kind == VarKind::Eigen
    }
}

impl fmt::Display for ConstSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Element of Q(c̄, ū) in canonical reduced form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstExpr(RatFun);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl ConstExpr {
    pub fn zero() -> Self {
        ConstExpr(RatFun::zero())
    }

    pub fn one() -> Self {
        ConstExpr(RatFun::one())
    }

    pub fn int(n: i64) -> Self {
        ConstExpr(RatFun::from_int(n))
    }

    pub fn rational(q: Rational) -> Self {
        ConstExpr(RatFun::from_rational(q))
    }

    pub fn symbol(s: ConstSymbol) -> Self {
        ConstExpr(RatFun::var(s.var()))
    }

    /// Accepts any fraction free of generator symbols.
    pub fn from_ratfun(r: RatFun) -> Result<Self, ConstError> {
        if r.has_var_where(|v| !v.is_constant()) {
            return Err(ConstError::NotConstant(crate::text::ratfun_to_string(&r)));
        }
        Ok(ConstExpr(r))
    }

    pub fn parse(src: &str) -> Result<Self, ConstError> {
        Self::from_ratfun(parse_ratfun(src)?)
    }

    pub fn as_ratfun(&self) -> &RatFun {
        &self.0
    }

    pub fn into_ratfun(self) -> RatFun {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn rational_value(&self) -> Option<Rational> {
        self.0.rational_value()
    }

    pub fn symbols(&self) -> Vec<ConstSymbol> {
        self.0.vars().into_iter().map(ConstSymbol).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        ConstExpr(self.0.add(&other.0))
    }

    pub fn sub(&self, other: &Self) -> Self {
        ConstExpr(self.0.sub(&other.0))
    }

    pub fn mul(&self, other: &Self) -> Self {
        ConstExpr(self.0.mul(&other.0))
    }

    pub fn neg(&self) -> Self {
        ConstExpr(self.0.neg())
    }

    pub fn scale(&self, q: &Rational) -> Self {
        ConstExpr(self.0.scale(q))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, ConstError> {
        self.0.div(&other.0).map(ConstExpr).ok_or(ConstError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<Self, ConstError> {
        self.0.pow(e).map(ConstExpr).ok_or(ConstError::DivisionByZero)
    }
}

impl fmt::Display for ConstExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<ConstSymbol> for ConstExpr {
    fn from(s: ConstSymbol) -> Self {
        ConstExpr::symbol(s)
    }
}

/// Exact field operation on constants.
pub fn arith(a: &ConstExpr, b: &ConstExpr, op: ArithOp) -> Result<ConstExpr, ConstError> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// `Σ r_j · c_j`.
pub fn qlinear_dot(r: &[i64], c: &[ConstSymbol]) -> Result<ConstExpr, ConstError> {
    if r.len() != c.len() {
        return Err(ConstError::LengthMismatch { left: r.len(), right: c.len() });
    }
    let terms = r
        .iter()
        .zip(c)
        .filter(|(k, _)| **k != 0)
        .map(|(k, s)| (crate::poly::Monomial::var(s.var()), rat(*k)))
        .collect();
    Ok(ConstExpr(RatFun::from_poly(Poly::from_terms(terms))))
}

/// Coefficient row of a Q-linear expression over `coords`, plus a final
/// coordinate for the constant term.
fn linear_row(e: &ConstExpr, index: usize, coords: &[Var]) -> Result<Vec<Rational>, ConstError> {
    let r = e.as_ratfun();
    if !r.is_polynomial() {
        return Err(ConstError::NotLinear { index });
    }
    let mut row = alloc::vec![Rational::zero(); coords.len() + 1];
    for (m, q) in r.numer().terms() {
        match m.factors() {
            [] => row[coords.len()] = q.clone(),
            [(v, 1)] => {
                let k = coords.binary_search(v).expect("coordinate collected");
                row[k] = q.clone();
            }
            _ => return Err(ConstError::NotLinear { index }),
        }
    }
    Ok(row)
}

/// Exact rank of a rational matrix by Gaussian elimination.
pub fn rational_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        for i in 0..rows.len() {
            if i == rank || rows[i][col].is_zero() {
                continue;
            }
            let f = &rows[i][col] / &pivot;
            for k in col..ncols {
                let d = &f * &rows[rank][k];
                rows[i][k] -= d;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// True iff the inputs are Q-linearly independent as vectors of
/// coefficients (symbols plus constant term).
pub fn qlinear_independent(v: &[ConstExpr]) -> Result<bool, ConstError> {
    let mut coords: Vec<Var> = v.iter().flat_map(|e| e.as_ratfun().vars()).collect();
    coords.sort();
    coords.dedup();
    let rows = v
        .iter()
        .enumerate()
        .map(|(i, e)| linear_row(e, i, &coords))
        .collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Ok(true);
    }
    Ok(rational_rank(rows) == v.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(i: u32, j: u32) -> ConstExpr {
        ConstExpr::symbol(ConstSymbol::c(i, j))
    }

    #[test]
    fn arith_examples() {
        let s = arith(&c(1, 1).add(&c(1, 2)), &c(1, 2), ArithOp::Sub).unwrap();
        assert_eq!(s, c(1, 1));
        assert_eq!(arith(&c(1, 1), &c(1, 1), ArithOp::Div).unwrap(), ConstExpr::one());
        let num = c(1, 1).mul(&c(1, 1)).sub(&c(1, 2).mul(&c(1, 2)));
        let den = c(1, 1).sub(&c(1, 2));
        let q = arith(&num, &den, ArithOp::Div).unwrap();
        assert_eq!(q, c(1, 1).add(&c(1, 2)));
        assert_eq!(q.mul(&den), num);
        assert_eq!(arith(&c(1, 1), &ConstExpr::zero(), ArithOp::Div), Err(ConstError::DivisionByZero));
    }

    #[test]
    fn dot_examples() {
        let cs = [ConstSymbol::c(1, 1), ConstSymbol::c(1, 2)];
        assert_eq!(qlinear_dot(&[1, 2], &cs).unwrap(), c(1, 1).add(&c(1, 2).scale(&rat(2))));
        assert!(qlinear_dot(&[0, 0], &cs).unwrap().is_zero());
        let d = qlinear_dot(&[1, -1], &cs).unwrap();
        assert_eq!(d, c(1, 1).sub(&c(1, 2)));
        assert!(!d.is_zero());
        assert_eq!(
            qlinear_dot(&[1], &cs),
            Err(ConstError::LengthMismatch { left: 1, right: 2 })
        );
    }

    #[test]
    fn independence_examples() {
        assert!(qlinear_independent(&[c(1, 1), c(1, 2)]).unwrap());
        assert!(!qlinear_independent(&[c(1, 1), c(1, 1).scale(&rat(2))]).unwrap());
        let v = [c(1, 1).add(&c(1, 2)), c(1, 1).sub(&c(1, 2)), c(1, 1)];
        assert!(!qlinear_independent(&v).unwrap());
        assert_eq!(
            qlinear_independent(&[c(1, 1), c(1, 1).mul(&c(1, 2))]),
            Err(ConstError::NotLinear { index: 1 })
        );
        // constant terms take part through their own coordinate
        assert!(qlinear_independent(&[ConstExpr::one(), c(1, 1)]).unwrap());
        assert!(!qlinear_independent(&[ConstExpr::one(), ConstExpr::int(3)]).unwrap());
    }

    #[test]
    fn rejects_generators() {
        assert!(matches!(ConstExpr::parse("b[1][1]"), Err(ConstError::NotConstant(_))));
        assert_eq!(ConstExpr::parse("c[1][1] + u[1][2]").unwrap().symbols().len(), 2);
    }
}
