//! Towers of eigen-generators: `δ b[i][j] = c[i][j] · b[i][j] · ∏_{k<i} e_k`
//! with `e_k = Σ_m b[k][m]`, and the twisted derivations
//! `D_i = δ / ∏_{k<i} e_k`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::constants::{ConstExpr, ConstSymbol};
use crate::poly::{gcd, Poly, Var, VarKind};
use crate::ratfun::RatFun;
use crate::text::{parse_ratfun, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("invalid tower: {0}")]
    InvalidSpec(String),
    #[error("symbol {0} is outside the tower")]
    OutOfSpec(String),
    #[error("level {level} out of range 1..={ell}")]
    LevelOutOfRange { level: u32, ell: u32 },
    #[error("logarithmic derivative of zero")]
    LogOfZero,
    #[error("iterate {step} is zero, outside the domain of the next logarithmic derivative")]
    DomainViolation { step: usize },
    #[error("division by zero")]
    DivisionByZero,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Shape of a tower: `ranks[i-1] = n_i` generators at level `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerSpec {
    ranks: Vec<u32>,
}

impl TowerSpec {
    pub fn new(ranks: Vec<u32>) -> Result<Self, TowerError> {
        if ranks.is_empty() {
            return Err(TowerError::InvalidSpec("at least one level is required".into()));
        }
        if let Some(k) = ranks.iter().position(|&n| n == 0) {
            return Err(TowerError::InvalidSpec(format!("level {} has rank 0", k + 1)));
        }
        Ok(TowerSpec { ranks })
    }

    pub fn ell(&self) -> u32 {
        self.ranks.len() as u32
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }

    /// `n_i`, or 0 outside `1..=ell`.
    pub fn rank(&self, level: u32) -> u32 {
        if level == 0 {
            return 0;
        }
        self.ranks.get(level as usize - 1).copied().unwrap_or(0)
    }

    pub fn check_level(&self, level: u32) -> Result<(), TowerError> {
        if level == 0 || level > self.ell() {
            return Err(TowerError::LevelOutOfRange { level, ell: self.ell() });
        }
        Ok(())
    }

    pub fn eigenvalue(&self, level: u32, index: u32) -> ConstSymbol {
        ConstSymbol::c(level, index)
    }

    pub fn eigenvalues(&self, level: u32) -> Vec<ConstSymbol> {
        (1..=self.rank(level)).map(|j| ConstSymbol::c(level, j)).collect()
    }

    /// All `c[i][j]`, level-major.
    pub fn symbols(&self) -> Vec<ConstSymbol> {
        (1..=self.ell()).flat_map(|i| self.eigenvalues(i)).collect()
    }

    pub fn generator(&self, level: u32, index: u32) -> TowerElement {
        TowerElement(RatFun::var(Var::generator(level, index)))
    }

    pub fn generators(&self, level: u32) -> Vec<TowerElement> {
        (1..=self.rank(level)).map(|j| self.generator(level, j)).collect()
    }

    /// `e_i = Σ_j b[i][j]`.
    pub fn e(&self, level: u32) -> TowerElement {
        TowerElement(RatFun::from_poly(self.e_poly(level)))
    }

    fn e_poly(&self, level: u32) -> Poly {
        (1..=self.rank(level)).fold(Poly::zero(), |acc, j| acc.add(&Poly::var(Var::generator(level, j))))
    }

    /// `∏_{m=from}^{to-1} e_m`.
    fn e_product(&self, from: u32, to: u32) -> Poly {
        (from..to).fold(Poly::one(), |acc, m| acc.mul(&self.e_poly(m)))
    }

    /// Eigenvalue symbols must name a generator; free constants `u` are unrestricted.
    fn check_var(&self, v: &Var) -> Result<(), TowerError> {
        let ok = match v.kind {
            VarKind::Free => v.level >= 1 && v.index >= 1,
            VarKind::Eigen | VarKind::Generator => v.index >= 1 && v.index <= self.rank(v.level),
        };
        if ok {
            Ok(())
        } else {
            Err(TowerError::OutOfSpec(format!("{v}")))
        }
    }

    pub fn validate(&self, r: &RatFun) -> Result<(), TowerError> {
        r.vars().iter().try_for_each(|v| self.check_var(v))
    }

    /// `Σ_{v at level k} c_v · v∂_v p`: the level-k part of `δp` before
    /// the factor `∏_{m<k} e_m`.
    fn level_part(&self, p: &Poly, k: u32) -> Poly {
        let mut out = Poly::zero();
        for j in 1..=self.rank(k) {
            let e = p.euler(Var::generator(k, j));
            if !e.is_zero() {
                out = out.add(&e.mul(&Poly::var(Var::eigen(k, j))));
            }
        }
        out
    }

    /// `∏_{m<kmin} e_m · D_kmin p` as a polynomial.
    fn twisted_numer(&self, p: &Poly, kmin: u32) -> Poly {
        let mut out = Poly::zero();
        for k in kmin..=self.ell() {
            let s = self.level_part(p, k);
            if !s.is_zero() {
                out = out.add(&s.mul(&self.e_product(kmin, k)));
            }
        }
        out
    }
}

fn lowest_generator_level(r: &RatFun) -> Option<u32> {
    r.vars().iter().filter(|v| v.kind == VarKind::Generator).map(|v| v.level).min()
}

/// Element of the tower field: a reduced fraction in the generators with
/// constant coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerElement(RatFun);

impl TowerElement {
    pub fn zero() -> Self {
        TowerElement(RatFun::zero())
    }

    pub fn one() -> Self {
        TowerElement(RatFun::one())
    }

    pub fn int(n: i64) -> Self {
        TowerElement(RatFun::from_int(n))
    }

    pub fn from_const(c: &ConstExpr) -> Self {
        TowerElement(c.as_ratfun().clone())
    }

    pub fn from_ratfun(r: RatFun, spec: &TowerSpec) -> Result<Self, TowerError> {
        spec.validate(&r)?;
        Ok(TowerElement(r))
    }

    pub fn parse(src: &str, spec: &TowerSpec) -> Result<Self, TowerError> {
        Self::from_ratfun(parse_ratfun(src)?, spec)
    }

    pub fn as_ratfun(&self) -> &RatFun {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_constant(&self) -> bool {
        !self.0.has_var_where(|v| v.kind == VarKind::Generator)
    }

    /// The element as a constant, if it has no generators.
    pub fn to_const(&self) -> Option<ConstExpr> {
        ConstExpr::from_ratfun(self.0.clone()).ok()
    }

    pub fn add(&self, o: &Self) -> Self {
        TowerElement(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &Self) -> Self {
        TowerElement(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &Self) -> Self {
        TowerElement(self.0.mul(&o.0))
    }

    pub fn neg(&self) -> Self {
        TowerElement(self.0.neg())
    }

    pub fn scale(&self, c: &ConstExpr) -> Self {
        TowerElement(self.0.mul(c.as_ratfun()))
    }

    pub fn div(&self, o: &Self) -> Result<Self, TowerError> {
        self.0.div(&o.0).map(TowerElement).ok_or(TowerError::DivisionByZero)
    }

    pub fn inv(&self) -> Result<Self, TowerError> {
        self.0.inv().map(TowerElement).ok_or(TowerError::DivisionByZero)
    }

    pub fn pow(&self, e: i64) -> Result<Self, TowerError> {
        self.0.pow(e).map(TowerElement).ok_or(TowerError::DivisionByZero)
    }
}

impl fmt::Display for TowerElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<ConstExpr> for TowerElement {
    fn from(c: ConstExpr) -> Self {
        TowerElement(c.into_ratfun())
    }
}

/// `D_i x = δx / ∏_{k<i} e_k`. Levels above `ell` are clamped by the
/// caller's precondition; `D_1 = δ`.
pub fn d_twist(x: &TowerElement, i: u32, spec: &TowerSpec) -> TowerElement {
    let r = x.as_ratfun();
    let Some(low) = lowest_generator_level(r) else {
        return TowerElement::zero();
    };
    let kmin = low.min(i);
    let (p, q) = (r.numer(), r.denom());
    let np = spec.twisted_numer(p, kmin);
    let (num, den) = if q.is_one() {
        (np, Poly::one())
    } else {
        // With g = gcd(q, N q), q = g h and N q = g h': the quotient rule
        // reduces to (N p h - p h') / (q h) before any further gcd, which
        // keeps repeated factors of q out of the final reduction.
        let nq = spec.twisted_numer(q, kmin);
        let g = gcd(q, &nq);
        let h = q.div_exact(&g).expect("gcd divides");
        let hq = nq.div_exact(&g).expect("gcd divides");
        (np.mul(&h).sub(&p.mul(&hq)), q.mul(&h))
    };
    let den = den.mul(&spec.e_product(kmin, i));
    TowerElement(RatFun::new(num, den).expect("e_k and q are nonzero"))
}

/// The base derivation δ.
pub fn derive(x: &TowerElement, spec: &TowerSpec) -> TowerElement {
    d_twist(x, 1, spec)
}

/// `D_i x / x`.
pub fn logd(x: &TowerElement, i: u32, spec: &TowerSpec) -> Result<TowerElement, TowerError> {
    if x.is_zero() {
        return Err(TowerError::LogOfZero);
    }
    Ok(d_twist(x, i, spec).div(x).expect("nonzero"))
}

/// `m`-fold logarithmic derivative with respect to δ. Every iterate fed
/// into the next step must be nonzero.
pub fn logd_iter(x: &TowerElement, m: usize, spec: &TowerSpec) -> Result<TowerElement, TowerError> {
    let mut cur = x.clone();
    for step in 0..m {
        if cur.is_zero() {
            return Err(TowerError::DomainViolation { step });
        }
        cur = logd(&cur, 1, spec)?;
    }
    Ok(cur)
}
