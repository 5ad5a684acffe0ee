//! Reduced fractions of polynomials: the common carrier for constant
//! expressions and tower elements.

use crate::poly::{gcd, Poly, Rational, Var};
use num_traits::{One, Zero};

/// `num / den` with `gcd(num, den) = 1` and `den` monic under grlex.
/// Zero is `0/1`. Canonical, so derived equality is field equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun { num: Poly::one(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    pub fn from_rational(q: Rational) -> Self {
        RatFun::from_poly(Poly::constant(q))
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::from_rational(crate::poly::rat(n))
    }

    pub fn var(v: Var) -> Self {
        RatFun::from_poly(Poly::var(v))
    }

    /// Builds and reduces `num / den`; `None` when `den = 0`.
    pub fn new(num: Poly, den: Poly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(RatFun::zero());
        }
        if let Some(q) = den.constant_value() {
            return Some(RatFun::from_poly(num.scale(&q.recip())));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        Some(Self::normalized(num, den))
    }

    /// Assumes coprime inputs; rescales so the denominator is monic.
    fn normalized(num: Poly, den: Poly) -> Self {
        let lc = den.leading().expect("nonzero denominator").1.clone();
        if lc.is_one() {
            RatFun { num, den }
        } else {
            let s = lc.recip();
            RatFun { num: num.scale(&s), den: den.scale(&s) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn rational_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> alloc::vec::Vec<Var> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v.sort();
        v.dedup();
        v
    }

    pub fn has_var_where(&self, pred: impl Fn(&Var) -> bool + Copy) -> bool {
        self.num.has_var_where(pred) || self.den.has_var_where(pred)
    }

    pub fn neg(&self) -> Self {
        RatFun { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, subtract: bool) -> Self {
        let op = |a: &Poly, b: &Poly| if subtract { a.sub(b) } else { a.add(b) };
        if self.den.is_one() && other.den.is_one() {
            return RatFun::from_poly(op(&self.num, &other.num));
        }
        if self.den == other.den {
            return RatFun::new(op(&self.num, &other.num), self.den.clone()).expect("nonzero");
        }
        let g = gcd(&self.den, &other.den);
        let (da, db) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (self.den.div_exact(&g).expect("divides"), other.den.div_exact(&g).expect("divides"))
        };
        let num = op(&self.num.mul(&db), &other.num.mul(&da));
        let den = self.den.mul(&db);
        if g.is_one() {
            // Any common factor of num and den would have to divide g.
            if num.is_zero() {
                return RatFun::zero();
            }
            return Self::normalized(num, den);
        }
        RatFun::new(num, den).expect("nonzero")
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return RatFun::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFun::from_poly(self.num.mul(&other.num));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = self.num.div_exact(&g1).expect("divides");
        let d = other.den.div_exact(&g1).expect("divides");
        let c = other.num.div_exact(&g2).expect("divides");
        let b = self.den.div_exact(&g2).expect("divides");
        Self::normalized(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        Some(self.mul(&other.inv()?))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(q), den: self.den.clone() }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as u32;
        Some(RatFun { num: base.num.pow(k), den: base.den.pow(k) })
    }
}
