//! Truncated power series in `t` with `δ = d/dt`: a floating-point oracle
//! for the exact tower.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::constants::ConstSymbol;
use crate::poly::{Poly, Rational, VarKind};
use crate::tower::{TowerElement, TowerSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SeriesError {
    #[error("truncation order must be at least 2, got {0}")]
    OrderTooSmall(usize),
    #[error("assigned eigenvalues at level {level} are not pairwise distinct")]
    NotDistinct { level: u32 },
    #[error("initial value of {0} is zero")]
    ZeroInitialValue(String),
    #[error("no numeric value assigned to {0}")]
    MissingAssignment(String),
    #[error("denominator series has zero constant term")]
    NonInvertibleSeries,
}

/// Coefficients `(s_0, …, s_{N-1})` of a series truncated at order `N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn zero(order: usize) -> Self {
        Series(vec![0.0; order])
    }

    pub fn constant(v: f64, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.0[0] = v;
        s
    }

    /// The series `t`.
    pub fn t(order: usize) -> Self {
        let mut s = Series::zero(order);
        if order > 1 {
            s.0[1] = 1.0;
        }
        s
    }

    pub fn from_coeffs(c: Vec<f64>) -> Self {
        Series(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn scale(&self, k: f64) -> Self {
        Series(self.0.iter().map(|x| x * k).collect())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Series::constant(1.0, self.order());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self, SeriesError> {
        let s0 = self.0[0];
        if s0 == 0.0 {
            return Err(SeriesError::NonInvertibleSeries);
        }
        let n = self.order();
        let mut y = vec![0.0; n];
        y[0] = 1.0 / s0;
        for k in 1..n {
            let acc: f64 = (1..=k).map(|m| self.0[m] * y[k - m]).sum();
            y[k] = -acc / s0;
        }
        Ok(Series(y))
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        Ok(self * &other.inverse()?)
    }

    /// `d/dt`; the top coefficient is unknown after truncation and set to 0.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut out = vec![0.0; n];
        for k in 0..n - 1 {
            out[k] = (k + 1) as f64 * self.0[k + 1];
        }
        Series(out)
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let n = self.order();
        let mut out = vec![0.0; n];
        for k in 1..n {
            out[k] = self.0[k - 1] / k as f64;
        }
        Series(out)
    }

    /// `exp(g)` for `g(0) = 0`, by the recurrence for `y' = g'y`.
    pub fn exp(&self) -> Self {
        assert!(self.0[0] == 0.0, "exp needs a zero constant term");
        let n = self.order();
        let mut y = vec![0.0; n];
        y[0] = 1.0;
        for m in 0..n - 1 {
            let acc: f64 = (0..=m).map(|k| (k + 1) as f64 * self.0[k + 1] * y[m - k]).sum();
            y[m + 1] = acc / (m + 1) as f64;
        }
        Series(y)
    }

    /// `s' / s`.
    pub fn logd(&self) -> Result<Self, SeriesError> {
        self.derivative().div(self)
    }

    /// Largest coefficient gap over the first `len` coefficients.
    pub fn max_diff(&self, other: &Self, len: usize) -> f64 {
        self.0.iter().zip(&other.0).take(len).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self, len: usize) -> f64 {
        self.0.iter().take(len).map(|a| a.abs()).fold(0.0, f64::max)
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        let n = self.order().min(o.order());
        let mut out = vec![0.0; n];
        for (i, a) in self.0.iter().enumerate().take(n) {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(n - i) {
                out[i + j] += a * b;
            }
        }
        Series(out)
    }
}

fn primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2u64;
    while out.len() < count {
        if out.iter().take_while(|p| *p * *p <= k).all(|p| !k.is_multiple_of(*p)) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Truncation order, numeric values for constant symbols and initial
/// values `b[i][j](0)` (default 1).
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesContext {
    order: usize,
    values: BTreeMap<ConstSymbol, f64>,
    initial: BTreeMap<(u32, u32), f64>,
}

impl SeriesContext {
    pub fn new(order: usize, values: BTreeMap<ConstSymbol, f64>) -> Result<Self, SeriesError> {
        if order < 2 {
            return Err(SeriesError::OrderTooSmall(order));
        }
        let mut by_level: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
        for (s, v) in &values {
            if s.is_eigenvalue() {
                by_level.entry(s.level()).or_default().push(*v);
            }
        }
        for (level, vs) in by_level {
            for (a, x) in vs.iter().enumerate() {
                if vs[a + 1..].contains(x) {
                    return Err(SeriesError::NotDistinct { level });
                }
            }
        }
        Ok(SeriesContext { order, values, initial: BTreeMap::new() })
    }

    /// `c[i][j] ↦ p_k`, the k-th prime in level-major order.
    pub fn with_defaults(spec: &TowerSpec, order: usize) -> Result<Self, SeriesError> {
        let syms = spec.symbols();
        let values = syms.iter().zip(primes(syms.len())).map(|(s, p)| (*s, p as f64)).collect();
        Self::new(order, values)
    }

    /// Assigns the listed values to `c[level][1..]`.
    pub fn with_level_values(order: usize, level: u32, values: &[f64]) -> Result<Self, SeriesError> {
        let map = values.iter().enumerate().map(|(j, v)| (ConstSymbol::c(level, j as u32 + 1), *v)).collect();
        Self::new(order, map)
    }

    pub fn with_initial(mut self, level: u32, index: u32, value: f64) -> Result<Self, SeriesError> {
        if value == 0.0 {
            return Err(SeriesError::ZeroInitialValue(format!("b[{level}][{index}]")));
        }
        self.initial.insert((level, index), value);
        Ok(self)
    }

    pub fn with_value(mut self, s: ConstSymbol, v: f64) -> Result<Self, SeriesError> {
        self.values.insert(s, v);
        Self::new(self.order, self.values).map(|c| SeriesContext { initial: self.initial, ..c })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &BTreeMap<ConstSymbol, f64> {
        &self.values
    }

    pub fn value(&self, s: ConstSymbol) -> Result<f64, SeriesError> {
        self.values.get(&s).copied().ok_or_else(|| SeriesError::MissingAssignment(format!("{s}")))
    }

    pub fn initial(&self, level: u32, index: u32) -> f64 {
        self.initial.get(&(level, index)).copied().unwrap_or(1.0)
    }
}

/// Series of every generator, level by level:
/// `b[i][j] = b[i][j](0) · exp(ĉ_ij ∫ ∏_{k<i} ê_k)`.
pub fn generator_series(spec: &TowerSpec, ctx: &SeriesContext) -> Result<BTreeMap<(u32, u32), Series>, SeriesError> {
    let n = ctx.order();
    let mut out = BTreeMap::new();
    let mut weight = Series::constant(1.0, n);
    for i in 1..=spec.ell() {
        let phase = weight.integral();
        let mut e = Series::zero(n);
        for j in 1..=spec.rank(i) {
            let c = ctx.value(ConstSymbol::c(i, j))?;
            let b = phase.scale(c).exp().scale(ctx.initial(i, j));
            e = &e + &b;
            out.insert((i, j), b);
        }
        weight = &weight * &e;
    }
    Ok(out)
}

fn rational_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

fn eval_poly(p: &Poly, gens: &BTreeMap<(u32, u32), Series>, ctx: &SeriesContext) -> Result<Series, SeriesError> {
    let n = ctx.order();
    let mut acc = Series::zero(n);
    for (m, q) in p.terms() {
        let mut coeff = rational_f64(q);
        let mut s = Series::constant(1.0, n);
        for (v, e) in m.factors() {
            match v.kind {
                VarKind::Generator => {
                    let g = gens.get(&(v.level, v.index)).ok_or_else(|| SeriesError::MissingAssignment(format!("{v}")))?;
                    s = &s * &g.pow(*e);
                }
                _ => {
                    let sym = ConstSymbol::from_var(*v).expect("constant symbol");
                    coeff *= powi(ctx.value(sym)?, *e);
                }
            }
        }
        acc = &acc + &s.scale(coeff);
    }
    Ok(acc)
}

fn powi(x: f64, e: u32) -> f64 {
    (0..e).fold(1.0, |a, _| a * x)
}

/// Interprets `x` as a series with `δ = d/dt`.
pub fn eval_series(x: &TowerElement, ctx: &SeriesContext, spec: &TowerSpec) -> Result<Series, SeriesError> {
    let gens = generator_series(spec, ctx)?;
    eval_with(x, &gens, ctx)
}

/// As [`eval_series`] with precomputed generator series.
pub fn eval_with(x: &TowerElement, gens: &BTreeMap<(u32, u32), Series>, ctx: &SeriesContext) -> Result<Series, SeriesError> {
    let r = x.as_ratfun();
    let num = eval_poly(r.numer(), gens, ctx)?;
    if r.denom().is_one() {
        return Ok(num);
    }
    let den = eval_poly(r.denom(), gens, ctx)?;
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_of_2t() {
        let spec = TowerSpec::new(vec![1]).unwrap();
        let ctx = SeriesContext::with_level_values(4, 1, &[2.0]).unwrap();
        let s = eval_series(&spec.generator(1, 1), &ctx, &spec).unwrap();
        let want = [1.0, 2.0, 2.0, 4.0 / 3.0];
        assert!(s.coeffs().iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-15));
        let l = s.logd().unwrap();
        assert!((l.coeffs()[0] - 2.0).abs() < 1e-15);
        // the top coefficient of a derivative is lost to truncation
        assert!(l.coeffs()[1..3].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn inverse_and_exp_agree() {
        let g = Series::t(10).scale(1.5);
        let a = g.exp();
        let b = g.scale(-1.0).exp();
        let one = &a * &b;
        assert!(one.max_diff(&Series::constant(1.0, 10), 10) < 1e-14);
        assert!(a.inverse().unwrap().max_diff(&b, 10) < 1e-14);
        assert_eq!(Series::zero(4).inverse(), Err(SeriesError::NonInvertibleSeries));
    }

    #[test]
    fn defaults_are_the_primes() {
        assert_eq!(primes(5), vec![2, 3, 5, 7, 11]);
        let spec = TowerSpec::new(vec![2, 1]).unwrap();
        let ctx = SeriesContext::with_defaults(&spec, 4).unwrap();
        assert_eq!(ctx.value(ConstSymbol::c(1, 2)), Ok(3.0));
        assert_eq!(ctx.value(ConstSymbol::c(2, 1)), Ok(5.0));
    }

    #[test]
    fn contexts_are_validated() {
        assert_eq!(SeriesContext::with_level_values(1, 1, &[2.0]), Err(SeriesError::OrderTooSmall(1)));
        assert_eq!(SeriesContext::with_level_values(4, 1, &[2.0, 2.0]), Err(SeriesError::NotDistinct { level: 1 }));
        let ctx = SeriesContext::with_level_values(4, 1, &[2.0]).unwrap();
        assert!(matches!(ctx.with_initial(1, 1, 0.0), Err(SeriesError::ZeroInitialValue(_))));
    }

    #[test]
    fn second_level_generator_follows_the_twist() {
        let spec = TowerSpec::new(vec![1, 1]).unwrap();
        let ctx = SeriesContext::with_defaults(&spec, 10).unwrap();
        let gens = generator_series(&spec, &ctx).unwrap();
        let b1 = &gens[&(1, 1)];
        let b2 = &gens[&(2, 1)];
        // δ b[2][1] = c[2][1] b[2][1] e_1
        let lhs = b2.derivative();
        let rhs = (b2 * b1).scale(ctx.value(ConstSymbol::c(2, 1)).unwrap());
        assert!(lhs.max_diff(&rhs, 9) < 1e-12);
    }
}
