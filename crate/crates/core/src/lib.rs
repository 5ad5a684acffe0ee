//! Exact differential algebra over towers of eigen-generators, linear
//! operators with constant eigenvalues, a term-minimization independence
//! prover, and a finite grid pregeometry with exhaustive verifiers.
//!
//! Field elements are reduced fractions of sparse polynomials over Q in the
//! eigenvalue symbols `c[i][j]`, free constants `u[i][j]` and generators
//! `b[i][j]`, so equality is structural.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod constants;
pub mod grid;
pub mod operators;
pub mod poly;
pub mod ratfun;
pub mod relations;
pub mod series;
pub mod text;
pub mod tower;

pub use constants::{arith, qlinear_dot, qlinear_independent, ArithOp, ConstError, ConstExpr, ConstSymbol};
pub use poly::{Monomial, Poly, Rational, Var, VarKind};
pub use ratfun::RatFun;
pub use text::ParseError;
pub use series::{eval_series, Series, SeriesContext, SeriesError};
pub use tower::{d_twist, derive, logd, logd_iter, TowerElement, TowerError, TowerSpec};
pub use operators::{
    build_e, decompose, expand, is_generic, logd_system, wronskian, EigenDecomposition, ExpandedOperator,
    FactoredOperator, LinearFactor, OperatorError, ProlongedSystem,
};
pub use relations::{
    certify_independence, invariant_monomial, reduce_step, series_rank_check, EigenVar, MonomialRelation,
    RankReport, ReductionStep, ReductionTrace, RelationError, Verdict,
};
