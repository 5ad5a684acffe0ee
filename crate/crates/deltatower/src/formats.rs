//! JSON artifacts: tower specs, prolonged systems, reduction traces and grid
//! scenarios. Struct field order fixes the key order, so serialized output
//! diffs cleanly between runs.

use std::collections::BTreeMap;

use deltatower_core::grid::{CellSet, GridModel};
use deltatower_core::relations::Exponent;
use deltatower_core::{ConstExpr, ConstSymbol, ReductionTrace, SeriesContext, TowerSpec, Verdict};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub ell: u32,
    pub ranks: Vec<u32>,
    /// Numeric values for eigenvalue symbols, e.g. `"c[1][2]": "3.5"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assignments: Option<BTreeMap<String, String>>,
}

impl SpecFile {
    pub fn from_spec(spec: &TowerSpec) -> Self {
        SpecFile { ell: spec.ell(), ranks: spec.ranks().to_vec(), assignments: None }
    }

    pub fn to_spec(&self) -> Result<TowerSpec, CliError> {
        if self.ranks.len() != self.ell as usize {
            return Err(CliError::Usage(format!("ell is {} but {} ranks are listed", self.ell, self.ranks.len())));
        }
        TowerSpec::new(self.ranks.clone()).map_err(CliError::usage)
    }

    /// Parsed assignments, each checked to name an eigenvalue of `spec`.
    pub fn values(&self, spec: &TowerSpec) -> Result<BTreeMap<ConstSymbol, f64>, CliError> {
        let mut out = BTreeMap::new();
        for (name, value) in self.assignments.iter().flatten() {
            let sym = parse_symbol(name)?;
            if !spec.symbols().contains(&sym) {
                return Err(CliError::Usage(format!("{name} is not an eigenvalue of this tower")));
            }
            let v: f64 = value.trim().parse().map_err(|_| CliError::Usage(format!("{name}: bad decimal {value:?}")))?;
            if !v.is_finite() {
                return Err(CliError::Usage(format!("{name}: value must be finite")));
            }
            out.insert(sym, v);
        }
        Ok(out)
    }

    /// Default values overridden by the assignments.
    pub fn series_context(&self, spec: &TowerSpec, order: usize) -> Result<SeriesContext, CliError> {
        let mut ctx = SeriesContext::with_defaults(spec, order).map_err(CliError::usage)?;
        for (s, v) in self.values(spec)? {
            ctx = ctx.with_value(s, v).map_err(CliError::usage)?;
        }
        Ok(ctx)
    }
}

fn parse_symbol(name: &str) -> Result<ConstSymbol, CliError> {
    let bad = || CliError::Usage(format!("{name:?} is not a symbol c[i][j]"));
    let e = ConstExpr::parse(name).map_err(|_| bad())?;
    match e.symbols().as_slice() {
        [s] if s.is_eigenvalue() && e == ConstExpr::symbol(*s) => Ok(*s),
        _ => Err(bad()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFile {
    pub n: usize,
    /// Element text; `"0"` for the pure chain.
    pub h: String,
    pub initial_values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FunctionalRecord {
    pub exponent: Exponent,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub pivot: Exponent,
    pub functionals: Vec<FunctionalRecord>,
    pub eliminated_term: String,
    pub remaining_support: Vec<Exponent>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum VerdictRecord {
    NoNontrivialRelation,
    InvariantMonomialFound(Vec<i64>),
    Degenerate,
}

impl From<&Verdict> for VerdictRecord {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::NoNontrivialRelation => VerdictRecord::NoNontrivialRelation,
            Verdict::InvariantMonomialFound(r) => VerdictRecord::InvariantMonomialFound(r.clone()),
            Verdict::Degenerate => VerdictRecord::Degenerate,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub level: u32,
    pub variables: Vec<String>,
    pub initial_support: Vec<Exponent>,
    pub steps: Vec<StepRecord>,
    pub verdict: VerdictRecord,
}

impl From<&ReductionTrace> for TraceFile {
    fn from(t: &ReductionTrace) -> Self {
        TraceFile {
            level: t.initial.level(),
            variables: t.initial.vars().iter().map(|v| v.element.to_string()).collect(),
            initial_support: t.initial.support(),
            steps: t
                .steps
                .iter()
                .map(|s| StepRecord {
                    pivot: s.pivot.clone(),
                    functionals: s
                        .functionals
                        .iter()
                        .map(|(r, v)| FunctionalRecord { exponent: r.clone(), value: v.to_string() })
                        .collect(),
                    eliminated_term: s.eliminated_term.to_string(),
                    remaining_support: s.remaining_support(),
                })
                .collect(),
            verdict: (&t.verdict).into(),
        }
    }
}

/// Cells are `[row, column]`, 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub depth: u32,
    pub columns: u32,
    pub base: Vec<[u32; 2]>,
    pub target: Vec<[u32; 2]>,
}

impl Scenario {
    /// Grid, base `T` and target `S`.
    pub fn load(&self, budget: u32) -> Result<(GridModel, CellSet, CellSet), CliError> {
        let g = GridModel::new(self.depth, self.columns).map_err(CliError::usage)?.with_budget(budget);
        let cells = |v: &[[u32; 2]]| {
            let pairs: Vec<(u32, u32)> = v.iter().map(|&[i, j]| (i, j)).collect();
            g.set(&pairs).map_err(CliError::usage)
        };
        Ok((g, cells(&self.base)?, cells(&self.target)?))
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{path}: {e}")))
}

pub fn write_json<T: Serialize>(path: &str, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.into(), source })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_file_round_trips() {
        let text = r#"{"ell":2,"ranks":[2,1],"assignments":{"c[1][2]":"7.5"}}"#;
        let f: SpecFile = serde_json::from_str(text).unwrap();
        let spec = f.to_spec().unwrap();
        assert_eq!(spec.ranks(), &[2, 1]);
        assert_eq!(serde_json::to_string(&f).unwrap(), text);
        let ctx = f.series_context(&spec, 4).unwrap();
        assert_eq!(ctx.value(ConstSymbol::c(1, 2)).unwrap(), 7.5);
        assert_eq!(ctx.value(ConstSymbol::c(1, 1)).unwrap(), 2.0);
    }

    #[test]
    fn bad_spec_files_are_rejected() {
        let bad = |t: &str| {
            let f: SpecFile = serde_json::from_str(t).unwrap();
            let spec = f.to_spec()?;
            f.values(&spec).map(|_| ())
        };
        assert!(bad(r#"{"ell":1,"ranks":[2,1]}"#).is_err());
        assert!(bad(r#"{"ell":1,"ranks":[0]}"#).is_err());
        assert!(bad(r#"{"ell":1,"ranks":[1],"assignments":{"c[2][1]":"1"}}"#).is_err());
        assert!(bad(r#"{"ell":1,"ranks":[1],"assignments":{"u[1][1]":"1"}}"#).is_err());
        assert!(bad(r#"{"ell":1,"ranks":[1],"assignments":{"c[1][1]":"x"}}"#).is_err());
        assert!(serde_json::from_str::<SpecFile>(r#"{"ell":1,"ranks":[1],"extra":0}"#).is_err());
    }

    #[test]
    fn scenario_loads_cells() {
        let s: Scenario = serde_json::from_str(r#"{"depth":2,"columns":2,"base":[],"target":[[2,1],[1,2]]}"#).unwrap();
        let (g, t, target) = s.load(12).unwrap();
        assert!(t.is_empty());
        assert_eq!(g.cells_of(target), vec![(2, 1), (1, 2)]);
        let out: Scenario = serde_json::from_str(r#"{"depth":2,"columns":2,"base":[[3,1]],"target":[]}"#).unwrap();
        assert!(out.load(12).is_err());
    }
}
