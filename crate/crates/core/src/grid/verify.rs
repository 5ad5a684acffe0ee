//! Exhaustive checks of the grid pregeometry over every grid shape up to a
//! cell count.
//!
//! Everything except closure itself depends on sets only through their
//! closures, so instances range over closed sets; an analysis problem is a
//! pair of closed sets `T ⊆ U` (base and `cl(S ∪ T)`).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::*;

/// Outcome of one property over all instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyReport {
    pub name: &'static str,
    /// Largest grid (in cells) actually enumerated.
    pub max_cells: u32,
    pub instances: u64,
    pub counterexample: Option<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Per-property cell ceilings. Enumeration over closed triples or over all
/// analyses grows too fast past 9 cells.
pub const PROPERTIES: [(&str, u32); 10] = [
    ("closure_axioms", 12),
    ("urank_additivity", 9),
    ("reduction_maximality", 9),
    ("coreduction_uniqueness", 9),
    ("analyses_minimal", 9),
    ("equal_utype_canonical", 9),
    ("incompressible_unit_minimal", 9),
    ("local_criterion_reductions", 9),
    ("local_criterion_coreductions", 9),
    ("column_length", 12),
];

/// Every shape `depth × columns` with at most `max_cells` cells.
pub fn shapes(max_cells: u32) -> Vec<GridModel> {
    let mut out = Vec::new();
    for depth in 1..=max_cells.min(64) {
        for columns in 1..=max_cells / depth {
            out.push(GridModel::new(depth, columns).expect("within 64 cells").with_budget(max_cells));
        }
    }
    out
}

/// Closed pairs `T ⊆ U`.
pub fn closed_pairs(g: &GridModel) -> Vec<(CellSet, CellSet)> {
    let all = g.closed_sets();
    let mut out = Vec::new();
    for &u in &all {
        for &t in &all {
            if t.is_subset(u) {
                out.push((t, u));
            }
        }
    }
    out
}

struct Tally {
    name: &'static str,
    max_cells: u32,
    instances: u64,
    counterexample: Option<String>,
}

impl Tally {
    fn new(name: &'static str, max_cells: u32) -> Self {
        Tally { name, max_cells, instances: 0, counterexample: None }
    }

    fn done(&self) -> bool {
        self.counterexample.is_some()
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(describe());
        }
    }

    fn finish(self) -> PropertyReport {
        PropertyReport {
            name: self.name,
            max_cells: self.max_cells,
            instances: self.instances,
            counterexample: self.counterexample,
        }
    }
}

fn shape(g: &GridModel) -> String {
    format!("grid {}x{}", g.depth(), g.columns())
}

fn pair(g: &GridModel, t: CellSet, u: CellSet) -> String {
    format!("{} T={} S={}", shape(g), g.format(t), g.format(u))
}

/// Extensive, monotone, idempotent, and equal to its defining formula.
pub fn verify_closure_axioms(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("closure_axioms", max_cells);
    for g in shapes(max_cells) {
        let full = g.all().0;
        for s in 0..=full {
            let s = CellSet(s);
            let c = closure(s, &g);
            let cells = g.cells_of(s);
            let by_definition = g
                .set(
                    &(1..=g.columns())
                        .flat_map(|j| (1..=g.depth()).map(move |k| (k, j)))
                        .filter(|&(k, j)| cells.iter().any(|&(i, jj)| jj == j && i >= k))
                        .collect::<Vec<_>>(),
                )
                .expect("in bounds");
            tally.check(s.is_subset(c) && closure(c, &g) == c && c == by_definition, || {
                format!("{} S={}", shape(&g), g.format(s))
            });
            // monotone over every subset of s
            let mut sub = s.0;
            loop {
                let sc = closure(CellSet(sub), &g);
                tally.check(sc.is_subset(c), || format!("{} {} ⊆ {}", shape(&g), g.format(CellSet(sub)), g.format(s)));
                if sub == 0 || tally.done() {
                    break;
                }
                sub = (sub - 1) & s.0;
            }
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// `U(A∪B / T) = U(A / T∪B) + U(B / T)` over closed triples.
pub fn verify_urank_additivity(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("urank_additivity", max_cells);
    for g in shapes(max_cells) {
        let closed = g.closed_sets();
        for &t in &closed {
            for &a in &closed {
                for &b in &closed {
                    let lhs = urank(a.union(b), t, &g);
                    let rhs = urank(a, t.union(b), &g) + urank(b, t, &g);
                    tally.check(lhs == rhs, || {
                        format!("{} A={} B={} T={}", shape(&g), g.format(a), g.format(b), g.format(t))
                    });
                }
            }
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// The reduction is internal, is cell-wise the set of internal cells, and
/// contains every internal closed subset of `cl(S ∪ T)`.
pub fn verify_reduction_maximality(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("reduction_maximality", max_cells);
    for g in shapes(max_cells) {
        for (t, u) in closed_pairs(&g) {
            let r = reduction(u, t, &g);
            let cellwise = g
                .cells_of(u)
                .into_iter()
                .filter(|&(i, j)| internal(g.cell(i, j).expect("in bounds"), t, &g))
                .fold(CellSet::EMPTY, |acc, (i, j)| acc.union(g.cell(i, j).expect("in bounds")));
            let mut ok = g.is_closed(r) && r.is_subset(u) && internal(r, t, &g) && r == cellwise;
            let mut greatest = true;
            for x in g.closed_between(CellSet::EMPTY, u) {
                if internal(x, t, &g) && !x.is_subset(r) {
                    greatest = false;
                    break;
                }
            }
            ok &= greatest;
            tally.check(ok, || pair(&g, t, u));
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// Exactly one minimal coreduction witness, equal to the intersection of
/// all witnesses.
pub fn verify_coreduction_uniqueness(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("coreduction_uniqueness", max_cells);
    for g in shapes(max_cells) {
        for (t, u) in closed_pairs(&g) {
            let minimal = coreduction_witnesses(u, t, &g);
            let meet = g
                .closed_between(CellSet::EMPTY, u)
                .into_iter()
                .filter(|&w| internal(u, t.union(w), &g))
                .fold(u, |acc, w| acc.intersection(w));
            let ok = minimal.len() == 1 && minimal[0] == meet && coreduction(u, t, &g) == meet;
            tally.check(ok, || format!("{}: {} minimal witnesses", pair(&g, t, u), minimal.len()));
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// Analyses by reductions and by coreductions have the shortest length.
pub fn verify_analyses_minimal(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("analyses_minimal", max_cells);
    for g in shapes(max_cells) {
        for (t, u) in closed_pairs(&g) {
            let min = AnalysisDag::build(u, t, &g).expect("within budget").min_length();
            let red = analysis_by_reductions(u, t, &g);
            let cor = analysis_by_coreductions(u, t, &g);
            tally.check(red.len() == min && cor.len() == min, || {
                format!("{}: lengths {} and {}, shortest {}", pair(&g, t, u), red.len(), cor.len(), min)
            });
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// Equal U-types of the two analyses force a unique minimal analysis.
pub fn verify_equal_utype_canonical(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("equal_utype_canonical", max_cells);
    for g in shapes(max_cells) {
        for (t, u) in closed_pairs(&g) {
            let red = analysis_by_reductions(u, t, &g);
            let cor = analysis_by_coreductions(u, t, &g);
            if red.u_type(&g) != cor.u_type(&g) {
                continue;
            }
            let dag = AnalysisDag::build(u, t, &g).expect("within budget");
            let unique = dag.shortest_layers().iter().all(|l| l.len() == 1);
            let ok = unique
                && red.interalgebraic(&cor, &g)
                && is_canonical(&red, &g).expect("within budget")
                && is_canonical(&cor, &g).expect("within budget");
            tally.check(ok, || pair(&g, t, u));
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// Every incompressible analysis of U-type `(1, …, 1)` is minimal.
pub fn verify_incompressible_unit_minimal(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("incompressible_unit_minimal", max_cells);
    for g in shapes(max_cells) {
        for (t, u) in closed_pairs(&g) {
            let dag = AnalysisDag::build(u, t, &g).expect("within budget");
            let min = dag.min_length();
            let gg = g;
            let mut keep = |p: &[CellSet]| {
                let k = p.len() - 1;
                p[k].len() == p[k - 1].len() + 1 && (k < 2 || !internal(p[k], p[k - 2], &gg))
            };
            let mut found = Vec::new();
            dag.for_each_path(&mut keep, &mut |p| found.push(p.len() - 1));
            for len in found {
                tally.check(len == min, || format!("{}: length {len}, shortest {min}", pair(&g, t, u)));
            }
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

fn local_criterion(
    name: &'static str,
    max_cells: u32,
    analysis: fn(CellSet, CellSet, &GridModel) -> Analysis,
    middle: fn(CellSet, CellSet, CellSet, &GridModel) -> CellSet,
) -> PropertyReport {
    let mut tally = Tally::new(name, max_cells);
    for g in shapes(max_cells) {
        for (t, u) in closed_pairs(&g) {
            let expected = analysis(u, t, &g).closures(&g);
            let holds = |p: &[CellSet], k: usize| p[k - 1] == middle(p[k - 2], p[k], t, &g);
            let forward = (2..expected.len()).all(|k| holds(&expected, k));
            tally.check(forward, || format!("{}: computed analysis fails the local test", pair(&g, t, u)));
            let dag = AnalysisDag::build(u, t, &g).expect("within budget");
            let mut keep = |p: &[CellSet]| p.len() < 3 || holds(p, p.len() - 1);
            let mut found = Vec::new();
            dag.for_each_path(&mut keep, &mut |p| found.push(p.to_vec()));
            for p in found {
                tally.check(p == expected, || {
                    let steps: Vec<String> = p.iter().map(|x| g.format(*x)).collect();
                    format!("{}: local chain {}", pair(&g, t, u), steps.join(" < "))
                });
            }
            if tally.done() {
                return tally.finish();
            }
        }
    }
    tally.finish()
}

/// An analysis is the reduction analysis iff each step is the reduction
/// of the next over the previous.
pub fn verify_local_criterion_reductions(max_cells: u32) -> PropertyReport {
    local_criterion("local_criterion_reductions", max_cells, analysis_by_reductions, |prev, next, _t, g| {
        reduction(next, prev, g)
    })
}

/// Dually: each step is the closure of the previous one and the
/// coreduction of the next over it.
pub fn verify_local_criterion_coreductions(max_cells: u32) -> PropertyReport {
    local_criterion("local_criterion_coreductions", max_cells, analysis_by_coreductions, |prev, next, _t, g| {
        closure(prev.union(coreduction(next, prev, g)), g)
    })
}

/// A single column of depth `n` needs exactly `n` steps.
pub fn verify_column_length(max_cells: u32) -> PropertyReport {
    let mut tally = Tally::new("column_length", max_cells);
    for n in 1..=max_cells.min(64) {
        let g = GridModel::new(n, 1).expect("single column").with_budget(max_cells);
        let top = g.cell(n, 1).expect("in bounds");
        let min = min_analysis_length(top, CellSet::EMPTY, &g).expect("within budget");
        tally.check(min == n as usize, || format!("depth {n}: shortest analysis has length {min}"));
    }
    tally.finish()
}

pub fn verify_property(name: &str, max_cells: u32) -> Option<PropertyReport> {
    let ceiling = PROPERTIES.iter().find(|(n, _)| *n == name)?.1;
    let cells = max_cells.min(ceiling);
    Some(match name {
        "closure_axioms" => verify_closure_axioms(cells),
        "urank_additivity" => verify_urank_additivity(cells),
        "reduction_maximality" => verify_reduction_maximality(cells),
        "coreduction_uniqueness" => verify_coreduction_uniqueness(cells),
        "analyses_minimal" => verify_analyses_minimal(cells),
        "equal_utype_canonical" => verify_equal_utype_canonical(cells),
        "incompressible_unit_minimal" => verify_incompressible_unit_minimal(cells),
        "local_criterion_reductions" => verify_local_criterion_reductions(cells),
        "local_criterion_coreductions" => verify_local_criterion_coreductions(cells),
        "column_length" => verify_column_length(cells),
        _ => return None,
    })
}

/// Runs every property, each up to `min(max_cells, its ceiling)`.
/// Refuses `max_cells` above `budget`.
pub fn verify_all(max_cells: u32, budget: u32) -> Result<Vec<PropertyReport>, GridError> {
    if max_cells > budget {
        return Err(GridError::BudgetExceeded { cells: max_cells, budget });
    }
    Ok(PROPERTIES.iter().map(|(name, _)| verify_property(name, max_cells).expect("known property")).collect())
}
