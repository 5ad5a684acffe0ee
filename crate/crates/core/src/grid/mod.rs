//! A finite pregeometry on a grid of cells `(i, j)`: row `i` counted from the
//! base, column `j` an independent copy. Closure is downward within a
//! column, rank is the number of new cells, and an extension is internal
//! when it climbs at most one row per column.
//!
//! Cell sets are bitmasks with cell `(i, j)` at bit `(j-1)·depth + (i-1)`.
//! A closed set is determined by its column heights.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use thiserror::Error;

pub mod verify;

pub const DEFAULT_CELL_BUDGET: u32 = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("grid needs positive depth and columns with at most 64 cells, got {depth}x{columns}")]
    InvalidShape { depth: u32, columns: u32 },
    #[error("cell ({0},{1}) is outside the grid")]
    OutOfBounds(u32, u32),
    #[error("{cells} cells exceed the budget of {budget}")]
    BudgetExceeded { cells: u32, budget: u32 },
    #[error("sequence is not {0}")]
    NotMonotone(&'static str),
    #[error("sequence must be nonempty with positive entries")]
    InvalidSequence,
    #[error("invalid analysis: {0}")]
    InvalidAnalysis(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellSet(pub u64);

impl CellSet {
    pub const EMPTY: CellSet = CellSet(0);

    pub fn union(self, o: CellSet) -> CellSet {
        CellSet(self.0 | o.0)
    }

    pub fn intersection(self, o: CellSet) -> CellSet {
        CellSet(self.0 & o.0)
    }

    pub fn difference(self, o: CellSet) -> CellSet {
        CellSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: CellSet) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GridModel {
    depth: u32,
    columns: u32,
    budget: u32,
    full: u64,
    column: u64,
    row1: u64,
    // `fill[k]` keeps rows that stay in their column under a shift by `2^k`.
    fill: [u64; 6],
}

impl GridModel {
    pub fn new(depth: u32, columns: u32) -> Result<Self, GridError> {
        if depth == 0 || columns == 0 || depth.saturating_mul(columns) > 64 {
            return Err(GridError::InvalidShape { depth, columns });
        }
        let cells = depth * columns;
        let full = if cells == 64 { u64::MAX } else { (1u64 << cells) - 1 };
        let column = if depth == 64 { u64::MAX } else { (1u64 << depth) - 1 };
        let row1 = (0..columns).fold(0u64, |acc, j| acc | 1u64 << (j * depth));
        let mut fill = [0u64; 6];
        for (k, f) in fill.iter_mut().enumerate() {
            let shift = 1u32 << k;
            if shift < depth {
                let rows = (1u64 << (depth - shift)) - 1;
                *f = (0..columns).fold(0u64, |acc, j| acc | rows << (j * depth));
            }
        }
        Ok(GridModel { depth, columns, budget: DEFAULT_CELL_BUDGET, full, column, row1, fill })
    }

    /// Ceiling on cells for exhaustive operations.
    pub fn with_budget(mut self, budget: u32) -> Self {
        self.budget = budget;
        self
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn columns(&self) -> u32 {
        self.columns
    }

    pub fn cells(&self) -> u32 {
        self.depth * self.columns
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn check_budget(&self) -> Result<(), GridError> {
        if self.cells() > self.budget {
            return Err(GridError::BudgetExceeded { cells: self.cells(), budget: self.budget });
        }
        Ok(())
    }

    pub fn all(&self) -> CellSet {
        CellSet(self.full)
    }

    pub fn cell(&self, i: u32, j: u32) -> Result<CellSet, GridError> {
        if i == 0 || j == 0 || i > self.depth || j > self.columns {
            return Err(GridError::OutOfBounds(i, j));
        }
        Ok(CellSet(1u64 << ((j - 1) * self.depth + (i - 1))))
    }

    pub fn set(&self, cells: &[(u32, u32)]) -> Result<CellSet, GridError> {
        cells.iter().try_fold(CellSet::EMPTY, |acc, &(i, j)| Ok(acc.union(self.cell(i, j)?)))
    }

    /// Cells in column-major order.
    pub fn cells_of(&self, s: CellSet) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for j in 1..=self.columns {
            for i in 1..=self.depth {
                if s.0 >> ((j - 1) * self.depth + (i - 1)) & 1 == 1 {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn format(&self, s: CellSet) -> String {
        let mut out = String::from("{");
        for (k, (i, j)) in self.cells_of(s).into_iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            let _ = write!(out, "({i},{j})");
        }
        out.push('}');
        out
    }

    fn column_bits(&self, s: u64, j: u32) -> u64 {
        (s >> (j * self.depth)) & self.column
    }

    /// Highest occupied row per column.
    pub fn heights(&self, s: CellSet) -> Vec<u32> {
        (0..self.columns).map(|j| 64 - self.column_bits(s.0, j).leading_zeros()).collect()
    }

    pub fn from_heights(&self, h: &[u32]) -> CellSet {
        let mut out = 0u64;
        for (j, &hj) in h.iter().enumerate() {
            let hj = hj.min(self.depth);
            let bits = if hj == 64 { u64::MAX } else { (1u64 << hj) - 1 };
            out |= bits << (j as u32 * self.depth);
        }
        CellSet(out)
    }

    /// Fills every column downward from its highest cell.
    pub fn closure(&self, s: CellSet) -> CellSet {
        let mut x = s.0 & self.full;
        for (k, &f) in self.fill.iter().enumerate() {
            if f == 0 {
                break;
            }
            x |= (x >> (1u32 << k)) & f;
        }
        CellSet(x)
    }

    /// Highest cell of each nonempty column of a closed set.
    fn tops(&self, w: u64) -> u64 {
        w & !((w >> 1) & self.fill[0])
    }

    pub fn is_closed(&self, s: CellSet) -> bool {
        self.closure(s) == s
    }

    /// Cells internal over the closed set `t`: `t`, the first row, and the
    /// cell directly above each column of `t`.
    fn allowed(&self, t: u64) -> u64 {
        t | self.row1 | ((t << 1) & !self.row1 & self.full)
    }

    /// Every closed set, by column heights in odometer order.
    pub fn closed_sets(&self) -> Vec<CellSet> {
        self.closed_between(CellSet::EMPTY, self.all())
    }

    /// Closed sets `X` with `cl(lo) ⊆ X ⊆ cl(hi)`.
    pub fn closed_between(&self, lo: CellSet, hi: CellSet) -> Vec<CellSet> {
        let lo = self.heights(self.closure(lo));
        let hi = self.heights(self.closure(hi));
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return Vec::new();
        }
        let mut h = lo.clone();
        let mut out = Vec::new();
        loop {
            out.push(self.from_heights(&h));
            let mut j = 0;
            loop {
                if j == h.len() {
                    return out;
                }
                if h[j] < hi[j] {
                    h[j] += 1;
                    break;
                }
                h[j] = lo[j];
                j += 1;
            }
        }
    }
}

pub fn closure(s: CellSet, g: &GridModel) -> CellSet {
    g.closure(s)
}

/// `|cl(S ∪ T)| - |cl(T)|`.
pub fn urank(s: CellSet, t: CellSet, g: &GridModel) -> u32 {
    g.closure(s.union(t)).len() - g.closure(t).len()
}

/// Every new cell of `cl(S ∪ T)` over `cl(T)` sits in row 1 or directly
/// above `cl(T)`.
pub fn internal(s: CellSet, t: CellSet, g: &GridModel) -> bool {
    let ct = g.closure(t).0;
    g.closure(s.union(t)).0 & !g.allowed(ct) == 0
}

/// All cells of `cl(S ∪ T)` that are internal over `T`; closed.
pub fn reduction(s: CellSet, t: CellSet, g: &GridModel) -> CellSet {
    let ct = g.closure(t).0;
    CellSet(g.closure(s.union(t)).0 & g.allowed(ct))
}

/// Closed `W ⊆ cl(S ∪ T)` over which `S` becomes internal, minimal under
/// inclusion. Witnesses are upward closed, so `W` is minimal iff lowering
/// any one column breaks it.
pub fn coreduction_witnesses(s: CellSet, t: CellSet, g: &GridModel) -> Vec<CellSet> {
    let u = g.closure(s.union(t));
    let is_witness = |w: u64| internal(s, t.union(CellSet(w)), g);
    let mut out = Vec::new();
    for w in g.closed_between(CellSet::EMPTY, u) {
        if !is_witness(w.0) {
            continue;
        }
        let mut tops = g.tops(w.0);
        let mut minimal = true;
        while tops != 0 {
            let top = tops & tops.wrapping_neg();
            tops ^= top;
            if is_witness(w.0 ^ top) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.push(w);
        }
    }
    out
}

/// The least minimal witness (by size, then bits).
pub fn coreduction(s: CellSet, t: CellSet, g: &GridModel) -> CellSet {
    coreduction_witnesses(s, t, g)
        .into_iter()
        .min_by_key(|w| (w.len(), w.0))
        .expect("cl(S ∪ T) is always a witness")
}

/// Base `T`, target `S` and steps `A_1..A_k` with strictly increasing
/// closures over `T`, each internal over the previous one, ending at
/// `cl(T ∪ S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    base: CellSet,
    target: CellSet,
    steps: Vec<CellSet>,
}

impl Analysis {
    pub fn new(g: &GridModel, base: CellSet, target: CellSet, steps: Vec<CellSet>) -> Result<Self, GridError> {
        let all = g.all();
        for s in steps.iter().chain([&base, &target]) {
            if !s.is_subset(all) {
                return Err(GridError::InvalidAnalysis("cells outside the grid".into()));
            }
        }
        let mut prev_step = CellSet::EMPTY;
        let mut prev = g.closure(base);
        for (k, a) in steps.iter().enumerate() {
            let cur = g.closure(base.union(*a));
            if !(prev.is_subset(cur) && prev != cur) {
                return Err(GridError::InvalidAnalysis(format!("step {} does not enlarge the closure", k + 1)));
            }
            if !internal(*a, base.union(prev_step), g) {
                return Err(GridError::InvalidAnalysis(format!("step {} is not internal over step {}", k + 1, k)));
            }
            prev = cur;
            prev_step = *a;
        }
        if prev != g.closure(base.union(target)) {
            return Err(GridError::InvalidAnalysis("last step does not reach the target".into()));
        }
        Ok(Analysis { base, target, steps })
    }

    pub fn base(&self) -> CellSet {
        self.base
    }

    pub fn target(&self) -> CellSet {
        self.target
    }

    pub fn steps(&self) -> &[CellSet] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `cl(T ∪ A_i)` for `i = 0..=k`, with `A_0 = ∅`.
    pub fn closures(&self, g: &GridModel) -> Vec<CellSet> {
        let mut out = vec![g.closure(self.base)];
        out.extend(self.steps.iter().map(|a| g.closure(self.base.union(*a))));
        out
    }

    pub fn u_type(&self, g: &GridModel) -> Vec<u32> {
        self.closures(g).windows(2).map(|w| w[1].len() - w[0].len()).collect()
    }

    /// Stepwise equal closures over the base.
    pub fn interalgebraic(&self, other: &Analysis, g: &GridModel) -> bool {
        self.closures(g) == other.closures(g)
    }
}

pub fn analysis_by_reductions(s: CellSet, t: CellSet, g: &GridModel) -> Analysis {
    let goal = g.closure(s.union(t));
    let mut steps = Vec::new();
    let mut cur = g.closure(t);
    while cur != goal {
        let next = reduction(s, cur, g);
        debug_assert!(cur.is_subset(next) && cur != next);
        steps.push(if next == goal { s } else { next });
        cur = next;
    }
    Analysis::new(g, t, s, steps).expect("reductions form an analysis")
}

pub fn analysis_by_coreductions(s: CellSet, t: CellSet, g: &GridModel) -> Analysis {
    let base = g.closure(t);
    let mut steps = Vec::new();
    let mut cur = s;
    while !g.closure(cur.union(t)).is_subset(base) {
        steps.push(cur);
        cur = coreduction(cur, t, g);
    }
    steps.reverse();
    Analysis::new(g, t, s, steps).expect("coreductions form an analysis")
}

/// No step merges with its successor into one internal step.
pub fn is_incompressible(a: &Analysis, g: &GridModel) -> bool {
    let x = a.closures(g);
    (1..a.len()).all(|i| !internal(x[i + 1], x[i - 1], g))
}

/// Closed sets between `cl(T)` and `cl(S ∪ T)` with an edge `X → Y` when
/// `X ⊊ Y` and `Y` is internal over `X`. Analyses up to closure are
/// exactly its paths.
#[derive(Clone, Debug)]
pub struct AnalysisDag {
    nodes: Vec<CellSet>,
    succ: Vec<Vec<usize>>,
    start: usize,
    goal: usize,
}

impl AnalysisDag {
    pub fn build(s: CellSet, t: CellSet, g: &GridModel) -> Result<Self, GridError> {
        g.check_budget()?;
        let lo = g.closure(t);
        let hi = g.closure(s.union(t));
        let nodes = g.closed_between(lo, hi);
        let index: BTreeMap<u64, usize> = nodes.iter().enumerate().map(|(k, x)| (x.0, k)).collect();
        let succ = nodes
            .iter()
            .map(|x| {
                let free = hi.0 & g.allowed(x.0) & !x.0;
                let mut out = Vec::new();
                let mut sub = free;
                while sub != 0 {
                    out.push(index[&(x.0 | sub)]);
                    sub = (sub - 1) & free;
                }
                out
            })
            .collect();
        Ok(AnalysisDag { start: index[&lo.0], goal: index[&hi.0], nodes, succ })
    }

    pub fn nodes(&self) -> &[CellSet] {
        &self.nodes
    }

    fn bfs(&self, from: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.nodes.len()];
        dist[from] = Some(0);
        let mut frontier = vec![from];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for &x in &frontier {
                for &y in &adj[x] {
                    if dist[y].is_none() {
                        dist[y] = Some(d);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        dist
    }

    pub fn min_length(&self) -> usize {
        self.bfs(self.start, &self.succ)[self.goal].expect("goal reachable")
    }

    /// Nodes on some shortest path, grouped by distance from the start.
    pub fn shortest_layers(&self) -> Vec<Vec<CellSet>> {
        let mut pred = vec![Vec::new(); self.nodes.len()];
        for (x, ys) in self.succ.iter().enumerate() {
            for &y in ys {
                pred[y].push(x);
            }
        }
        let df = self.bfs(self.start, &self.succ);
        let db = self.bfs(self.goal, &pred);
        let len = df[self.goal].expect("goal reachable");
        let mut layers = vec![Vec::new(); len + 1];
        for k in 0..self.nodes.len() {
            if let (Some(a), Some(b)) = (df[k], db[k]) {
                if a + b == len {
                    layers[a].push(self.nodes[k]);
                }
            }
        }
        layers
    }

    /// Calls `visit` with every start-to-goal path whose prefixes pass
    /// `keep`; `keep` sees the path so far, newest node last.
    pub fn for_each_path(&self, keep: &mut dyn FnMut(&[CellSet]) -> bool, visit: &mut dyn FnMut(&[CellSet])) {
        let mut path = vec![self.nodes[self.start]];
        self.dfs(self.start, &mut path, keep, visit);
    }

    fn dfs(
        &self,
        x: usize,
        path: &mut Vec<CellSet>,
        keep: &mut dyn FnMut(&[CellSet]) -> bool,
        visit: &mut dyn FnMut(&[CellSet]),
    ) {
        if x == self.goal {
            visit(path);
            return;
        }
        for &y in &self.succ[x] {
            path.push(self.nodes[y]);
            if keep(path) {
                self.dfs(y, path, keep, visit);
            }
            path.pop();
        }
    }
}

pub fn min_analysis_length(s: CellSet, t: CellSet, g: &GridModel) -> Result<usize, GridError> {
    Ok(AnalysisDag::build(s, t, g)?.min_length())
}

/// No analysis of the same target over the same base is shorter.
pub fn is_minimal(a: &Analysis, g: &GridModel) -> Result<bool, GridError> {
    Ok(a.len() == min_analysis_length(a.target, a.base, g)?)
}

/// Minimal, and every minimal analysis has the same closures step by step.
pub fn is_canonical(a: &Analysis, g: &GridModel) -> Result<bool, GridError> {
    let dag = AnalysisDag::build(a.target, a.base, g)?;
    if a.len() != dag.min_length() {
        return Ok(false);
    }
    Ok(dag.shortest_layers().iter().all(|l| l.len() == 1))
}

fn check_sequence(s: &[u32]) -> Result<(), GridError> {
    if s.is_empty() || s.contains(&0) {
        return Err(GridError::InvalidSequence);
    }
    Ok(())
}

/// Staircase `{(i, j) : j ≤ s_i}` on an `n × s_1` grid.
pub fn build_seqred_a(s: &[u32]) -> Result<(GridModel, CellSet), GridError> {
    check_sequence(s)?;
    if s.windows(2).any(|w| w[0] < w[1]) {
        return Err(GridError::NotMonotone("nonincreasing"));
    }
    let g = GridModel::new(s.len() as u32, s[0])?;
    let cells: Vec<(u32, u32)> =
        s.iter().enumerate().flat_map(|(i, &si)| (1..=si).map(move |j| (i as u32 + 1, j))).collect();
    Ok((g, g.set(&cells)?))
}

/// Cells `(n + 1 - f(j), j)` with `f(j) = min{k : j ≤ s_k}` on an
/// `n × s_n` grid.
pub fn build_seqred_b(s: &[u32]) -> Result<(GridModel, CellSet), GridError> {
    check_sequence(s)?;
    if s.windows(2).any(|w| w[0] > w[1]) {
        return Err(GridError::NotMonotone("nondecreasing"));
    }
    let n = s.len() as u32;
    let g = GridModel::new(n, s[s.len() - 1])?;
    let cells: Vec<(u32, u32)> = (1..=g.columns())
        .map(|j| {
            let f = s.iter().position(|&sk| j <= sk).expect("j ≤ s_n") as u32 + 1;
            (n + 1 - f, j)
        })
        .collect();
    Ok((g, g.set(&cells)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: u32, m: u32) -> GridModel {
        GridModel::new(n, m).unwrap()
    }

    #[test]
    fn closure_examples() {
        let g = g(3, 2);
        let s = g.set(&[(3, 1)]).unwrap();
        assert_eq!(closure(s, &g), g.set(&[(1, 1), (2, 1), (3, 1)]).unwrap());
        assert_eq!(closure(CellSet::EMPTY, &g), CellSet::EMPTY);
        let s = g.set(&[(2, 1), (1, 2)]).unwrap();
        assert_eq!(closure(s, &g), g.set(&[(1, 1), (2, 1), (1, 2)]).unwrap());
        assert_eq!(g.heights(closure(s, &g)), vec![2, 1]);
        assert_eq!(g.closed_sets().len(), 16);
        assert!(g.cell(4, 1).is_err());
    }

    #[test]
    fn rank_and_internality() {
        let g = g(4, 2);
        let col = g.set(&[(4, 1)]).unwrap();
        assert_eq!(urank(col, CellSet::EMPTY, &g), 4);
        assert_eq!(urank(col, col, &g), 0);
        assert!(internal(g.set(&[(1, 2)]).unwrap(), CellSet::EMPTY, &g));
        assert!(!internal(g.set(&[(2, 1)]).unwrap(), CellSet::EMPTY, &g));
        assert!(internal(g.set(&[(3, 1)]).unwrap(), g.set(&[(2, 1)]).unwrap(), &g));
    }

    #[test]
    fn reduction_and_coreduction_examples() {
        let g = g(3, 2);
        let s = g.set(&[(2, 1), (1, 2)]).unwrap();
        assert_eq!(reduction(s, CellSet::EMPTY, &g), g.set(&[(1, 1), (1, 2)]).unwrap());
        assert_eq!(reduction(g.set(&[(3, 1)]).unwrap(), CellSet::EMPTY, &g), g.set(&[(1, 1)]).unwrap());
        assert_eq!(coreduction(s, CellSet::EMPTY, &g), g.set(&[(1, 1)]).unwrap());
        for i in 1..=3 {
            let c = coreduction(g.set(&[(i, 1)]).unwrap(), CellSet::EMPTY, &g);
            assert_eq!(g.heights(c), vec![i - 1, 0]);
        }
        let t = g.set(&[(1, 1)]).unwrap();
        assert_eq!(coreduction(g.set(&[(2, 1)]).unwrap(), t, &g), CellSet::EMPTY);
    }

    #[test]
    fn the_two_analyses_of_the_example_differ() {
        let g = g(2, 2);
        let s = g.set(&[(2, 1), (1, 2)]).unwrap();
        let red = analysis_by_reductions(s, CellSet::EMPTY, &g);
        let cor = analysis_by_coreductions(s, CellSet::EMPTY, &g);
        assert_eq!(red.steps(), &[g.set(&[(1, 1), (1, 2)]).unwrap(), s]);
        assert_eq!(cor.steps(), &[g.set(&[(1, 1)]).unwrap(), s]);
        assert_eq!(red.u_type(&g), vec![2, 1]);
        assert_eq!(cor.u_type(&g), vec![1, 2]);
        assert!(!red.interalgebraic(&cor, &g));
        assert!(is_minimal(&red, &g).unwrap() && is_minimal(&cor, &g).unwrap());
        assert!(!is_canonical(&red, &g).unwrap() && !is_canonical(&cor, &g).unwrap());
    }

    #[test]
    fn staircase_is_incompressible_but_not_minimal() {
        let g = g(2, 2);
        let steps = vec![
            g.set(&[(1, 1)]).unwrap(),
            g.set(&[(2, 1), (1, 2)]).unwrap(),
            g.set(&[(2, 1), (2, 2)]).unwrap(),
        ];
        let a = Analysis::new(&g, CellSet::EMPTY, g.all(), steps).unwrap();
        assert_eq!(a.u_type(&g), vec![1, 2, 1]);
        assert!(is_incompressible(&a, &g));
        assert!(!is_minimal(&a, &g).unwrap());
    }

    #[test]
    fn column_chain_is_canonical() {
        let g = g(3, 1);
        let steps: Vec<_> = (1..=3).map(|i| g.set(&[(i, 1)]).unwrap()).collect();
        let a = Analysis::new(&g, CellSet::EMPTY, g.all(), steps).unwrap();
        assert!(is_incompressible(&a, &g));
        assert!(is_minimal(&a, &g).unwrap());
        assert!(is_canonical(&a, &g).unwrap());
        assert!(analysis_by_reductions(g.all(), CellSet::EMPTY, &g).interalgebraic(&a, &g));
        assert_eq!(analysis_by_coreductions(g.all(), CellSet::EMPTY, &g).u_type(&g), vec![1, 1, 1]);
    }

    #[test]
    fn invalid_analyses_are_rejected() {
        let g = g(2, 1);
        let top = g.set(&[(2, 1)]).unwrap();
        assert!(Analysis::new(&g, CellSet::EMPTY, top, vec![top]).is_err());
        assert!(Analysis::new(&g, CellSet::EMPTY, top, vec![]).is_err());
        let low = g.set(&[(1, 1)]).unwrap();
        assert!(Analysis::new(&g, CellSet::EMPTY, top, vec![low, low, top]).is_err());
        let a = Analysis::new(&g, CellSet::EMPTY, top, vec![low, top]).unwrap();
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn seqred_constructions() {
        let (g, s) = build_seqred_a(&[3, 2, 1]).unwrap();
        assert_eq!(g.cells_of(s), vec![(1, 1), (2, 1), (3, 1), (1, 2), (2, 2), (1, 3)]);
        assert_eq!(analysis_by_reductions(s, CellSet::EMPTY, &g).u_type(&g), vec![3, 2, 1]);
        let (g, s) = build_seqred_b(&[1, 2, 3]).unwrap();
        assert_eq!(g.cells_of(s), vec![(3, 1), (2, 2), (1, 3)]);
        assert_eq!(analysis_by_coreductions(s, CellSet::EMPTY, &g).u_type(&g), vec![1, 2, 3]);
        for build in [build_seqred_a, build_seqred_b] {
            let (g, s) = build(&[2, 2]).unwrap();
            assert_eq!(analysis_by_reductions(s, CellSet::EMPTY, &g).u_type(&g), vec![2, 2]);
            assert_eq!(analysis_by_coreductions(s, CellSet::EMPTY, &g).u_type(&g), vec![2, 2]);
        }
        assert_eq!(build_seqred_a(&[1, 2]), Err(GridError::NotMonotone("nonincreasing")));
        assert_eq!(build_seqred_b(&[2, 1]), Err(GridError::NotMonotone("nondecreasing")));
        assert_eq!(build_seqred_a(&[]), Err(GridError::InvalidSequence));
    }

    #[test]
    fn exhaustive_checks_respect_the_budget() {
        let g = g(4, 4);
        assert_eq!(
            min_analysis_length(g.all(), CellSet::EMPTY, &g),
            Err(GridError::BudgetExceeded { cells: 16, budget: 12 })
        );
        assert_eq!(min_analysis_length(g.all(), CellSet::EMPTY, &g.with_budget(16)), Ok(4));
    }
}
