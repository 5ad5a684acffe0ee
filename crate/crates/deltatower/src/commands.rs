//! The commands behind each subcommand. Each returns a finished report, or
//! an error when it refuses to start or a computation leaves its domain.

use std::time::{Duration, Instant};

use deltatower_core::grid::verify::{verify_property, PropertyReport, PROPERTIES};
use deltatower_core::grid::{
    analysis_by_coreductions, analysis_by_reductions, build_seqred_a, build_seqred_b, is_minimal, urank, Analysis,
    CellSet, GridError, GridModel,
};
use deltatower_core::series::generator_series;
use deltatower_core::{
    build_e, certify_independence, d_twist, decompose, derive, eval_series, expand, is_generic, logd_system,
    series_rank_check, ConstExpr, ConstSymbol, EigenVar, FactoredOperator, OperatorError, RelationError, Series,
    SeriesContext, SeriesError, TowerElement, TowerSpec, Verdict,
};

use crate::error::CliError;
use crate::formats::{read_json, write_json, Scenario, SpecFile, SystemFile, TraceFile};
use crate::random;
use crate::report::{CheckRecord, RunReport};

/// Largest truncation order the series commands accept.
pub const MAX_ORDER: usize = 64;
/// Order used by the series check of the tower suite.
pub const SUITE_ORDER: usize = 12;
/// Relative tolerance on series residuals.
pub const SERIES_TOL: f64 = 1e-9;
/// Random pairs in the seeded Leibniz check.
pub const LEIBNIZ_PAIRS: usize = 8;
/// Largest monomial support `relations certify` will reduce.
pub const MAX_SUPPORT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TowerLimits {
    pub max_levels: u32,
    pub max_rank: u32,
}

impl Default for TowerLimits {
    fn default() -> Self {
        TowerLimits { max_levels: 3, max_rank: 3 }
    }
}

/// Comma-separated positive integers.
pub fn parse_list(s: &str, what: &str) -> Result<Vec<u32>, CliError> {
    let bad = || CliError::Usage(format!("{what} must be comma-separated positive integers, got {s:?}"));
    let v = s.split(',').map(|p| p.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() || v.contains(&0) {
        return Err(bad());
    }
    Ok(v)
}

pub fn parse_floats(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad number {p:?} in {s:?}"))))
        .collect()
}

fn check_limits(ranks: &[u32], limits: TowerLimits) -> Result<(), CliError> {
    if ranks.len() as u32 > limits.max_levels {
        return Err(CliError::Refused(format!(
            "BudgetExceeded: {} levels, at most {} allowed (raise with --max-levels)",
            ranks.len(),
            limits.max_levels
        )));
    }
    if let Some(n) = ranks.iter().find(|&&n| n > limits.max_rank) {
        return Err(CliError::Refused(format!(
            "BudgetExceeded: rank {n}, at most {} allowed (raise with --max-rank)",
            limits.max_rank
        )));
    }
    Ok(())
}

fn check_order(order: usize) -> Result<(), CliError> {
    if order > MAX_ORDER {
        return Err(CliError::Refused(format!("BudgetExceeded: order {order} is above {MAX_ORDER}")));
    }
    if order < 2 {
        return Err(CliError::Usage(format!("order must be at least 2, got {order}")));
    }
    Ok(())
}

/// A tower from `--utype` or `--spec`, with its series values.
pub struct Tower {
    pub spec: TowerSpec,
    pub file: SpecFile,
}

impl Tower {
    pub fn from_utype(utype: &str) -> Result<Self, CliError> {
        let spec = TowerSpec::new(parse_list(utype, "utype")?).map_err(CliError::usage)?;
        Ok(Tower { file: SpecFile::from_spec(&spec), spec })
    }

    pub fn from_file(path: &str) -> Result<Self, CliError> {
        let file: SpecFile = read_json(path)?;
        let spec = file.to_spec()?;
        file.values(&spec)?;
        Ok(Tower { spec, file })
    }

    /// Without `--utype` or `--spec`, the smallest tower containing every
    /// `b[i][j]` and `c[i][j]` mentioned in `texts`.
    pub fn load(utype: Option<&str>, spec: Option<&str>, texts: &[&str]) -> Result<Self, CliError> {
        match (utype, spec) {
            (_, Some(path)) => Self::from_file(path),
            (Some(u), None) => Self::from_utype(u),
            (None, None) => Self::from_utype(&join(&inferred_ranks(texts))),
        }
    }

    pub fn context(&self, order: usize) -> Result<SeriesContext, CliError> {
        self.file.series_context(&self.spec, order)
    }

    pub fn parse(&self, src: &str) -> Result<TowerElement, CliError> {
        TowerElement::parse(src, &self.spec).map_err(CliError::usage)
    }
}

fn inferred_ranks(texts: &[&str]) -> Vec<u32> {
    let mut ranks = vec![1u32];
    for t in texts {
        for (k, _) in t.match_indices(['b', 'c']) {
            let mut nums = t[k + 1..].split(']').take(2).map(|p| p.strip_prefix('[').and_then(|n| n.parse::<u32>().ok()));
            if let (Some(Some(i)), Some(Some(j))) = (nums.next(), nums.next()) {
                if i >= 1 && j >= 1 && i <= 64 {
                    if ranks.len() < i as usize {
                        ranks.resize(i as usize, 1);
                    }
                    ranks[i as usize - 1] = ranks[i as usize - 1].max(j);
                }
            }
        }
    }
    ranks
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn series_error(e: SeriesError) -> CliError {
    match e {
        SeriesError::ZeroInitialValue(_) | SeriesError::NonInvertibleSeries => CliError::Computation(e.to_string()),
        _ => CliError::usage(e),
    }
}

fn operator_error(e: OperatorError) -> CliError {
    match e {
        OperatorError::ZeroInitialValue(_) => CliError::Computation(e.to_string()),
        OperatorError::Series(s) => series_error(s),
        _ => CliError::usage(e),
    }
}

fn relation_error(e: RelationError) -> CliError {
    match e {
        RelationError::Series(s) => series_error(s),
        RelationError::TruncationTooShort { .. } => CliError::Refused(e.to_string()),
        _ => CliError::usage(e),
    }
}

/// `|a - b|` over the first `len` coefficients, relative to the larger
/// magnitude when that exceeds 1.
fn relative_gap(a: &Series, b: &Series, len: usize) -> f64 {
    a.max_diff(b, len) / a.max_abs(len).max(b.max_abs(len)).max(1.0)
}

fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}

/// `Σ_j u[i][j] b[i][j]`, the general solution of `(E_i)`.
fn general_solution(spec: &TowerSpec, level: u32) -> TowerElement {
    (1..=spec.rank(level)).fold(TowerElement::zero(), |acc, j| {
        acc.add(&spec.generator(level, j).scale(&ConstExpr::symbol(ConstSymbol::u(level, j))))
    })
}

fn decomposes_into(f: &TowerElement, expected: &[TowerElement], level: u32, spec: &TowerSpec) -> Result<(), String> {
    let d = decompose(f, level, spec).map_err(|e| e.to_string())?;
    if d.components != expected {
        return Err(format!("components of {f} are {}", join(&d.components)));
    }
    if !is_generic(&d) {
        return Err(format!("{f} is not generic"));
    }
    Ok(())
}

/// Prints the equations and, with `check`, runs the verification suite.
pub fn tower_suite(r: &mut RunReport, tower: &Tower, check: bool, seed: u64) -> Result<(), CliError> {
    let spec = &tower.spec;
    r.info(format!("TOWER {}", join(spec.ranks())));
    let ops: Vec<FactoredOperator> =
        (1..=spec.ell()).map(|i| build_e(spec, i)).collect::<Result<_, _>>().map_err(CliError::usage)?;
    for (k, op) in ops.iter().enumerate() {
        r.info(format!("EQUATION E_{} {} {op}", k + 1, op.order()));
    }
    if !check {
        return Ok(());
    }
    let ctx = tower.context(SUITE_ORDER)?;
    for (k, op) in ops.iter().enumerate() {
        let i = k as u32 + 1;
        let e = spec.e(i);
        r.check(format!("E_{i}.annihilates_e"), || {
            let rest = op.apply(&e, spec);
            if rest.is_zero() { Ok(()) } else { Err(format!("E_{i}(e_{i}) = {rest}")) }
        });
        let general = general_solution(spec, i);
        r.check(format!("E_{i}.annihilates_general_solution"), || {
            let rest = op.apply(&general, spec);
            if rest.is_zero() { Ok(()) } else { Err(format!("E_{i}({general}) = {rest}")) }
        });
        r.check(format!("E_{i}.decomposition"), || {
            decomposes_into(&e, &spec.generators(i), i, spec)?;
            let parts: Vec<TowerElement> = (1..=spec.rank(i))
                .map(|j| spec.generator(i, j).scale(&ConstExpr::symbol(ConstSymbol::u(i, j))))
                .collect();
            decomposes_into(&general, &parts, i, spec)
        });
        r.check(format!("E_{i}.expansion_symmetry"), || {
            let reference = expand(op);
            for p in permutations(op.factors()) {
                let q = FactoredOperator::new(p).map_err(|e| e.to_string())?;
                if expand(&q) != reference {
                    return Err(format!("{q} expands differently from {op}"));
                }
            }
            Ok(())
        });
        r.check(format!("E_{i}.independence_degree_2"), || {
            let t = certify_independence(&EigenVar::generators(spec, i), 2, spec).map_err(|e| e.to_string())?;
            if t.verdict != Verdict::NoNontrivialRelation {
                return Err(format!("verdict {:?}", t.verdict));
            }
            match t.replay(spec) {
                Ok(true) => Ok(()),
                Ok(false) => Err("trace does not replay".into()),
                Err(e) => Err(e.to_string()),
            }
        });
    }
    r.check("leibniz", || {
        let mut rng = random::rng(seed);
        for k in 0..LEIBNIZ_PAIRS {
            let x = random::element(spec, &mut rng);
            let y = random::element(spec, &mut rng);
            let xy = x.mul(&y);
            let rule = |d: &dyn Fn(&TowerElement) -> TowerElement| d(&xy) == x.mul(&d(&y)).add(&y.mul(&d(&x)));
            if !rule(&|z| derive(z, spec)) {
                return Err(format!("pair {k}: x = {x}, y = {y}"));
            }
            for i in 1..=spec.ell() {
                if !rule(&|z| d_twist(z, i, spec)) {
                    return Err(format!("pair {k}, D_{i}: x = {x}, y = {y}"));
                }
            }
        }
        Ok(())
    });
    r.check("series_consistency", || {
        let gens = generator_series(spec, &ctx).map_err(|e| e.to_string())?;
        let len = SUITE_ORDER - 1;
        for ((i, j), s) in &gens {
            let ds = eval_series(&derive(&spec.generator(*i, *j), spec), &ctx, spec).map_err(|e| e.to_string())?;
            let gap = relative_gap(&s.derivative(), &ds, len);
            if gap > SERIES_TOL {
                return Err(format!("b[{i}][{j}]: relative gap {gap:e}"));
            }
        }
        Ok(())
    });
    Ok(())
}

pub struct TowerBuild<'a> {
    pub utype: &'a str,
    pub check: bool,
    pub seed: u64,
    pub out: Option<&'a str>,
    pub limits: TowerLimits,
}

pub fn tower_build(command: Vec<String>, timing: bool, a: &TowerBuild) -> Result<RunReport, CliError> {
    let tower = Tower::from_utype(a.utype)?;
    check_limits(tower.spec.ranks(), a.limits)?;
    if let Some(path) = a.out {
        write_json(path, &tower.file)?;
    }
    let mut r = RunReport::new(command, timing);
    tower_suite(&mut r, &tower, a.check, a.seed)?;
    Ok(r)
}

/// Re-runs the full suite on a serialized tower.
pub fn tower_check(
    command: Vec<String>,
    timing: bool,
    path: &str,
    seed: u64,
    limits: TowerLimits,
) -> Result<RunReport, CliError> {
    let tower = Tower::from_file(path)?;
    check_limits(tower.spec.ranks(), limits)?;
    let mut r = RunReport::new(command, timing);
    tower_suite(&mut r, &tower, true, seed)?;
    Ok(r)
}

/// Runs every grid property on its own thread; the report lists them in
/// the fixed property order.
pub fn grid_verify(command: Vec<String>, timing: bool, max_cells: u32, budget: u32) -> Result<RunReport, CliError> {
    if max_cells == 0 {
        return Err(CliError::Usage("--max-cells must be positive".into()));
    }
    if max_cells > budget {
        return Err(CliError::Refused(GridError::BudgetExceeded { cells: max_cells, budget }.to_string()));
    }
    let results: Vec<(PropertyReport, Duration)> = std::thread::scope(|s| {
        let handles: Vec<_> = PROPERTIES
            .iter()
            .map(|(name, _)| {
                s.spawn(move || {
                    let start = Instant::now();
                    let rep = verify_property(name, max_cells).expect("listed property");
                    (rep, start.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread panicked")).collect()
    });
    let mut r = RunReport::new(command, timing);
    for (rep, elapsed) in results {
        r.info(format!("PROPERTY {} {} {}", rep.name, rep.max_cells, rep.instances));
        r.record(CheckRecord {
            name: rep.name.to_string(),
            passed: rep.passed(),
            elapsed,
            counterexample: rep.counterexample,
        });
    }
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Reductions,
    Coreductions,
}

fn describe(r: &mut RunReport, label: &str, a: &Analysis, g: &GridModel) {
    let steps: Vec<String> = a.steps().iter().map(|s| g.format(*s)).collect();
    r.info(format!("ANALYSIS {label} {}", steps.join(" ")));
    r.info(format!("UTYPE {label} ({})", join(&a.u_type(g))));
}

fn check_minimal(r: &mut RunReport, name: &str, a: &Analysis, g: &GridModel) {
    r.check(name, || match is_minimal(a, g) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("a shorter analysis than {} steps exists", a.len())),
        Err(e) => Err(e.to_string()),
    });
}

pub fn grid_seqred(command: Vec<String>, timing: bool, s: &str, mode: Mode, budget: u32) -> Result<RunReport, CliError> {
    let s = parse_list(s, "--s")?;
    let built = match mode {
        Mode::Reductions => build_seqred_a(&s),
        Mode::Coreductions => build_seqred_b(&s),
    };
    let (g, target) = built.map_err(|e| match e {
        GridError::NotMonotone(_) => CliError::Refused(format!("NotMonotone: {e}")),
        _ => CliError::usage(e),
    })?;
    let g = g.with_budget(budget);
    let a = match mode {
        Mode::Reductions => analysis_by_reductions(target, CellSet::EMPTY, &g),
        Mode::Coreductions => analysis_by_coreductions(target, CellSet::EMPTY, &g),
    };
    let label = match mode {
        Mode::Reductions => "reductions",
        Mode::Coreductions => "coreductions",
    };
    let mut r = RunReport::new(command, timing);
    r.info(format!("GRID {}x{} {}", g.depth(), g.columns(), g.format(target)));
    describe(&mut r, label, &a, &g);
    let u = a.u_type(&g);
    r.check("utype", || if u == s { Ok(()) } else { Err(format!("got ({}), expected ({})", join(&u), join(&s))) });
    if g.cells() <= budget {
        check_minimal(&mut r, "minimal", &a, &g);
    } else {
        r.info(format!("SKIP minimal {} cells exceed the budget of {budget}", g.cells()));
    }
    Ok(r)
}

pub fn grid_analyze(command: Vec<String>, timing: bool, path: &str, budget: u32) -> Result<RunReport, CliError> {
    let scenario: Scenario = read_json(path)?;
    let (g, base, target) = scenario.load(budget)?;
    g.check_budget().map_err(|e| CliError::Refused(e.to_string()))?;
    let mut r = RunReport::new(command, timing);
    r.info(format!("GRID {}x{} base {} target {}", g.depth(), g.columns(), g.format(base), g.format(target)));
    let rank = urank(target, base, &g);
    r.info(format!("URANK {rank}"));
    let red = analysis_by_reductions(target, base, &g);
    let cored = analysis_by_coreductions(target, base, &g);
    for (label, a) in [("reductions", &red), ("coreductions", &cored)] {
        describe(&mut r, label, a, &g);
        let u = a.u_type(&g);
        r.check(format!("{label}.rank_sum"), || {
            let sum: u32 = u.iter().sum();
            if sum == rank { Ok(()) } else { Err(format!("U-type sums to {sum}, rank is {rank}")) }
        });
        check_minimal(&mut r, &format!("{label}.minimal"), a, &g);
    }
    r.info(format!("INTERALGEBRAIC {}", red.interalgebraic(&cored, &g)));
    Ok(r)
}

pub enum SeriesInput<'a> {
    LogdSystem { n: usize, h: &'a str, initial: Option<&'a str> },
    System(&'a str),
    Element(&'a str),
}

fn print_series(r: &mut RunReport, name: &str, s: &Series) {
    r.info(format!("SERIES {name} {}", join(s.coeffs())));
}

pub fn series(
    command: Vec<String>,
    timing: bool,
    input: SeriesInput,
    order: usize,
    tower: &Tower,
) -> Result<RunReport, CliError> {
    check_order(order)?;
    let ctx = tower.context(order)?;
    let spec = &tower.spec;
    let mut r = RunReport::new(command, timing);
    let (n, h, initial) = match input {
        SeriesInput::Element(src) => {
            let x = tower.parse(src)?;
            let s = eval_series(&x, &ctx, spec).map_err(series_error)?;
            let ds = eval_series(&derive(&x, spec), &ctx, spec).map_err(series_error)?;
            r.info(format!("ELEMENT {x}"));
            print_series(&mut r, "element", &s);
            let len = order - 1;
            let residual = s.derivative().max_diff(&ds, len);
            r.info(format!("RESIDUAL delta {residual:e}"));
            let gap = relative_gap(&s.derivative(), &ds, len);
            r.check("delta_consistency", || if gap <= SERIES_TOL { Ok(()) } else { Err(format!("relative gap {gap:e}")) });
            return Ok(r);
        }
        SeriesInput::LogdSystem { n, h, initial } => {
            let initial = match initial {
                Some(s) => parse_floats(s)?,
                None => vec![1.0; n],
            };
            (n, h.to_string(), initial)
        }
        SeriesInput::System(path) => {
            let f: SystemFile = read_json(path)?;
            (f.n, f.h, f.initial_values)
        }
    };
    let system = logd_system(n, tower.parse(&h)?).map_err(operator_error)?;
    for line in system.to_string().lines() {
        r.info(format!("EQUATION {line}"));
    }
    let hs = eval_series(&system.h, &ctx, spec).map_err(series_error)?;
    let xs = system.solve_with(&initial, &hs).map_err(operator_error)?;
    for (k, x) in xs.iter().enumerate() {
        print_series(&mut r, &format!("x_{}", k + 1), x);
    }
    let residual = system.residual(&xs, &hs);
    r.info(format!("RESIDUAL system {residual:e}"));
    let scale = xs.iter().map(|x| x.max_abs(order)).fold(hs.max_abs(order), f64::max).max(1.0);
    r.check("system_residual", || {
        if residual <= SERIES_TOL * scale { Ok(()) } else { Err(format!("residual {residual:e} at scale {scale:e}")) }
    });
    Ok(r)
}

pub struct Certify<'a> {
    pub level: u32,
    pub degree: u32,
    pub trace: Option<&'a str>,
    pub series_order: Option<usize>,
}

fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

pub fn relations_certify(command: Vec<String>, timing: bool, tower: &Tower, a: &Certify) -> Result<RunReport, CliError> {
    let spec = &tower.spec;
    spec.check_level(a.level).map_err(CliError::usage)?;
    if a.degree == 0 {
        return Err(CliError::Usage("--degree must be positive".into()));
    }
    let k = spec.rank(a.level) as u64;
    let support = binomial(k + a.degree as u64, k) - 1;
    if support > MAX_SUPPORT as u64 {
        return Err(CliError::Refused(format!("BudgetExceeded: {support} monomials, at most {MAX_SUPPORT}")));
    }
    let vars = EigenVar::generators(spec, a.level);
    let mut r = RunReport::new(command, timing);
    r.info(format!("VARIABLES {}", join(&vars.iter().map(|v| v.element.clone()).collect::<Vec<_>>())));
    let start = Instant::now();
    let trace = certify_independence(&vars, a.degree, spec).map_err(relation_error)?;
    let elapsed = start.elapsed();
    r.info(format!("STEPS {}", trace.steps.len()));
    r.info(format!("VERDICT {:?}", trace.verdict));
    r.record(CheckRecord {
        name: "certificate".into(),
        passed: trace.verdict == Verdict::NoNontrivialRelation,
        elapsed,
        counterexample: match &trace.verdict {
            Verdict::NoNontrivialRelation => None,
            v => Some(format!("{v:?}")),
        },
    });
    r.check("replay", || match trace.replay(spec) {
        Ok(true) => Ok(()),
        Ok(false) => Err("stored steps differ from recomputed ones".into()),
        Err(e) => Err(e.to_string()),
    });
    if let Some(path) = a.trace {
        write_json(path, &TraceFile::from(&trace))?;
    }
    if let Some(order) = a.series_order {
        check_order(order)?;
        let ctx = tower.context(order)?;
        let rep = series_rank_check(&vars, a.degree, &ctx, spec).map_err(relation_error)?;
        r.info(format!("RANK {} {} {:e}", rep.rank, rep.rows, rep.min_pivot));
        r.check("numeric_rank", || if rep.full_rank() { Ok(()) } else { Err(format!("rank {} of {}", rep.rank, rep.rows)) });
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_parse() {
        assert_eq!(parse_list("2, 1", "utype").unwrap(), vec![2, 1]);
        for bad in ["0,1", "", "2,,1", "-1", "a"] {
            assert!(matches!(parse_list(bad, "utype"), Err(CliError::Usage(_))), "{bad}");
        }
        assert_eq!(parse_floats("1,0.5").unwrap(), vec![1.0, 0.5]);
    }

    #[test]
    fn ranks_are_inferred_from_symbols() {
        assert_eq!(inferred_ranks(&["b[1][1]*b[1][2]"]), vec![2]);
        assert_eq!(inferred_ranks(&["c[3][1] + b[1][2]", "0"]), vec![2, 1, 1]);
        assert_eq!(inferred_ranks(&["2/3", "u[4][4]"]), vec![1]);
        assert_eq!(inferred_ranks(&["b[x][1] + b[0][1]"]), vec![1]);
    }

    #[test]
    fn permutations_are_complete() {
        let p = permutations(&[1, 2, 3]);
        assert_eq!(p.len(), 6);
        assert!(p.contains(&vec![3, 1, 2]));
    }

    #[test]
    fn support_sizes() {
        assert_eq!(binomial(2 + 2, 2) - 1, 5);
        assert_eq!(binomial(3 + 3, 3) - 1, 19);
    }

    #[test]
    fn limits_refuse() {
        assert!(check_limits(&[3, 3, 3], TowerLimits::default()).is_ok());
        assert!(matches!(check_limits(&[1, 1, 1, 1], TowerLimits::default()), Err(CliError::Refused(_))));
        assert!(matches!(check_limits(&[4], TowerLimits::default()), Err(CliError::Refused(_))));
    }
}
