//! Decision procedures for List 3-Colouring on diameter-2 graphs: the
//! class-specific polynomial drivers, the profile-based dispatcher and an
//! exact branching fallback.
//!
//! Every driver follows the same scheme: pick a small vertex set, run
//! exhaustive propagation for each of its list-respecting precolourings,
//! and aggregate. For the classes handled here that sweep is guaranteed to
//! decide the instance; a branch left `Unknown` where the class analysis
//! forbids it is therefore surfaced as an [`SolverError::OutOfClass`]
//! error, never silently absorbed. Only [`dispatch_solve`] converts such
//! errors into an exact-fallback run, with a warning note in the report.

use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use thiserror::Error;

use crate::graph::{Diameter, Graph, Vertex};
use crate::lists::{
    colour_bit, enumerate_promising, mask_colours, respects, Colouring, ListAssignment, ListError,
    Precolouring, DEFAULT_DOMAIN_BOUND,
};
use crate::patterns::{
    enumerate_induced_cycles_with, find_induced_cycle_with, find_k4, find_triangle,
    find_triangle_or_induced_c5, CycleLimits, PatternError, TriangleOrC5,
};
use crate::propagation::{propagate_cached, CycleCache, Propagation, PropagationOutcome, RuleSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("precondition violated for route {route}: {detail}")]
    Precondition { route: Route, detail: String },
    #[error("out-of-class structure detected on route {route}: {detail}")]
    OutOfClass { route: Route, detail: String },
    #[error("exact search budget exhausted after {nodes} nodes")]
    Budget { nodes: u64 },
    #[error("bad configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Lists(#[from] ListError),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Which algorithm decided an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    C5Free,
    C6Free,
    C4C7Free,
    C4C8Free,
    C4C9Free,
    Exact(ExactReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactReason {
    /// Exact search requested directly.
    Direct,
    /// Diameter above 2; no polynomial driver applies.
    LargeDiameter,
    /// Triangle- and square-free diameter-2 graphs form a finite class, so
    /// exact search is a constant-time fallback there.
    TriangleSquareFree,
    /// No supported class matched.
    UnmatchedClass,
    /// A polynomial driver reported an out-of-class contradiction and the
    /// dispatcher fell back.
    Rescue,
    /// Induced-cycle enumeration overflowed its cap.
    CycleOverflow,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Route::C5Free => write!(f, "c5free"),
            Route::C6Free => write!(f, "c6free"),
            Route::C4C7Free => write!(f, "c4c7free"),
            Route::C4C8Free => write!(f, "c4c8free"),
            Route::C4C9Free => write!(f, "c4c9free"),
            Route::Exact(reason) => {
                let tag = match reason {
                    ExactReason::Direct => "direct",
                    ExactReason::LargeDiameter => "large-diameter",
                    ExactReason::TriangleSquareFree => "triangle-square-free",
                    ExactReason::UnmatchedClass => "unmatched-class",
                    ExactReason::Rescue => "rescue",
                    ExactReason::CycleOverflow => "cycle-overflow",
                };
                write!(f, "exact({tag})")
            }
        }
    }
}

/// Runtime knobs shared by the drivers.
#[derive(Debug, Clone)]
pub struct SolveConfig {
    /// Subset family for the stage-1 sweep of the (C4,C8)/(C4,C9) drivers.
    pub stage1_policy: SubsetPolicy,
    /// Worker threads for branch evaluation; 1 means sequential.
    pub jobs: usize,
    /// Node cap for the exact fallback; `None` is unbounded.
    pub node_budget: Option<u64>,
    /// Largest precoloured set the branch enumerators accept.
    pub n0_bound: usize,
    pub cycle_limits: CycleLimits,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            stage1_policy: SubsetPolicy::Cycles,
            jobs: 1,
            node_budget: None,
            n0_bound: DEFAULT_DOMAIN_BOUND,
            cycle_limits: CycleLimits::default(),
        }
    }
}

/// Families for the stage-1 sweep: every subset of size at most `p`, or
/// only the vertex sets of induced `p`-cycles. The cycle family is the one
/// the class analysis actually needs; the full family is kept for
/// cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetPolicy {
    All,
    Cycles,
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub branches: u64,
    pub rule_steps: u64,
    pub wall: Duration,
}

/// Decision, witness and provenance for one solved instance.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub decision: bool,
    pub witness: Option<Colouring>,
    pub route: Route,
    pub stats: SolveStats,
    pub notes: Vec<String>,
}

impl SolveReport {
    fn no(route: Route, stats: SolveStats, notes: Vec<String>) -> Self {
        SolveReport {
            decision: false,
            witness: None,
            route,
            stats,
            notes,
        }
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "decision: {}", if self.decision { "yes" } else { "no" })?;
        writeln!(f, "route: {}", self.route)?;
        writeln!(
            f,
            "branches: {} rule-steps: {} wall-ms: {}",
            self.stats.branches,
            self.stats.rule_steps,
            self.stats.wall.as_millis()
        )?;
        for note in &self.notes {
            writeln!(f, "note: {note}")?;
        }
        Ok(())
    }
}

/// Outcome of one propagation branch of a precolouring sweep.
#[derive(Debug, Clone)]
pub struct BranchRecord {
    pub precolouring: Precolouring,
    pub outcome: PropagationOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum N0Summary {
    Yes(Colouring),
    AllNo,
    /// Indices of the branches left undecided.
    Mixed(Vec<usize>),
}

/// Result of propagating every promising precolouring of one vertex set.
#[derive(Debug, Clone)]
pub struct N0Report {
    pub branches: Vec<BranchRecord>,
    pub summary: N0Summary,
    pub rule_steps: u64,
}

/// Runs exhaustive propagation for every promising precolouring of `n0`
/// and aggregates: the first `Yes` branch wins (later branches are not
/// evaluated), `AllNo` means every branch ended `No` (vacuously so for an
/// empty branch set), anything else is `Mixed`.
pub fn full_n0_propagation(
    g: &Graph,
    lists: &ListAssignment,
    n0: &[Vertex],
    rules: &RuleSet,
    cfg: &SolveConfig,
) -> Result<N0Report, SolverError> {
    let cache = CycleCache::build(g, rules, &cfg.cycle_limits)?;
    full_n0_propagation_cached(g, lists, n0, rules, &cache, cfg)
}

fn full_n0_propagation_cached(
    g: &Graph,
    lists: &ListAssignment,
    n0: &[Vertex],
    rules: &RuleSet,
    cache: &CycleCache,
    cfg: &SolveConfig,
) -> Result<N0Report, SolverError> {
    let pres = enumerate_promising(g, lists, n0, cfg.n0_bound)?;
    let runs = map_branches(g, lists, &pres, rules, cache, cfg.jobs);
    let rule_steps: u64 = runs.iter().map(|r| r.trace.steps.len() as u64).sum();

    let mut yes = None;
    let mut unknowns = Vec::new();
    for (i, run) in runs.iter().enumerate() {
        match &run.outcome {
            PropagationOutcome::Yes(col) => {
                yes = Some(col.clone());
                break;
            }
            PropagationOutcome::Unknown(_) => unknowns.push(i),
            PropagationOutcome::No => {}
        }
    }
    let summary = match yes {
        Some(col) => N0Summary::Yes(col),
        None if unknowns.is_empty() => N0Summary::AllNo,
        None => N0Summary::Mixed(unknowns),
    };
    let branches = pres
        .into_iter()
        .zip(runs)
        .map(|(precolouring, run)| BranchRecord {
            precolouring,
            outcome: run.outcome,
        })
        .collect();
    Ok(N0Report {
        branches,
        summary,
        rule_steps,
    })
}

/// Evaluates branches in order, stopping after the first `Yes`. With
/// `jobs > 1` the branches are chunked across scoped threads; the merged
/// result is truncated at the first in-order `Yes`, so the outcome is
/// independent of the worker count.
fn map_branches(
    g: &Graph,
    lists: &ListAssignment,
    pres: &[Precolouring],
    rules: &RuleSet,
    cache: &CycleCache,
    jobs: usize,
) -> Vec<Propagation> {
    let run_one = |pre: &Precolouring| {
        let restricted = crate::lists::restrict_to_precolouring(lists, pre);
        propagate_cached(g, &restricted, rules, cache)
    };

    let mut runs: Vec<Propagation>;
    if jobs <= 1 || pres.len() < 16 {
        runs = Vec::with_capacity(pres.len());
        for pre in pres {
            let run = run_one(pre);
            let stop = run.outcome.is_yes();
            runs.push(run);
            if stop {
                break;
            }
        }
    } else {
        let chunk = pres.len().div_ceil(jobs);
        let mut parts: Vec<Vec<Propagation>> = Vec::new();
        std::thread::scope(|scope| {
            let handles: Vec<_> = pres
                .chunks(chunk)
                .map(|slice| scope.spawn(move || slice.iter().map(run_one).collect::<Vec<_>>()))
                .collect();
            parts = handles
                .into_iter()
                .map(|h| h.join().expect("branch worker"))
                .collect();
        });
        runs = parts.into_iter().flatten().collect();
        if let Some(first_yes) = runs.iter().position(|r| r.outcome.is_yes()) {
            runs.truncate(first_yes + 1);
        }
    }
    runs
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PSummary {
    Yes(Colouring),
    AllNo,
    Mixed,
}

/// Result of a subset-family sweep.
#[derive(Debug, Clone)]
pub struct PReport {
    pub summary: PSummary,
    /// The family was empty, so `AllNo` is vacuous.
    pub empty_family: bool,
    pub subsets: Vec<(Vec<Vertex>, N0Summary)>,
    pub branches: u64,
    pub rule_steps: u64,
}

/// Runs a full precolouring sweep over a subset family: every nonempty
/// subset of size at most `p` under [`SubsetPolicy::All`], or the vertex
/// sets of induced `p`-cycles under [`SubsetPolicy::Cycles`].
pub fn full_p_propagation(
    g: &Graph,
    lists: &ListAssignment,
    p: usize,
    policy: SubsetPolicy,
    rules: &RuleSet,
    cfg: &SolveConfig,
) -> Result<PReport, SolverError> {
    if p == 0 || p > 7 {
        return Err(SolverError::Config(format!(
            "subset size bound {p} outside 1..=7"
        )));
    }
    let family: Vec<Vec<Vertex>> = match policy {
        SubsetPolicy::All => {
            let vs: Vec<Vertex> = g.vertices().collect();
            (1..=p.min(g.n()))
                .flat_map(|k| vs.iter().copied().combinations(k))
                .collect()
        }
        SubsetPolicy::Cycles => enumerate_induced_cycles_with(g, p, &cfg.cycle_limits)?
            .into_iter()
            .map(|c| c.vertices().to_vec())
            .collect(),
    };
    let cache = CycleCache::build(g, rules, &cfg.cycle_limits)?;

    let empty_family = family.is_empty();
    let mut subsets = Vec::with_capacity(family.len());
    let mut branches = 0u64;
    let mut rule_steps = 0u64;
    let mut mixed = false;
    let mut yes = None;
    for subset in family {
        let report = full_n0_propagation_cached(g, lists, &subset, rules, &cache, cfg)?;
        branches += report.branches.len() as u64;
        rule_steps += report.rule_steps;
        let summary = report.summary.clone();
        subsets.push((subset, report.summary));
        match summary {
            N0Summary::Yes(col) => {
                yes = Some(col);
                break;
            }
            N0Summary::Mixed(_) => mixed = true,
            N0Summary::AllNo => {}
        }
    }
    let summary = match yes {
        Some(col) => PSummary::Yes(col),
        None if mixed => PSummary::Mixed,
        None => PSummary::AllNo,
    };
    Ok(PReport {
        summary,
        empty_family,
        subsets,
        branches,
        rule_steps,
    })
}

/// Structural membership facts the dispatcher routes on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProfile {
    pub diameter: Diameter,
    /// `cycle_free[k-3]` iff the graph has no induced `C_k`, for `k` in `3..=9`.
    pub cycle_free: [bool; 7],
    pub has_k4: bool,
    pub bipartite: bool,
}

impl ClassProfile {
    pub fn ck_free(&self, k: usize) -> bool {
        self.cycle_free[k - 3]
    }
}

impl fmt::Display for ClassProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "diameter={}", self.diameter)?;
        writeln!(f, "bipartite={}", if self.bipartite { "yes" } else { "no" })?;
        writeln!(f, "k4={}", if self.has_k4 { "present" } else { "absent" })?;
        for k in 3..=9 {
            writeln!(
                f,
                "c{k}={}",
                if self.ck_free(k) { "free" } else { "present" }
            )?;
        }
        Ok(())
    }
}

/// Computes the membership facts for routing: diameter, bipartiteness,
/// K4 presence and induced-cycle freeness for lengths 3 through 9.
pub fn classify(g: &Graph) -> ClassProfile {
    let mut cycle_free = [true; 7];
    cycle_free[0] = find_triangle(g).is_none();
    for k in 4..=9usize {
        let hit = find_induced_cycle_with(g, k, &CycleLimits::default())
            .expect("k within supported range");
        cycle_free[k - 3] = hit.is_none();
    }
    ClassProfile {
        diameter: g.diameter(),
        cycle_free,
        has_k4: find_k4(g).is_some(),
        bipartite: g.bipartition().is_some(),
    }
}

struct Driver {
    route: Route,
    stats: SolveStats,
    notes: Vec<String>,
    started: Instant,
}

impl Driver {
    fn new(route: Route) -> Self {
        Driver {
            route,
            stats: SolveStats::default(),
            notes: Vec::new(),
            started: Instant::now(),
        }
    }

    fn absorb(&mut self, branches: u64, rule_steps: u64) {
        self.stats.branches += branches;
        self.stats.rule_steps += rule_steps;
    }

    fn yes(
        mut self,
        g: &Graph,
        lists: &ListAssignment,
        col: Colouring,
    ) -> Result<SolveReport, SolverError> {
        if !respects(&col, g, lists) {
            return Err(SolverError::Internal(format!(
                "route {} produced a witness that does not respect the instance",
                self.route
            )));
        }
        self.stats.wall = self.started.elapsed();
        Ok(SolveReport {
            decision: true,
            witness: Some(col),
            route: self.route,
            stats: self.stats,
            notes: self.notes,
        })
    }

    fn no(mut self) -> Result<SolveReport, SolverError> {
        self.stats.wall = self.started.elapsed();
        Ok(SolveReport::no(self.route, self.stats, self.notes))
    }

    fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Finishes from an N0 sweep whose class guarantees a decision.
    fn finish_terminal(
        self,
        g: &Graph,
        lists: &ListAssignment,
        summary: N0Summary,
    ) -> Result<SolveReport, SolverError> {
        match summary {
            N0Summary::Yes(col) => self.yes(g, lists, col),
            N0Summary::AllNo => self.no(),
            N0Summary::Mixed(idx) => Err(SolverError::OutOfClass {
                route: self.route,
                detail: format!("{} branch(es) left undecided by the sweep", idx.len()),
            }),
        }
    }
}

fn require(route: Route, ok: bool, detail: &str) -> Result<(), SolverError> {
    if ok {
        Ok(())
    } else {
        Err(SolverError::Precondition {
            route,
            detail: detail.to_string(),
        })
    }
}

fn require_ck_free(
    g: &Graph,
    route: Route,
    k: usize,
    limits: &CycleLimits,
) -> Result<(), SolverError> {
    let hit = find_induced_cycle_with(g, k, limits)?;
    require(
        route,
        hit.is_none(),
        &format!("graph contains an induced C{k}"),
    )
}

/// C5-free graphs of diameter at most 2.
///
/// Bipartite inputs must be complete bipartite, where one side is
/// monochromatic in any colouring: each candidate colour for each side
/// reduces to a 2-list instance. Non-bipartite inputs reject on K4, then a
/// triangle exists and a full precolouring sweep of it decides.
pub fn solve_c5free(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    let mut driver = Driver::new(Route::C5Free);
    require(
        driver.route,
        g.diameter().at_most(2) || g.n() <= 1,
        "diameter above 2",
    )?;
    require_ck_free(g, driver.route, 5, &cfg.cycle_limits)?;

    if let Some(bip) = g.bipartition() {
        if !g.is_complete_bipartite(&bip) {
            return Err(SolverError::Internal(
                "bipartite graph of diameter 2 must be complete bipartite".into(),
            ));
        }
        let mut intersections_empty = 0;
        for (mono, other) in [(&bip.part_a, &bip.part_b), (&bip.part_b, &bip.part_a)] {
            let common = mono
                .iter()
                .fold(crate::lists::FULL_MASK, |m, &v| m & lists.get(v));
            if common == 0 {
                intersections_empty += 1;
            }
            for colour in mask_colours(common) {
                driver.stats.branches += 1;
                let mut reduced = lists.clone();
                for &v in mono.iter() {
                    reduced.set(v, colour_bit(colour));
                }
                let mut feasible = true;
                for &v in other.iter() {
                    let m = lists.get(v) & !colour_bit(colour);
                    if m == 0 {
                        feasible = false;
                        break;
                    }
                    reduced.set(v, m);
                }
                if !feasible {
                    continue;
                }
                if let Some(col) = crate::twosat::solve_2list(g, &reduced)
                    .expect("sides leave lists of size 1 or 2")
                {
                    return driver.yes(g, lists, col);
                }
            }
        }
        if intersections_empty == 2 {
            driver.note("both side-intersections empty; no side can be monochromatic");
        }
        return driver.no();
    }

    if let Some(k4) = find_k4(g) {
        driver.note(format!("K4 on {k4:?}"));
        return driver.no();
    }
    let triangle = match find_triangle_or_induced_c5(g)? {
        TriangleOrC5::Triangle(t) => t,
        TriangleOrC5::Cycle(_) => {
            return Err(SolverError::Internal(
                "induced C5 in a C5-free instance".into(),
            ))
        }
    };
    let report = full_n0_propagation(g, lists, &triangle, &RuleSet::basic(), cfg)?;
    driver.absorb(report.branches.len() as u64, report.rule_steps);
    driver.finish_terminal(g, lists, report.summary)
}

/// C6-free graphs of diameter at most 2: delegate when C5-free, otherwise
/// reject K4 and sweep the precolourings of one induced C5.
pub fn solve_c6free(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    let driver = Driver::new(Route::C6Free);
    require(
        driver.route,
        g.diameter().at_most(2) || g.n() <= 1,
        "diameter above 2",
    )?;
    require_ck_free(g, driver.route, 6, &cfg.cycle_limits)?;
    sweep_induced_c5(g, lists, cfg, driver)
}

/// (C4,C7)-free graphs of diameter at most 2; the same driver as the
/// C6-free case with different class preconditions.
pub fn solve_c4c7free(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    let driver = Driver::new(Route::C4C7Free);
    require(
        driver.route,
        g.diameter().at_most(2) || g.n() <= 1,
        "diameter above 2",
    )?;
    require_ck_free(g, driver.route, 4, &cfg.cycle_limits)?;
    require_ck_free(g, driver.route, 7, &cfg.cycle_limits)?;
    sweep_induced_c5(g, lists, cfg, driver)
}

/// Shared body of the C6-free and (C4,C7)-free drivers.
fn sweep_induced_c5(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
    mut driver: Driver,
) -> Result<SolveReport, SolverError> {
    let route = driver.route;
    let c5 = find_induced_cycle_with(g, 5, &cfg.cycle_limits)?;
    let Some(c5) = c5 else {
        let mut report = solve_c5free(g, lists, cfg)?;
        report
            .notes
            .push(format!("delegated from {route}: instance is C5-free"));
        return Ok(report);
    };
    if let Some(k4) = find_k4(g) {
        driver.note(format!("K4 on {k4:?}"));
        return driver.no();
    }
    let report = full_n0_propagation(g, lists, c5.vertices(), &RuleSet::basic(), cfg)?;
    driver.absorb(report.branches.len() as u64, report.rule_steps);
    driver.finish_terminal(g, lists, report.summary)
}

/// Does the precolouring give two cycle vertices at distance 2 the same
/// colour? (The pattern the stage-1 analysis must refute on 6-cycles.)
fn repeats_at_distance_two(pre: &Precolouring, cycle: &[Vertex]) -> bool {
    let colour_at = |v: Vertex| {
        pre.pairs()
            .iter()
            .find(|&&(u, _)| u == v)
            .map(|&(_, c)| c)
            .expect("cycle vertex coloured")
    };
    let k = cycle.len();
    (0..k).any(|i| colour_at(cycle[i]) == colour_at(cycle[(i + 2) % k]))
}

/// As above but additionally requiring the repeated colour to appear
/// nowhere else on the cycle (the 7-cycle stage-1 pattern).
fn repeats_at_distance_two_exclusively(pre: &Precolouring, cycle: &[Vertex]) -> bool {
    let colour_at = |v: Vertex| {
        pre.pairs()
            .iter()
            .find(|&&(u, _)| u == v)
            .map(|&(_, c)| c)
            .expect("cycle vertex coloured")
    };
    let k = cycle.len();
    (0..k).any(|i| {
        let c = colour_at(cycle[i]);
        c == colour_at(cycle[(i + 2) % k])
            && cycle.iter().filter(|&&v| colour_at(v) == c).count() == 2
    })
}

/// (C4,C8)-free graphs of diameter at most 2.
///
/// Stage 1 sweeps precolourings over induced 6-cycles (or all small
/// subsets under [`SubsetPolicy::All`]); in class, every branch that
/// repeats a colour at distance 2 on a 6-cycle must come back `No`, which
/// licenses the C6 cycle rule. Stage 2 then decides through one chosen
/// 6-cycle with that rule enabled.
pub fn solve_c4c8free(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    solve_with_cycle_rule(g, lists, cfg, CycleRuleDriver::SixCycle)
}

/// (C4,C9)-free graphs of diameter at most 2; the 7-cycle analogue of
/// [`solve_c4c8free`], with the exclusive repeat pattern and the C7 rule.
pub fn solve_c4c9free(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    solve_with_cycle_rule(g, lists, cfg, CycleRuleDriver::SevenCycle)
}

#[derive(Clone, Copy)]
enum CycleRuleDriver {
    SixCycle,
    SevenCycle,
}

fn solve_with_cycle_rule(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
    kind: CycleRuleDriver,
) -> Result<SolveReport, SolverError> {
    let (route, cycle_len, forbidden_k) = match kind {
        CycleRuleDriver::SixCycle => (Route::C4C8Free, 6usize, 8usize),
        CycleRuleDriver::SevenCycle => (Route::C4C9Free, 7usize, 9usize),
    };
    let mut driver = Driver::new(route);
    require(
        driver.route,
        g.diameter().at_most(2) || g.n() <= 1,
        "diameter above 2",
    )?;
    require_ck_free(g, route, 4, &cfg.cycle_limits)?;
    require_ck_free(g, route, forbidden_k, &cfg.cycle_limits)?;

    // Delegate when the shorter cycle is absent.
    if find_induced_cycle_with(g, cycle_len, &cfg.cycle_limits)?.is_none() {
        let mut report = match kind {
            CycleRuleDriver::SixCycle => solve_c6free(g, lists, cfg)?,
            CycleRuleDriver::SevenCycle => solve_c4c7free(g, lists, cfg)?,
        };
        report
            .notes
            .push(format!("delegated from {route}: no induced C{cycle_len}"));
        return Ok(report);
    }
    if let Some(k4) = find_k4(g) {
        driver.note(format!("K4 on {k4:?}"));
        return driver.no();
    }

    let cycles = match enumerate_induced_cycles_with(g, cycle_len, &cfg.cycle_limits) {
        Ok(cs) => cs,
        Err(PatternError::TooManyCycles { cap }) => {
            let mut report = solve_exact_with_reason(g, lists, cfg, ExactReason::CycleOverflow)?;
            report.notes.push(format!(
                "induced C{cycle_len} enumeration exceeded the cap of {cap}"
            ));
            return Ok(report);
        }
        Err(e) => return Err(e.into()),
    };

    // Stage 1 under the faithful all-subsets policy first, if requested.
    if cfg.stage1_policy == SubsetPolicy::All {
        let prep = full_p_propagation(
            g,
            lists,
            cycle_len,
            SubsetPolicy::All,
            &RuleSet::basic(),
            cfg,
        )?;
        driver.absorb(prep.branches, prep.rule_steps);
        match prep.summary {
            PSummary::Yes(col) => return driver.yes(g, lists, col),
            PSummary::AllNo => return driver.no(),
            PSummary::Mixed => {}
        }
    }

    // Stage 1 over the cycle family, tracking the pattern branches whose
    // refutation the stage-2 rule depends on.
    let basic = RuleSet::basic();
    let basic_cache = CycleCache::default();
    let mut family_all_no = true;
    for cycle in &cycles {
        let pres = enumerate_promising(g, lists, cycle.vertices(), cfg.n0_bound)?;
        for (i, pre) in pres.iter().enumerate() {
            driver.stats.branches += 1;
            let restricted = crate::lists::restrict_to_precolouring(lists, pre);
            let run = propagate_cached(g, &restricted, &basic, &basic_cache);
            driver.stats.rule_steps += run.trace.steps.len() as u64;
            match run.outcome {
                PropagationOutcome::Yes(col) => return driver.yes(g, lists, col),
                PropagationOutcome::No => {}
                PropagationOutcome::Unknown(_) => {
                    family_all_no = false;
                    let is_pattern = match kind {
                        CycleRuleDriver::SixCycle => repeats_at_distance_two(pre, cycle.vertices()),
                        CycleRuleDriver::SevenCycle => {
                            repeats_at_distance_two_exclusively(pre, cycle.vertices())
                        }
                    };
                    if is_pattern {
                        return Err(SolverError::OutOfClass {
                            route,
                            detail: format!(
                                "distance-2 repeat precolouring {i} of an induced C{cycle_len} \
                                 was not refuted"
                            ),
                        });
                    }
                }
            }
        }
    }
    if family_all_no {
        return driver.no();
    }

    // Stage 2: one chosen cycle (the enumeration emits the lexicographic
    // least first) with the cycle rule enabled.
    let chosen = cycles[0].vertices().to_vec();
    let (rules2, cache2) = match kind {
        CycleRuleDriver::SixCycle => (
            RuleSet::basic().with_c6(),
            CycleCache {
                c6: cycles,
                c7: Vec::new(),
            },
        ),
        CycleRuleDriver::SevenCycle => (
            RuleSet::basic().with_c7(),
            CycleCache {
                c6: Vec::new(),
                c7: cycles,
            },
        ),
    };
    let report = full_n0_propagation_cached(g, lists, &chosen, &rules2, &cache2, cfg)?;
    driver.absorb(report.branches.len() as u64, report.rule_steps);
    match report.summary {
        N0Summary::Yes(col) => driver.yes(g, lists, col),
        N0Summary::AllNo => driver.no(),
        N0Summary::Mixed(idx) => Err(SolverError::OutOfClass {
            route,
            detail: format!(
                "{} stage-2 branch(es) left undecided with the cycle rule enabled",
                idx.len()
            ),
        }),
    }
}

/// Exact branching decision: propagate with the unconditional rules, then
/// branch on a full-list vertex. Exponential worst case; used as the
/// dispatcher fallback and as a test-oracle accelerator.
pub fn solve_exact(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    solve_exact_with_reason(g, lists, cfg, ExactReason::Direct)
}

fn solve_exact_with_reason(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
    reason: ExactReason,
) -> Result<SolveReport, SolverError> {
    let mut driver = Driver::new(Route::Exact(reason));
    let cache = CycleCache::default();
    let mut nodes = 0u64;
    let found = exact_search(g, lists, cfg, &cache, &mut nodes, &mut driver.stats)?;
    driver.stats.branches = nodes;
    match found {
        Some(col) => driver.yes(g, lists, col),
        None => driver.no(),
    }
}

fn exact_search(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
    cache: &CycleCache,
    nodes: &mut u64,
    stats: &mut SolveStats,
) -> Result<Option<Colouring>, SolverError> {
    *nodes += 1;
    if let Some(budget) = cfg.node_budget {
        if *nodes > budget {
            return Err(SolverError::Budget { nodes: *nodes });
        }
    }
    let run = propagate_cached(g, lists, &RuleSet::basic(), cache);
    stats.rule_steps += run.trace.steps.len() as u64;
    let reduced = match run.outcome {
        PropagationOutcome::Yes(col) => return Ok(Some(col)),
        PropagationOutcome::No => return Ok(None),
        PropagationOutcome::Unknown(reduced) => reduced,
    };

    // Branch on the full-list vertex whose closed neighbourhood holds the
    // most full lists; a greedy step towards all lists being small.
    let branch_vertex = g
        .vertices()
        .filter(|&v| reduced.size(v) == 3)
        .max_by_key(|&v| {
            let covered = g
                .neighbours(v)
                .iter()
                .filter(|&&u| reduced.size(u) == 3)
                .count();
            (covered, std::cmp::Reverse(v))
        })
        .expect("unknown outcome leaves a full list");
    for colour in mask_colours(reduced.get(branch_vertex)) {
        let mut child = reduced.clone();
        child.set(branch_vertex, colour_bit(colour));
        if let Some(col) = exact_search(g, &child, cfg, cache, nodes, stats)? {
            return Ok(Some(col));
        }
    }
    Ok(None)
}

/// Total dispatcher: routes by [`ClassProfile`] in fixed priority and
/// falls back to exact search, converting driver out-of-class errors into
/// a rescue run with a warning note. Fails only if a node budget is
/// configured and exhausted.
pub fn dispatch_solve(
    g: &Graph,
    lists: &ListAssignment,
    cfg: &SolveConfig,
) -> Result<SolveReport, SolverError> {
    let profile = classify(g);
    let attempt = if !profile.diameter.at_most(2) && g.n() > 1 {
        let mut report = solve_exact_with_reason(g, lists, cfg, ExactReason::LargeDiameter)?;
        report.notes.push(format!(
            "unsupported class: diameter {} above 2; decided exactly",
            profile.diameter
        ));
        return Ok(report);
    } else if profile.ck_free(5) {
        solve_c5free(g, lists, cfg)
    } else if profile.ck_free(6) {
        solve_c6free(g, lists, cfg)
    } else if profile.ck_free(4) && profile.ck_free(7) {
        solve_c4c7free(g, lists, cfg)
    } else if profile.ck_free(4) && profile.ck_free(8) {
        solve_c4c8free(g, lists, cfg)
    } else if profile.ck_free(4) && profile.ck_free(9) {
        solve_c4c9free(g, lists, cfg)
    } else if profile.ck_free(3) && profile.ck_free(4) {
        let mut report = solve_exact_with_reason(g, lists, cfg, ExactReason::TriangleSquareFree)?;
        report.notes.push(
            "triangle- and square-free diameter-2 graphs form a finite class; decided exactly"
                .into(),
        );
        return Ok(report);
    } else {
        let mut report = solve_exact_with_reason(g, lists, cfg, ExactReason::UnmatchedClass)?;
        report
            .notes
            .push("warning: no supported class matched; decided exactly".into());
        return Ok(report);
    };

    match attempt {
        Ok(report) => Ok(report),
        Err(SolverError::Budget { nodes }) => Err(SolverError::Budget { nodes }),
        Err(err) => {
            let mut report = solve_exact_with_reason(g, lists, cfg, ExactReason::Rescue)?;
            report.notes.push(format!(
                "warning: polynomial driver failed ({err}); decided exactly"
            ));
            Ok(report)
        }
    }
}
