//! The rule engine: list-reduction rules applied exhaustively until a
//! fixpoint, ending in `Yes`, `No` or `Unknown`.
//!
//! Rules 1 and 2 are terminal checks and always active: an empty list
//! anywhere means `No`; once every list has size at most 2 the 2-list
//! solver decides. The reducers are:
//!
//! * rule 3 (single colour): a singleton endpoint removes its colour from
//!   every neighbour list containing it;
//! * rule 4 (diamond): the two non-adjacent vertices of a diamond with
//!   distinct size-2 lists both drop to the common colour;
//! * rule 5 (bull): if both bull pendants are pinned to colour `i`, the
//!   apex list intersects with `{i}`;
//! * rule C6 / rule C7: cycle rules on induced 6- and 7-cycles, enabled
//!   only by the drivers whose class analysis makes them safe.
//!
//! Every reducer application strictly shrinks a list, so a run performs at
//! most `3n` reduction steps. The engine processes singleton propagation
//! through a work queue and scans the structural site lists (computed once
//! per run; the graph never changes) only at rule-3 fixpoints, with a fixed
//! priority and site order so that outcome and trace are a pure function of
//! the input.

use std::collections::VecDeque;
use std::fmt;

use crate::graph::{Graph, Vertex};
use crate::lists::{mask_size, mask_to_string, ColourMask, Colouring, ListAssignment, FULL_MASK};
use crate::patterns::{
    all_bull_sites, all_diamond_sites, enumerate_induced_cycles_with, BullSite, CycleLimits,
    DiamondSite, InducedCycle, PatternError,
};
use crate::twosat::solve_2list;

/// Which reducers participate in a run. The cycle rules may only be
/// enabled by drivers that have established their safety for the instance
/// class at hand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RuleSet {
    pub single_colour: bool,
    pub diamond: bool,
    pub bull: bool,
    pub c6: bool,
    pub c7: bool,
}

impl RuleSet {
    /// Rules 3-5, the unconditionally safe reducers.
    pub fn basic() -> Self {
        RuleSet {
            single_colour: true,
            diamond: true,
            bull: true,
            c6: false,
            c7: false,
        }
    }

    pub fn with_c6(mut self) -> Self {
        self.c6 = true;
        self
    }

    pub fn with_c7(mut self) -> Self {
        self.c7 = true;
        self
    }
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::basic()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleId {
    NoEmpty,
    TwoList,
    SingleColour,
    Diamond,
    Bull,
    CycleSix,
    CycleSeven,
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            RuleId::NoEmpty => "rule1",
            RuleId::TwoList => "rule2",
            RuleId::SingleColour => "rule3",
            RuleId::Diamond => "rule4",
            RuleId::Bull => "rule5",
            RuleId::CycleSix => "rule-c6",
            RuleId::CycleSeven => "rule-c7",
        };
        f.write_str(name)
    }
}

/// One rule application: the site it fired on and the list changes it made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: RuleId,
    pub site: Vec<Vertex>,
    pub changes: Vec<(Vertex, ColourMask, ColourMask)>,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} site=", self.rule)?;
        for (i, v) in self.site.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        for (v, before, after) in &self.changes {
            write!(
                f,
                " {v}:{}->{}",
                mask_to_string(*before),
                mask_to_string(*after)
            )?;
        }
        Ok(())
    }
}

/// Ordered log of the reduction steps of one run. Replaying it from the
/// input assignment reproduces the final assignment.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleTrace {
    pub steps: Vec<TraceStep>,
}

impl RuleTrace {
    pub fn replay(&self, start: &ListAssignment) -> ListAssignment {
        let mut lists = start.clone();
        for step in &self.steps {
            for &(v, _, after) in &step.changes {
                lists.set(v, after);
            }
        }
        lists
    }

    /// One line per step, for the CLI trace output.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&step.to_string());
            out.push('\n');
        }
        out
    }
}

/// Tri-state result of an exhaustive run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropagationOutcome {
    /// A full colouring respecting the input assignment.
    Yes(Colouring),
    No,
    /// Fixpoint with no empty list and at least one full list.
    Unknown(ListAssignment),
}

impl PropagationOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, PropagationOutcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, PropagationOutcome::No)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, PropagationOutcome::Unknown(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Propagation {
    pub outcome: PropagationOutcome,
    pub trace: RuleTrace,
}

/// Induced cycles feeding the cycle rules, computed once per graph.
#[derive(Debug, Clone, Default)]
pub struct CycleCache {
    pub c6: Vec<InducedCycle>,
    pub c7: Vec<InducedCycle>,
}

impl CycleCache {
    pub fn build(g: &Graph, rules: &RuleSet, limits: &CycleLimits) -> Result<Self, PatternError> {
        let c6 = if rules.c6 {
            enumerate_induced_cycles_with(g, 6, limits)?
        } else {
            Vec::new()
        };
        let c7 = if rules.c7 {
            enumerate_induced_cycles_with(g, 7, limits)?
        } else {
            Vec::new()
        };
        Ok(CycleCache { c6, c7 })
    }
}

/// Exhaustive propagation from `lists` under `rules`.
///
/// Fails only when a cycle rule is enabled and induced-cycle enumeration
/// overflows its cap.
pub fn propagate(
    g: &Graph,
    lists: &ListAssignment,
    rules: &RuleSet,
) -> Result<Propagation, PatternError> {
    let cache = CycleCache::build(g, rules, &CycleLimits::default())?;
    Ok(propagate_cached(g, lists, rules, &cache))
}

pub(crate) fn propagate_cached(
    g: &Graph,
    lists: &ListAssignment,
    rules: &RuleSet,
    cycles: &CycleCache,
) -> Propagation {
    Engine::new(g, lists.clone(), rules, cycles).run()
}

struct Engine<'a> {
    g: &'a Graph,
    rules: &'a RuleSet,
    cycles: &'a CycleCache,
    lists: ListAssignment,
    steps: Vec<TraceStep>,
    queue: VecDeque<Vertex>,
    queued: Vec<bool>,
    empty_at: Option<Vertex>,
    diamonds: Option<Vec<DiamondSite>>,
    bulls: Option<Vec<BullSite>>,
}

impl<'a> Engine<'a> {
    fn new(
        g: &'a Graph,
        lists: ListAssignment,
        rules: &'a RuleSet,
        cycles: &'a CycleCache,
    ) -> Self {
        Engine {
            g,
            rules,
            cycles,
            lists,
            steps: Vec::new(),
            queue: VecDeque::new(),
            queued: vec![false; g.n()],
            empty_at: None,
            diamonds: None,
            bulls: None,
        }
    }

    fn enqueue(&mut self, v: Vertex) {
        if !self.queued[v as usize] {
            self.queued[v as usize] = true;
            self.queue.push_back(v);
        }
    }

    /// Records and applies one list change; updates the rule-3 queue and
    /// the empty-list flag.
    fn shrink(&mut self, v: Vertex, after: ColourMask) {
        debug_assert!(after & !self.lists.get(v) == 0 && after != self.lists.get(v));
        self.lists.set(v, after);
        if after == 0 {
            self.empty_at.get_or_insert(v);
        } else if mask_size(after) == 1 {
            self.enqueue(v);
        }
    }

    fn run(mut self) -> Propagation {
        for v in self.g.vertices() {
            match self.lists.size(v) {
                0 => {
                    self.empty_at.get_or_insert(v);
                }
                1 => self.enqueue(v),
                _ => {}
            }
        }

        loop {
            if self.empty_at.is_some() {
                return self.finish(PropagationOutcome::No);
            }
            if self.rules.single_colour {
                if let Some(u) = self.queue.pop_front() {
                    self.queued[u as usize] = false;
                    self.fire_single_colour(u);
                    continue;
                }
            } else {
                self.queue.clear();
            }
            if self.rules.diamond && self.try_diamond() {
                continue;
            }
            if self.rules.bull && self.try_bull() {
                continue;
            }
            if self.rules.c6 && self.try_cycle_rule(RuleId::CycleSix) {
                continue;
            }
            if self.rules.c7 && self.try_cycle_rule(RuleId::CycleSeven) {
                continue;
            }
            break;
        }

        debug_assert!(self.empty_at.is_none());
        if self.g.vertices().all(|v| self.lists.size(v) <= 2) {
            let outcome =
                match solve_2list(self.g, &self.lists).expect("fixpoint lists have size 1 or 2") {
                    Some(col) => PropagationOutcome::Yes(col),
                    None => PropagationOutcome::No,
                };
            return self.finish(outcome);
        }
        let lists = self.lists.clone();
        self.finish(PropagationOutcome::Unknown(lists))
    }

    fn finish(self, outcome: PropagationOutcome) -> Propagation {
        debug_assert!(self.steps.len() <= 3 * self.g.n());
        Propagation {
            outcome,
            trace: RuleTrace { steps: self.steps },
        }
    }

    /// Rule 3 from the singleton vertex `u` into all neighbours.
    fn fire_single_colour(&mut self, u: Vertex) {
        let mu = self.lists.get(u);
        debug_assert_eq!(mask_size(mu), 1);
        for i in 0..self.g.neighbours(u).len() {
            let v = self.g.neighbours(u)[i];
            let mv = self.lists.get(v);
            if mv & mu != 0 {
                let after = mv & !mu;
                self.steps.push(TraceStep {
                    rule: RuleId::SingleColour,
                    site: vec![u, v],
                    changes: vec![(v, mv, after)],
                });
                self.shrink(v, after);
                if self.empty_at.is_some() {
                    return;
                }
            }
        }
    }

    fn try_diamond(&mut self) -> bool {
        let g = self.g;
        let sites = self.diamonds.get_or_insert_with(|| all_diamond_sites(g));
        let mut hit = None;
        for &site in sites.iter() {
            let (mx, my) = (self.lists.get(site.x), self.lists.get(site.y));
            if mask_size(mx) == 2 && mask_size(my) == 2 && mx != my {
                hit = Some((site, mx, my));
                break;
            }
        }
        let Some((site, mx, my)) = hit else {
            return false;
        };
        let inter = mx & my;
        self.steps.push(TraceStep {
            rule: RuleId::Diamond,
            site: vec![site.u, site.v, site.x, site.y],
            changes: vec![(site.x, mx, inter), (site.y, my, inter)],
        });
        self.shrink(site.x, inter);
        self.shrink(site.y, inter);
        true
    }

    fn try_bull(&mut self) -> bool {
        let g = self.g;
        let sites = self.bulls.get_or_insert_with(|| all_bull_sites(g));
        let mut hit = None;
        for &site in sites.iter() {
            let (mu, mv) = (self.lists.get(site.u), self.lists.get(site.v));
            if mu == mv && mask_size(mu) == 1 && self.lists.get(site.w) != mu {
                hit = Some((site, mu));
                break;
            }
        }
        let Some((site, mu)) = hit else { return false };
        let mw = self.lists.get(site.w);
        let after = mw & mu;
        self.steps.push(TraceStep {
            rule: RuleId::Bull,
            site: vec![site.u, site.v, site.w, site.x, site.y],
            changes: vec![(site.w, mw, after)],
        });
        self.shrink(site.w, after);
        true
    }

    fn try_cycle_rule(&mut self, rule: RuleId) -> bool {
        let cycles = match rule {
            RuleId::CycleSix => &self.cycles.c6,
            RuleId::CycleSeven => &self.cycles.c7,
            _ => unreachable!(),
        };
        let mut hit: Option<(Vec<Vertex>, Vertex, ColourMask)> = None;
        'outer: for cycle in cycles {
            for xs in orientations(cycle.vertices()) {
                let found = match rule {
                    RuleId::CycleSix => check_c6(&self.lists, &xs),
                    _ => check_c7(&self.lists, &xs),
                };
                if let Some((target, after)) = found {
                    hit = Some((xs, target, after));
                    break 'outer;
                }
            }
        }
        let Some((xs, target, after)) = hit else {
            return false;
        };
        let before = self.lists.get(target);
        self.steps.push(TraceStep {
            rule,
            site: xs,
            changes: vec![(target, before, after)],
        });
        self.shrink(target, after);
        true
    }
}

/// All rotations and reflections of a cycle, in a fixed order.
fn orientations(cycle: &[Vertex]) -> impl Iterator<Item = Vec<Vertex>> + '_ {
    let k = cycle.len();
    (0..k).flat_map(move |rot| {
        [false, true].into_iter().map(move |rev| {
            (0..k)
                .map(|i| {
                    let idx = if rev {
                        (rot + k - i) % k
                    } else {
                        (rot + i) % k
                    };
                    cycle[idx]
                })
                .collect()
        })
    })
}

/// Rule C6 condition on one oriented induced 6-cycle `x1..x6`: the first
/// three lists are singletons covering the whole palette and `x5`'s list
/// differs from `x2`'s; then `x5` must take `x2`'s colour.
fn check_c6(lists: &ListAssignment, xs: &[Vertex]) -> Option<(Vertex, ColourMask)> {
    let m1 = lists.get(xs[0]);
    let m2 = lists.get(xs[1]);
    let m3 = lists.get(xs[2]);
    if mask_size(m1) != 1 || mask_size(m2) != 1 || mask_size(m3) != 1 {
        return None;
    }
    if m1 | m2 | m3 != FULL_MASK {
        return None;
    }
    let m5 = lists.get(xs[4]);
    if m2 == m5 {
        return None;
    }
    Some((xs[4], m2 & m5))
}

/// Rule C7 condition on one oriented induced 7-cycle `x1..x7`: `x1..x4`
/// are singletons, the first three cover the palette, `x4` repeats `x2`,
/// and `x1`'s colour is still admissible on `x6`; then `x6` loses it.
fn check_c7(lists: &ListAssignment, xs: &[Vertex]) -> Option<(Vertex, ColourMask)> {
    let ms: Vec<ColourMask> = xs.iter().map(|&v| lists.get(v)).collect();
    if ms[..4].iter().any(|&m| mask_size(m) != 1) {
        return None;
    }
    if ms[0] | ms[1] | ms[2] != FULL_MASK || ms[3] != ms[1] {
        return None;
    }
    if ms[0] & ms[5] != ms[0] {
        return None;
    }
    Some((xs[5], ms[5] & !ms[0]))
}

/// First vertex with an empty list, if any (the `No` terminal check).
pub fn rule_no_empty(lists: &ListAssignment) -> Option<Vertex> {
    (0..lists.n() as Vertex).find(|&v| lists.size(v) == 0)
}

/// When every list has size at most 2 (and none is empty), decides the
/// instance through the 2-list solver.
pub fn rule_all_small(g: &Graph, lists: &ListAssignment) -> Option<PropagationOutcome> {
    if g.vertices().any(|v| !(1..=2).contains(&lists.size(v))) {
        return None;
    }
    match solve_2list(g, lists).expect("list sizes checked") {
        Some(col) => Some(PropagationOutcome::Yes(col)),
        None => Some(PropagationOutcome::No),
    }
}

/// One rule-3 step on the first applicable pair in vertex order.
pub fn rule_single_colour(g: &Graph, lists: &mut ListAssignment) -> Option<TraceStep> {
    for u in g.vertices() {
        let mu = lists.get(u);
        if mask_size(mu) != 1 {
            continue;
        }
        for &v in g.neighbours(u) {
            let mv = lists.get(v);
            if mv & mu != 0 {
                let after = mv & !mu;
                lists.set(v, after);
                return Some(TraceStep {
                    rule: RuleId::SingleColour,
                    site: vec![u, v],
                    changes: vec![(v, mv, after)],
                });
            }
        }
    }
    None
}

/// One rule-4 step on the first applicable diamond in canonical order.
pub fn rule_diamond(g: &Graph, lists: &mut ListAssignment) -> Option<TraceStep> {
    for site in all_diamond_sites(g) {
        let (mx, my) = (lists.get(site.x), lists.get(site.y));
        if mask_size(mx) == 2 && mask_size(my) == 2 && mx != my {
            let inter = mx & my;
            lists.set(site.x, inter);
            lists.set(site.y, inter);
            return Some(TraceStep {
                rule: RuleId::Diamond,
                site: vec![site.u, site.v, site.x, site.y],
                changes: vec![(site.x, mx, inter), (site.y, my, inter)],
            });
        }
    }
    None
}

/// One rule-5 step on the first applicable bull in apex order.
pub fn rule_bull(g: &Graph, lists: &mut ListAssignment) -> Option<TraceStep> {
    for site in all_bull_sites(g) {
        let (mu, mv) = (lists.get(site.u), lists.get(site.v));
        if mu == mv && mask_size(mu) == 1 && lists.get(site.w) != mu {
            let mw = lists.get(site.w);
            let after = mw & mu;
            lists.set(site.w, after);
            return Some(TraceStep {
                rule: RuleId::Bull,
                site: vec![site.u, site.v, site.w, site.x, site.y],
                changes: vec![(site.w, mw, after)],
            });
        }
    }
    None
}

/// One rule-C6 step; scans every orientation of every induced 6-cycle.
pub fn rule_c6(g: &Graph, lists: &mut ListAssignment) -> Result<Option<TraceStep>, PatternError> {
    cycle_rule_step(g, lists, RuleId::CycleSix)
}

/// One rule-C7 step; scans every orientation of every induced 7-cycle.
pub fn rule_c7(g: &Graph, lists: &mut ListAssignment) -> Result<Option<TraceStep>, PatternError> {
    cycle_rule_step(g, lists, RuleId::CycleSeven)
}

fn cycle_rule_step(
    g: &Graph,
    lists: &mut ListAssignment,
    rule: RuleId,
) -> Result<Option<TraceStep>, PatternError> {
    let k = if rule == RuleId::CycleSix { 6 } else { 7 };
    let cycles = enumerate_induced_cycles_with(g, k, &CycleLimits::default())?;
    for cycle in &cycles {
        for xs in orientations(cycle.vertices()) {
            let found = match rule {
                RuleId::CycleSix => check_c6(lists, &xs),
                _ => check_c7(lists, &xs),
            };
            if let Some((target, after)) = found {
                let before = lists.get(target);
                lists.set(target, after);
                return Ok(Some(TraceStep {
                    rule,
                    site: xs,
                    changes: vec![(target, before, after)],
                }));
            }
        }
    }
    Ok(None)
}
