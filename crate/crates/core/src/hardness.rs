//! Construction and empirical verification of the NAE-3SAT colouring
//! gadget family.
//!
//! From a formula with exactly-3-literal clauses we build a graph with one
//! hub vertex `z`, a literal pair `v_i, v_i'` per variable (an edge, both
//! adjacent to `z`), a triangle per clause, and an edge from each clause
//! slot to the literal vertex it mentions. Subdividing every
//! literal-clause edge `p` times (each new vertex adjacent to `z`) removes
//! short induced cycles while preserving 3-colourability, which tracks
//! NAE-satisfiability of the formula. The verifier recomputes diameter and
//! an induced-cycle census instead of trusting either claim.

use std::fmt;

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::lists::ListAssignment;
use crate::oracle::{oracle_list_colour, OracleError};
use crate::patterns::{enumerate_induced_cycles_with, triangles, CycleLimits, PatternError};

/// Brute-force bound on the number of variables.
pub const NAE_VARIABLE_BOUND: u32 = 30;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HardnessError {
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("formula has {n} variables, over the brute-force bound {bound}")]
    TooManyVariables { n: u32, bound: u32 },
    #[error("census bound {t} must be an even number in 6..={max}")]
    BadCensusBound { t: usize, max: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
}

/// A literal: 0-based variable index plus sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-{}", self.var + 1)
        } else {
            write!(f, "{}", self.var + 1)
        }
    }
}

/// A conjunction of 3-literal clauses under not-all-equal semantics.
/// The literal order inside each clause is kept as given in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeFormula {
    pub num_vars: u32,
    pub clauses: Vec<[Literal; 3]>,
}

impl NaeFormula {
    /// Parses DIMACS-style clause lines: signed 1-based variable indices,
    /// each clause 0-terminated, exactly three literals per clause.
    /// `c` comment lines and an optional `p cnf` header are accepted.
    pub fn parse(text: &str) -> Result<Self, HardnessError> {
        let mut clauses = Vec::new();
        let mut num_vars: u32 = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('p') {
                let fields: Vec<&str> = line.split_ascii_whitespace().collect();
                if fields.len() == 4 && fields[1] == "cnf" {
                    if let Ok(n) = fields[2].parse::<u32>() {
                        num_vars = num_vars.max(n);
                        continue;
                    }
                }
                return Err(HardnessError::Parse {
                    line: line_no,
                    msg: format!("bad header {line:?}"),
                });
            }
            let mut lits = Vec::new();
            let mut terminated = false;
            for field in line.split_ascii_whitespace() {
                let value: i64 = field.parse().map_err(|_| HardnessError::Parse {
                    line: line_no,
                    msg: format!("bad literal {field:?}"),
                })?;
                if value == 0 {
                    terminated = true;
                    break;
                }
                let var = value.unsigned_abs() as u32 - 1;
                num_vars = num_vars.max(var + 1);
                lits.push(Literal {
                    var,
                    negated: value < 0,
                });
            }
            if !terminated {
                return Err(HardnessError::Parse {
                    line: line_no,
                    msg: "clause line is not 0-terminated".into(),
                });
            }
            if lits.len() != 3 {
                return Err(HardnessError::Parse {
                    line: line_no,
                    msg: format!("clause has {} literals, expected 3", lits.len()),
                });
            }
            clauses.push([lits[0], lits[1], lits[2]]);
        }
        Ok(NaeFormula { num_vars, clauses })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Largest number of clauses any variable occurs in. The classical
    /// hardness statement restricts this to 3; the construction does not
    /// depend on it, so it is reported rather than enforced.
    pub fn max_occurrences(&self) -> usize {
        let mut counts = vec![0usize; self.num_vars as usize];
        for clause in &self.clauses {
            let mut seen = [u32::MAX; 3];
            for (i, lit) in clause.iter().enumerate() {
                if !seen[..i].contains(&lit.var) {
                    counts[lit.var as usize] += 1;
                }
                seen[i] = lit.var;
            }
        }
        counts.into_iter().max().unwrap_or(0)
    }
}

/// A satisfying assignment: every clause gets at least one true and at
/// least one false literal. Brute force over all assignments.
pub fn nae_satisfiable(f: &NaeFormula) -> Result<Option<Vec<bool>>, HardnessError> {
    if f.num_vars > NAE_VARIABLE_BOUND {
        return Err(HardnessError::TooManyVariables {
            n: f.num_vars,
            bound: NAE_VARIABLE_BOUND,
        });
    }
    'assignments: for bits in 0u64..(1u64 << f.num_vars) {
        let value = |lit: Literal| {
            (bits >> lit.var) & 1 == 1 && !lit.negated || (bits >> lit.var) & 1 == 0 && lit.negated
        };
        for clause in &f.clauses {
            let trues = clause.iter().filter(|&&l| value(l)).count();
            if trues == 0 || trues == 3 {
                continue 'assignments;
            }
        }
        return Ok(Some(
            (0..f.num_vars).map(|i| (bits >> i) & 1 == 1).collect(),
        ));
    }
    Ok(None)
}

/// What a gadget vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexRole {
    /// The hub `z`, adjacent to every literal and subdivision vertex.
    Hub,
    Literal {
        var: u32,
        negated: bool,
    },
    Clause {
        clause: u32,
        slot: u8,
    },
    /// Position `1..=p` along the subdivided occurrence edge.
    Subdivision {
        edge: u32,
        position: u32,
    },
}

impl fmt::Display for VertexRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VertexRole::Hub => write!(f, "z"),
            VertexRole::Literal { var, negated } => {
                write!(f, "v{}{}", var + 1, if negated { "'" } else { "" })
            }
            VertexRole::Clause { clause, slot } => write!(f, "c{}_{}", clause + 1, slot + 1),
            VertexRole::Subdivision { edge, position } => write!(f, "s{edge}_{position}"),
        }
    }
}

/// The reduction graph with its role map and construction parameters.
#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub graph: Graph,
    pub roles: Vec<VertexRole>,
    pub formula: NaeFormula,
    /// Subdivisions applied to each occurrence edge.
    pub p: u32,
}

impl GadgetGraph {
    pub fn hub(&self) -> Vertex {
        0
    }
}

/// Builds the unsubdivided gadget: `1 + 2n + 3m` vertices and
/// `3n + 6m` edges.
pub fn build_gadget(f: &NaeFormula) -> GadgetGraph {
    build_subdivided(f, 0)
}

/// Rebuilds the gadget from its formula with `p` subdivisions per
/// occurrence edge (an absolute level, not applied on top of the input).
pub fn subdivide_gadget(gg: &GadgetGraph, p: u32) -> GadgetGraph {
    build_subdivided(&gg.formula, p)
}

fn build_subdivided(f: &NaeFormula, p: u32) -> GadgetGraph {
    let n = f.num_vars;
    let m = f.num_clauses() as u32;
    let base = 1 + 2 * n + 3 * m;
    let total = base + 3 * m * p;

    let lit_vertex = |lit: Literal| 1 + 2 * lit.var + u32::from(lit.negated);
    let clause_vertex = |j: u32, s: u32| 1 + 2 * n + 3 * j + s;

    let mut roles = Vec::with_capacity(total as usize);
    roles.push(VertexRole::Hub);
    for var in 0..n {
        roles.push(VertexRole::Literal {
            var,
            negated: false,
        });
        roles.push(VertexRole::Literal { var, negated: true });
    }
    for clause in 0..m {
        for slot in 0..3u8 {
            roles.push(VertexRole::Clause { clause, slot });
        }
    }

    let mut edges: Vec<(Vertex, Vertex)> = Vec::new();
    for var in 0..n {
        let v = 1 + 2 * var;
        edges.push((v, v + 1));
        edges.push((0, v));
        edges.push((0, v + 1));
    }
    for j in 0..m {
        for s in 0..3 {
            for t in s + 1..3 {
                edges.push((clause_vertex(j, s), clause_vertex(j, t)));
            }
        }
    }
    let mut next = base;
    for (j, clause) in f.clauses.iter().enumerate() {
        for (s, &lit) in clause.iter().enumerate() {
            let edge_id = 3 * j as u32 + s as u32;
            let from = lit_vertex(lit);
            let to = clause_vertex(j as u32, s as u32);
            let mut prev = from;
            for position in 1..=p {
                let mid = next;
                next += 1;
                roles.push(VertexRole::Subdivision {
                    edge: edge_id,
                    position,
                });
                edges.push((prev, mid));
                edges.push((0, mid));
                prev = mid;
            }
            edges.push((prev, to));
        }
    }
    debug_assert_eq!(next, total);
    let graph = Graph::new(total as usize, &edges).expect("gadget edges are valid");
    debug_assert_eq!(graph.edge_count() as u32, 3 * n + 6 * m + 6 * m * p);
    GadgetGraph {
        graph,
        roles,
        formula: f.clone(),
        p,
    }
}

/// Diameter and induced-cycle census of a gadget.
#[derive(Debug, Clone)]
pub struct GadgetReport {
    pub diameter: crate::graph::Diameter,
    /// `(cycle length, induced count)` for every length in `3..=t`.
    pub cycle_counts: Vec<(usize, usize)>,
    /// Induced 5-cycles avoiding the hub; the construction analysis says
    /// there are none, so any hit is a discrepancy finding, not a failure.
    pub c5_without_hub: usize,
    pub pass: bool,
}

impl fmt::Display for GadgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "diameter: {}", self.diameter)?;
        for &(k, count) in &self.cycle_counts {
            writeln!(f, "induced-c{k}: {count}")?;
        }
        if self.c5_without_hub > 0 {
            writeln!(
                f,
                "discrepancy: {} induced C5(s) avoiding the hub",
                self.c5_without_hub
            )?;
        }
        writeln!(f, "verdict: {}", if self.pass { "pass" } else { "fail" })
    }
}

/// Recomputes the gadget's claimed properties: diameter at most 4 and no
/// induced cycle of any length in `4..=t` other than 5. The census also
/// reports whether every induced 5-cycle passes through the hub.
pub fn verify_gadget(gg: &GadgetGraph, t: usize) -> Result<GadgetReport, HardnessError> {
    let limits = CycleLimits::default();
    if t < 6 || !t.is_multiple_of(2) || t > limits.max_len {
        return Err(HardnessError::BadCensusBound {
            t,
            max: limits.max_len,
        });
    }
    let diameter = gg.graph.diameter();
    let mut cycle_counts = vec![(3, triangles(&gg.graph).len())];
    let mut c5_without_hub = 0;
    let mut clean = true;
    for k in 4..=t {
        let cycles = enumerate_induced_cycles_with(&gg.graph, k, &limits)?;
        if k == 5 {
            c5_without_hub = cycles
                .iter()
                .filter(|c| !c.vertices().contains(&gg.hub()))
                .count();
        } else if !cycles.is_empty() {
            clean = false;
        }
        cycle_counts.push((k, cycles.len()));
    }
    let pass = diameter.at_most(4) && clean;
    Ok(GadgetReport {
        diameter,
        cycle_counts,
        c5_without_hub,
        pass,
    })
}

/// True iff the formula is NAE-satisfiable exactly when the gadget is
/// 3-colourable (both sides decided by brute force).
pub fn check_equivalence(f: &NaeFormula, gg: &GadgetGraph) -> Result<bool, HardnessError> {
    let nae = nae_satisfiable(f)?;
    let lists = ListAssignment::full(gg.graph.n());
    let colouring = oracle_list_colour(&gg.graph, &lists)?;
    Ok(nae.is_some() == colouring.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(lits: [i32; 3]) -> [Literal; 3] {
        lits.map(|v| Literal {
            var: v.unsigned_abs() - 1,
            negated: v < 0,
        })
    }

    #[test]
    fn parses_dimacs_clauses() {
        let f = NaeFormula::parse("1 2 3 0\n").unwrap();
        assert_eq!(f.num_vars, 3);
        assert_eq!(f.clauses, vec![clause([1, 2, 3])]);

        let f = NaeFormula::parse("c header\np cnf 4 2\n1 2 3 0\n3 -3 4 0\n").unwrap();
        assert_eq!(f.num_vars, 4);
        assert_eq!(f.clauses[1], clause([3, -3, 4]));
    }

    #[test]
    fn rejects_bad_clauses() {
        assert!(matches!(
            NaeFormula::parse("1 2 0\n"),
            Err(HardnessError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            NaeFormula::parse("1 2 3\n"),
            Err(HardnessError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            NaeFormula::parse("1 x 3 0\n"),
            Err(HardnessError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn nae_semantics() {
        let f = NaeFormula {
            num_vars: 3,
            clauses: vec![clause([1, 2, 3])],
        };
        assert!(nae_satisfiable(&f).unwrap().is_some());

        let f = NaeFormula {
            num_vars: 1,
            clauses: vec![clause([1, 1, 1])],
        };
        assert!(nae_satisfiable(&f).unwrap().is_none());

        // A clause with x and !x is satisfied under every assignment.
        let f = NaeFormula {
            num_vars: 4,
            clauses: vec![clause([3, -3, 4])],
        };
        let a = nae_satisfiable(&f).unwrap().unwrap();
        assert_eq!(a.len(), 4);
    }

    #[test]
    fn gadget_counts_match_closed_forms() {
        // Two clauses over four variables.
        let f = NaeFormula::parse("1 2 3 0\n3 -3 4 0\n").unwrap();
        let gg = build_gadget(&f);
        assert_eq!(gg.graph.n(), 15);
        assert_eq!(gg.graph.edge_count(), 24);
        assert_eq!(gg.roles.len(), 15);

        let f = NaeFormula {
            num_vars: 1,
            clauses: vec![],
        };
        let gg = build_gadget(&f);
        assert_eq!(gg.graph.n(), 3);
        assert_eq!(gg.graph.edge_count(), 3);

        let f = NaeFormula::parse("1 2 3 0\n").unwrap();
        let gg = build_gadget(&f);
        assert_eq!(gg.graph.n(), 10);
        assert_eq!(gg.graph.edge_count(), 15);
    }

    #[test]
    fn subdivision_counts() {
        let f = NaeFormula::parse("1 2 3 0\n").unwrap();
        let base = build_gadget(&f);

        let same = subdivide_gadget(&base, 0);
        assert_eq!(same.graph.n(), base.graph.n());
        assert_eq!(same.graph.edge_count(), base.graph.edge_count());

        let two = subdivide_gadget(&base, 2);
        assert_eq!(two.graph.n(), base.graph.n() + 6);
        assert_eq!(two.graph.edge_count(), base.graph.edge_count() + 12);
        // Every subdivision vertex hangs off the hub.
        for (v, role) in two.roles.iter().enumerate() {
            if matches!(role, VertexRole::Subdivision { .. }) {
                assert!(two.graph.has_edge(0, v as Vertex));
            }
        }

        let f6 = NaeFormula::parse("1 2 3 0\n3 -3 4 0\n").unwrap();
        let four = subdivide_gadget(&build_gadget(&f6), 4);
        assert_eq!(four.graph.n(), 15 + 24);
    }

    #[test]
    fn verifier_passes_subdivided_and_fails_flat() {
        let f = NaeFormula::parse("1 2 3 0\n").unwrap();
        let gg = subdivide_gadget(&build_gadget(&f), 6);
        let report = verify_gadget(&gg, 6).unwrap();
        assert!(report.pass, "{report}");
        assert_eq!(report.c5_without_hub, 0);

        // The formula with a variable and its negation in one clause has an
        // induced C4 in the unsubdivided gadget.
        let f = NaeFormula::parse("3 -3 4 0\n").unwrap();
        let flat = build_gadget(&f);
        let report = verify_gadget(&flat, 6).unwrap();
        assert!(!report.pass);
        assert!(report.cycle_counts.iter().any(|&(k, c)| k == 4 && c > 0));
    }

    #[test]
    fn verifier_rejects_bad_bounds() {
        let f = NaeFormula::parse("1 2 3 0\n").unwrap();
        let gg = build_gadget(&f);
        assert!(matches!(
            verify_gadget(&gg, 5),
            Err(HardnessError::BadCensusBound { .. })
        ));
        assert!(matches!(
            verify_gadget(&gg, 4),
            Err(HardnessError::BadCensusBound { .. })
        ));
        assert!(matches!(
            verify_gadget(&gg, 14),
            Err(HardnessError::BadCensusBound { .. })
        ));
    }

    #[test]
    fn equivalence_on_known_formulas() {
        // Satisfiable single clause, both parities of p.
        let f = NaeFormula::parse("1 2 3 0\n").unwrap();
        for p in [0, 1, 2, 3] {
            let gg = subdivide_gadget(&build_gadget(&f), p);
            assert!(check_equivalence(&f, &gg).unwrap(), "p={p}");
        }

        // Unsatisfiable pair of clauses.
        let f = NaeFormula::parse("1 1 1 0\n-1 -1 -1 0\n").unwrap();
        let gg = subdivide_gadget(&build_gadget(&f), 2);
        assert!(check_equivalence(&f, &gg).unwrap());

        // The two-clause example with p = 0.
        let f = NaeFormula::parse("1 2 3 0\n3 -3 4 0\n").unwrap();
        let gg = build_gadget(&f);
        assert!(check_equivalence(&f, &gg).unwrap());
    }

    #[test]
    fn occurrence_counts_are_reported() {
        let f = NaeFormula::parse("1 2 3 0\n1 2 4 0\n1 3 4 0\n1 2 3 0\n").unwrap();
        assert_eq!(f.max_occurrences(), 4);
        let f = NaeFormula::parse("3 -3 4 0\n").unwrap();
        assert_eq!(f.max_occurrences(), 1);
    }
}
