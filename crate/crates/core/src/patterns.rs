//! Detection and enumeration of the fixed induced subgraphs the propagation
//! rules and class drivers rely on: K4, triangles, diamonds, bulls and
//! induced cycles.
//!
//! Induced cycles are enumerated by ordered DFS path extension with
//! inducedness pruning: a path is only extended by vertices non-adjacent to
//! every non-endpoint path vertex. Cycles are canonicalized by least start
//! vertex and direction (second vertex smaller than last), so each cycle is
//! produced exactly once up to rotation and reflection, in lexicographic
//! order of the canonical vertex sequence.

use std::ops::ControlFlow;

use thiserror::Error;

use crate::graph::{AdjMatrix, Graph, Vertex, VertexBits};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PatternError {
    #[error("cycle length {k} outside the supported range 4..={max}")]
    CycleLengthOutOfRange { k: usize, max: usize },
    #[error("more than {cap} induced cycles; enumeration aborted")]
    TooManyCycles { cap: usize },
    #[error("precondition violated: {0}")]
    PreconditionViolated(&'static str),
    #[error("internal inconsistency: {0}")]
    Internal(&'static str),
}

/// Runtime bounds for cycle search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleLimits {
    /// Largest cycle length accepted by the search routines.
    pub max_len: usize,
    /// Hard cap on enumeration output; exceeding it is an explicit error so
    /// callers can fall back to exact search.
    pub max_cycles: usize,
}

impl Default for CycleLimits {
    fn default() -> Self {
        CycleLimits {
            max_len: 12,
            max_cycles: 100_000,
        }
    }
}

/// A diamond: edge `uv` plus two non-adjacent common neighbours `x`, `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiamondSite {
    pub u: Vertex,
    pub v: Vertex,
    pub x: Vertex,
    pub y: Vertex,
}

impl DiamondSite {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let DiamondSite { u, v, x, y } = *self;
        let distinct = [u, v, x, y];
        let mut d = distinct;
        d.sort_unstable();
        d.windows(2).all(|w| w[0] != w[1])
            && g.has_edge(u, v)
            && g.has_edge(u, x)
            && g.has_edge(u, y)
            && g.has_edge(v, x)
            && g.has_edge(v, y)
            && !g.has_edge(x, y)
    }
}

/// An induced bull: triangle `{x, y, w}` with pendants `u` on `x` and `v`
/// on `y`; `w` is the apex (degree 2 inside the bull).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BullSite {
    pub u: Vertex,
    pub v: Vertex,
    pub w: Vertex,
    pub x: Vertex,
    pub y: Vertex,
}

impl BullSite {
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let BullSite { u, v, w, x, y } = *self;
        let mut d = [u, v, w, x, y];
        d.sort_unstable();
        d.windows(2).all(|p| p[0] != p[1])
            && g.has_edge(x, y)
            && g.has_edge(x, w)
            && g.has_edge(y, w)
            && g.has_edge(u, x)
            && g.has_edge(v, y)
            && !g.has_edge(u, v)
            && !g.has_edge(u, w)
            && !g.has_edge(v, w)
            && !g.has_edge(u, y)
            && !g.has_edge(v, x)
    }
}

/// An induced cycle, stored in canonical traversal order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedCycle {
    vertices: Vec<Vertex>,
}

impl InducedCycle {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Consecutive pairs are edges, all other pairs are non-edges.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let k = self.vertices.len();
        if k < 3 {
            return false;
        }
        let mut sorted = self.vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return false;
        }
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                if g.has_edge(self.vertices[i], self.vertices[j]) != consecutive {
                    return false;
                }
            }
        }
        true
    }
}

/// Either outcome of the odd-cycle search behind the non-bipartite
/// diameter-2 structure fact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TriangleOrC5 {
    Triangle([Vertex; 3]),
    Cycle(InducedCycle),
}

/// First four pairwise-adjacent vertices, if any.
pub fn find_k4(g: &Graph) -> Option<[Vertex; 4]> {
    let adj = AdjMatrix::new(g);
    for &(u, v) in g.edges() {
        let common = common_neighbours(&adj, u, v, g.n());
        for (i, &x) in common.iter().enumerate() {
            for &y in &common[i + 1..] {
                if adj.has_edge(x, y) {
                    return Some([u, v, x, y]);
                }
            }
        }
    }
    None
}

/// First triangle in edge order, if any.
pub fn find_triangle(g: &Graph) -> Option<[Vertex; 3]> {
    for &(u, v) in g.edges() {
        for &w in g.neighbours(u) {
            if w != v && g.has_edge(v, w) {
                return Some([u, v, w]);
            }
        }
    }
    None
}

/// All triangles, each once as an ascending triple.
pub fn triangles(g: &Graph) -> Vec<[Vertex; 3]> {
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        for &w in g.neighbours(v) {
            if w > v && g.has_edge(u, w) {
                out.push([u, v, w]);
            }
        }
    }
    out
}

fn common_neighbours(adj: &AdjMatrix, u: Vertex, v: Vertex, n: usize) -> Vec<Vertex> {
    let ru = adj.row(u);
    let rv = adj.row(v);
    let mut out = Vec::new();
    for w in 0..adj.words() {
        let mut bits = ru[w] & rv[w];
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            let x = w * 64 + b;
            if x < n {
                out.push(x as Vertex);
            }
            bits &= bits - 1;
        }
    }
    out
}

/// First induced `k`-cycle in canonical order, or `None` if the graph is
/// `C_k`-free.
pub fn find_induced_cycle(g: &Graph, k: usize) -> Result<Option<InducedCycle>, PatternError> {
    find_induced_cycle_with(g, k, &CycleLimits::default())
}

pub fn find_induced_cycle_with(
    g: &Graph,
    k: usize,
    limits: &CycleLimits,
) -> Result<Option<InducedCycle>, PatternError> {
    check_cycle_len(k, limits)?;
    let mut found = None;
    cycle_dfs(g, k, &mut |cycle| {
        found = Some(InducedCycle {
            vertices: cycle.to_vec(),
        });
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Every induced `k`-cycle exactly once up to rotation and reflection.
pub fn enumerate_induced_cycles(g: &Graph, k: usize) -> Result<Vec<InducedCycle>, PatternError> {
    enumerate_induced_cycles_with(g, k, &CycleLimits::default())
}

pub fn enumerate_induced_cycles_with(
    g: &Graph,
    k: usize,
    limits: &CycleLimits,
) -> Result<Vec<InducedCycle>, PatternError> {
    check_cycle_len(k, limits)?;
    let mut out = Vec::new();
    let mut overflow = false;
    cycle_dfs(g, k, &mut |cycle| {
        if out.len() == limits.max_cycles {
            overflow = true;
            return ControlFlow::Break(());
        }
        out.push(InducedCycle {
            vertices: cycle.to_vec(),
        });
        ControlFlow::Continue(())
    });
    if overflow {
        return Err(PatternError::TooManyCycles {
            cap: limits.max_cycles,
        });
    }
    Ok(out)
}

fn check_cycle_len(k: usize, limits: &CycleLimits) -> Result<(), PatternError> {
    if k < 4 || k > limits.max_len {
        return Err(PatternError::CycleLengthOutOfRange {
            k,
            max: limits.max_len,
        });
    }
    Ok(())
}

/// DFS over canonical induced paths. `visit` receives each induced k-cycle
/// as a vertex slice; returning `Break` stops the whole search.
fn cycle_dfs<F>(g: &Graph, k: usize, visit: &mut F)
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let n = g.n();
    if n < k {
        return;
    }
    let adj = AdjMatrix::new(g);
    let mut path: Vec<Vertex> = Vec::with_capacity(k);
    let mut on_path = VertexBits::new(n);
    for start in 0..n as Vertex {
        path.push(start);
        on_path.insert(start);
        // banned = neighbourhoods of all path vertices except the last;
        // banned_inner additionally excludes the start's neighbourhood.
        let banned = VertexBits::new(n);
        let banned_inner = VertexBits::new(n);
        let flow = extend(
            g,
            &adj,
            k,
            &mut path,
            &mut on_path,
            &banned,
            &banned_inner,
            visit,
        );
        path.pop();
        on_path.remove(start);
        if flow.is_break() {
            return;
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn extend<F>(
    g: &Graph,
    adj: &AdjMatrix,
    k: usize,
    path: &mut Vec<Vertex>,
    on_path: &mut VertexBits,
    banned: &VertexBits,
    banned_inner: &VertexBits,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[Vertex]) -> ControlFlow<()>,
{
    let start = path[0];
    let last = *path.last().unwrap();

    if path.len() == k - 1 {
        // Closing vertex: adjacent to both ends, independent of the interior,
        // and larger than the second vertex (reflection canonicalization).
        let second = path[1];
        for &w in g.neighbours(last) {
            if w <= second || on_path.contains(w) || banned_inner.contains(w) {
                continue;
            }
            if !adj.has_edge(w, start) {
                continue;
            }
            path.push(w);
            let flow = visit(path);
            path.pop();
            if flow.is_break() {
                return ControlFlow::Break(());
            }
        }
        return ControlFlow::Continue(());
    }

    // Interior extension: adjacent to the path end only.
    let mut next_banned = banned.clone();
    next_banned.or_row(adj.row(last));
    let mut next_banned_inner = banned_inner.clone();
    if path.len() >= 2 {
        next_banned_inner.or_row(adj.row(last));
    }
    for &w in g.neighbours(last) {
        if w <= start || on_path.contains(w) || banned.contains(w) {
            continue;
        }
        path.push(w);
        on_path.insert(w);
        let flow = extend(
            g,
            adj,
            k,
            path,
            on_path,
            &next_banned,
            &next_banned_inner,
            visit,
        );
        path.pop();
        on_path.remove(w);
        if flow.is_break() {
            return ControlFlow::Break(());
        }
    }
    ControlFlow::Continue(())
}

/// A triangle or an induced 5-cycle, guaranteed to exist in non-bipartite
/// graphs of diameter at most 2. Violated preconditions are the caller's
/// bug and reported as an error.
pub fn find_triangle_or_induced_c5(g: &Graph) -> Result<TriangleOrC5, PatternError> {
    if let Some(t) = find_triangle(g) {
        return Ok(TriangleOrC5::Triangle(t));
    }
    if let Some(c) = find_induced_cycle(g, 5)? {
        return Ok(TriangleOrC5::Cycle(c));
    }
    if g.bipartition().is_some() {
        return Err(PatternError::PreconditionViolated("graph is bipartite"));
    }
    if !g.diameter().at_most(2) {
        return Err(PatternError::PreconditionViolated(
            "graph has diameter greater than 2",
        ));
    }
    Err(PatternError::Internal(
        "non-bipartite diameter-2 graph without triangle or induced C5",
    ))
}

/// All diamond sites in which `x` is one of the two non-adjacent vertices
/// (the pair whose lists shrink).
pub fn diamond_sites_at(g: &Graph, x: Vertex) -> Vec<DiamondSite> {
    let mut out = Vec::new();
    let nx = g.neighbours(x);
    for (i, &u) in nx.iter().enumerate() {
        for &v in &nx[i + 1..] {
            if !g.has_edge(u, v) {
                continue;
            }
            // u, v adjacent and both adjacent to x; find the fourth vertex.
            for &y in g.neighbours(u) {
                if y == x || y == v || !g.has_edge(v, y) || g.has_edge(x, y) {
                    continue;
                }
                out.push(DiamondSite { u, v, x, y });
            }
        }
    }
    out
}

/// All induced bulls with apex `w`.
pub fn bull_sites_at(g: &Graph, w: Vertex) -> Vec<BullSite> {
    let mut out = Vec::new();
    let nw = g.neighbours(w);
    for (i, &x) in nw.iter().enumerate() {
        for &y in &nw[i + 1..] {
            if !g.has_edge(x, y) {
                continue;
            }
            for &u in g.neighbours(x) {
                if u == w || u == y || g.has_edge(u, w) || g.has_edge(u, y) {
                    continue;
                }
                for &v in g.neighbours(y) {
                    if v == w || v == x || v == u {
                        continue;
                    }
                    if g.has_edge(v, w) || g.has_edge(v, x) || g.has_edge(u, v) {
                        continue;
                    }
                    out.push(BullSite { u, v, w, x, y });
                }
            }
        }
    }
    out
}

/// All diamond sites of the graph, each unordered site once, in canonical
/// order (edge order, then the non-adjacent pair ascending).
pub(crate) fn all_diamond_sites(g: &Graph) -> Vec<DiamondSite> {
    let adj = AdjMatrix::new(g);
    let mut out = Vec::new();
    for &(u, v) in g.edges() {
        let common = common_neighbours(&adj, u, v, g.n());
        for (i, &x) in common.iter().enumerate() {
            for &y in &common[i + 1..] {
                if !adj.has_edge(x, y) {
                    out.push(DiamondSite { u, v, x, y });
                }
            }
        }
    }
    out
}

/// All bull sites of the graph in apex order.
pub(crate) fn all_bull_sites(g: &Graph) -> Vec<BullSite> {
    let mut out = Vec::new();
    for w in g.vertices() {
        out.extend(bull_sites_at(g, w));
    }
    out
}
