//! Immutable simple undirected graphs with distance, diameter and
//! bipartiteness queries.
//!
//! Vertices are dense indices `0..n`; any external labelling is mapped at
//! the I/O boundary. All algorithm modules index by vertex.

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

/// Dense vertex identifier.
pub type Vertex = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
}

/// An immutable simple undirected graph.
///
/// No self-loops, no parallel edges; neighbour lists are sorted, so
/// adjacency tests cost `O(log deg)`. Construction deduplicates edges.
/// The struct is immutable after construction and safe to share across
/// threads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<Vec<Vertex>>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut canon: Vec<(Vertex, Vertex)> = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            for w in [u, v] {
                if w as usize >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            canon.push((u.min(v), u.max(v)));
        }
        canon.sort_unstable();
        canon.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &canon {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: canon,
            adj,
        })
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// The cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let edges: Vec<(Vertex, Vertex)> = (0..n)
            .map(|i| (i as Vertex, ((i + 1) % n) as Vertex))
            .collect();
        Graph::new(n, &edges).expect("cycle edges are valid")
    }

    /// The complete graph on `n` vertices.
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u as Vertex, v as Vertex));
            }
        }
        Graph::new(n, &edges).expect("complete-graph edges are valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        0..self.n as Vertex
    }

    /// Canonical edge list: each edge once as `(min, max)`, sorted.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sorted neighbour list of `v`.
    pub fn neighbours(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// BFS distances from `src`; unreachable vertices get `u32::MAX`.
    pub fn bfs_distances(&self, src: Vertex) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src as usize] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = dist[u as usize];
            for &v in self.neighbours(u) {
                if dist[v as usize] == u32::MAX {
                    dist[v as usize] = du + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Exact diameter via one BFS per vertex. `Finite(0)` for `n <= 1`,
    /// `Infinite` iff the graph is disconnected.
    pub fn diameter(&self) -> Diameter {
        if self.n <= 1 {
            return Diameter::Finite(0);
        }
        let mut max = 0u32;
        for v in self.vertices() {
            for &d in &self.bfs_distances(v) {
                if d == u32::MAX {
                    return Diameter::Infinite;
                }
                max = max.max(d);
            }
        }
        Diameter::Finite(max)
    }

    pub fn is_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        self.bfs_distances(0).iter().all(|&d| d != u32::MAX)
    }

    /// A two-sided partition into independent sets, or `None` if the graph
    /// has an odd cycle. Disconnected graphs are handled per component,
    /// with each component root placed on side A.
    pub fn bipartition(&self) -> Option<Bipartition> {
        let mut side = vec![2u8; self.n];
        let mut queue = VecDeque::new();
        for root in self.vertices() {
            if side[root as usize] != 2 {
                continue;
            }
            side[root as usize] = 0;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                let su = side[u as usize];
                for &v in self.neighbours(u) {
                    if side[v as usize] == 2 {
                        side[v as usize] = 1 - su;
                        queue.push_back(v);
                    } else if side[v as usize] == su {
                        return None;
                    }
                }
            }
        }
        let part_a = self.vertices().filter(|&v| side[v as usize] == 0).collect();
        let part_b = self.vertices().filter(|&v| side[v as usize] == 1).collect();
        Some(Bipartition { part_a, part_b })
    }

    /// True iff every cross pair of the bipartition is an edge.
    ///
    /// Expects `b` to be a valid bipartition of this graph.
    pub fn is_complete_bipartite(&self, b: &Bipartition) -> bool {
        debug_assert!(b.is_valid_for(self));
        self.edge_count() == b.part_a.len() * b.part_b.len()
    }
}

/// Diameter of a graph; `Infinite` for disconnected graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Diameter {
    Finite(u32),
    Infinite,
}

impl Diameter {
    pub fn at_most(self, bound: u32) -> bool {
        match self {
            Diameter::Finite(d) => d <= bound,
            Diameter::Infinite => false,
        }
    }
}

impl fmt::Display for Diameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diameter::Finite(d) => write!(f, "{d}"),
            Diameter::Infinite => write!(f, "inf"),
        }
    }
}

/// A partition of the vertex set into two independent sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub part_a: Vec<Vertex>,
    pub part_b: Vec<Vertex>,
}

impl Bipartition {
    /// Checks disjointness, coverage and independence of both sides.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let mut seen = vec![0u8; g.n()];
        for &v in &self.part_a {
            seen[v as usize] += 1;
        }
        for &v in &self.part_b {
            seen[v as usize] += 1;
        }
        if seen.iter().any(|&c| c != 1) {
            return false;
        }
        let mut side = vec![0u8; g.n()];
        for &v in &self.part_b {
            side[v as usize] = 1;
        }
        g.edges()
            .iter()
            .all(|&(u, v)| side[u as usize] != side[v as usize])
    }
}

/// Bit-matrix adjacency view for the pattern-search hot paths.
///
/// Rows are `u64` words; only built for desk-scale graphs.
#[derive(Debug, Clone)]
pub struct AdjMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl AdjMatrix {
    pub fn new(g: &Graph) -> Self {
        let n = g.n();
        let words = n.div_ceil(64).max(1);
        let mut bits = vec![0u64; n * words];
        for &(u, v) in g.edges() {
            bits[u as usize * words + v as usize / 64] |= 1 << (v % 64);
            bits[v as usize * words + u as usize / 64] |= 1 << (u % 64);
        }
        AdjMatrix { n, words, bits }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.bits[u as usize * self.words + v as usize / 64] >> (v % 64) & 1 != 0
    }

    #[inline]
    pub fn row(&self, v: Vertex) -> &[u64] {
        &self.bits[v as usize * self.words..(v as usize + 1) * self.words]
    }
}

/// Fixed-capacity vertex bitset used by the induced-path searches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct VertexBits {
    words: Vec<u64>,
}

impl VertexBits {
    pub fn new(n: usize) -> Self {
        VertexBits {
            words: vec![0u64; n.div_ceil(64).max(1)],
        }
    }

    #[inline]
    pub fn contains(&self, v: Vertex) -> bool {
        self.words[v as usize / 64] >> (v % 64) & 1 != 0
    }

    #[inline]
    pub fn insert(&mut self, v: Vertex) {
        self.words[v as usize / 64] |= 1 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: Vertex) {
        self.words[v as usize / 64] &= !(1 << (v % 64));
    }

    /// Union with an adjacency-matrix row.
    pub fn or_row(&mut self, row: &[u64]) {
        for (w, r) in self.words.iter_mut().zip(row) {
            *w |= r;
        }
    }
}
