//! Named graphs used throughout the test suites.

use crate::graph::{Graph, Vertex};

/// Complete bipartite graph `K_{a,b}`; side A is `0..a`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::with_capacity(a * b);
    for u in 0..a {
        for v in 0..b {
            edges.push((u as Vertex, (a + v) as Vertex));
        }
    }
    Graph::new(a + b, &edges).expect("complete bipartite edges are valid")
}

/// Wheel `W_k`: the cycle `0..k` plus a dominating hub `k`.
pub fn wheel(k: usize) -> Graph {
    let mut edges: Vec<(Vertex, Vertex)> = (0..k)
        .map(|i| (i as Vertex, ((i + 1) % k) as Vertex))
        .collect();
    for i in 0..k {
        edges.push((i as Vertex, k as Vertex));
    }
    Graph::new(k + 1, &edges).expect("wheel edges are valid")
}

/// The Petersen graph: outer pentagon `0..5`, inner pentagram `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::new(10, &edges).expect("petersen edges are valid")
}

/// The book graph `B_r`: an edge `0-1` plus `r` pages adjacent to both ends.
pub fn book(r: usize) -> Graph {
    let mut edges = vec![(0, 1)];
    for i in 0..r {
        edges.push((0, (2 + i) as Vertex));
        edges.push((1, (2 + i) as Vertex));
    }
    Graph::new(2 + r, &edges).expect("book edges are valid")
}

/// The Hoffman-Singleton graph on 50 vertices: five pentagons `P_h` and
/// five pentagrams `Q_i`, with vertex `j` of `P_h` joined to vertex
/// `h*i + j (mod 5)` of `Q_i`.
///
/// Vertex `5h + j` is pentagon vertex `(h, j)`; vertex `25 + 5i + j` is
/// pentagram vertex `(i, j)`.
pub fn hoffman_singleton() -> Graph {
    let p = |h: u32, j: u32| 5 * h + j % 5;
    let q = |i: u32, j: u32| 25 + 5 * i + j % 5;
    let mut edges = Vec::new();
    for h in 0..5 {
        for j in 0..5 {
            edges.push((p(h, j), p(h, j + 1)));
            edges.push((q(h, j), q(h, j + 2)));
        }
    }
    for h in 0..5 {
        for i in 0..5 {
            for j in 0..5 {
                edges.push((p(h, j), q(i, h * i + j)));
            }
        }
    }
    Graph::new(50, &edges).expect("hoffman-singleton edges are valid")
}
