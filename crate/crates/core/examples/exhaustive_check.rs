use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trilist::graph::{Graph, Vertex};
use trilist::lists::{respects, ListAssignment};
use trilist::oracle::oracle_list_colour;
use trilist::solver::{classify, dispatch_solve, SolveConfig};

fn main() {
    let cfg = SolveConfig::default();

    // Exhaustive: every graph on up to 7 vertices, full lists, dispatch vs oracle.
    let max_n: usize = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(6);
    for n in 1..=max_n {
        let pairs: Vec<(Vertex, Vertex)> = (0..n as Vertex)
            .flat_map(|u| (u + 1..n as Vertex).map(move |v| (u, v)))
            .collect();
        let mut count = 0u64;
        let mut yes = 0u64;
        for code in 0u64..1 << pairs.len() {
            let edges: Vec<(Vertex, Vertex)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| code >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = Graph::new(n, &edges).unwrap();
            let lists = ListAssignment::full(n);
            let got = dispatch_solve(&g, &lists, &cfg).unwrap();
            let want = oracle_list_colour(&g, &lists).unwrap();
            assert_eq!(
                got.decision,
                want.is_some(),
                "n={n} code={code}: dispatch {} oracle {} (profile {:?})",
                got.decision,
                want.is_some(),
                classify(&g)
            );
            if got.decision {
                yes += 1;
                assert!(respects(got.witness.as_ref().unwrap(), &g, &lists));
            }
            count += 1;
        }
        println!("n={n}: {count} graphs, {yes} colourable, all agree");
    }

    // Random graphs with random lists (any class, exercises every route).
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut route_counts = std::collections::BTreeMap::new();
    for case in 0..20_000u64 {
        let n = rng.random_range(1..=10);
        let p = rng.random_range(0.1..0.9);
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                if rng.random_bool(p) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::new(n, &edges).unwrap();
        let masks: Vec<u8> = (0..n).map(|_| rng.random_range(1..=7)).collect();
        let lists = ListAssignment::from_masks(masks).unwrap();
        let got = dispatch_solve(&g, &lists, &cfg).unwrap();
        let want = oracle_list_colour(&g, &lists).unwrap();
        assert_eq!(got.decision, want.is_some(), "case {case}");
        if let Some(w) = &got.witness {
            assert!(respects(w, &g, &lists));
        }
        *route_counts.entry(format!("{}", got.route)).or_insert(0u64) += 1;
    }
    println!("random mixed-class: 20000 cases agree; routes {route_counts:?}");
}
