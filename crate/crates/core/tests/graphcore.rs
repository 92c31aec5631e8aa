use std::path::PathBuf;

use extdiam_core::canon::canonical_key;
use extdiam_core::enumerate::enumerate_layer_graphs;
use extdiam_core::{bfs_layers, layered_isomorphic, ClumpMatrix, Graph, LayeredGraph, SmallGraph};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Isomorphism by trying every bijection.
fn brute_isomorphic(g: &SmallGraph, lg: &[u32], h: &SmallGraph, lh: &[u32]) -> bool {
    let n = g.order();
    n == h.order()
        && permutations(n).iter().any(|p| {
            (0..n).all(|v| lg[v] == lh[p[v]]) && (0..n).all(|u| (0..n).all(|v| g.has_edge(u, v) == h.has_edge(p[u], p[v])))
        })
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SmallGraph {
    let mut g = SmallGraph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

#[test]
fn canonical_keys_agree_with_bijection_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..600 {
        let n = rng.gen_range(1..=6);
        let g = random_graph(&mut rng, n, 0.5);
        let lg: Vec<u32> = (0..n).map(|_| rng.gen_range(0..2)).collect();
        // half the time compare against a relabelled copy
        let (h, lh) = if rng.gen_bool(0.5) {
            let mut perm: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut h = SmallGraph::empty(n);
            for (u, v) in g.edges() {
                h.add_edge(perm[u], perm[v]);
            }
            let mut lh = vec![0; n];
            for v in 0..n {
                lh[perm[v]] = lg[v];
            }
            (h, lh)
        } else {
            (random_graph(&mut rng, n, 0.5), (0..n).map(|_| rng.gen_range(0..2)).collect())
        };
        let same_key = canonical_key(&g, &lg) == canonical_key(&h, &lh);
        assert_eq!(same_key, brute_isomorphic(&g, &lg, &h, &lh));
    }
}

#[test]
fn layer_graph_counts() {
    assert_eq!(enumerate_layer_graphs(3, |_: &SmallGraph| true).len(), 7);
    assert_eq!(enumerate_layer_graphs(4, |_: &SmallGraph| true).len(), 18);
    assert_eq!(enumerate_layer_graphs(4, |g: &SmallGraph| g.is_k4_free()).len(), 17);
}

#[test]
fn colorable_graphs_have_small_cliques() {
    for g in enumerate_layer_graphs(7, |_: &SmallGraph| true) {
        for k in 1..=4 {
            if g.chromatic_at_most(k) {
                assert!(g.clique_number() <= k, "{}", g.to_graph6());
            }
        }
    }
}

#[test]
fn named_graphs() {
    let t83 = SmallGraph::complete_multipartite(&[3, 3, 2]);
    assert_eq!(t83.clique_number(), 3);
    assert!(SmallGraph::petersen().chromatic_at_most(3));
    assert!(!SmallGraph::complete(4).chromatic_at_most(3));
    assert!(SmallGraph::complete_bipartite(3, 3).is_k4_free());
    assert_eq!(SmallGraph::cycle(5).clique_number(), 2);
}

#[test]
fn bfs_from_the_first_layer_recovers_the_columns() {
    let m = ClumpMatrix::from_rows(&[vec![1, 0, 2, 0], vec![0, 1, 0, 1], vec![0, 1, 0, 1]], extdiam_core::MatrixMode::Block)
        .unwrap();
    let g = m.expand_to_graph(2).unwrap();
    let layered = bfs_layers(&g.graph, &g.layers[0]).unwrap();
    assert_eq!(layered.layer_sizes(), vec![1, 2, 2, 2, 1, 2, 2, 2]);
}

#[test]
fn small_example_ends_match() {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/repeatable_delta3.layered");
    let g = LayeredGraph::from_layered_text(&std::fs::read_to_string(p).unwrap()).unwrap();
    let d = g.depth();
    assert!(layered_isomorphic(&g.two_layer(0).unwrap(), &g.two_layer(d - 1).unwrap()));
    assert!(!layered_isomorphic(&g.two_layer(0).unwrap(), &g.two_layer(1).unwrap()));
}

proptest! {
    #[test]
    fn graph6_round_trip(n in 0usize..=32, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.3);
        prop_assert_eq!(SmallGraph::from_graph6(&g.to_graph6()).unwrap(), g);
        let big = Graph::from_edges(n, g.edges()).unwrap();
        prop_assert_eq!(big.to_graph6(), g.to_graph6());
    }

    #[test]
    fn bfs_layers_are_valid(n in 1usize..=20, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut g = random_graph(&mut rng, n, 0.2);
        for v in 1..n {
            let u = rng.gen_range(0..v);
            g.add_edge(u, v);
        }
        let big = Graph::from_edges(n, g.edges()).unwrap();
        let lg = bfs_layers(&big, &[0]).unwrap();
        prop_assert!(lg.has_bfs_property());
        prop_assert_eq!(lg.order(), n);
    }
}
