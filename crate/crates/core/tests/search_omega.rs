use std::path::PathBuf;

use extdiam_core::search_omega::{
    all_maximal_edge_sets, maximal_edge_sets, search, verify_repeatable, AssumptionProfile, OmegaSearchConfig,
};
use extdiam_core::{ClumpMatrix, LayeredGraph, RatioFraction, SmallGraph};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn single_vertices_get_their_edge() {
    let k1 = SmallGraph::complete(1);
    assert_eq!(maximal_edge_sets(&k1, &k1), vec![vec![1]]);
}

#[test]
fn triangle_to_vertex_omits_one_edge() {
    let k3 = SmallGraph::complete(3);
    let k1 = SmallGraph::complete(1);
    let raw = all_maximal_edge_sets(&k3, &k1);
    assert_eq!(raw.len(), 3);
    assert!(raw.iter().all(|rows| rows.iter().filter(|&&r| r == 1).count() == 2));
    // all three are the same up to automorphisms of the triangle
    assert_eq!(maximal_edge_sets(&k3, &k1).len(), 1);
}

#[test]
fn independent_pairs_join_completely() {
    let e2 = SmallGraph::empty(2);
    assert_eq!(maximal_edge_sets(&e2, &e2), vec![vec![3, 3]]);
}

#[test]
fn edge_to_edge_drops_one_cross_edge() {
    let k2 = SmallGraph::complete(2);
    assert_eq!(all_maximal_edge_sets(&k2, &k2).len(), 4);
    assert_eq!(maximal_edge_sets(&k2, &k2).len(), 1);
}

#[test]
fn small_example_graph_is_repeatable_for_degree_3_only() {
    let g = LayeredGraph::from_layered_text(&fixture("repeatable_delta3.layered")).unwrap();
    assert_eq!(g.layer_sizes(), vec![3, 2, 1, 3, 2]);
    assert!(verify_repeatable(&g, 3));
    assert!(!verify_repeatable(&g, 4));
}

#[test]
fn delta4_clump_expansion_is_repeatable() {
    let m: ClumpMatrix = fixture("delta4.repeatable").parse().unwrap();
    let g = m.expand_to_graph(1).unwrap();
    assert!(verify_repeatable(&g, 4));
    assert!(!verify_repeatable(&g, 5));
}

#[test]
fn profiles_only_for_their_degree() {
    assert!(OmegaSearchConfig::new(4, 12).with_profile(AssumptionProfile::Delta5).validate().is_err());
    assert!(OmegaSearchConfig::new(5, 12).with_profile(AssumptionProfile::Delta5).validate().is_ok());
    assert!(OmegaSearchConfig::new(6, 12).with_profile(AssumptionProfile::Delta5).validate().is_err());
    assert!(OmegaSearchConfig::new(6, 12).with_profile(AssumptionProfile::Delta6).validate().is_ok());
    assert!(OmegaSearchConfig::new(4, 1).validate().is_err());
}

fn four_layer_sums_at_least_7(sizes: &[usize]) -> bool {
    let n = sizes.len();
    (0..n).all(|i| (0..4).map(|k| sizes[(i + k) % n]).sum::<usize>() >= 7)
}

#[test]
fn delta4_optimum_without_profile() {
    let r = search(&OmegaSearchConfig::new(4, 12)).unwrap();
    let w = r.witness.expect("witness");
    assert_eq!(w.ratio, RatioFraction::new(4, 7));
    assert!(verify_repeatable(&w.graph, 4));
    let sizes = w.block_sizes();
    assert_eq!(w.period, sizes.len());
    assert_eq!(RatioFraction::new(w.period as u64, sizes.iter().sum::<usize>() as u64), w.ratio);
    assert!(four_layer_sums_at_least_7(&sizes));
}

#[test]
fn same_result_on_any_pool_size() {
    let cfg = OmegaSearchConfig::new(4, 8);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| search(&cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(8));
}
