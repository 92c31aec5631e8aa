use std::path::PathBuf;

use extdiam_core::builder::{cap_ends, concatenate, verify_construction, BlockSource, ConstraintMode, ConstructionSpec};
use extdiam_core::search_omega::verify_repeatable;
use extdiam_core::{diameter, ClumpMatrix, LayeredGraph, MatrixMode};

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(p).unwrap()
}

const BLOCKS: [(&str, u32); 8] = [
    ("delta4.block", 4),
    ("delta5.block", 5),
    ("delta6.block", 6),
    ("delta7.block", 7),
    ("delta8_t1.block", 8),
    ("delta8_t2.block", 8),
    ("delta8_t3.block", 8),
    ("delta16.block", 16),
];

fn build(block: &ClumpMatrix, reps: usize, delta: u32, cap: bool) -> LayeredGraph {
    concatenate(&ConstructionSpec { block: BlockSource::Matrix(block.clone()), repetitions: reps, delta, cap_ends: cap })
        .unwrap()
}

#[test]
fn diameters_and_orders_grow_by_one_block_per_repetition() {
    for (name, delta) in BLOCKS {
        let m: ClumpMatrix = fixture(name).parse().unwrap();
        let mut prev: Option<(usize, usize)> = None;
        for reps in 2..=4 {
            let g = build(&m, reps, delta, true);
            let r = verify_construction(&g.graph, g.colors.as_deref(), delta, ConstraintMode::Chi).unwrap();
            assert!(r.passed(), "{name} reps {reps}: {r:?}");
            assert!(g.graph.is_k4_free());
            if let Some((d, n)) = prev {
                assert_eq!(r.diameter - d, m.len(), "{name}");
                assert_eq!((r.n - n) as u64, m.total(), "{name}");
            }
            prev = Some((r.diameter, r.n));
        }
    }
}

#[test]
fn delta4_family_trails_the_extremal_bound_by_four() {
    let m: ClumpMatrix = fixture("delta4.block").parse().unwrap();
    for reps in 2..=5 {
        let g = build(&m, reps, 4, true);
        let n = g.order();
        let d = diameter(&g.graph).unwrap();
        assert_eq!(d + 4, 4 * (n - 4) / 7, "reps {reps}");
    }
}

#[test]
fn repeatable_matrix_concatenates_like_its_block() {
    let rep: ClumpMatrix = fixture("delta5.repeatable").parse().unwrap();
    let block: ClumpMatrix = fixture("delta5.block").parse().unwrap();
    for reps in 1..=3 {
        let a = build(&rep, reps, 5, false);
        assert_eq!(a.layers.len(), 2 + 10 * reps);
        assert!(verify_repeatable(&a, 5));
        let inner: u64 = a.layer_sizes()[1..a.layers.len() - 1].iter().map(|&s| s as u64).sum();
        assert_eq!(inner, block.total() * reps as u64);
    }
}

#[test]
fn small_example_concatenates_twice() {
    let g = LayeredGraph::from_layered_text(&fixture("repeatable_delta3.layered")).unwrap();
    let spec = ConstructionSpec { block: BlockSource::Layered(g.clone()), repetitions: 2, delta: 3, cap_ends: false };
    let g2 = concatenate(&spec).unwrap();
    assert_eq!(g2.layer_sizes(), vec![3, 2, 1, 3, 2, 1, 3, 2]);
    assert!(verify_repeatable(&g2, 3));
    let one = ConstructionSpec { repetitions: 1, ..spec };
    assert_eq!(concatenate(&one).unwrap(), g);
}

#[test]
fn single_repetition_is_the_block() {
    let m: ClumpMatrix = fixture("delta4.block").parse().unwrap();
    let g = build(&m, 1, 4, false);
    assert_eq!(g, m.expand_to_graph(1).unwrap());
}

#[test]
fn capping_an_independent_layer() {
    let m = ClumpMatrix::from_columns(3, vec![vec![4, 0, 0]], MatrixMode::Block).unwrap();
    let g = m.expand_to_graph(1).unwrap();
    let capped = cap_ends(&g, 4).unwrap();
    assert!(capped.graph.min_degree() >= 4);
    assert!(capped.graph.is_k4_free());
}

#[test]
fn infeasible_block_is_refused() {
    let m: ClumpMatrix = fixture("delta8_t1.block").parse().unwrap();
    let spec = ConstructionSpec { block: BlockSource::Matrix(m), repetitions: 2, delta: 9, cap_ends: true };
    assert!(concatenate(&spec).is_err());
}
