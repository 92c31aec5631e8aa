use extdiam_core::search_chi::{detect_repeatable, extend_column, search, ChiSearchConfig, ChiSearchState};
use extdiam_core::{ColorPermutation, RatioFraction};

fn cfg8() -> ChiSearchConfig {
    ChiSearchConfig::new(8, 40).with_column_sum(7)
}

#[test]
fn singleton_between_two_full_pairs_reaches_degree_8() {
    let s = ChiSearchState::start(vec![0, 2, 2], vec![1, 0, 0]);
    let next = extend_column(&s, &[0, 2, 2], &cfg8()).expect("degree 4 + 0 + 4");
    assert_eq!(next.layer_count, 3);
    assert_eq!(next.order, 5);
}

#[test]
fn thin_successor_leaves_singleton_short() {
    let s = ChiSearchState::start(vec![0, 2, 2], vec![1, 0, 0]);
    assert!(extend_column(&s, &[0, 1, 1], &cfg8()).is_none());
}

#[test]
fn empty_column_is_never_appended() {
    let s = ChiSearchState::start(vec![0, 2, 2], vec![1, 0, 0]);
    assert!(extend_column(&s, &[0, 0, 0], &cfg8()).is_none());
}

#[test]
fn delta4_sequence_closes_with_identity() {
    let cfg = ChiSearchConfig::new(4, 20);
    let mut s = ChiSearchState::start(vec![1, 0, 0], vec![0, 1, 1]);
    for col in [[2, 0, 0], [0, 1, 1], [1, 0, 0]] {
        s = extend_column(&s, &col, &cfg).unwrap();
        assert!(detect_repeatable(&s).is_none());
    }
    s = extend_column(&s, &[0, 1, 1], &cfg).unwrap();
    assert_eq!(s.layer_count, 6);
    assert!(detect_repeatable(&s).unwrap().is_identity());
}

#[test]
fn swapped_end_pair_gives_transposition() {
    let mut s = ChiSearchState::start(vec![1, 0, 0], vec![0, 1, 1]);
    s.prev = vec![0, 1, 0];
    s.last = vec![1, 0, 1];
    s.layer_count = 5;
    assert_eq!(detect_repeatable(&s), Some(ColorPermutation(vec![1, 0, 2])));
}

#[test]
fn different_sums_never_close() {
    let mut s = ChiSearchState::start(vec![1, 0, 0], vec![0, 1, 1]);
    s.prev = vec![2, 0, 0];
    s.last = vec![0, 1, 1];
    s.layer_count = 6;
    assert!(detect_repeatable(&s).is_none());
}

#[test]
fn short_sequences_are_not_repeatable() {
    let s = ChiSearchState::start(vec![1, 0, 0], vec![0, 1, 1]);
    let mut t = s.clone();
    t.layer_count = 3;
    assert!(detect_repeatable(&t).is_none());
}

#[test]
fn invalid_configs_rejected() {
    assert!(search(&ChiSearchConfig::new(4, 1)).is_err());
    assert!(search(&ChiSearchConfig::new(0, 10)).is_err());
    let mut c = ChiSearchConfig::new(4, 10);
    c.chi = 1;
    assert!(search(&c).is_err());
}

fn check_witness(cfg: &ChiSearchConfig, expected: RatioFraction) {
    let r = search(cfg).unwrap();
    let w = r.witness.as_ref().expect("witness");
    assert_eq!(w.ratio, expected);
    assert!(w.block.is_feasible_block(cfg.delta));
    assert_eq!(w.block.block_ratio(cfg.delta).unwrap(), expected);
    assert_eq!(w.block.len(), w.period * w.seam.order());
    assert!(w.repeatable.repeatable_permutation().is_some());
    let upper = RatioFraction::new(7, 3 * u64::from(cfg.delta));
    assert!(expected <= upper);
    let g = w.block.expand_to_graph(1).unwrap();
    if g.order() <= 40 {
        assert!(g.graph.coloring(3).is_some());
    }
}

#[test]
fn delta4_optimum() {
    check_witness(&ChiSearchConfig::new(4, 20), RatioFraction::new(4, 7));
}

#[test]
fn delta5_optimum() {
    check_witness(&ChiSearchConfig::new(5, 20), RatioFraction::new(5, 11));
}

#[test]
fn same_witness_on_any_pool_size() {
    let cfg = ChiSearchConfig::new(5, 16);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| search(&cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(8));
}
