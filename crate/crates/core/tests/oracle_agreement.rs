use std::time::Duration;

use extdiam_core::oracle::{naive_clique_number, naive_diameter, naive_maximal_edge_sets, naive_search_chi, OracleBudget};
use extdiam_core::search_chi::{self, ChiSearchConfig};
use extdiam_core::search_omega::all_maximal_edge_sets;
use extdiam_core::{diameter, Graph, RatioFraction, SmallGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

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
fn clique_number_matches_subset_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let n = rng.gen_range(0..=12);
        let p = rng.gen_range(0.1..0.9);
        let g = random_graph(&mut rng, n, p);
        assert_eq!(g.clique_number(), naive_clique_number(&g));
    }
}

#[test]
fn diameter_matches_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 500 {
        let n = rng.gen_range(1..=20);
        let p = rng.gen_range(0.05..0.6);
        let g = random_graph(&mut rng, n, p);
        let edges: Vec<(usize, usize)> = g.edges().collect();
        let big = Graph::from_edges(n, edges.iter().copied()).unwrap();
        match naive_diameter(n, &edges) {
            Some(d) => assert_eq!(diameter(&big).unwrap(), d),
            None => assert!(diameter(&big).is_err()),
        }
        checked += 1;
    }
}

fn k4_free_graphs_up_to(n: usize) -> Vec<SmallGraph> {
    extdiam_core::enumerate::enumerate_layer_graphs(n, |g: &SmallGraph| g.is_k4_free())
}

#[test]
fn maximal_edge_sets_match_subset_scan() {
    let graphs = k4_free_graphs_up_to(6);
    let mut pairs = 0;
    for a in &graphs {
        for b in &graphs {
            if a.order() * b.order() > 12 {
                continue;
            }
            assert_eq!(all_maximal_edge_sets(a, b), naive_maximal_edge_sets(a, b), "{a:?} / {b:?}");
            pairs += 1;
        }
    }
    assert!(pairs > 100);
}

fn assert_chi_agrees(delta: u32, cap: u32, period: usize, expected: RatioFraction) {
    let cfg = ChiSearchConfig::new(delta, period).with_column_sum(cap);
    let fast = search_chi::search(&cfg).unwrap();
    let budget = OracleBudget { time_limit: Duration::from_secs(1200), ..OracleBudget::default() };
    let slow = naive_search_chi(&cfg, &budget).unwrap();
    assert_eq!(fast.best_ratio(), slow.best_ratio);
    assert_eq!(fast.best_ratio(), Some(expected));
}

#[test]
fn chi_search_matches_plain_dfs_delta4() {
    assert_chi_agrees(4, 6, 8, RatioFraction::new(4, 7));
}

#[test]
fn chi_search_matches_plain_dfs_delta5() {
    assert_chi_agrees(5, 6, 12, RatioFraction::new(5, 11));
}

#[test]
fn chi_search_matches_plain_dfs_on_small_configs() {
    let budget = OracleBudget::default();
    for delta in [4, 5] {
        for cap in 3..=6 {
            for period in [2, 3, 4, 6] {
                let cfg = ChiSearchConfig::new(delta, period).with_column_sum(cap);
                let fast = search_chi::search(&cfg).unwrap();
                let slow = naive_search_chi(&cfg, &budget).unwrap();
                assert_eq!(fast.best_ratio(), slow.best_ratio, "delta {delta} cap {cap} period {period}");
                if let Some(w) = &fast.witness {
                    assert!(w.block.is_feasible_block(delta));
                }
            }
        }
    }
}

#[test]
fn chi_search_with_flags_matches_plain_dfs() {
    let budget = OracleBudget::default();
    for delta in [4, 5] {
        let mut cfg = ChiSearchConfig::new(delta, 6).with_column_sum(5);
        cfg.assume_missing_color = true;
        cfg.require_singleton_layer = true;
        let fast = search_chi::search(&cfg).unwrap();
        let slow = naive_search_chi(&cfg, &budget).unwrap();
        assert_eq!(fast.best_ratio(), slow.best_ratio, "delta {delta}");
    }
}

#[test]
fn chi_period_three_at_delta4() {
    let cfg = ChiSearchConfig::new(4, 3).with_column_sum(6);
    let fast = search_chi::search(&cfg).unwrap();
    let slow = naive_search_chi(&cfg, &OracleBudget::default()).unwrap();
    assert_eq!(fast.best_ratio(), slow.best_ratio);
    // short periods still admit blocks, just worse ones
    assert_eq!(fast.best_ratio(), Some(RatioFraction::new(1, 2)));
}
