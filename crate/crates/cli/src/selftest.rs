use anyhow::Result;
use extdiam_core::enumerate::enumerate_layer_graphs;
use extdiam_core::oracle::{naive_clique_number, naive_diameter, naive_maximal_edge_sets, naive_search_chi, OracleBudget};
use extdiam_core::search_chi::{self, ChiSearchConfig};
use extdiam_core::search_omega::all_maximal_edge_sets;
use extdiam_core::{diameter, Graph, SmallGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::Outcome;

const SEEDS: u64 = 500;

fn random_graph(seed: u64, max_n: usize) -> SmallGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.1..0.8);
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

fn case(name: &str, instances: u64, failures: Vec<String>) -> Value {
    json!({"name": name, "instances": instances, "passed": failures.is_empty(), "failures": failures})
}

pub fn run() -> Result<Outcome> {
    let mut cases = Vec::new();

    let failures: Vec<String> = (0..SEEDS)
        .filter(|&s| {
            let g = random_graph(s, 12);
            g.clique_number() != naive_clique_number(&g)
        })
        .map(|s| format!("seed {s}"))
        .collect();
    cases.push(case("clique_number", SEEDS, failures));

    let failures: Vec<String> = (0..SEEDS)
        .filter(|&s| {
            let g = random_graph(s, 20);
            let edges: Vec<(usize, usize)> = g.edges().collect();
            let fast = Graph::from_edges(g.order(), edges.iter().copied()).ok().and_then(|b| diameter(&b).ok());
            fast != naive_diameter(g.order(), &edges)
        })
        .map(|s| format!("seed {s}"))
        .collect();
    cases.push(case("diameter", SEEDS, failures));

    let layers = enumerate_layer_graphs(6, |g: &SmallGraph| g.is_k4_free());
    let mut pairs = 0;
    let mut failures = Vec::new();
    for a in &layers {
        for b in &layers {
            if a.order() * b.order() <= 12 {
                pairs += 1;
                if all_maximal_edge_sets(a, b) != naive_maximal_edge_sets(a, b) {
                    failures.push(format!("{} / {}", a.to_graph6(), b.to_graph6()));
                }
            }
        }
    }
    cases.push(case("maximal_edge_sets", pairs, failures));

    for (delta, cap, period) in [(4, 6, 8), (5, 6, 12)] {
        let cfg = ChiSearchConfig::new(delta, period).with_column_sum(cap);
        let fast = search_chi::search(&cfg)?.best_ratio();
        let slow = naive_search_chi(&cfg, &OracleBudget::default())?.best_ratio;
        let failures = if fast == slow { vec![] } else { vec![format!("search {fast:?}, plain {slow:?}")] };
        cases.push(case(&format!("search_chi delta={delta} cap={cap} period={period}"), 1, failures));
    }

    let all = cases.iter().all(|c| c["passed"] == json!(true));
    Ok(Outcome {
        config: json!({}),
        result: json!({"cases": cases, "all_passed": all}),
        conditional: vec![],
        exit: if all { 0 } else { 1 },
        payload: None,
    })
}
