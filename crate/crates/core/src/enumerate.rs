//! One representative per isomorphism class of small graphs.
//!
//! Graphs on `n + 1` vertices are generated by attaching a new vertex to
//! every neighbourhood subset of each class representative on `n` vertices;
//! children are deduplicated by canonical key. Representatives are returned
//! in canonical labelling, sorted by `(order, key)`.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canon::{canonical_form, CanonicalKey};
use crate::graph::SmallGraph;

/// Canonical representatives of every class with exactly `n` vertices whose
/// members (and, when `hereditary`, all of whose induced subgraphs grown
/// along the way) satisfy `keep`.
fn by_order<F>(n_max: usize, keep: &F, hereditary: bool) -> Vec<Vec<(CanonicalKey, SmallGraph)>>
where
    F: Fn(&SmallGraph) -> bool + Sync,
{
    let mut levels: Vec<Vec<(CanonicalKey, SmallGraph)>> = vec![Vec::new(); n_max + 1];
    if n_max == 0 {
        return levels;
    }
    let root = SmallGraph::empty(1);
    let f = canonical_form(&root, &[0]);
    if !hereditary || keep(&root) {
        levels[1].push((f.key, f.graph));
    }
    for n in 2..=n_max {
        let parents = &levels[n - 1];
        let children: BTreeMap<CanonicalKey, SmallGraph> = parents
            .par_iter()
            .flat_map_iter(|(_, parent)| {
                let base = *parent;
                (0u32..(1u32 << (n - 1))).filter_map(move |nbrs| {
                    let mut g = base;
                    let v = g.add_vertex();
                    for u in crate::graph::bits(nbrs) {
                        g.add_edge(u, v);
                    }
                    if hereditary && !keep(&g) {
                        return None;
                    }
                    let f = canonical_form(&g, &vec![0; n]);
                    Some((f.key, f.graph))
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        levels[n] = children.into_iter().collect();
    }
    levels
}

/// One graph per isomorphism class on `1..=n_max` vertices passing `predicate`.
pub fn enumerate_layer_graphs<F>(n_max: usize, predicate: F) -> Vec<SmallGraph>
where
    F: Fn(&SmallGraph) -> bool + Sync,
{
    by_order(n_max, &predicate, false)
        .into_iter()
        .flatten()
        .filter(|(_, g)| predicate(g))
        .map(|(_, g)| g)
        .collect()
}

/// Like [`enumerate_layer_graphs`] for predicates closed under taking induced
/// subgraphs (K4-free, triangle-free, ...); prunes during generation.
pub fn enumerate_hereditary<F>(n_max: usize, predicate: F) -> Vec<SmallGraph>
where
    F: Fn(&SmallGraph) -> bool + Sync,
{
    by_order(n_max, &predicate, true).into_iter().flatten().map(|(_, g)| g).collect()
}

/// Hereditary classes on exactly `n` vertices, generating the smaller levels
/// on the way.
pub fn hereditary_of_order<F>(n: usize, predicate: F) -> Vec<SmallGraph>
where
    F: Fn(&SmallGraph) -> bool + Sync,
{
    by_order(n, &predicate, true).pop().unwrap_or_default().into_iter().map(|(_, g)| g).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts = |n| {
            let all = enumerate_layer_graphs(n, |_| true);
            let mut c = vec![0; n + 1];
            for g in &all {
                c[g.order()] += 1;
            }
            c
        };
        assert_eq!(counts(3), vec![0, 1, 2, 4]);
        assert_eq!(enumerate_layer_graphs(3, |_| true).len(), 7);
        assert_eq!(counts(6), vec![0, 1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn k4_free_counts() {
        assert_eq!(enumerate_layer_graphs(4, |g| g.is_k4_free()).len(), 17);
        assert_eq!(enumerate_hereditary(4, |g| g.is_k4_free()).len(), 17);
        let a = enumerate_layer_graphs(6, |g| g.is_k4_free());
        let b = enumerate_hereditary(6, |g| g.is_k4_free());
        assert_eq!(a, b);
    }

    #[test]
    fn deterministic_order() {
        let a = enumerate_layer_graphs(5, |_| true);
        let b = enumerate_layer_graphs(5, |_| true);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[0].order() <= w[1].order()));
    }
}
