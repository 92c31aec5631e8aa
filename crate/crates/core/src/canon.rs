//! Canonical labeling of vertex-labelled small graphs.
//!
//! The initial partition is ordered by `(label, degree)`, refined to an
//! equitable partition, and completed by individualizing vertices of the
//! first non-singleton cell. The canonical form is the smallest leaf
//! certificate. Automorphisms (twin transpositions up front, plus any found
//! when two leaves coincide) prune sibling subtrees by orbit.

use crate::graph::{bit, bits, SmallGraph};

/// Byte encoding of a labelled graph that is equal for two inputs iff they
/// are isomorphic by a label-preserving map.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey(pub Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }
}

/// Result of canonical labeling.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: CanonicalKey,
    /// `position[v]` is the canonical index of input vertex `v`.
    pub position: Vec<usize>,
    /// The relabelled graph.
    pub graph: SmallGraph,
    /// Labels in canonical order.
    pub labels: Vec<u32>,
}

pub fn canonical_key(g: &SmallGraph, labels: &[u32]) -> CanonicalKey {
    canonical_form(g, labels).key
}

/// Canonical key with all labels equal.
pub fn canonical_key_unlabeled(g: &SmallGraph) -> CanonicalKey {
    canonical_key(g, &vec![0; g.order()])
}

pub fn canonical_form(g: &SmallGraph, labels: &[u32]) -> CanonicalForm {
    let n = g.order();
    assert_eq!(labels.len(), n, "one label per vertex");

    let mut verts: Vec<usize> = (0..n).collect();
    verts.sort_by_key(|&v| (labels[v], g.degree(v)));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &verts {
        match cells.last_mut() {
            Some(cell) if (labels[cell[0]], g.degree(cell[0])) == (labels[v], g.degree(v)) => cell.push(v),
            _ => cells.push(vec![v]),
        }
    }

    let mut search = Search {
        g,
        labels,
        best: None,
        generators: twin_transpositions(g, labels),
    };
    search.descend(cells, &[]);
    let (cert, order) = search.best.expect("at least one leaf");

    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    CanonicalForm {
        key: CanonicalKey(cert),
        graph: g.permuted(&position),
        labels: order.iter().map(|&v| labels[v]).collect(),
        position,
    }
}

fn twin_transpositions(g: &SmallGraph, labels: &[u32]) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut gens = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if labels[u] == labels[v] && (g.row(u) & !bit(v)) == (g.row(v) & !bit(u)) {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(u, v);
                gens.push(p);
            }
        }
    }
    gens
}

struct Search<'a> {
    g: &'a SmallGraph,
    labels: &'a [u32],
    best: Option<(Vec<u8>, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn refine(&self, mut cells: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        loop {
            let masks: Vec<u32> = cells.iter().map(|c| c.iter().fold(0, |m, &v| m | bit(v))).collect();
            let before = cells.len();
            let mut next = Vec::with_capacity(before);
            for cell in cells {
                if cell.len() == 1 {
                    next.push(cell);
                    continue;
                }
                let mut keyed: Vec<(Vec<u8>, usize)> = cell
                    .iter()
                    .map(|&v| {
                        let row = self.g.row(v);
                        (masks.iter().map(|&m| (row & m).count_ones() as u8).collect(), v)
                    })
                    .collect();
                keyed.sort();
                let mut start = 0;
                for i in 1..=keyed.len() {
                    if i == keyed.len() || keyed[i].0 != keyed[start].0 {
                        next.push(keyed[start..i].iter().map(|(_, v)| *v).collect());
                        start = i;
                    }
                }
            }
            cells = next;
            if cells.len() == before {
                return cells;
            }
        }
    }

    fn certificate(&self, order: &[usize]) -> Vec<u8> {
        let n = order.len();
        let mut position = [0usize; 32];
        for (i, &v) in order.iter().enumerate() {
            position[v] = i;
        }
        let mut cert = Vec::with_capacity(1 + 4 * n + 4 * n);
        cert.push(n as u8);
        for &v in order {
            cert.extend_from_slice(&self.labels[v].to_be_bytes());
        }
        for &v in order {
            let mut row = 0u32;
            for w in bits(self.g.row(v)) {
                row |= bit(position[w]);
            }
            cert.extend_from_slice(&row.to_be_bytes());
        }
        cert
    }

    fn descend(&mut self, cells: Vec<Vec<usize>>, fixed: &[usize]) {
        let cells = self.refine(cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            let order: Vec<usize> = cells.iter().map(|c| c[0]).collect();
            let cert = self.certificate(&order);
            match &self.best {
                None => self.best = Some((cert, order)),
                Some((best, best_order)) => match cert.cmp(best) {
                    std::cmp::Ordering::Less => self.best = Some((cert, order)),
                    std::cmp::Ordering::Equal => {
                        // order[i] and best_order[i] play the same role
                        let mut auto = vec![0; order.len()];
                        for (i, &v) in order.iter().enumerate() {
                            auto[v] = best_order[i];
                        }
                        if auto.iter().enumerate().any(|(i, &j)| i != j) {
                            self.generators.push(auto);
                        }
                    }
                    std::cmp::Ordering::Greater => {}
                },
            }
            return;
        };

        let cell = cells[target].clone();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit_as_explored(v, &explored, fixed, &cell) {
                continue;
            }
            explored.push(v);
            let mut next = Vec::with_capacity(cells.len() + 1);
            for (i, c) in cells.iter().enumerate() {
                if i == target {
                    next.push(vec![v]);
                    next.push(c.iter().copied().filter(|&w| w != v).collect());
                } else {
                    next.push(c.clone());
                }
            }
            let mut fixed_next = fixed.to_vec();
            fixed_next.push(v);
            self.descend(next, &fixed_next);
        }
    }

    /// Whether `v` lies in the orbit of an explored sibling under the group
    /// generated by the known automorphisms that fix `fixed` pointwise.
    fn same_orbit_as_explored(&self, v: usize, explored: &[usize], fixed: &[usize], cell: &[usize]) -> bool {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut any = false;
        for gen in &self.generators {
            if fixed.iter().any(|&f| gen[f] != f) {
                continue;
            }
            any = true;
            for &x in cell {
                let (a, b) = (find(&mut parent, x), find(&mut parent, gen[x]));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        if !any {
            return false;
        }
        // automorphisms fixing the prefix map this cell onto itself
        let rv = find(&mut parent, v);
        explored.iter().any(|&e| find(&mut parent, e) == rv)
    }
}

/// Whether two labelled graphs are isomorphic by a label-preserving map.
pub fn isomorphic(g1: &SmallGraph, l1: &[u32], g2: &SmallGraph, l2: &[u32]) -> bool {
    g1.order() == g2.order() && canonical_key(g1, l1) == canonical_key(g2, l2)
}

/// A label-preserving isomorphism `g1 → g2` as a vertex map, if one exists.
pub fn find_isomorphism(g1: &SmallGraph, l1: &[u32], g2: &SmallGraph, l2: &[u32]) -> Option<Vec<usize>> {
    if g1.order() != g2.order() {
        return None;
    }
    let c1 = canonical_form(g1, l1);
    let c2 = canonical_form(g2, l2);
    if c1.key != c2.key {
        return None;
    }
    let mut inv2 = vec![0; g2.order()];
    for (v, &p) in c2.position.iter().enumerate() {
        inv2[p] = v;
    }
    Some(c1.position.iter().map(|&p| inv2[p]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_reversal_and_reflected_labels() {
        let p3 = SmallGraph::path(3);
        let rev = p3.permuted(&[2, 1, 0]);
        assert_eq!(canonical_key(&p3, &[0, 0, 0]), canonical_key(&rev, &[0, 0, 0]));
        assert_eq!(canonical_key(&p3, &[1, 0, 0]), canonical_key(&p3, &[0, 0, 1]));
        assert_ne!(canonical_key(&p3, &[1, 0, 0]), canonical_key(&p3, &[0, 1, 0]));
    }

    #[test]
    fn triangle_vs_path() {
        assert_ne!(
            canonical_key_unlabeled(&SmallGraph::complete(3)),
            canonical_key_unlabeled(&SmallGraph::path(3))
        );
    }

    #[test]
    fn canonical_graph_matches_key() {
        let g = SmallGraph::petersen();
        let labels = vec![0; 10];
        let f = canonical_form(&g, &labels);
        let shuffled = g.permuted(&[3, 7, 1, 9, 0, 2, 8, 5, 4, 6]);
        let f2 = canonical_form(&shuffled, &labels);
        assert_eq!(f.key, f2.key);
        assert_eq!(f.graph, f2.graph);
    }

    #[test]
    fn symmetric_graphs_finish() {
        // large automorphism groups: edgeless, complete, K_{8,8}, 3K_4-free blowups
        for g in [
            SmallGraph::empty(16),
            SmallGraph::complete(16),
            SmallGraph::complete_bipartite(8, 8),
            SmallGraph::complete_multipartite(&[6, 6, 6]),
            SmallGraph::cycle(20),
        ] {
            let f = canonical_form(&g, &vec![0; g.order()]);
            assert_eq!(f.graph.edge_count(), g.edge_count());
        }
    }

    #[test]
    fn isomorphism_map_is_valid() {
        let g = SmallGraph::cycle(6);
        let h = g.permuted(&[4, 2, 0, 5, 1, 3]);
        let map = find_isomorphism(&g, &[0; 6], &h, &[0; 6]).unwrap();
        for (u, v) in g.edges() {
            assert!(h.has_edge(map[u], map[v]));
        }
    }
}
