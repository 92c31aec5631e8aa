//! Graphs with an ordered partition into BFS layers.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::canon::{canonical_key, find_isomorphism};
use crate::error::{Error, Result};
use crate::graph::{Graph, SmallGraph};

/// A graph plus an ordered partition `N_0, .., N_d` of its vertices.
///
/// Edges only join vertices of the same or of consecutive layers. Graphs
/// built from clump matrices also carry the proper coloring they were built
/// from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredGraph {
    pub graph: Graph,
    pub layers: Vec<Vec<usize>>,
    pub colors: Option<Vec<u8>>,
}

/// Induced subgraph on two consecutive layers, with side labels
/// (0 for the earlier layer, 1 for the later one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoLayerGraph {
    pub graph: SmallGraph,
    pub side: Vec<u32>,
}

impl TwoLayerGraph {
    /// `first` is placed before `second`; `cross[i]` is the row of vertex `i`
    /// of `first` into `second`.
    pub fn from_parts(first: &SmallGraph, second: &SmallGraph, cross: &[u32]) -> Self {
        let a = first.order();
        let mut graph = first.disjoint_union(second);
        for (i, &row) in cross.iter().enumerate() {
            for j in crate::graph::bits(row) {
                graph.add_edge(i, a + j);
            }
        }
        let side = (0..graph.order()).map(|v| u32::from(v >= a)).collect();
        TwoLayerGraph { graph, side }
    }

    pub fn side_sizes(&self) -> (usize, usize) {
        let b = self.side.iter().filter(|&&s| s == 1).count();
        (self.side.len() - b, b)
    }
}

/// True iff an isomorphism maps side A onto side A and side B onto side B.
pub fn layered_isomorphic(g1: &TwoLayerGraph, g2: &TwoLayerGraph) -> bool {
    g1.side_sizes() == g2.side_sizes() && canonical_key(&g1.graph, &g1.side) == canonical_key(&g2.graph, &g2.side)
}

impl LayeredGraph {
    /// Validates that `layers` partitions the vertices and that no edge skips a layer.
    pub fn new(graph: Graph, layers: Vec<Vec<usize>>) -> Result<Self> {
        let lg = LayeredGraph { graph, layers, colors: None };
        lg.check_partition()?;
        Ok(lg)
    }

    pub fn with_colors(mut self, colors: Vec<u8>) -> Self {
        self.colors = Some(colors);
        self
    }

    fn check_partition(&self) -> Result<()> {
        let n = self.graph.order();
        let mut layer_of = vec![usize::MAX; n];
        for (i, layer) in self.layers.iter().enumerate() {
            if layer.is_empty() {
                return Err(Error::InvalidInput(format!("layer {i} is empty")));
            }
            for &v in layer {
                if v >= n || layer_of[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!("vertex {v} misplaced in layer {i}")));
                }
                layer_of[v] = i;
            }
        }
        if layer_of.contains(&usize::MAX) {
            return Err(Error::InvalidInput("layers do not cover every vertex".into()));
        }
        for (u, v) in self.graph.edges() {
            if layer_of[u].abs_diff(layer_of[v]) > 1 {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) skips a layer")));
            }
        }
        Ok(())
    }

    /// Every vertex outside `N_0` has a neighbour in the previous layer.
    pub fn has_bfs_property(&self) -> bool {
        let layer_of = self.layer_of();
        self.layers.iter().enumerate().skip(1).all(|(i, layer)| {
            layer
                .iter()
                .all(|&v| self.graph.neighbors(v).iter().any(|&w| layer_of[w as usize] + 1 == i))
        })
    }

    pub fn layer_of(&self) -> Vec<usize> {
        let mut layer_of = vec![0; self.graph.order()];
        for (i, layer) in self.layers.iter().enumerate() {
            for &v in layer {
                layer_of[v] = i;
            }
        }
        layer_of
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        self.layers.iter().map(Vec::len).collect()
    }

    pub fn order(&self) -> usize {
        self.graph.order()
    }

    /// Index of the last layer (`d`).
    pub fn depth(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }

    /// `G[N_i ∪ N_{i+1}]` with side labels; `None` if the pair exceeds 32 vertices.
    pub fn two_layer(&self, i: usize) -> Option<TwoLayerGraph> {
        let verts: Vec<usize> = self.layers[i].iter().chain(&self.layers[i + 1]).copied().collect();
        if verts.len() > crate::graph::MAX_SMALL {
            return None;
        }
        let graph = self.graph.induced(&verts).to_small()?;
        let a = self.layers[i].len();
        let side = (0..verts.len()).map(|v| u32::from(v >= a)).collect();
        Some(TwoLayerGraph { graph, side })
    }

    /// Minimum degree over vertices outside the first and last layer.
    pub fn interior_min_degree(&self) -> Option<usize> {
        let d = self.depth();
        (1..d).flat_map(|i| self.layers[i].iter()).map(|&v| self.graph.degree(v)).min()
    }

    /// A layer-respecting isomorphism `G[N_0 ∪ N_1] → G[N_{d-1} ∪ N_d]`,
    /// returned as a map from vertices of `N_0 ∪ N_1` to vertices of `N_{d-1} ∪ N_d`.
    pub fn end_isomorphism(&self) -> Option<Vec<(usize, usize)>> {
        let d = self.depth();
        if d < 2 {
            return None;
        }
        let first = self.two_layer(0)?;
        let last = self.two_layer(d - 1)?;
        let map = find_isomorphism(&first.graph, &first.side, &last.graph, &last.side)?;
        let src: Vec<usize> = self.layers[0].iter().chain(&self.layers[1]).copied().collect();
        let dst: Vec<usize> = self.layers[d - 1].iter().chain(&self.layers[d]).copied().collect();
        Some(src.iter().enumerate().map(|(i, &v)| (v, dst[map[i]])).collect())
    }

    /// Sidecar format: graph6 on the first line, `layers=` with one layer index
    /// per vertex on the second, and optionally `colors=` on the third.
    pub fn to_layered_text(&self) -> String {
        let layer_of = self.layer_of();
        let mut out = self.graph.to_graph6();
        out.push('\n');
        out.push_str("layers=");
        out.push_str(&layer_of.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(","));
        out.push('\n');
        if let Some(colors) = &self.colors {
            out.push_str("colors=");
            out.push_str(&colors.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_layered_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let g6 = lines.next().ok_or_else(|| Error::Parse("missing graph6 line".into()))?;
        let graph = Graph::from_graph6(g6)?;
        let mut layer_of: Option<Vec<usize>> = None;
        let mut colors: Option<Vec<u8>> = None;
        for line in lines {
            if let Some(rest) = line.strip_prefix("layers=") {
                layer_of = Some(parse_list(rest)?);
            } else if let Some(rest) = line.strip_prefix("colors=") {
                colors = Some(parse_list(rest)?);
            } else {
                return Err(Error::Parse(format!("unexpected line `{line}`")));
            }
        }
        let layer_of = layer_of.ok_or_else(|| Error::Parse("missing layers= line".into()))?;
        if layer_of.len() != graph.order() {
            return Err(Error::Parse("layers= length differs from the order".into()));
        }
        let depth = layer_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut layers = vec![Vec::new(); depth];
        for (v, &l) in layer_of.iter().enumerate() {
            layers[l].push(v);
        }
        let mut lg = LayeredGraph::new(graph, layers)?;
        if let Some(c) = colors {
            if c.len() != lg.order() {
                return Err(Error::Parse("colors= length differs from the order".into()));
            }
            lg.colors = Some(c);
        }
        Ok(lg)
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad list entry `{t}`"))))
        .collect()
}

fn bfs_distances(g: &Graph, sources: &[usize]) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.order()];
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist[s] == u32::MAX {
            dist[s] = 0;
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[u] + 1;
                queue.push_back(w as usize);
            }
        }
    }
    dist
}

/// Distance layers `N_i(N_0)` from a non-empty source set.
pub fn bfs_layers(g: &Graph, sources: &[usize]) -> Result<LayeredGraph> {
    if sources.is_empty() {
        return Err(Error::InvalidInput("empty source set".into()));
    }
    if sources.iter().any(|&s| s >= g.order()) {
        return Err(Error::InvalidInput("source vertex out of range".into()));
    }
    let dist = bfs_distances(g, sources);
    if dist.contains(&u32::MAX) {
        return Err(Error::Disconnected);
    }
    let depth = *dist.iter().max().unwrap() as usize;
    let mut layers = vec![Vec::new(); depth + 1];
    for (v, &d) in dist.iter().enumerate() {
        layers[d as usize].push(v);
    }
    Ok(LayeredGraph { graph: g.clone(), layers, colors: None })
}

/// Eccentricity of one vertex; `None` if some vertex is unreachable.
pub fn eccentricity(g: &Graph, v: usize) -> Option<usize> {
    let dist = bfs_distances(g, &[v]);
    dist.iter().try_fold(0usize, |m, &d| (d != u32::MAX).then(|| m.max(d as usize)))
}

/// Diameter by BFS from every vertex (sources run in parallel).
pub fn diameter(g: &Graph) -> Result<usize> {
    if g.order() == 0 {
        return Ok(0);
    }
    (0..g.order())
        .into_par_iter()
        .map(|v| eccentricity(g, v).ok_or(Error::Disconnected))
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bfs_layer_sizes() {
        let c4 = SmallGraph::cycle(4).to_graph();
        assert_eq!(bfs_layers(&c4, &[0]).unwrap().layer_sizes(), vec![1, 2, 1]);
        for d in 2..6 {
            let k = SmallGraph::complete_bipartite(d, d).to_graph();
            let side: Vec<usize> = (0..d).collect();
            assert_eq!(bfs_layers(&k, &side).unwrap().layer_sizes(), vec![d, d]);
        }
    }

    #[test]
    fn bfs_disconnected() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(bfs_layers(&g, &[0]).unwrap_err(), Error::Disconnected);
        assert_eq!(diameter(&g).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn diameters() {
        for n in 1..10 {
            assert_eq!(diameter(&SmallGraph::path(n).to_graph()).unwrap(), n - 1);
        }
        assert_eq!(diameter(&SmallGraph::cycle(5).to_graph()).unwrap(), 2);
        assert_eq!(diameter(&SmallGraph::cycle(7).to_graph()).unwrap(), 3);
    }

    #[test]
    fn layered_iso_examples() {
        let k1 = SmallGraph::empty(1);
        let two = SmallGraph::empty(2);
        let a = TwoLayerGraph::from_parts(&k1, &two, &[0b11]);
        assert!(layered_isomorphic(&a, &a.clone()));
        let b = TwoLayerGraph::from_parts(&two, &k1, &[1, 1]);
        assert!(!layered_isomorphic(&a, &b));
    }

    #[test]
    fn bfs_output_is_valid_layering() {
        let g = SmallGraph::petersen().to_graph();
        let lg = bfs_layers(&g, &[0]).unwrap();
        assert!(LayeredGraph::new(lg.graph.clone(), lg.layers.clone()).is_ok());
        assert!(lg.has_bfs_property());
        assert_eq!(lg.layer_sizes(), vec![1, 3, 6]);
    }

    #[test]
    fn layered_text_roundtrip() {
        let g = SmallGraph::cycle(6).to_graph();
        let lg = bfs_layers(&g, &[0]).unwrap().with_colors(vec![0, 1, 0, 1, 0, 1]);
        let back = LayeredGraph::from_layered_text(&lg.to_layered_text()).unwrap();
        assert_eq!(back, lg);
    }
}
