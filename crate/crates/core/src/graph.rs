//! Small dense graphs (≤ 32 vertices, one `u32` row per vertex) and
//! adjacency-list graphs for the large explicit constructions.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_SMALL: usize = 32;

#[inline]
pub(crate) fn bit(v: usize) -> u32 {
    1u32 << v
}

/// Iterates the set bits of a row, lowest first.
#[inline]
pub fn bits(mut row: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if row == 0 {
            None
        } else {
            let v = row.trailing_zeros() as usize;
            row &= row - 1;
            Some(v)
        }
    })
}

#[inline]
pub(crate) fn low_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// Undirected simple graph on at most 32 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: u8,
    adj: [u32; MAX_SMALL],
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallGraph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

impl SmallGraph {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_SMALL, "SmallGraph supports at most 32 vertices");
        SmallGraph { n: n as u8, adj: [0; MAX_SMALL] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_SMALL {
            return Err(Error::InvalidInput(format!("{n} vertices exceed the 32-vertex limit")));
        }
        let mut g = SmallGraph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge ({u}, {v}) for order {n}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Builds a graph from raw adjacency rows; rows are symmetrized and loops dropped.
    pub fn from_rows(rows: &[u32]) -> Self {
        let n = rows.len();
        let mut g = SmallGraph::empty(n);
        let mask = low_mask(n);
        for (u, &row) in rows.iter().enumerate() {
            for v in bits(row & mask & !bit(u)) {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = SmallGraph::empty(n);
        for u in 0..n {
            g.adj[u] = low_mask(n) & !bit(u);
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = SmallGraph::empty(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = SmallGraph::path(n);
        if n >= 3 {
            g.add_edge(0, n - 1);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = SmallGraph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Complete multipartite graph with the given part sizes.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut g = SmallGraph::empty(n);
        let mut part_of = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(i, p));
        }
        for u in 0..n {
            for v in u + 1..n {
                if part_of[u] != part_of[v] {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        SmallGraph::from_edges(10, &edges).unwrap()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn row(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn rows(&self) -> &[u32] {
        &self.adj[..self.order()]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        debug_assert!(u != v && u < self.order() && v < self.order());
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    /// Appends an isolated vertex and returns its index.
    pub fn add_vertex(&mut self) -> usize {
        assert!(self.order() < MAX_SMALL, "SmallGraph is full");
        self.n += 1;
        self.order() - 1
    }

    #[inline]
    pub fn degree(&self, v: usize) -> u32 {
        self.adj[v].count_ones()
    }

    pub fn edge_count(&self) -> usize {
        self.rows().iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.order()).flat_map(move |u| bits(self.adj[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    pub fn is_edgeless(&self) -> bool {
        self.rows().iter().all(|&r| r == 0)
    }

    /// Induced subgraph on the listed vertices, relabelled in list order.
    pub fn induced(&self, verts: &[usize]) -> SmallGraph {
        let mut g = SmallGraph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> SmallGraph {
        let mut g = SmallGraph::empty(self.order());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Disjoint union with `other`; `other`'s vertices are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &SmallGraph) -> SmallGraph {
        let off = self.order();
        let mut g = SmallGraph::empty(off + other.order());
        g.adj[..off].copy_from_slice(self.rows());
        for v in 0..other.order() {
            g.adj[off + v] = other.adj[v] << off;
        }
        g
    }

    /// Maximum clique size (bit-parallel branch and bound); 0 for the empty graph.
    pub fn clique_number(&self) -> usize {
        fn expand(g: &SmallGraph, size: usize, mut cand: u32, best: &mut usize) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            while cand != 0 {
                if size + cand.count_ones() as usize <= *best {
                    return;
                }
                let v = cand.trailing_zeros() as usize;
                cand &= !bit(v);
                expand(g, size + 1, cand & g.adj[v], best);
            }
        }
        let mut best = 0;
        expand(self, 0, low_mask(self.order()), &mut best);
        best
    }

    /// True iff some clique of size `k` exists.
    pub fn has_clique(&self, k: usize) -> bool {
        fn find(g: &SmallGraph, need: usize, mut cand: u32) -> bool {
            if need == 0 {
                return true;
            }
            while cand.count_ones() as usize >= need {
                let v = cand.trailing_zeros() as usize;
                cand &= !bit(v);
                if find(g, need - 1, cand & g.adj[v]) {
                    return true;
                }
            }
            false
        }
        find(self, k, low_mask(self.order()))
    }

    pub fn is_k4_free(&self) -> bool {
        !self.has_clique(4)
    }

    pub fn is_triangle_free(&self) -> bool {
        !self.has_clique(3)
    }

    /// Exact test for a proper `k`-coloring.
    pub fn chromatic_at_most(&self, k: usize) -> bool {
        self.coloring(k).is_some()
    }

    /// A proper coloring with at most `k` colors, if one exists.
    pub fn coloring(&self, k: usize) -> Option<Vec<u8>> {
        let n = self.order();
        if n == 0 {
            return Some(Vec::new());
        }
        if k == 0 {
            return None;
        }
        let adj: Vec<Vec<u32>> = (0..n).map(|u| bits(self.adj[u]).map(|v| v as u32).collect()).collect();
        color_backtrack(&adj, k.min(255))
    }

    pub fn connected(&self) -> bool {
        let n = self.order();
        if n == 0 {
            return true;
        }
        let mut seen = bit(0);
        let mut frontier = bit(0);
        while frontier != 0 {
            let mut next = 0;
            for v in bits(frontier) {
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == low_mask(n)
    }

    pub fn to_graph(&self) -> Graph {
        Graph::from_edges(self.order(), self.edges()).expect("small graph edges are valid")
    }

    pub fn to_graph6(&self) -> String {
        graph6_encode(self.order(), self.edges())
    }

    pub fn from_graph6(s: &str) -> Result<Self> {
        let (n, edges) = graph6_decode(s)?;
        SmallGraph::from_edges(n, &edges)
    }
}

/// DSatur-ordered backtracking coloring over adjacency lists.
pub(crate) fn color_backtrack(adj: &[Vec<u32>], k: usize) -> Option<Vec<u8>> {
    let n = adj.len();
    const NONE: u8 = u8::MAX;
    let mut color = vec![NONE; n];
    if k >= n {
        return Some((0..n).map(|i| i as u8).collect());
    }
    // colour counters are tracked for at most 64 colours
    let k = k.min(64);
    let mut forbid_count = vec![[0u16; 64]; n];

    fn pick(adj: &[Vec<u32>], color: &[u8], forbid: &[[u16; 64]], k: usize) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..adj.len() {
            if color[v] != u8::MAX {
                continue;
            }
            let sat = forbid[v][..k].iter().filter(|&&c| c > 0).count();
            let deg = adj[v].len();
            let cand = (sat, deg, usize::MAX - v);
            if best.is_none_or(|b| (cand.0, cand.1, cand.2) > (b.0, b.1, b.2)) {
                best = Some(cand);
            }
        }
        best.map(|b| usize::MAX - b.2)
    }

    fn go(
        adj: &[Vec<u32>],
        color: &mut [u8],
        forbid: &mut [[u16; 64]],
        k: usize,
        used: usize,
        left: usize,
    ) -> bool {
        if left == 0 {
            return true;
        }
        let v = pick(adj, color, forbid, k).unwrap();
        let limit = (used + 1).min(k);
        for c in 0..limit {
            if forbid[v][c] > 0 {
                continue;
            }
            color[v] = c as u8;
            for &w in &adj[v] {
                forbid[w as usize][c] += 1;
            }
            if go(adj, color, forbid, k, used.max(c + 1), left - 1) {
                return true;
            }
            for &w in &adj[v] {
                forbid[w as usize][c] -= 1;
            }
            color[v] = u8::MAX;
        }
        false
    }

    if go(adj, &mut color, &mut forbid_count, k, 0, n) {
        Some(color)
    } else {
        None
    }
}

/// Undirected simple graph stored as sorted adjacency lists; any order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n] }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidInput(format!("bad edge ({u}, {v}) for order {n}")));
            }
            g.adj[u].push(v as u32);
            g.adj[v].push(u as u32);
        }
        g.normalize();
        Ok(g)
    }

    fn normalize(&mut self) {
        for row in &mut self.adj {
            row.sort_unstable();
            row.dedup();
        }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v);
        if let Err(pos) = self.adj[u].binary_search(&(v as u32)) {
            self.adj[u].insert(pos, v as u32);
        }
        if let Err(pos) = self.adj[v].binary_search(&(u as u32)) {
            self.adj[v].insert(pos, u as u32);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter().filter(move |&&v| (v as usize) > u).map(move |&v| (u, v as usize))
        })
    }

    /// Dense copy; `None` above 32 vertices.
    pub fn to_small(&self) -> Option<SmallGraph> {
        if self.order() > MAX_SMALL {
            return None;
        }
        let edges: Vec<_> = self.edges().collect();
        SmallGraph::from_edges(self.order(), &edges).ok()
    }

    /// Induced subgraph, relabelled in list order.
    pub fn induced(&self, verts: &[usize]) -> Graph {
        let mut index = vec![u32::MAX; self.order()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i as u32;
        }
        let mut g = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            g.adj[i] = self.adj[v]
                .iter()
                .filter(|&&w| index[w as usize] != u32::MAX).map(|&w| index[w as usize])
                .collect();
            g.adj[i].sort_unstable();
        }
        g
    }

    /// K4 test: for every edge, the common neighbourhood must be independent.
    pub fn is_k4_free(&self) -> bool {
        for (u, v) in self.edges() {
            let common = intersect(&self.adj[u], &self.adj[v]);
            for (i, &a) in common.iter().enumerate() {
                for &b in &common[i + 1..] {
                    if self.has_edge(a as usize, b as usize) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn is_proper_coloring(&self, colors: &[u8]) -> bool {
        colors.len() == self.order() && self.edges().all(|(u, v)| colors[u] != colors[v])
    }

    /// Exact `k`-coloring search (backtracking); intended for a few hundred vertices.
    pub fn coloring(&self, k: usize) -> Option<Vec<u8>> {
        color_backtrack(&self.adj, k)
    }

    pub fn to_graph6(&self) -> String {
        graph6_encode(self.order(), self.edges())
    }

    pub fn from_graph6(s: &str) -> Result<Self> {
        let (n, edges) = graph6_decode(s)?;
        Graph::from_edges(n, edges)
    }

    /// Plain edge list, one `u v` pair per line; the first line is `# n=<order>`.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("# n={}\n", self.order());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list format. Without a `# n=` header the order is one
    /// more than the largest vertex index.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest.trim().strip_prefix("n=") {
                    n = Some(v.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad order", lineno + 1)))?);
                }
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(a), Some(b), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::Parse(format!("line {}: expected `u v`", lineno + 1)));
            };
            let a: usize = a.parse().map_err(|_| Error::Parse(format!("line {}: bad vertex", lineno + 1)))?;
            let b: usize = b.parse().map_err(|_| Error::Parse(format!("line {}: bad vertex", lineno + 1)))?;
            edges.push((a, b));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0));
        Graph::from_edges(n, edges)
    }
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

// graph6: N(n) header followed by the upper triangle, column by column
// (x(0,1), x(0,2), x(1,2), x(0,3), ...), packed six bits per byte + 63.

fn graph6_encode(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> String {
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.push(126);
        out.push(126);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let total = n * n.saturating_sub(1) / 2;
    let mut bitvec = vec![false; total];
    for (u, v) in edges {
        let (i, j) = if u < v { (u, v) } else { (v, u) };
        bitvec[j * (j - 1) / 2 + i] = true;
    }
    for chunk in bitvec.chunks(6) {
        let mut byte = 0u8;
        for (k, &b) in chunk.iter().enumerate() {
            if b {
                byte |= 1 << (5 - k);
            }
        }
        out.push(byte + 63);
    }
    String::from_utf8(out).expect("graph6 is printable ASCII")
}

fn graph6_decode(s: &str) -> Result<(usize, Vec<(usize, usize)>)> {
    let s = s.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s);
    let bytes = s.as_bytes();
    if bytes.is_empty() {
        return Err(Error::Parse("empty graph6 string".into()));
    }
    if bytes.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(Error::Parse("graph6 byte out of range".into()));
    }
    let (n, body) = if bytes[0] != 126 {
        (bytes[0] as usize - 63, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(Error::Parse("truncated graph6 header".into()));
        }
        let n = bytes[1..4].iter().fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(Error::Parse("truncated graph6 header".into()));
        }
        let n = bytes[2..8].iter().fold(0usize, |acc, &b| (acc << 6) | (b as usize - 63));
        (n, &bytes[8..])
    };
    let total = n * n.saturating_sub(1) / 2;
    let need = total.div_ceil(6);
    if body.len() != need {
        return Err(Error::Parse(format!("graph6 body has {} bytes, expected {need}", body.len())));
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[k / 6] - 63;
            if byte & (1 << (5 - k % 6)) != 0 {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    Ok((n, edges))
}
