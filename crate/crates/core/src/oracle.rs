//! Brute-force reference implementations for cross-checking the optimized
//! code on small inputs.
//!
//! Nothing here calls into the searches or the graph types' algorithms:
//! inputs are copied into plain adjacency matrices or column vectors first.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::graph::SmallGraph;
use crate::rational::RatioFraction;
use crate::search_chi::ChiSearchConfig;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_period: usize,
    pub max_column_sum: u32,
    /// Search nodes before giving up.
    pub max_nodes: u64,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 16,
            max_period: 12,
            max_column_sum: 6,
            max_nodes: 2_000_000_000,
            time_limit: Duration::from_secs(600),
        }
    }
}

fn adjacency(g: &SmallGraph) -> Vec<Vec<bool>> {
    let n = g.order();
    (0..n).map(|u| (0..n).map(|v| u != v && g.has_edge(u, v)).collect()).collect()
}

/// Largest clique, by checking every vertex subset.
pub fn naive_clique_number(g: &SmallGraph) -> usize {
    let adj = adjacency(g);
    let n = adj.len();
    assert!(n <= 20, "subset scan is limited to 20 vertices");
    let mut best = 0;
    for mask in 0u32..(1u32 << n) {
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if verts.len() <= best {
            continue;
        }
        let clique = verts.iter().enumerate().all(|(i, &u)| verts[i + 1..].iter().all(|&v| adj[u][v]));
        if clique {
            best = verts.len();
        }
    }
    best
}

/// Diameter by Floyd–Warshall; `None` if the graph is disconnected.
pub fn naive_diameter(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    const INF: usize = usize::MAX / 4;
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for &(u, v) in edges {
        if u != v {
            d[u][v] = 1;
            d[v][u] = 1;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let mut diam = 0;
    for row in &d {
        for &x in row {
            if x >= INF {
                return None;
            }
            diam = diam.max(x);
        }
    }
    Some(diam)
}

#[allow(clippy::needless_range_loop)]
fn has_k4(adj: &[Vec<bool>]) -> bool {
    let n = adj.len();
    for a in 0..n {
        for b in a + 1..n {
            if !adj[a][b] {
                continue;
            }
            for c in b + 1..n {
                if !adj[a][c] || !adj[b][c] {
                    continue;
                }
                for d in c + 1..n {
                    if adj[a][d] && adj[b][d] && adj[c][d] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// All maximal K4-free cross-edge sets between `g1` and `g2`, by scanning
/// every subset of the `|V1|·|V2|` possible edges. Each set is given as rows
/// of `g1` with bit `j` for an edge to vertex `j` of `g2`; sorted.
pub fn naive_maximal_edge_sets(g1: &SmallGraph, g2: &SmallGraph) -> Vec<Vec<u32>> {
    let (a1, a2) = (adjacency(g1), adjacency(g2));
    let (n1, n2) = (a1.len(), a2.len());
    let m = n1 * n2;
    assert!(m <= 20, "subset scan is limited to 20 possible edges");
    let joint = |mask: u32| {
        let n = n1 + n2;
        let mut adj = vec![vec![false; n]; n];
        for u in 0..n1 {
            for v in 0..n1 {
                adj[u][v] = a1[u][v];
            }
        }
        for u in 0..n2 {
            for v in 0..n2 {
                adj[n1 + u][n1 + v] = a2[u][v];
            }
        }
        for e in 0..m {
            if mask >> e & 1 == 1 {
                let (i, j) = (e / n2, e % n2);
                adj[i][n1 + j] = true;
                adj[n1 + j][i] = true;
            }
        }
        adj
    };
    let free: Vec<bool> = (0..1u32 << m).map(|mask| !has_k4(&joint(mask))).collect();
    let mut out = Vec::new();
    for mask in 0..1u32 << m {
        if !free[mask as usize] {
            continue;
        }
        let maximal = (0..m).all(|e| mask >> e & 1 == 1 || !free[(mask | 1 << e) as usize]);
        if maximal {
            let rows: Vec<u32> = (0..n1)
                .map(|i| (0..n2).filter(|&j| mask >> (i * n2 + j) & 1 == 1).fold(0u32, |r, j| r | 1 << j))
                .collect();
            out.push(rows);
        }
    }
    out.sort();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleChiResult {
    pub best_ratio: Option<RatioFraction>,
    /// A best repeatable column sequence, `period + 2` columns.
    pub columns: Option<Vec<Vec<u32>>>,
    pub nodes: u64,
}

struct NaiveChi<'a> {
    cfg: &'a ChiSearchConfig,
    columns: Vec<Vec<u32>>,
    perms: Vec<Vec<usize>>,
    best: Option<(RatioFraction, Vec<Vec<u32>>)>,
    nodes: u64,
    max_nodes: u64,
    deadline: Instant,
}

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

impl NaiveChi<'_> {
    fn degree_ok(&self, prev: &[u32], mid: &[u32], next: &[u32]) -> bool {
        let total = |col: &[u32]| col.iter().sum::<u32>();
        (0..mid.len()).all(|c| {
            mid[c] == 0 || total(prev) - prev[c] + total(mid) - mid[c] + total(next) - next[c] >= self.cfg.delta
        })
    }

    fn can_follow(from: &[u32], to: &[u32]) -> bool {
        (0..to.len()).all(|c| to[c] == 0 || (0..from.len()).any(|d| d != c && from[d] > 0))
    }

    fn closes(&self, seq: &[Vec<u32>]) -> bool {
        let t = seq.len() - 1;
        self.perms.iter().any(|p| {
            (0..self.cfg.chi).all(|c| seq[t - 1][p[c]] == seq[0][c] && seq[t][p[c]] == seq[1][c])
        })
    }

    /// Extends `seq` to exactly `len` columns.
    fn dfs(&mut self, seq: &mut Vec<Vec<u32>>, order: u64, len: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.max_nodes || (self.nodes.is_multiple_of(65536) && Instant::now() > self.deadline) {
            return Err(Error::BudgetExceeded(format!("gave up after {} nodes", self.nodes)));
        }
        let k = seq.len();
        if k == len {
            let period = len - 2;
            let singleton_ok = !self.cfg.require_singleton_layer
                || seq[1..=period].iter().any(|c| c.iter().filter(|&&x| x > 0).count() == 1);
            if singleton_ok && self.closes(seq) {
                let block: u64 = seq[1..=period].iter().flatten().map(|&x| u64::from(x)).sum();
                let ratio = RatioFraction::new(period as u64, block);
                if self.best.as_ref().is_none_or(|(b, _)| ratio > *b) {
                    self.best = Some((ratio, seq.clone()));
                }
            }
            return Ok(());
        }
        for i in 0..self.columns.len() {
            let next = self.columns[i].clone();
            if !Self::can_follow(&seq[k - 1], &next) {
                continue;
            }
            if k >= 2 && !self.degree_ok(&seq[k - 2], &seq[k - 1], &next) {
                continue;
            }
            let new_order = order + next.iter().map(|&x| u64::from(x)).sum::<u64>();
            // some rotation of a strictly better block keeps every prefix below k/best
            if k <= len - 2 {
                if let Some((b, _)) = &self.best {
                    if new_order * b.numerator() >= k as u64 * b.denominator() {
                        continue;
                    }
                }
            }
            seq.push(next);
            let r = self.dfs(seq, new_order, len);
            seq.pop();
            r?;
        }
        Ok(())
    }
}

/// Best repeatable column sequence with period at most `cfg.max_period`, by
/// plain depth-first search from every ordered start pair, one period at a
/// time. The only pruning is the degree window and a bound from the best
/// ratio found so far.
#[allow(clippy::needless_range_loop)]
pub fn naive_search_chi(cfg: &ChiSearchConfig, budget: &OracleBudget) -> Result<OracleChiResult> {
    if cfg.max_period > budget.max_period || cfg.max_column_sum > budget.max_column_sum {
        return Err(Error::BudgetExceeded("configuration exceeds the oracle budget".into()));
    }
    let chi = cfg.chi;
    let mut columns = Vec::new();
    let mut cur = vec![0u32; chi];
    'outer: loop {
        let sum: u32 = cur.iter().sum();
        let present = cur.iter().filter(|&&x| x > 0).count();
        if sum >= 1
            && sum <= cfg.max_column_sum
            && cur.iter().all(|&x| x <= cfg.max_class_size)
            && (!cfg.assume_missing_color || present < chi)
        {
            columns.push(cur.clone());
        }
        for i in 0..chi {
            if cur[i] < cfg.max_column_sum {
                cur[i] += 1;
                continue 'outer;
            }
            cur[i] = 0;
        }
        break;
    }
    let mut s = NaiveChi {
        cfg,
        columns,
        perms: permutations(chi),
        best: None,
        nodes: 0,
        max_nodes: budget.max_nodes,
        deadline: Instant::now() + budget.time_limit,
    };
    for period in 2..=cfg.max_period {
        for a in 0..s.columns.len() {
            for b in 0..s.columns.len() {
                let (c0, c1) = (s.columns[a].clone(), s.columns[b].clone());
                if !NaiveChi::can_follow(&c0, &c1) {
                    continue;
                }
                let order = c1.iter().map(|&x| u64::from(x)).sum::<u64>();
                if let Some((r, _)) = &s.best {
                    if order * r.numerator() >= r.denominator() {
                        continue;
                    }
                }
                let mut seq = vec![c0, c1];
                s.dfs(&mut seq, order, period + 2)?;
            }
        }
    }
    let nodes = s.nodes;
    Ok(match s.best {
        Some((r, cols)) => OracleChiResult { best_ratio: Some(r), columns: Some(cols), nodes },
        None => OracleChiResult { best_ratio: None, columns: None, nodes },
    })
}
