//! Search over explicit layer graphs for the best repeatable K4-free
//! layered graph.
//!
//! Layers are drawn from the K4-free graphs up to a size cap; consecutive
//! layers are joined by maximal K4-free cross-edge sets. A state is the last
//! layer up to isomorphism, annotated with the degree each of its vertices
//! has so far, so two paths ending in the same state have the same futures
//! and only the one of smaller order is kept. Start pairs, target passes and
//! prefix pruning work as in [`crate::search_chi`].
//!
//! Transitions out of a state are computed once and shared by all start
//! pairs.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, OnceLock, RwLock};

use dashmap::DashMap;
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_key, CanonicalKey};
use crate::enumerate::hereditary_of_order;
use crate::error::{Error, Result};
use crate::graph::{bit, bits, Graph, SmallGraph};
use crate::layered::{layered_isomorphic, LayeredGraph, TwoLayerGraph};
use crate::rational::RatioFraction;

/// Normalizations of optimal blocks that restrict which layers and layer
/// pairs are generated. Each is only valid for one minimum degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssumptionProfile {
    None,
    /// δ = 5: a layer of size 4 induces `C4` and both neighbouring layers are edgeless.
    Delta5,
    /// δ = 6: layers have at most 5 vertices; a layer of size 5 induces
    /// `K_{2,3}` or `C5` with edgeless neighbours; the two neighbours of any
    /// layer have at least 4 vertices together; two adjacent layers of size 4
    /// induce `{S4, S4}`, `{4K1, 4K1}` or `{4K1, C4}`.
    Delta6,
}

impl AssumptionProfile {
    pub fn legal_for(self, delta: u32) -> bool {
        match self {
            AssumptionProfile::None => true,
            AssumptionProfile::Delta5 => delta == 5,
            AssumptionProfile::Delta6 => delta == 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            AssumptionProfile::None => "none",
            AssumptionProfile::Delta5 => "delta5",
            AssumptionProfile::Delta6 => "delta6",
        }
    }

    pub fn flags(self) -> Vec<&'static str> {
        match self {
            AssumptionProfile::None => vec![],
            AssumptionProfile::Delta5 => vec!["size4_layer_is_c4"],
            AssumptionProfile::Delta6 => vec![
                "size5_layer_is_k23_or_c5",
                "layer_size_at_most_5",
                "adjacent_size4_pairs_normalized",
            ],
        }
    }

    fn max_layer(self) -> usize {
        match self {
            AssumptionProfile::Delta6 => 5,
            _ => usize::MAX,
        }
    }
}

impl std::str::FromStr for AssumptionProfile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(AssumptionProfile::None),
            "delta5" => Ok(AssumptionProfile::Delta5),
            "delta6" => Ok(AssumptionProfile::Delta6),
            _ => Err(Error::Parse(format!("unknown profile `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaSearchConfig {
    pub delta: u32,
    pub max_period: usize,
    pub max_layer_size: usize,
    pub profile: AssumptionProfile,
}

impl OmegaSearchConfig {
    pub fn new(delta: u32, max_period: usize) -> Self {
        OmegaSearchConfig {
            delta,
            max_period,
            max_layer_size: (2 * delta as usize).min(16),
            profile: AssumptionProfile::None,
        }
    }

    pub fn with_profile(mut self, profile: AssumptionProfile) -> Self {
        self.profile = profile;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta < 1 {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if self.max_period < 2 {
            return Err(Error::InvalidInput("max_period must be at least 2".into()));
        }
        if !(1..=16).contains(&self.max_layer_size) {
            return Err(Error::InvalidInput("max_layer_size must lie in 1..=16".into()));
        }
        if !self.profile.legal_for(self.delta) {
            return Err(Error::InvalidInput(format!(
                "profile {} does not apply to delta {}",
                self.profile.name(),
                self.delta
            )));
        }
        Ok(())
    }

    fn layer_cap(&self) -> usize {
        self.max_layer_size.min(self.profile.max_layer())
    }

    pub fn conditional_flags(&self) -> Vec<String> {
        let mut flags = vec![format!("period<={}", self.max_period)];
        if self.max_layer_size < 2 * self.delta as usize {
            flags.push(format!("layer_size<={}", self.max_layer_size));
        }
        flags.extend(self.profile.flags().into_iter().map(String::from));
        flags
    }
}

/// Search state in explicit form: keys of the start interface and of the
/// degree-annotated last layer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaSearchState {
    pub start_interface: CanonicalKey,
    pub last_layer: CanonicalKey,
    pub layer_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaWitness {
    pub ratio: RatioFraction,
    pub period: usize,
    /// The repeatable graph, `period + 2` layers.
    pub graph: LayeredGraph,
}

impl OmegaWitness {
    /// Layer sizes of the fundamental block (all layers but the first and last).
    pub fn block_sizes(&self) -> Vec<usize> {
        let s = self.graph.layer_sizes();
        s[1..s.len() - 1].to_vec()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaSearchResult {
    pub config: OmegaSearchConfig,
    pub witness: Option<OmegaWitness>,
    pub states_expanded: u64,
    pub final_target: RatioFraction,
    pub passes: usize,
}

impl OmegaSearchResult {
    pub fn best_ratio(&self) -> Option<RatioFraction> {
        self.witness.as_ref().map(|w| w.ratio)
    }
}

/// Whether adding cross edge `(i, j)` to `cross` would create a K4.
/// `cross[i]` has bit `j` set for each edge `(i, j)`; `col[j]` is the transpose.
fn blocked(prev: &SmallGraph, next: &SmallGraph, cross: &[u32], col: &[u32], i: usize, j: usize) -> bool {
    // two more vertices of prev, forming a triangle with i, both adjacent to j
    let common = prev.row(i) & col[j];
    if bits(common).any(|v| prev.row(v) & common != 0) {
        return true;
    }
    // one more vertex on each side
    for i2 in bits(common) {
        if next.row(j) & cross[i] & cross[i2] != 0 {
            return true;
        }
    }
    // two more vertices of next
    let reach = next.row(j) & cross[i];
    bits(reach).any(|w| next.row(w) & reach != 0)
}

struct EdgeSetSearch<'a> {
    prev: &'a SmallGraph,
    next: &'a SmallGraph,
    need: &'a [u32],
    cover_next: bool,
    cross: Vec<u32>,
    col: Vec<u32>,
    excluded: Vec<(usize, usize)>,
}

impl EdgeSetSearch<'_> {
    fn pairs(&self) -> usize {
        self.prev.order() * self.next.order()
    }

    /// Could `(i, j)` still be blocked if every undecided pair from `pos` on were added?
    fn blockable(&self, i: usize, j: usize, pos: usize) -> bool {
        let b = self.next.order();
        let mut cross = self.cross.clone();
        let mut col = self.col.clone();
        for p in pos..self.pairs() {
            let (x, y) = (p / b, p % b);
            cross[x] |= bit(y);
            col[y] |= bit(x);
        }
        blocked(self.prev, self.next, &cross, &col, i, j)
    }

    fn run(&mut self, pos: usize, out: &mut dyn FnMut(&[u32])) {
        let b = self.next.order();
        if pos > 0 && pos.is_multiple_of(b) {
            let row = pos / b - 1;
            if self.cross[row].count_ones() < self.need[row] {
                return;
            }
        }
        if self.excluded.iter().any(|&(i, j)| !self.blockable(i, j, pos)) {
            return;
        }
        if pos == self.pairs() {
            if self.cover_next && (0..b).any(|j| self.col[j] == 0) {
                return;
            }
            if self
                .excluded
                .iter()
                .all(|&(i, j)| blocked(self.prev, self.next, &self.cross, &self.col, i, j))
            {
                out(&self.cross);
            }
            return;
        }
        let (i, j) = (pos / b, pos % b);
        if blocked(self.prev, self.next, &self.cross, &self.col, i, j) {
            self.run(pos + 1, out);
            return;
        }
        self.cross[i] |= bit(j);
        self.col[j] |= bit(i);
        self.run(pos + 1, out);
        self.cross[i] &= !bit(j);
        self.col[j] &= !bit(i);
        self.excluded.push((i, j));
        self.run(pos + 1, out);
        self.excluded.pop();
    }
}

/// Visits every maximal K4-free cross-edge set between `prev` and `next`
/// (rows of `prev` into `next`) in which vertex `i` of `prev` gets at least
/// `need[i]` cross edges and, if `cover_next`, every vertex of `next` gets one.
fn for_each_maximal_edge_set(
    prev: &SmallGraph,
    next: &SmallGraph,
    need: &[u32],
    cover_next: bool,
    out: &mut dyn FnMut(&[u32]),
) {
    let mut s = EdgeSetSearch {
        prev,
        next,
        need,
        cover_next,
        cross: vec![0; prev.order()],
        col: vec![0; next.order()],
        excluded: Vec::new(),
    };
    s.run(0, out);
}

fn side_labels(a: usize, b: usize) -> Vec<u32> {
    (0..a + b).map(|v| u32::from(v >= a)).collect()
}

/// Maximal K4-free cross-edge sets between two layer graphs, one per class of
/// the joint graph up to isomorphisms that keep each layer in place. Each set
/// is given as rows of `prev` over the vertices of `next`.
pub fn maximal_edge_sets(prev: &SmallGraph, next: &SmallGraph) -> Vec<Vec<u32>> {
    assert!(prev.order() + next.order() <= crate::graph::MAX_SMALL);
    let need = vec![0; prev.order()];
    let labels = side_labels(prev.order(), next.order());
    let mut seen: FxHashMap<CanonicalKey, Vec<u32>> = FxHashMap::default();
    for_each_maximal_edge_set(prev, next, &need, false, &mut |cross| {
        let joint = TwoLayerGraph::from_parts(prev, next, cross);
        seen.entry(canonical_key(&joint.graph, &labels)).or_insert_with(|| cross.to_vec());
    });
    let mut out: Vec<(CanonicalKey, Vec<u32>)> = seen.into_iter().collect();
    out.sort();
    out.into_iter().map(|(_, c)| c).collect()
}

/// Every maximal K4-free cross-edge set, without identifying isomorphic
/// ones, sorted.
pub fn all_maximal_edge_sets(prev: &SmallGraph, next: &SmallGraph) -> Vec<Vec<u32>> {
    assert!(prev.order() + next.order() <= crate::graph::MAX_SMALL);
    let need = vec![0; prev.order()];
    let mut out = Vec::new();
    for_each_maximal_edge_set(prev, next, &need, false, &mut |cross| out.push(cross.to_vec()));
    out.sort();
    out.dedup();
    out
}

/// Degree, clique and end-isomorphism conditions of a repeatable graph.
pub fn verify_repeatable(g: &LayeredGraph, delta: u32) -> bool {
    let d = g.depth();
    if d < 2 || !g.has_bfs_property() || !g.graph.is_k4_free() {
        return false;
    }
    let interior_ok = (1..d).all(|i| g.layers[i].iter().all(|&v| g.graph.degree(v) >= delta as usize));
    let (Some(first), Some(last)) = (g.two_layer(0), g.two_layer(d - 1)) else {
        return false;
    };
    interior_ok && layered_isomorphic(&first, &last)
}

fn is_c4(g: &SmallGraph) -> bool {
    g.order() == 4 && g.edge_count() == 4 && (0..4).all(|v| g.degree(v) == 2)
}

fn iso_to(g: &SmallGraph, h: &SmallGraph) -> bool {
    g.order() == h.order()
        && g.edge_count() == h.edge_count()
        && canonical_key(g, &vec![0; g.order()]) == canonical_key(h, &vec![0; h.order()])
}

fn layer_allowed(profile: AssumptionProfile, g: &SmallGraph) -> bool {
    match profile {
        AssumptionProfile::None => true,
        AssumptionProfile::Delta5 => g.order() != 4 || is_c4(g),
        AssumptionProfile::Delta6 => {
            g.order() < 5
                || (g.order() == 5
                    && (iso_to(g, &SmallGraph::complete_bipartite(2, 3)) || iso_to(g, &SmallGraph::cycle(5))))
        }
    }
}

fn pair_allowed(profile: AssumptionProfile, prev: &SmallGraph, next: &SmallGraph) -> bool {
    let special = match profile {
        AssumptionProfile::None => return true,
        AssumptionProfile::Delta5 => 4,
        AssumptionProfile::Delta6 => 5,
    };
    if prev.order() == special && !next.is_edgeless() || next.order() == special && !prev.is_edgeless() {
        return false;
    }
    if profile == AssumptionProfile::Delta6 && prev.order() == 4 && next.order() == 4 {
        let star = SmallGraph::complete_bipartite(1, 3);
        let empty = SmallGraph::empty(4);
        let c4 = SmallGraph::cycle(4);
        let kind = |g: &SmallGraph| {
            if iso_to(g, &star) {
                Some(0)
            } else if iso_to(g, &empty) {
                Some(1)
            } else if iso_to(g, &c4) {
                Some(2)
            } else {
                None
            }
        };
        return matches!(
            (kind(prev), kind(next)),
            (Some(0), Some(0)) | (Some(1), Some(1)) | (Some(1), Some(2)) | (Some(2), Some(1))
        );
    }
    true
}

fn middle_allowed(profile: AssumptionProfile, before: usize, after: usize) -> bool {
    profile != AssumptionProfile::Delta6 || before + after >= 4
}

/// Lower bound on the total size of `r` consecutive layers of a block:
/// a layer whose two neighbours are also among them has a vertex with `δ`
/// neighbours inside the window of three.
fn window_lower_bound(delta: u32, r: usize) -> u64 {
    (u64::from(delta) + 1) * (r / 3) as u64 + (r % 3) as u64
}

/// Largest first layer worth trying at target `τ`: that layer is a copy of a
/// block layer, and the rest of a block of length `p` needs
/// `window_lower_bound(p - 1)` vertices out of at most `p / τ`.
fn first_layer_bound(cfg: &OmegaSearchConfig, target: RatioFraction) -> usize {
    let (tn, td) = (target.numerator(), target.denominator());
    let mut best = 0u64;
    for p in 2..=cfg.max_period as u64 {
        let total = p * td / tn;
        best = best.max(total.saturating_sub(window_lower_bound(cfg.delta, p as usize - 1)));
    }
    (best as usize).min(cfg.layer_cap())
}

fn target_schedule(cfg: &OmegaSearchConfig) -> Vec<RatioFraction> {
    let floor = RatioFraction::new(1, cfg.layer_cap() as u64);
    let mut out = Vec::new();
    for k in 0..32u64 {
        let t = RatioFraction::new(7 * (32 - k), 96 * u64::from(cfg.delta));
        if t <= floor {
            break;
        }
        out.push(t);
    }
    out.push(floor);
    out
}

struct StateInfo {
    graph: SmallGraph,
    degrees: Vec<u32>,
}

struct Transition {
    next: u32,
    closure: u32,
    layer: u32,
    cross: Vec<u32>,
    /// `position[j]`: index of new-layer vertex `j` in the next state's order.
    position: Vec<u8>,
}

struct Start {
    closure: u32,
    state: u32,
    first: SmallGraph,
    second: SmallGraph,
    cross: Vec<u32>,
    position: Vec<u8>,
}

struct Engine<'a> {
    cfg: &'a OmegaSearchConfig,
    library: Vec<OnceLock<Vec<SmallGraph>>>,
    states: DashMap<CanonicalKey, u32>,
    infos: RwLock<Vec<Arc<StateInfo>>>,
    closures: DashMap<CanonicalKey, u32>,
    closure_count: AtomicU32,
    transitions: DashMap<(u32, u8), Arc<Vec<Transition>>>,
    starts: DashMap<(u8, u8), Arc<Vec<Start>>>,
}

#[derive(Clone, Copy)]
struct Node {
    state: u32,
    prev_size: u8,
    order: u64,
    parent: u32,
    layer_size: u8,
    via: u32,
}

struct Candidate {
    ratio: RatioFraction,
    period: usize,
    start: usize,
    graph: LayeredGraph,
}

impl<'a> Engine<'a> {
    fn new(cfg: &'a OmegaSearchConfig) -> Self {
        Engine {
            cfg,
            library: (0..=cfg.layer_cap()).map(|_| OnceLock::new()).collect(),
            states: DashMap::new(),
            infos: RwLock::new(Vec::new()),
            closures: DashMap::new(),
            closure_count: AtomicU32::new(0),
            transitions: DashMap::new(),
            starts: DashMap::new(),
        }
    }

    fn layers(&self, size: usize) -> &[SmallGraph] {
        self.library[size].get_or_init(|| {
            let profile = self.cfg.profile;
            hereditary_of_order(size, |g| g.is_k4_free())
                .into_iter()
                .filter(|g| layer_allowed(profile, g))
                .collect()
        })
    }

    fn intern_state(&self, graph: &SmallGraph, degrees: &[u32]) -> (u32, Vec<u8>) {
        let form = canonical_form(graph, degrees);
        let position = form.position.iter().map(|&p| p as u8).collect();
        let id = *self.states.entry(form.key).or_insert_with(|| {
            let mut infos = self.infos.write().unwrap();
            infos.push(Arc::new(StateInfo { graph: form.graph, degrees: form.labels }));
            (infos.len() - 1) as u32
        });
        (id, position)
    }

    fn info(&self, id: u32) -> Arc<StateInfo> {
        self.infos.read().unwrap()[id as usize].clone()
    }

    fn intern_closure(&self, key: CanonicalKey) -> u32 {
        *self.closures.entry(key).or_insert_with(|| self.closure_count.fetch_add(1, Ordering::Relaxed))
    }

    /// Degree-annotated new layer and side-labelled joint graph for one edge set.
    fn describe(&self, prev: &SmallGraph, next: &SmallGraph, cross: &[u32]) -> (u32, Vec<u8>, u32) {
        let joint = TwoLayerGraph::from_parts(prev, next, cross);
        let a = prev.order();
        let degrees: Vec<u32> = (0..next.order()).map(|j| joint.graph.degree(a + j)).collect();
        let (state, position) = self.intern_state(next, &degrees);
        let closure = self.intern_closure(canonical_key(&joint.graph, &joint.side));
        (state, position, closure)
    }

    fn transitions(&self, state: u32, size: usize) -> Arc<Vec<Transition>> {
        if let Some(t) = self.transitions.get(&(state, size as u8)) {
            return t.clone();
        }
        let info = self.info(state);
        let delta = self.cfg.delta;
        let need: Vec<u32> = info.degrees.iter().map(|&d| delta.saturating_sub(d)).collect();
        let mut out = Vec::new();
        if need.iter().all(|&n| n as usize <= size) {
            let mut seen: FxHashMap<(u32, u32), ()> = FxHashMap::default();
            for (li, layer) in self.layers(size).iter().enumerate() {
                if !pair_allowed(self.cfg.profile, &info.graph, layer) {
                    continue;
                }
                let mut sets = Vec::new();
                for_each_maximal_edge_set(&info.graph, layer, &need, true, &mut |c| sets.push(c.to_vec()));
                for cross in sets {
                    let (next, position, closure) = self.describe(&info.graph, layer, &cross);
                    if seen.insert((next, closure), ()).is_none() {
                        out.push(Transition { next, closure, layer: li as u32, cross, position });
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.transitions.entry((state, size as u8)).or_insert(out).clone()
    }

    fn starts(&self, a: usize, b: usize) -> Arc<Vec<Start>> {
        if let Some(s) = self.starts.get(&(a as u8, b as u8)) {
            return s.clone();
        }
        let mut by_key: Vec<(CanonicalKey, Start)> = Vec::new();
        let mut seen: FxHashMap<CanonicalKey, ()> = FxHashMap::default();
        let need = vec![0; a];
        for first in self.layers(a) {
            for second in self.layers(b) {
                if !pair_allowed(self.cfg.profile, first, second) {
                    continue;
                }
                let mut sets = Vec::new();
                for_each_maximal_edge_set(first, second, &need, true, &mut |c| sets.push(c.to_vec()));
                for cross in sets {
                    let joint = TwoLayerGraph::from_parts(first, second, &cross);
                    let key = canonical_key(&joint.graph, &joint.side);
                    if seen.insert(key.clone(), ()).is_some() {
                        continue;
                    }
                    let (state, position, closure) = self.describe(first, second, &cross);
                    by_key.push((key, Start { closure, state, first: *first, second: *second, cross, position }));
                }
            }
        }
        by_key.sort_by(|x, y| x.0.cmp(&y.0));
        let out = Arc::new(by_key.into_iter().map(|(_, s)| s).collect());
        self.starts.entry((a as u8, b as u8)).or_insert(out).clone()
    }

    /// Explicit graph for the path ending in `node` at `level`, followed by one more transition.
    fn rebuild(&self, start: &Start, levels: &[Vec<Node>], mut node: Node, mut level: usize, last: (u8, u32)) -> LayeredGraph {
        // (state before, layer size, transition index), collected backwards
        let mut steps = vec![(node.state, last.0, last.1)];
        while level > 1 {
            let parent = levels[level - 1][node.parent as usize];
            steps.push((parent.state, node.layer_size, node.via));
            node = parent;
            level -= 1;
        }
        steps.reverse();

        let mut g = Graph::new(0);
        let mut layers: Vec<Vec<usize>> = Vec::new();
        let add_layer = |g: &mut Graph, h: &SmallGraph| -> Vec<usize> {
            let vs: Vec<usize> = (0..h.order()).map(|_| g.add_vertex()).collect();
            for (u, v) in h.edges() {
                g.add_edge(vs[u], vs[v]);
            }
            vs
        };
        let l0 = add_layer(&mut g, &start.first);
        let l1 = add_layer(&mut g, &start.second);
        for (i, &row) in start.cross.iter().enumerate() {
            for j in bits(row) {
                g.add_edge(l0[i], l1[j]);
            }
        }
        let mut canon = reorder(&l1, &start.position);
        layers.push(l0);
        layers.push(l1);
        for (state, size, via) in steps {
            let trans = self.transitions(state, size as usize);
            let t = &trans[via as usize];
            let h = &self.layers(size as usize)[t.layer as usize];
            let vs = add_layer(&mut g, h);
            for (i, &row) in t.cross.iter().enumerate() {
                for j in bits(row) {
                    g.add_edge(canon[i], vs[j]);
                }
            }
            canon = reorder(&vs, &t.position);
            layers.push(vs);
        }
        LayeredGraph::new(g, layers).expect("consecutive layers only")
    }

    fn run_start(&self, idx: usize, start: &Start, a: usize, target: RatioFraction) -> (Option<Candidate>, u64) {
        let cfg = self.cfg;
        let (tn, td) = (target.numerator(), target.denominator());
        let cap = cfg.layer_cap() as u64;
        let b0 = start.second.order() as u64;
        let track_prev = cfg.profile == AssumptionProfile::Delta6;
        let mut expanded = 0u64;
        let mut best: Option<Candidate> = None;
        let mut levels: Vec<Vec<Node>> = vec![
            Vec::new(),
            vec![Node { state: start.state, prev_size: a as u8, order: b0, parent: u32::MAX, layer_size: b0 as u8, via: 0 }],
        ];
        for t in 1..=cfg.max_period {
            let mut next_level: Vec<Node> = Vec::new();
            let mut slot: FxHashMap<(u32, u8), u32> = FxHashMap::default();
            let max_total = (t as u64 + 1) * td / tn;
            for (pi, node) in levels[t].iter().enumerate() {
                expanded += 1;
                let last_size = self.info(node.state).graph.order();
                let room = max_total.saturating_sub(node.order).min(cap);
                for size in 1..=room as usize {
                    if !middle_allowed(cfg.profile, node.prev_size as usize, size) {
                        continue;
                    }
                    let trans = self.transitions(node.state, size);
                    for (ti, tr) in trans.iter().enumerate() {
                        let order = node.order + size as u64;
                        if t >= 2 && tr.closure == start.closure {
                            let ratio = RatioFraction::new(t as u64, node.order);
                            let better = best.as_ref().is_none_or(|b| ratio > b.ratio);
                            if better {
                                let graph = self.rebuild(start, &levels, *node, t, (size as u8, ti as u32));
                                best = Some(Candidate { ratio, period: t, start: idx, graph });
                            }
                        }
                        if t == cfg.max_period {
                            continue;
                        }
                        let prev_size = if track_prev { last_size as u8 } else { 0 };
                        let cand = Node { state: tr.next, prev_size, order, parent: pi as u32, layer_size: size as u8, via: ti as u32 };
                        match slot.entry((tr.next, prev_size)) {
                            std::collections::hash_map::Entry::Occupied(e) => {
                                let existing = &mut next_level[*e.get() as usize];
                                if order < existing.order {
                                    *existing = cand;
                                }
                            }
                            std::collections::hash_map::Entry::Vacant(e) => {
                                e.insert(next_level.len() as u32);
                                next_level.push(cand);
                            }
                        }
                    }
                }
            }
            levels.push(next_level);
        }
        (best, expanded)
    }
}

fn reorder(vs: &[usize], position: &[u8]) -> Vec<usize> {
    let mut out = vec![0; vs.len()];
    for (j, &p) in position.iter().enumerate() {
        out[p as usize] = vs[j];
    }
    out
}

/// Runs the search on the current rayon pool.
pub fn search(cfg: &OmegaSearchConfig) -> Result<OmegaSearchResult> {
    cfg.validate()?;
    let engine = Engine::new(cfg);
    let schedule = target_schedule(cfg);
    let mut expanded = 0u64;
    let mut passes = 0;
    for &target in &schedule {
        passes += 1;
        let first_cap = first_layer_bound(cfg, target);
        let second_cap = ((target.denominator() / target.numerator()) as usize).min(cfg.layer_cap());
        let mut work: Vec<(usize, Arc<Vec<Start>>)> = Vec::new();
        for a in 1..=first_cap {
            for b in 1..=second_cap {
                work.push((a, engine.starts(a, b)));
            }
        }
        let jobs: Vec<(usize, usize, usize)> = work
            .iter()
            .enumerate()
            .flat_map(|(w, (a, starts))| (0..starts.len()).map(move |s| (w, s, *a)))
            .collect();
        let outcomes: Vec<(Option<Candidate>, u64)> = jobs
            .par_iter()
            .enumerate()
            .map(|(k, &(w, s, a))| engine.run_start(k, &work[w].1[s], a, target))
            .collect();
        let mut best: Option<Candidate> = None;
        for (cand, n) in outcomes {
            expanded += n;
            if let Some(c) = cand {
                let better = match &best {
                    None => true,
                    Some(b) => (c.ratio, std::cmp::Reverse(c.period), std::cmp::Reverse(c.start))
                        > (b.ratio, std::cmp::Reverse(b.period), std::cmp::Reverse(b.start)),
                };
                if better {
                    best = Some(c);
                }
            }
        }
        if let Some(c) = best {
            return Ok(OmegaSearchResult {
                config: cfg.clone(),
                witness: Some(OmegaWitness { ratio: c.ratio, period: c.period, graph: c.graph }),
                states_expanded: expanded,
                final_target: target,
                passes,
            });
        }
    }
    Ok(OmegaSearchResult {
        config: cfg.clone(),
        witness: None,
        states_expanded: expanded,
        final_target: *schedule.last().unwrap(),
        passes,
    })
}
