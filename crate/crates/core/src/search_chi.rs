//! Search over color-count column sequences for the best repeatable
//! χ-colorable layered graph.
//!
//! A candidate is a sequence of columns `N_0, .., N_t` whose last two columns
//! are a color permutation of the first two. Every column strictly between
//! the ends must give each of its classes degree at least `delta`. The ratio
//! is `(t - 1) / (S_1 + .. + S_{t-1})`.
//!
//! For each canonical start pair a layered dynamic program keeps, per
//! `(previous column, last column)` state, only the smallest order reached.
//! Passes run with a fixed target ratio `τ`: a prefix whose size exceeds
//! `k / τ` after `k` block columns is dropped. A cyclic sequence with mean
//! column size `μ` has a rotation whose every prefix stays within `k·μ`, so a
//! pass at `τ` finds every block of ratio at least `τ`. Targets decrease on a
//! fixed schedule until some pass finds a witness, and the last pass has no
//! effective target, so the first witness found is the optimum.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::clump::{ClumpMatrix, ColorPermutation, MatrixMode};
use crate::error::{Error, Result};
use crate::rational::RatioFraction;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChiSearchConfig {
    pub delta: u32,
    /// Largest repetition length considered.
    pub max_period: usize,
    pub max_column_sum: u32,
    pub max_class_size: u32,
    /// Every column misses at least one color.
    pub assume_missing_color: bool,
    /// Some block column has a single color.
    pub require_singleton_layer: bool,
    pub chi: usize,
}

impl ChiSearchConfig {
    pub fn new(delta: u32, max_period: usize) -> Self {
        let cap = Self::default_column_sum(delta);
        ChiSearchConfig {
            delta,
            max_period,
            max_column_sum: cap,
            max_class_size: cap,
            assume_missing_color: false,
            require_singleton_layer: false,
            chi: 3,
        }
    }

    /// `⌊3δ/2⌋`: a layer of this size split evenly over two colors already
    /// gives its neighbours degree `δ`, so larger layers never help.
    pub fn default_column_sum(delta: u32) -> u32 {
        3 * delta / 2
    }

    pub fn with_column_sum(mut self, cap: u32) -> Self {
        self.max_column_sum = cap;
        self.max_class_size = self.max_class_size.min(cap).max(1);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.delta < 1 {
            return Err(Error::InvalidInput("delta must be positive".into()));
        }
        if self.max_period < 2 {
            return Err(Error::InvalidInput("max_period must be at least 2".into()));
        }
        if self.max_column_sum < 1 || self.max_class_size < 1 {
            return Err(Error::InvalidInput("caps must be positive".into()));
        }
        if !(2..=6).contains(&self.chi) {
            return Err(Error::InvalidInput("chi must lie in 2..=6".into()));
        }
        Ok(())
    }

    /// Which settings make the result hold only under extra assumptions.
    pub fn conditional_flags(&self) -> Vec<String> {
        let mut flags = vec![format!("period<={}", self.max_period)];
        if self.max_column_sum < Self::default_column_sum(self.delta) {
            flags.push(format!("column_sum<={}", self.max_column_sum));
        }
        if self.max_class_size < self.max_column_sum {
            flags.push(format!("class_size<={}", self.max_class_size));
        }
        if self.assume_missing_color {
            flags.push("assume_missing_color".into());
        }
        if self.require_singleton_layer {
            flags.push("require_singleton_layer".into());
        }
        flags
    }
}

/// Explicit search state: the start pair in canonical color order and the
/// last two columns reached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChiSearchState {
    pub start: (Vec<u32>, Vec<u32>),
    pub prev: Vec<u32>,
    pub last: Vec<u32>,
    pub layer_count: usize,
    /// Sum of all columns after the first.
    pub order: u64,
    pub has_singleton: bool,
}

impl ChiSearchState {
    pub fn start(first: Vec<u32>, second: Vec<u32>) -> Self {
        let order = second.iter().map(|&x| u64::from(x)).sum();
        let has_singleton = colors_present(&second) == 1;
        ChiSearchState {
            prev: first.clone(),
            last: second.clone(),
            start: (first, second),
            layer_count: 2,
            order,
            has_singleton,
        }
    }
}

fn colors_present(col: &[u32]) -> usize {
    col.iter().filter(|&&x| x > 0).count()
}

/// Every vertex of `to` has a differently colored vertex in `from`.
pub fn reaches(from: &[u32], to: &[u32]) -> bool {
    let n_from = colors_present(from);
    to.iter().zip(from).all(|(&t, &f)| t == 0 || n_from > 1 || f == 0)
}

/// Every class of `mid` has degree at least `delta` between `prev` and `next`.
pub fn window_ok(prev: &[u32], mid: &[u32], next: &[u32], delta: u32) -> bool {
    let (sp, sm, sn): (u32, u32, u32) = (prev.iter().sum(), mid.iter().sum(), next.iter().sum());
    (0..mid.len()).all(|c| mid[c] == 0 || (sp - prev[c]) + (sm - mid[c]) + (sn - next[c]) >= delta)
}

fn column_allowed(col: &[u32], cfg: &ChiSearchConfig) -> bool {
    let sum: u32 = col.iter().sum();
    sum >= 1
        && sum <= cfg.max_column_sum
        && col.iter().all(|&x| x <= cfg.max_class_size)
        && (!cfg.assume_missing_color || colors_present(col) < cfg.chi)
}

/// Appends `next`, returning the successor iff it respects the caps and
/// flags, can be reached from the last column, and leaves the last column
/// with degree at least `delta`.
pub fn extend_column(state: &ChiSearchState, next: &[u32], cfg: &ChiSearchConfig) -> Option<ChiSearchState> {
    if next.len() != cfg.chi || !column_allowed(next, cfg) || !reaches(&state.last, next) {
        return None;
    }
    if !window_ok(&state.prev, &state.last, next, cfg.delta) {
        return None;
    }
    Some(ChiSearchState {
        start: state.start.clone(),
        prev: state.last.clone(),
        last: next.to_vec(),
        layer_count: state.layer_count + 1,
        order: state.order + next.iter().map(|&x| u64::from(x)).sum::<u64>(),
        has_singleton: state.has_singleton || colors_present(next) == 1,
    })
}

/// Color permutation mapping the start pair onto the last two columns, once
/// at least four layers exist.
pub fn detect_repeatable(state: &ChiSearchState) -> Option<ColorPermutation> {
    if state.layer_count < 4 {
        return None;
    }
    ColorPermutation::all(state.start.0.len())
        .into_iter()
        .find(|p| p.apply(&state.start.0) == state.prev && p.apply(&state.start.1) == state.last)
}

/// A repeatable column sequence and the block it determines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiWitness {
    pub ratio: RatioFraction,
    /// Repetition length of the repeatable matrix.
    pub period: usize,
    pub seam: ColorPermutation,
    /// The repeatable matrix as found, `period + 2` columns.
    pub repeatable: ClumpMatrix,
    /// Block with identity wrap in canonical rotation and color order; its
    /// length is `period` times the order of `seam`.
    pub block: ClumpMatrix,
}

impl ChiWitness {
    /// Ratio descending, then period, block length and canonical block ascending.
    pub fn better_than(&self, other: &ChiWitness) -> bool {
        self.rank() > other.rank()
    }

    fn rank(&self) -> (RatioFraction, Reverse<usize>, Reverse<usize>, Reverse<Vec<u32>>) {
        (self.ratio, Reverse(self.period), Reverse(self.block.len()), Reverse(block_serial(&self.block)))
    }
}

fn block_serial(m: &ClumpMatrix) -> Vec<u32> {
    m.columns().iter().flatten().copied().collect()
}

/// Rotation and color order of a block with the smallest column-major serialization.
pub fn canonical_block(block: &ClumpMatrix) -> ClumpMatrix {
    let l = block.len();
    let mut best: Option<Vec<Vec<u32>>> = None;
    for p in ColorPermutation::all(block.chi()) {
        let permuted: Vec<Vec<u32>> = block.columns().iter().map(|c| p.apply(c)).collect();
        for r in 0..l {
            let rotated: Vec<Vec<u32>> = (0..l).map(|j| permuted[(r + j) % l].clone()).collect();
            if best.as_ref().is_none_or(|b| rotated < *b) {
                best = Some(rotated);
            }
        }
    }
    ClumpMatrix::from_columns(block.chi(), best.unwrap(), MatrixMode::Block).expect("non-empty columns")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiSearchResult {
    pub config: ChiSearchConfig,
    pub witness: Option<ChiWitness>,
    pub states_expanded: u64,
    /// Target ratio of the pass that produced the result.
    pub final_target: RatioFraction,
    pub passes: usize,
}

impl ChiSearchResult {
    pub fn best_ratio(&self) -> Option<RatioFraction> {
        self.witness.as_ref().map(|w| w.ratio)
    }
}

/// All admissible columns in lexicographic order, with successor lists and
/// the action of each color permutation on column indices.
struct ColumnTable {
    columns: Vec<Vec<u32>>,
    sums: Vec<u32>,
    singleton: Vec<bool>,
    /// `succ[a]`: columns reachable from `a`, ascending by sum.
    succ: Vec<Vec<u32>>,
    /// `perm_idx[σ][a]`: index of `σ(column a)`.
    perm_idx: Vec<Vec<u32>>,
}

impl ColumnTable {
    fn new(cfg: &ChiSearchConfig) -> Self {
        let chi = cfg.chi;
        let top = cfg.max_class_size.min(cfg.max_column_sum);
        let mut columns = Vec::new();
        let mut cur = vec![0u32; chi];
        loop {
            if column_allowed(&cur, cfg) {
                columns.push(cur.clone());
            }
            // odometer, last entry fastest, which yields lexicographic order
            let mut i = chi;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                if cur[i] < top {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
            }
            if cur.iter().all(|&x| x == 0) {
                break;
            }
        }
        let index: FxHashMap<Vec<u32>, u32> =
            columns.iter().enumerate().map(|(i, c)| (c.clone(), i as u32)).collect();
        let sums: Vec<u32> = columns.iter().map(|c| c.iter().sum()).collect();
        let singleton = columns.iter().map(|c| colors_present(c) == 1).collect();
        let succ = columns
            .iter()
            .map(|a| {
                let mut s: Vec<u32> = (0..columns.len() as u32).filter(|&b| reaches(a, &columns[b as usize])).collect();
                s.sort_by_key(|&b| (sums[b as usize], b));
                s
            })
            .collect();
        let perm_idx = ColorPermutation::all(chi)
            .iter()
            .map(|p| columns.iter().map(|c| index[&p.apply(c)]).collect())
            .collect();
        ColumnTable { columns, sums, singleton, succ, perm_idx }
    }

    fn canonical_pair(&self, a: u32, b: u32) -> (u32, u32) {
        self.perm_idx
            .iter()
            .map(|pi| (pi[a as usize], pi[b as usize]))
            .min()
            .unwrap()
    }

    fn start_pairs(&self) -> Vec<(u32, u32)> {
        let mut pairs = Vec::new();
        for a in 0..self.columns.len() as u32 {
            for &b in &self.succ[a as usize] {
                if self.canonical_pair(a, b) == (a, b) {
                    pairs.push((a, b));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }
}

/// Target ratios tried in order: `7(32-k) / (96δ)` for `k = 0, 1, ..`,
/// down to the smallest ratio any block can have.
fn target_schedule(cfg: &ChiSearchConfig) -> Vec<RatioFraction> {
    let floor = RatioFraction::new(1, u64::from(cfg.max_column_sum));
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

#[derive(Clone, Copy)]
struct Node {
    prev: u32,
    last: u32,
    singleton: bool,
    order: u64,
    parent: u32,
}

struct StartOutcome {
    witness: Option<ChiWitness>,
    expanded: u64,
}

fn keep_better(best: &mut Option<ChiWitness>, cand: ChiWitness) {
    if best.as_ref().is_none_or(|b| cand.better_than(b)) {
        *best = Some(cand);
    }
}

fn build_witness(table: &ColumnTable, cols: &[u32], chi: usize, period: usize, ratio: RatioFraction) -> ChiWitness {
    let columns: Vec<Vec<u32>> = cols.iter().map(|&c| table.columns[c as usize].clone()).collect();
    let repeatable = ClumpMatrix::from_columns(chi, columns, MatrixMode::Repeatable).expect("admissible columns");
    let (block, seam) = repeatable.fundamental_block().expect("closed sequence is repeatable");
    ChiWitness { ratio, period, seam, repeatable, block: canonical_block(&block) }
}

fn search_start(table: &ColumnTable, cfg: &ChiSearchConfig, start: (u32, u32), target: RatioFraction) -> StartOutcome {
    let (tn, td) = (target.numerator(), target.denominator());
    let within = |order: u64, k: u64| order * tn <= k * td;
    let (c0, c1) = start;
    let mut expanded = 0u64;
    let mut best: Option<ChiWitness> = None;
    if !within(u64::from(table.sums[c1 as usize]), 1) {
        return StartOutcome { witness: None, expanded };
    }

    // images of the start pair under every permutation
    let mut closing: Vec<(u32, u32)> = table
        .perm_idx
        .iter()
        .map(|pi| (pi[c0 as usize], pi[c1 as usize]))
        .collect();
    closing.sort_unstable();
    closing.dedup();

    let max_t = cfg.max_period + 1;
    let mut levels: Vec<Vec<Node>> = Vec::with_capacity(max_t + 1);
    levels.push(Vec::new());
    levels.push(vec![Node {
        prev: c0,
        last: c1,
        singleton: table.singleton[c1 as usize],
        order: u64::from(table.sums[c1 as usize]),
        parent: u32::MAX,
    }]);

    let delta = cfg.delta;
    for t in 1..max_t {
        let mut next_level: Vec<Node> = Vec::new();
        let mut slot: FxHashMap<(u32, u32, bool), u32> = FxHashMap::default();
        for (pi, node) in levels[t].iter().enumerate() {
            expanded += 1;
            let prev = &table.columns[node.prev as usize];
            let last = &table.columns[node.last as usize];
            let (sp, sl) = (table.sums[node.prev as usize], table.sums[node.last as usize]);
            // next must satisfy S_next - next[c] >= need[c] for each class c of last
            let need: Vec<i64> = (0..cfg.chi)
                .map(|c| {
                    if last[c] == 0 {
                        i64::MIN
                    } else {
                        i64::from(delta) - i64::from(sp - prev[c]) - i64::from(sl - last[c])
                    }
                })
                .collect();
            for &nx in &table.succ[node.last as usize] {
                let sn = table.sums[nx as usize];
                let order = node.order + u64::from(sn);
                if !within(order, (t + 1) as u64) {
                    break;
                }
                let next = &table.columns[nx as usize];
                if (0..cfg.chi).any(|c| i64::from(sn - next[c]) < need[c]) {
                    continue;
                }
                let singleton = node.singleton || table.singleton[nx as usize];
                let cand = Node { prev: node.last, last: nx, singleton, order, parent: pi as u32 };
                match slot.entry((node.last, nx, singleton)) {
                    Entry::Occupied(e) => {
                        let existing = &mut next_level[*e.get() as usize];
                        if order < existing.order {
                            *existing = cand;
                        }
                    }
                    Entry::Vacant(e) => {
                        e.insert(next_level.len() as u32);
                        next_level.push(cand);
                    }
                }
            }
        }
        let t1 = t + 1;
        if t1 >= 3 {
            for node in &next_level {
                if closing.binary_search(&(node.prev, node.last)).is_err() {
                    continue;
                }
                if cfg.require_singleton_layer && !node.singleton {
                    continue;
                }
                let period = t1 - 1;
                let ratio = RatioFraction::new(period as u64, node.order - u64::from(table.sums[node.last as usize]));
                if let Some(b) = &best {
                    if ratio < b.ratio || (ratio == b.ratio && period > b.period) {
                        continue;
                    }
                }
                let mut cols = vec![node.last];
                let mut cur = *node;
                for level in (2..=t1).rev() {
                    cur = levels[level - 1][cur.parent as usize];
                    cols.push(cur.last);
                }
                cols.push(c0);
                cols.reverse();
                keep_better(&mut best, build_witness(table, &cols, cfg.chi, period, ratio));
            }
        }
        levels.push(next_level);
    }
    StartOutcome { witness: best, expanded }
}

/// Runs the search on the current rayon pool.
pub fn search(cfg: &ChiSearchConfig) -> Result<ChiSearchResult> {
    cfg.validate()?;
    let table = ColumnTable::new(cfg);
    let starts = table.start_pairs();
    let mut expanded = 0u64;
    let schedule = target_schedule(cfg);
    let mut passes = 0;
    let mut final_target = *schedule.last().unwrap();
    let mut witness = None;
    for &target in &schedule {
        passes += 1;
        let outcomes: Vec<StartOutcome> =
            starts.par_iter().map(|&s| search_start(&table, cfg, s, target)).collect();
        let mut best: Option<ChiWitness> = None;
        for o in outcomes {
            expanded += o.expanded;
            if let Some(w) = o.witness {
                keep_better(&mut best, w);
            }
        }
        if best.is_some() {
            final_target = target;
            witness = best;
            break;
        }
    }
    Ok(ChiSearchResult { config: cfg.clone(), witness, states_expanded: expanded, final_target, passes })
}
