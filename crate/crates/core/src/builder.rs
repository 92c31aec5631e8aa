//! Explicit constructions from blocks: concatenation, end caps and
//! verification of the result.

use serde::{Deserialize, Serialize};

use crate::clump::{ClumpMatrix, ColorPermutation, MatrixMode};
use crate::error::{Error, Result};
use crate::graph::{Graph, SmallGraph};
use crate::layered::{diameter, LayeredGraph};
use crate::rational::RatioFraction;

#[derive(Clone, Debug)]
pub enum BlockSource {
    Matrix(ClumpMatrix),
    Layered(LayeredGraph),
}

#[derive(Clone, Debug)]
pub struct ConstructionSpec {
    pub block: BlockSource,
    pub repetitions: usize,
    pub delta: u32,
    pub cap_ends: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstraintMode {
    /// No K4.
    Omega,
    /// Properly 3-colorable.
    Chi,
}

impl std::str::FromStr for ConstraintMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(ConstraintMode::Omega),
            "chi" => Ok(ConstraintMode::Chi),
            _ => Err(Error::Parse(format!("unknown mode `{s}`"))),
        }
    }
}

/// Repeats a block.
///
/// A block-mode matrix is laid out `repetitions` times in a row. A
/// repeatable matrix or graph is glued to copies of itself along its last
/// two layers, giving `2 + repetitions * period` layers.
pub fn concatenate(spec: &ConstructionSpec) -> Result<LayeredGraph> {
    if spec.repetitions == 0 {
        return Err(Error::InvalidInput("repetitions must be at least 1".into()));
    }
    let g = match &spec.block {
        BlockSource::Matrix(m) => concatenate_matrix(m, spec.repetitions, spec.delta)?,
        BlockSource::Layered(g) => concatenate_layered(g, spec.repetitions, spec.delta)?,
    };
    if spec.cap_ends {
        cap_ends(&g, spec.delta)
    } else {
        Ok(g)
    }
}

fn concatenate_matrix(m: &ClumpMatrix, reps: usize, delta: u32) -> Result<LayeredGraph> {
    if let Some(e) = m.first_violation(delta) {
        return Err(e);
    }
    match m.mode() {
        MatrixMode::Block => m.expand_to_graph(reps),
        MatrixMode::Repeatable => {
            let pi = m
                .repeatable_permutation()
                .ok_or_else(|| Error::InvalidInput("matrix ends do not match its start".into()))?;
            if m.len() < 4 {
                return Err(Error::InvalidInput("a repeatable matrix needs at least four columns".into()));
            }
            let mut columns: Vec<Vec<u32>> = m.columns()[..2].to_vec();
            let mut p = ColorPermutation::identity(m.chi());
            for _ in 0..reps {
                columns.extend(m.columns()[2..].iter().map(|c| p.apply(c)));
                p = p.compose(&pi);
            }
            ClumpMatrix::from_columns(m.chi(), columns, MatrixMode::Repeatable)?.expand_to_graph(1)
        }
    }
}

fn interior_degrees_ok(g: &LayeredGraph, delta: u32) -> bool {
    let d = g.depth();
    (1..d).all(|i| g.layers[i].iter().all(|&v| g.graph.degree(v) >= delta as usize))
}

fn concatenate_layered(g: &LayeredGraph, reps: usize, delta: u32) -> Result<LayeredGraph> {
    let d = g.depth();
    if d < 2 {
        return Err(Error::InvalidInput("a repeatable graph needs at least three layers".into()));
    }
    if !interior_degrees_ok(g, delta) {
        return Err(Error::InvalidInput(format!("some interior vertex has degree below {delta}")));
    }
    let phi = g
        .end_isomorphism()
        .ok_or_else(|| Error::InvalidInput("first two layers are not isomorphic to the last two".into()))?;
    let mut out = g.graph.clone();
    let mut layers = g.layers.clone();
    let mut colors = g.colors.clone();
    // current[v]: vertex of `out` playing the role of `v` in the latest copy
    let mut current: Vec<usize> = (0..g.order()).collect();
    let layer_of = g.layer_of();
    for _ in 1..reps {
        let mut next = vec![usize::MAX; g.order()];
        for &(src, dst) in &phi {
            next[src] = current[dst];
        }
        for v in 0..g.order() {
            if layer_of[v] >= 2 {
                next[v] = out.add_vertex();
                if let Some(c) = colors.as_mut() {
                    c.push(g.colors.as_ref().unwrap()[v]);
                }
            }
        }
        for (u, v) in g.graph.edges() {
            out.add_edge(next[u], next[v]);
        }
        for i in 2..=d {
            layers.push(g.layers[i].iter().map(|&v| next[v]).collect());
        }
        current = next;
    }
    // glued colorings can disagree on the seam; keep them only if still proper
    if let Some(c) = &colors {
        if !out.is_proper_coloring(c) {
            colors = None;
        }
    }
    let mut lg = LayeredGraph::new(out, layers)?;
    lg.colors = colors;
    Ok(lg)
}

/// Splits a layer into two triangle-free parts, from its coloring when it
/// has one (colors 0 and 1 against the rest), otherwise by backtracking.
fn triangle_free_split(layer: &SmallGraph, colors: Option<&[u8]>) -> Option<Vec<bool>> {
    if let Some(c) = colors {
        if c.iter().all(|&x| x < 3) {
            return Some(c.iter().map(|&x| x == 2).collect());
        }
    }
    fn go(g: &SmallGraph, v: usize, side: &mut Vec<bool>) -> bool {
        if v == g.order() {
            return true;
        }
        for s in [false, true] {
            let ok = (0..v).all(|a| {
                side[a] != s
                    || !g.has_edge(a, v)
                    || (0..a).all(|b| side[b] != s || !g.has_edge(b, v) || !g.has_edge(a, b))
            });
            if ok {
                side.push(s);
                if go(g, v + 1, side) {
                    return true;
                }
                side.pop();
            }
        }
        false
    }
    let mut side = Vec::new();
    go(layer, 0, &mut side).then_some(side)
}

/// Attaches a fresh `K_{δ,δ}` to the first and to the last layer.
///
/// The boundary layer is split into two triangle-free parts and each part is
/// joined to every vertex of one side of the cap. Boundary vertices gain `δ`
/// neighbours, cap vertices have degree at least `δ`, no K4 appears, and a
/// 3-coloring of the input extends to the caps.
pub fn cap_ends(g: &LayeredGraph, delta: u32) -> Result<LayeredGraph> {
    let delta = delta as usize;
    if delta == 0 {
        return Ok(g.clone());
    }
    let mut out = g.graph.clone();
    let mut colors = g.colors.clone();
    let d = g.depth();
    let ends: Vec<usize> = if d == 0 { vec![0] } else { vec![0, d] };
    let mut caps: Vec<Vec<usize>> = Vec::new();
    for &li in &ends {
        let boundary = &g.layers[li];
        let sub = g
            .graph
            .induced(boundary)
            .to_small()
            .ok_or_else(|| Error::InvalidInput("boundary layer exceeds 32 vertices".into()))?;
        let layer_colors: Option<Vec<u8>> = g.colors.as_ref().map(|c| boundary.iter().map(|&v| c[v]).collect());
        let split = triangle_free_split(&sub, layer_colors.as_deref())
            .ok_or_else(|| Error::InvalidInput("boundary layer has no triangle-free 2-split".into()))?;
        let side_a: Vec<usize> = (0..delta).map(|_| out.add_vertex()).collect();
        let side_b: Vec<usize> = (0..delta).map(|_| out.add_vertex()).collect();
        for &a in &side_a {
            for &b in &side_b {
                out.add_edge(a, b);
            }
        }
        for (k, &v) in boundary.iter().enumerate() {
            let side = if split[k] { &side_b } else { &side_a };
            for &c in side {
                out.add_edge(v, c);
            }
        }
        if let Some(c) = colors.as_mut() {
            // part A holds colors 0/1, so cap side A takes 2; side B meets color 2 and takes 0
            c.extend(std::iter::repeat_n(2, delta));
            c.extend(std::iter::repeat_n(0, delta));
        }
        caps.push(side_a.into_iter().chain(side_b).collect());
    }
    let mut layers = Vec::with_capacity(g.layers.len() + 2);
    layers.push(caps[0].clone());
    layers.extend(g.layers.iter().cloned());
    if let Some(c) = caps.get(1) {
        layers.push(c.clone());
    }
    let mut lg = LayeredGraph::new(out, layers)?;
    if let Some(c) = &colors {
        if !lg.graph.is_proper_coloring(c) {
            colors = None;
        }
    }
    lg.colors = colors;
    Ok(lg)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub n: usize,
    pub diameter: usize,
    pub min_degree: usize,
    pub mode: ConstraintMode,
    pub constraint_ok: bool,
    pub min_degree_ok: bool,
    /// `diameter / n`.
    pub achieved_ratio: RatioFraction,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        self.constraint_ok && self.min_degree_ok
    }
}

/// Largest order for which 3-colorability is decided by exact search when
/// no coloring is attached.
pub const EXACT_COLORING_LIMIT: usize = 200;

/// Order, diameter, minimum degree and the clique or coloring constraint.
/// Constraint failures are reported, not raised; only disconnection is an error.
pub fn verify_construction(g: &Graph, colors: Option<&[u8]>, delta: u32, mode: ConstraintMode) -> Result<ConstructionReport> {
    let n = g.order();
    if n == 0 {
        return Err(Error::InvalidInput("empty graph".into()));
    }
    let diam = diameter(g)?;
    let constraint_ok = match mode {
        ConstraintMode::Omega => g.is_k4_free(),
        ConstraintMode::Chi => match colors {
            Some(c) if g.is_proper_coloring(c) && c.iter().all(|&x| x < 3) => true,
            _ if n <= EXACT_COLORING_LIMIT => g.coloring(3).is_some(),
            _ => false,
        },
    };
    let min_degree = g.min_degree();
    Ok(ConstructionReport {
        n,
        diameter: diam,
        min_degree,
        mode,
        constraint_ok,
        min_degree_ok: min_degree >= delta as usize,
        achieved_ratio: RatioFraction::new(diam as u64, n as u64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta4_block() -> ClumpMatrix {
        ClumpMatrix::from_columns(3, vec![vec![1, 0, 0], vec![0, 1, 1], vec![2, 0, 0], vec![0, 1, 1]], MatrixMode::Block)
            .unwrap()
    }

    #[test]
    fn block_repetition_counts() {
        let spec = ConstructionSpec { block: BlockSource::Matrix(delta4_block()), repetitions: 3, delta: 4, cap_ends: false };
        let g = concatenate(&spec).unwrap();
        assert_eq!(g.layers.len(), 12);
        assert_eq!(g.order(), 21);
    }

    #[test]
    fn capped_is_valid() {
        for reps in 1..4 {
            let spec = ConstructionSpec { block: BlockSource::Matrix(delta4_block()), repetitions: reps, delta: 4, cap_ends: true };
            let g = concatenate(&spec).unwrap();
            assert_eq!(g.order(), 7 * reps + 16);
            let r = verify_construction(&g.graph, g.colors.as_deref(), 4, ConstraintMode::Chi).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(g.graph.is_k4_free());
        }
    }

    #[test]
    fn cap_handles_triangle_boundary() {
        let m = ClumpMatrix::from_columns(3, vec![vec![1, 1, 1], vec![1, 1, 1]], MatrixMode::Block).unwrap();
        let g = m.expand_to_graph(1).unwrap();
        let capped = cap_ends(&g, 4).unwrap();
        assert!(capped.graph.is_k4_free());
        assert!(capped.graph.min_degree() >= 4);
    }

    #[test]
    fn zero_repetitions_rejected() {
        let spec = ConstructionSpec { block: BlockSource::Matrix(delta4_block()), repetitions: 0, delta: 4, cap_ends: false };
        assert!(concatenate(&spec).is_err());
    }
}
