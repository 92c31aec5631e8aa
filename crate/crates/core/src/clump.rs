//! Color-count matrices describing 3-colorable (more generally χ-colorable)
//! layered graphs.
//!
//! Entry `a[c][j]` is the number of vertices of color `c` in layer `j`. The
//! graph they describe joins every pair of differently colored vertices that
//! lie in the same or in consecutive layers, so a color-`c` vertex of layer
//! `j` has degree
//!
//! ```text
//! deg(c, j) = (S[j-1] - a[c][j-1]) + (S[j] - a[c][j]) + (S[j+1] - a[c][j+1])
//! ```
//!
//! where `S` is the column sum. In block mode indices wrap around; in
//! repeatable mode out-of-range columns count as empty.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::layered::LayeredGraph;
use crate::rational::RatioFraction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MatrixMode {
    /// A fundamental block; column indices are taken cyclically.
    Block,
    /// A repeatable graph whose first and last layers are exempt from degree checks.
    Repeatable,
}

impl fmt::Display for MatrixMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatrixMode::Block => "block",
            MatrixMode::Repeatable => "repeatable",
        })
    }
}

/// A bijection on the colors; `perm[c]` is the image of color `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ColorPermutation(pub Vec<usize>);

impl ColorPermutation {
    pub fn identity(chi: usize) -> Self {
        ColorPermutation((0..chi).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    /// The column whose color `perm[c]` holds what color `c` held in `column`.
    pub fn apply(&self, column: &[u32]) -> Vec<u32> {
        let mut out = vec![0; column.len()];
        for (c, &x) in column.iter().enumerate() {
            out[self.0[c]] = x;
        }
        out
    }

    pub fn compose(&self, then: &ColorPermutation) -> ColorPermutation {
        ColorPermutation(self.0.iter().map(|&p| then.0[p]).collect())
    }

    /// Smallest `k ≥ 1` with `perm^k = id`.
    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    /// All permutations of `0..n` in lexicographic order.
    pub fn all(n: usize) -> Vec<ColorPermutation> {
        let mut cur: Vec<usize> = (0..n).collect();
        let mut out = vec![ColorPermutation(cur.clone())];
        loop {
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
            cur.swap(i - 1, j);
            cur[i..].reverse();
            out.push(ColorPermutation(cur.clone()));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClumpMatrix {
    chi: usize,
    columns: Vec<Vec<u32>>,
    mode: MatrixMode,
}

impl ClumpMatrix {
    /// Builds a matrix from its columns; every column needs `chi` entries and
    /// at least one positive entry.
    pub fn from_columns(chi: usize, columns: Vec<Vec<u32>>, mode: MatrixMode) -> Result<Self> {
        if chi == 0 {
            return Err(Error::InvalidInput("chi must be positive".into()));
        }
        if columns.is_empty() {
            return Err(Error::InvalidInput("matrix has no columns".into()));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != chi {
                return Err(Error::InvalidInput(format!("column {j} has {} entries, expected {chi}", col.len())));
            }
            if col.iter().all(|&x| x == 0) {
                return Err(Error::InvalidInput(format!("column {j} is empty")));
            }
        }
        Ok(ClumpMatrix { chi, columns, mode })
    }

    /// Builds a matrix from its rows (one per color).
    pub fn from_rows(rows: &[Vec<u32>], mode: MatrixMode) -> Result<Self> {
        let len = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != len) {
            return Err(Error::InvalidInput("rows have different lengths".into()));
        }
        let columns = (0..len).map(|j| rows.iter().map(|r| r[j]).collect()).collect();
        Self::from_columns(rows.len(), columns, mode)
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn mode(&self) -> MatrixMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn entry(&self, color: usize, column: usize) -> u32 {
        self.columns[column][color]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.chi).map(|c| self.columns.iter().map(|col| col[c]).collect()).collect()
    }

    pub fn with_mode(&self, mode: MatrixMode) -> Self {
        ClumpMatrix { mode, ..self.clone() }
    }

    pub fn column_sum(&self, j: usize) -> u32 {
        self.columns[j].iter().sum()
    }

    pub fn total(&self) -> u64 {
        self.columns.iter().flatten().map(|&x| u64::from(x)).sum()
    }

    /// Number of colors present in column `j`.
    pub fn colors_present(&self, j: usize) -> usize {
        self.columns[j].iter().filter(|&&x| x > 0).count()
    }

    fn neighbor_column(&self, j: usize, offset: isize) -> Option<&[u32]> {
        let l = self.columns.len() as isize;
        let k = j as isize + offset;
        match self.mode {
            MatrixMode::Block => Some(&self.columns[k.rem_euclid(l) as usize]),
            MatrixMode::Repeatable if (0..l).contains(&k) => Some(&self.columns[k as usize]),
            MatrixMode::Repeatable => None,
        }
    }

    fn degree_unchecked(&self, j: usize, color: usize) -> u32 {
        [-1isize, 0, 1]
            .iter()
            .filter_map(|&o| self.neighbor_column(j, o))
            .map(|col| col.iter().sum::<u32>() - col[color])
            .sum()
    }

    /// Degree of a color-`color` vertex in column `j`.
    pub fn interior_degree(&self, j: usize, color: usize) -> Result<u32> {
        if j >= self.len() || color >= self.chi {
            return Err(Error::InvalidInput(format!("no entry at column {j}, color {color}")));
        }
        if self.columns[j][color] == 0 {
            return Err(Error::EmptyClass { column: j, color });
        }
        Ok(self.degree_unchecked(j, color))
    }

    fn checked_columns(&self) -> std::ops::Range<usize> {
        match self.mode {
            MatrixMode::Block => 0..self.len(),
            MatrixMode::Repeatable => 1..self.len().saturating_sub(1),
        }
    }

    /// The first occupied class whose degree falls below `delta`, as an error value.
    pub fn first_violation(&self, delta: u32) -> Option<Error> {
        for j in self.checked_columns() {
            for c in 0..self.chi {
                if self.columns[j][c] > 0 {
                    let degree = self.degree_unchecked(j, c);
                    if degree < delta {
                        return Some(Error::Infeasible { column: j, color: c, degree, delta });
                    }
                }
            }
        }
        None
    }

    pub fn is_feasible_block(&self, delta: u32) -> bool {
        self.first_violation(delta).is_none()
    }

    /// Smallest degree over all checked occupied classes.
    pub fn min_degree(&self) -> Option<u32> {
        self.checked_columns()
            .flat_map(|j| (0..self.chi).filter(move |&c| self.columns[j][c] > 0).map(move |c| (j, c)))
            .map(|(j, c)| self.degree_unchecked(j, c))
            .min()
    }

    /// Period over order of a block, `ℓ / Σ a[c][j]`.
    pub fn block_ratio(&self, delta: u32) -> Result<RatioFraction> {
        if self.mode != MatrixMode::Block {
            return Err(Error::InvalidInput("ratio is defined for block-mode matrices".into()));
        }
        if let Some(e) = self.first_violation(delta) {
            return Err(e);
        }
        Ok(RatioFraction::new(self.len() as u64, self.total()))
    }

    /// Seam permutation `π` with `col[ℓ-2] = π(col[0])` and `col[ℓ-1] = π(col[1])`,
    /// the lexicographically smallest when several exist.
    pub fn repeatable_permutation(&self) -> Option<ColorPermutation> {
        let l = self.len();
        if l < 3 {
            return None;
        }
        let (a0, a1) = (&self.columns[0], &self.columns[1]);
        let (b0, b1) = (&self.columns[l - 2], &self.columns[l - 1]);
        if a0.iter().sum::<u32>() != b0.iter().sum::<u32>() || a1.iter().sum::<u32>() != b1.iter().sum::<u32>() {
            return None;
        }
        ColorPermutation::all(self.chi)
            .into_iter()
            .find(|p| &p.apply(a0) == b0 && &p.apply(a1) == b1)
    }

    /// The fundamental block of a repeatable matrix: columns `1..=ℓ-2`,
    /// unrolled `ord(π)` times when the seam permutation is not the identity.
    pub fn fundamental_block(&self) -> Option<(ClumpMatrix, ColorPermutation)> {
        let pi = self.repeatable_permutation()?;
        let l = self.len();
        if l < 4 {
            return None;
        }
        let base: Vec<Vec<u32>> = self.columns[1..l - 1].to_vec();
        let mut columns = Vec::new();
        let mut p = ColorPermutation::identity(self.chi);
        for _ in 0..pi.order() {
            columns.extend(base.iter().map(|c| p.apply(c)));
            p = p.compose(&pi);
        }
        let block = ClumpMatrix { chi: self.chi, columns, mode: MatrixMode::Block };
        Some((block, pi))
    }

    /// Repeats the columns `reps` times without wrap-around.
    pub fn repeated(&self, reps: usize) -> ClumpMatrix {
        let columns = (0..reps).flat_map(|_| self.columns.iter().cloned()).collect();
        ClumpMatrix { chi: self.chi, columns, mode: MatrixMode::Repeatable }
    }

    /// Explicit graph: the columns (repeated `reps` times for blocks) become
    /// layers, vertices are numbered by layer, then color.
    pub fn expand_to_graph(&self, reps: usize) -> Result<LayeredGraph> {
        if reps == 0 {
            return Err(Error::InvalidInput("repetitions must be at least 1".into()));
        }
        if reps > 1 && self.mode != MatrixMode::Block {
            return Err(Error::InvalidInput("only block-mode matrices can be repeated".into()));
        }
        let cols: Vec<&Vec<u32>> = (0..reps).flat_map(|_| self.columns.iter()).collect();
        let mut layers: Vec<Vec<usize>> = Vec::with_capacity(cols.len());
        let mut colors = Vec::new();
        let mut by_color: Vec<Vec<Vec<usize>>> = Vec::with_capacity(cols.len());
        for col in &cols {
            let mut layer = Vec::new();
            let mut classes = vec![Vec::new(); self.chi];
            for (c, &count) in col.iter().enumerate() {
                for _ in 0..count {
                    let v = colors.len();
                    colors.push(c as u8);
                    layer.push(v);
                    classes[c].push(v);
                }
            }
            layers.push(layer);
            by_color.push(classes);
        }
        let mut g = Graph::new(colors.len());
        for j in 0..cols.len() {
            for k in j..(j + 2).min(cols.len()) {
                for c in 0..self.chi {
                    for d in 0..self.chi {
                        if c == d || (j == k && d < c) {
                            continue;
                        }
                        for &u in &by_color[j][c] {
                            for &v in &by_color[k][d] {
                                g.add_edge(u, v);
                            }
                        }
                    }
                }
            }
        }
        Ok(LayeredGraph::new(g, layers)?.with_colors(colors))
    }

    /// Columns with all colors present whose three-column window sums to less than `bound`.
    pub fn full_column_window_violations(&self, bound: u32) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.colors_present(j) == self.chi)
            .filter(|&j| {
                let s: u32 = [-1isize, 0, 1]
                    .iter()
                    .filter_map(|&o| self.neighbor_column(j, o))
                    .map(|c| c.iter().sum::<u32>())
                    .sum();
                s < bound
            })
            .collect()
    }

    /// Columns with all colors present next to a column with a single color.
    pub fn full_next_to_single(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&j| self.colors_present(j) == self.chi)
            .filter(|&j| {
                [-1isize, 1]
                    .iter()
                    .filter_map(|&o| self.neighbor_column(j, o))
                    .any(|c| c.iter().filter(|&&x| x > 0).count() < 2)
            })
            .collect()
    }

    /// Text form: a header line, then one line per color.
    pub fn to_text(&self) -> String {
        let mut out = format!("chi={} columns={} mode={}\n", self.chi, self.len(), self.mode);
        for row in self.rows() {
            out.push_str(&row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for ClumpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for ClumpMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
        let (mut chi, mut len, mut mode) = (None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let bad = || Error::Parse(format!("bad value in `{field}`"));
            match key {
                "chi" => chi = Some(value.parse::<usize>().map_err(|_| bad())?),
                "columns" => len = Some(value.parse::<usize>().map_err(|_| bad())?),
                "mode" => {
                    mode = Some(match value {
                        "block" => MatrixMode::Block,
                        "repeatable" => MatrixMode::Repeatable,
                        _ => return Err(bad()),
                    })
                }
                _ => return Err(Error::Parse(format!("unknown header field `{key}`"))),
            }
        }
        let chi = chi.ok_or_else(|| Error::Parse("header lacks chi=".into()))?;
        let len = len.ok_or_else(|| Error::Parse("header lacks columns=".into()))?;
        let mode = mode.ok_or_else(|| Error::Parse("header lacks mode=".into()))?;
        let rows: Vec<Vec<u32>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad entry `{t}`"))))
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?;
        if rows.len() != chi {
            return Err(Error::Parse(format!("expected {chi} rows, found {}", rows.len())));
        }
        if rows.iter().any(|r| r.len() != len) {
            return Err(Error::Parse(format!("every row needs {len} entries")));
        }
        ClumpMatrix::from_rows(&rows, mode).map_err(|e| match e {
            Error::InvalidInput(m) => Error::Parse(m),
            e => e,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta4() -> ClumpMatrix {
        ClumpMatrix::from_columns(3, vec![vec![1, 0, 0], vec![0, 1, 1], vec![2, 0, 0], vec![0, 1, 1]], MatrixMode::Block)
            .unwrap()
    }

    #[test]
    fn delta4_degrees() {
        let m = delta4();
        assert_eq!(m.interior_degree(0, 0).unwrap(), 4);
        assert_eq!(m.interior_degree(2, 0).unwrap(), 4);
        assert_eq!(m.interior_degree(0, 1), Err(Error::EmptyClass { column: 0, color: 1 }));
        assert_eq!(m.block_ratio(4).unwrap(), RatioFraction::new(4, 7));
        assert!(m.block_ratio(5).is_err());
    }

    #[test]
    fn triangle_column() {
        let m = ClumpMatrix::from_columns(3, vec![vec![1, 1, 1]], MatrixMode::Repeatable).unwrap();
        assert_eq!(m.interior_degree(0, 0).unwrap(), 2);
        let g = m.expand_to_graph(1).unwrap();
        assert_eq!(g.graph.edge_count(), 3);
    }

    #[test]
    fn expansion_matches_formula() {
        let m = delta4();
        let g = m.expand_to_graph(3).unwrap();
        // middle repetition sees the wrap-around neighbours
        for (j, layer) in g.layers.iter().enumerate().skip(4).take(4) {
            for &v in layer {
                let c = g.colors.as_ref().unwrap()[v] as usize;
                assert_eq!(g.graph.degree(v) as u32, m.interior_degree(j % 4, c).unwrap());
            }
        }
        assert!(g.graph.is_k4_free());
        assert!(g.graph.is_proper_coloring(g.colors.as_ref().unwrap()));
    }

    #[test]
    fn seam_permutations() {
        let rep = ClumpMatrix::from_columns(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 1], vec![2, 0, 0], vec![0, 1, 1], vec![1, 0, 0], vec![0, 1, 1]],
            MatrixMode::Repeatable,
        )
        .unwrap();
        assert!(rep.repeatable_permutation().unwrap().is_identity());
        let (block, _) = rep.fundamental_block().unwrap();
        assert_eq!(block.len(), 4);
        assert_eq!(block.total(), 7);

        let swapped = ClumpMatrix::from_columns(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 2, 0], vec![0, 1, 0], vec![1, 0, 1]],
            MatrixMode::Repeatable,
        )
        .unwrap();
        assert_eq!(swapped.repeatable_permutation(), Some(ColorPermutation(vec![1, 0, 2])));
    }

    #[test]
    fn permutations_are_lexicographic() {
        let all = ColorPermutation::all(3);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(ColorPermutation(vec![1, 2, 0]).order(), 3);
    }

    #[test]
    fn text_roundtrip_and_rejection() {
        let m = delta4();
        let back: ClumpMatrix = m.to_text().parse().unwrap();
        assert_eq!(back, m);
        assert!("chi=3 columns=2 mode=block\n1 0\n0 0\n0 0\n".parse::<ClumpMatrix>().is_err());
        assert!("chi=3 columns=2 mode=block\n1 0\n0 1\n".parse::<ClumpMatrix>().is_err());
    }
}
