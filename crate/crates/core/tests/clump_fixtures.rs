use std::path::PathBuf;

use extdiam_core::{ClumpMatrix, Error, MatrixMode, RatioFraction};

fn fixture(name: &str) -> ClumpMatrix {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    std::fs::read_to_string(p).unwrap().parse().unwrap()
}

const BLOCKS: [(&str, u32, u64, u64); 8] = [
    ("delta4.block", 4, 4, 7),
    ("delta5.block", 5, 5, 11),
    ("delta6.block", 6, 14, 37),
    ("delta7.block", 7, 17, 52),
    ("delta8_t1.block", 8, 2, 7),
    ("delta8_t2.block", 8, 2, 7),
    ("delta8_t3.block", 8, 2, 7),
    ("delta16.block", 16, 31, 216),
];

#[test]
fn shipped_blocks_have_their_ratios() {
    for (name, delta, p, q) in BLOCKS {
        let m = fixture(name);
        assert_eq!(m.mode(), MatrixMode::Block);
        assert!(m.is_feasible_block(delta), "{name}");
        assert_eq!(m.block_ratio(delta).unwrap(), RatioFraction::new(p, q), "{name}");
        assert!(m.block_ratio(delta).unwrap() <= RatioFraction::new(7, 3 * u64::from(delta)));
    }
    assert!(fixture("delta16.block").block_ratio(16).unwrap() > RatioFraction::new(1, 7));
}

#[test]
fn shipped_blocks_respect_window_and_neighbour_conditions() {
    for (name, delta, _, _) in BLOCKS {
        let m = fixture(name);
        assert!(m.full_column_window_violations((3 * delta).div_ceil(2)).is_empty(), "{name}");
        assert!(m.full_next_to_single().is_empty(), "{name}");
    }
}

#[test]
fn degrees_match_the_expanded_graph() {
    for (name, _, _, _) in BLOCKS {
        let m = fixture(name);
        if m.total() > 40 {
            continue;
        }
        // the middle copy sees the cyclic neighbours of every column
        let g = m.expand_to_graph(3).unwrap();
        let colors = g.colors.as_ref().unwrap();
        for j in 0..m.len() {
            for &v in &g.layers[m.len() + j] {
                let c = colors[v] as usize;
                assert_eq!(m.interior_degree(j, c).unwrap() as usize, g.graph.degree(v), "{name} ({j},{c})");
            }
        }
    }
}

#[test]
fn block_degree_examples() {
    let m = fixture("delta4.block");
    assert_eq!(m.interior_degree(0, 0).unwrap(), 4);
    assert_eq!(m.interior_degree(2, 0).unwrap(), 4);
    assert!(matches!(m.interior_degree(0, 1), Err(Error::EmptyClass { .. })));
    let tri = ClumpMatrix::from_columns(3, vec![vec![1, 1, 1]], MatrixMode::Repeatable).unwrap();
    assert_eq!(tri.interior_degree(0, 0).unwrap(), 2);
}

#[test]
fn degree_nine_is_out_of_reach_for_the_delta8_block() {
    let m = fixture("delta8_t1.block");
    assert!(!m.is_feasible_block(9));
    assert!(matches!(m.first_violation(9), Some(Error::Infeasible { degree: 8, .. })));
}

#[test]
fn expansion_sizes() {
    assert_eq!(fixture("delta16.block").expand_to_graph(1).unwrap().order(), 216);
    let g = fixture("delta4.block").expand_to_graph(1).unwrap();
    assert_eq!(g.order(), 7);
    assert!(g.graph.is_k4_free());
    assert!(g.graph.coloring(3).is_some());
}

#[test]
fn repeatable_fixtures_close_with_identity() {
    for name in ["delta4.repeatable", "delta5.repeatable"] {
        assert!(fixture(name).repeatable_permutation().unwrap().is_identity(), "{name}");
    }
    let (block, seam) = fixture("delta5.repeatable").fundamental_block().unwrap();
    assert!(seam.is_identity());
    assert_eq!(block.block_ratio(5).unwrap(), RatioFraction::new(5, 11));
}

#[test]
fn printed_two_period_delta4_matrix_does_not_close() {
    // the block followed by a full copy: its last two columns are not its first two
    let m = ClumpMatrix::from_rows(
        &[vec![1, 0, 2, 0, 1, 0, 2, 0], vec![0, 1, 0, 1, 0, 1, 0, 1], vec![0, 1, 0, 1, 0, 1, 0, 1]],
        MatrixMode::Repeatable,
    )
    .unwrap();
    assert!(m.repeatable_permutation().is_none());
}

#[test]
fn text_round_trip_and_rejections() {
    let m = fixture("delta7.block");
    assert_eq!(m.to_text().parse::<ClumpMatrix>().unwrap(), m);
    assert!("chi=3 columns=2 mode=block\n1 0\n0 0\n1 0\n".parse::<ClumpMatrix>().is_err());
    assert!("chi=3 columns=2 mode=cyclic\n1 0\n0 1\n1 0\n".parse::<ClumpMatrix>().is_err());
    assert!("chi=2 columns=2 mode=block\n1 0\n".parse::<ClumpMatrix>().is_err());
}
