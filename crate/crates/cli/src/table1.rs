use anyhow::Result;
use extdiam_core::search_chi::{self, ChiSearchConfig};
use extdiam_core::search_omega::{self, AssumptionProfile, OmegaSearchConfig};
use extdiam_core::{ClumpMatrix, RatioFraction};
use serde_json::{json, Value};

use crate::{Outcome, Table1Args};

const BLOCKS: [(&str, u32, &str); 8] = [
    ("delta4.block", 4, "4/7"),
    ("delta5.block", 5, "5/11"),
    ("delta6.block", 6, "14/37"),
    ("delta7.block", 7, "17/52"),
    ("delta8_t1.block", 8, "2/7"),
    ("delta8_t2.block", 8, "2/7"),
    ("delta8_t3.block", 8, "2/7"),
    ("delta16.block", 16, "31/216"),
];

const BLOCK_TEXT: [&str; 8] = [
    include_str!("../../../fixtures/delta4.block"),
    include_str!("../../../fixtures/delta5.block"),
    include_str!("../../../fixtures/delta6.block"),
    include_str!("../../../fixtures/delta7.block"),
    include_str!("../../../fixtures/delta8_t1.block"),
    include_str!("../../../fixtures/delta8_t2.block"),
    include_str!("../../../fixtures/delta8_t3.block"),
    include_str!("../../../fixtures/delta16.block"),
];

/// `(delta, max column sum, expected)` for the χ searches.
const CHI: [(u32, Option<u32>, &str); 5] =
    [(4, None, "4/7"), (5, None, "5/11"), (6, None, "14/37"), (7, Some(6), "17/52"), (8, Some(7), "2/7")];

/// `(delta, max period, profile, expected)` for the K4-free searches.
const OMEGA: [(u32, usize, AssumptionProfile, &str); 3] = [
    (4, 12, AssumptionProfile::None, "4/7"),
    (5, 14, AssumptionProfile::Delta5, "5/11"),
    (6, 18, AssumptionProfile::Delta6, "14/37"),
];

fn cell(name: String, method: &str, expected: &str, found: Option<RatioFraction>, conditional: Vec<String>) -> Value {
    let found = found.map(|r| r.to_string());
    json!({
        "cell": name,
        "method": method,
        "expected": expected,
        "found": found,
        "match": found.as_deref() == Some(expected),
        "conditional": conditional,
    })
}

pub fn run(a: &Table1Args) -> Result<Outcome> {
    let mut cells = Vec::new();
    for ((file, delta, expected), text) in BLOCKS.iter().zip(BLOCK_TEXT) {
        let m: ClumpMatrix = text.parse()?;
        cells.push(cell(format!("block {file}"), "verify-block", expected, m.block_ratio(*delta).ok(), vec![]));
    }
    for (delta, cap, expected) in CHI {
        let mut cfg = ChiSearchConfig::new(delta, 40);
        if let Some(c) = cap {
            cfg = cfg.with_column_sum(c);
        }
        let r = search_chi::search(&cfg)?;
        cells.push(cell(format!("f'({delta})"), "search-chi", expected, r.best_ratio(), cfg.conditional_flags()));
    }
    for (delta, period, profile, expected) in OMEGA {
        let cfg = OmegaSearchConfig::new(delta, period).with_profile(profile);
        let r = search_omega::search(&cfg)?;
        cells.push(cell(format!("f({delta})"), "search-omega", expected, r.best_ratio(), cfg.conditional_flags()));
    }
    if a.include_slow {
        let mut cfg = ChiSearchConfig::new(16, 100).with_column_sum(23);
        cfg.assume_missing_color = true;
        cfg.require_singleton_layer = true;
        let r = search_chi::search(&cfg)?;
        cells.push(cell("f'(16)".into(), "search-chi", "31/216", r.best_ratio(), cfg.conditional_flags()));
    }
    let all = cells.iter().all(|c| c["match"] == json!(true));
    Ok(Outcome {
        config: json!({"include_slow": a.include_slow}),
        result: json!({"cells": cells, "all_match": all}),
        conditional: vec![],
        exit: if all { 0 } else { 1 },
        payload: None,
    })
}
