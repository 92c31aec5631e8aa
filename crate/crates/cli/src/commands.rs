use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use extdiam_core::builder::{self, BlockSource, ConstraintMode, ConstructionSpec};
use extdiam_core::search_chi::{self, ChiSearchConfig, ChiWitness};
use extdiam_core::search_omega::{self, AssumptionProfile, OmegaSearchConfig, OmegaWitness};
use extdiam_core::{ClumpMatrix, Error, Graph, LayeredGraph, MatrixMode, RatioFraction};
use serde_json::{json, Value};

use crate::{BuildArgs, Outcome, SearchChiArgs, SearchOmegaArgs, VerifyArgs, VerifyBlockArgs, NO_WITNESS};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn first_line(text: &str) -> Option<&str> {
    text.lines().map(str::trim).find(|l| !l.is_empty() && !l.starts_with('#'))
}

pub fn chi_config(a: &SearchChiArgs) -> Result<ChiSearchConfig> {
    let mut cfg = ChiSearchConfig::new(a.delta, a.max_period);
    cfg.chi = a.chi;
    if let Some(s) = a.max_column_sum {
        cfg = cfg.with_column_sum(s);
    }
    if let Some(c) = a.max_class_size {
        cfg.max_class_size = c;
    }
    cfg.assume_missing_color = a.assume_missing_color;
    cfg.require_singleton_layer = a.require_singleton_layer;
    cfg.validate()?;
    if a.delta > 8 && !a.allow_slow {
        bail!("delta {} can run for hours; pass --allow-slow to start it anyway", a.delta);
    }
    Ok(cfg)
}

pub fn chi_witness_json(w: &ChiWitness) -> Value {
    json!({
        "ratio": w.ratio,
        "period": w.period,
        "seam": w.seam.0,
        "block_length": w.block.len(),
        "block_order": w.block.total(),
        "block_matrix": w.block.rows(),
        "repeatable_matrix": w.repeatable.rows(),
    })
}

pub fn search_chi(a: &SearchChiArgs) -> Result<Outcome> {
    let cfg = chi_config(a)?;
    let r = search_chi::search(&cfg)?;
    let upper = RatioFraction::new(7, 3 * u64::from(cfg.delta));
    let result = json!({
        "best_ratio": r.best_ratio(),
        "witness": r.witness.as_ref().map(chi_witness_json),
        "states_expanded": r.states_expanded,
        "passes": r.passes,
        "final_target": r.final_target,
        "upper_bound": upper,
        "within_upper_bound": r.best_ratio().map(|x| x <= upper),
    });
    Ok(Outcome {
        config: serde_json::to_value(&cfg)?,
        result,
        conditional: cfg.conditional_flags(),
        exit: if r.witness.is_some() { 0 } else { NO_WITNESS },
        payload: None,
    })
}

pub fn omega_config(a: &SearchOmegaArgs) -> Result<OmegaSearchConfig> {
    if a.delta > 6 {
        bail!("the K4-free search supports delta up to 6");
    }
    let profile: AssumptionProfile = a.profile.parse()?;
    let mut cfg = OmegaSearchConfig::new(a.delta, a.max_period).with_profile(profile);
    if let Some(s) = a.max_layer_size {
        cfg.max_layer_size = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn omega_witness_json(w: &OmegaWitness) -> Value {
    json!({
        "ratio": w.ratio,
        "period": w.period,
        "block_layer_sizes": w.block_sizes(),
        "layer_sizes": w.graph.layer_sizes(),
        "graph6": w.graph.graph.to_graph6(),
        "layers": w.graph.layer_of(),
    })
}

pub fn search_omega(a: &SearchOmegaArgs) -> Result<Outcome> {
    let cfg = omega_config(a)?;
    let r = search_omega::search(&cfg)?;
    let result = json!({
        "best_ratio": r.best_ratio(),
        "witness": r.witness.as_ref().map(omega_witness_json),
        "witness_verified": r.witness.as_ref().map(|w| search_omega::verify_repeatable(&w.graph, cfg.delta)),
        "states_expanded": r.states_expanded,
        "passes": r.passes,
        "final_target": r.final_target,
    });
    Ok(Outcome {
        config: serde_json::to_value(&cfg)?,
        result,
        conditional: cfg.conditional_flags(),
        exit: if r.witness.is_some() { 0 } else { NO_WITNESS },
        payload: None,
    })
}

/// Feasibility, ratio and the first violation of a matrix.
pub fn block_report(m: &ClumpMatrix, delta: u32) -> Result<Value> {
    let violation = m.first_violation(delta).map(|e| match e {
        Error::Infeasible { column, color, degree, .. } => json!({"column": column, "color": color, "degree": degree}),
        other => json!({"message": other.to_string()}),
    });
    let (block, seam) = match m.mode() {
        MatrixMode::Block => (m.clone(), None),
        MatrixMode::Repeatable => match m.fundamental_block() {
            Some((b, s)) => (b, Some(s)),
            None => bail!("the last two columns are not a color permutation of the first two"),
        },
    };
    let ratio = if violation.is_none() { block.block_ratio(delta).ok() } else { None };
    let upper = RatioFraction::new(7, 3 * u64::from(delta));
    Ok(json!({
        "feasible": violation.is_none(),
        "violation": violation,
        "mode": m.mode().to_string(),
        "columns": m.len(),
        "period": block.len(),
        "block_order": block.total(),
        "seam": seam.map(|s| s.0),
        "ratio": ratio,
        "min_degree": block.min_degree(),
        "within_upper_bound": ratio.map(|r| r <= upper),
    }))
}

pub fn verify_block(a: &VerifyBlockArgs) -> Result<Outcome> {
    let m: ClumpMatrix = read(&a.block)?.parse().with_context(|| format!("parsing {}", a.block.display()))?;
    let mut result = block_report(&m, a.delta)?;
    if let Some(other) = &a.compare {
        let other: RatioFraction = other.parse()?;
        let ordering = result["ratio"].as_str().map(|r| {
            let r: RatioFraction = r.parse().expect("ratio written by this program");
            match r.cmp(&other) {
                std::cmp::Ordering::Less => "less",
                std::cmp::Ordering::Equal => "equal",
                std::cmp::Ordering::Greater => "greater",
            }
        });
        result["comparison"] = json!({"other": other, "ordering": ordering});
    }
    let exit = if result["feasible"] == json!(true) { 0 } else { 1 };
    Ok(Outcome {
        config: json!({"block": a.block.display().to_string(), "delta": a.delta}),
        result,
        conditional: vec![],
        exit,
        payload: None,
    })
}

fn load_block(path: &Path) -> Result<BlockSource> {
    let text = read(path)?;
    let is_matrix = first_line(&text).is_some_and(|l| l.starts_with("chi="));
    Ok(if is_matrix {
        BlockSource::Matrix(text.parse().with_context(|| format!("parsing {}", path.display()))?)
    } else {
        BlockSource::Layered(LayeredGraph::from_layered_text(&text).with_context(|| format!("parsing {}", path.display()))?)
    })
}

fn load_graph(path: &Path) -> Result<(Graph, Option<Vec<u8>>)> {
    let text = read(path)?;
    if text.contains("layers=") {
        let lg = LayeredGraph::from_layered_text(&text)?;
        return Ok((lg.graph, lg.colors));
    }
    let line = first_line(&text).unwrap_or("");
    let g = if line.split_whitespace().count() == 1 && text.lines().filter(|l| !l.trim().is_empty()).count() == 1 {
        Graph::from_graph6(line)?
    } else {
        Graph::from_edge_list(&text)?
    };
    Ok((g, None))
}

pub fn build(a: &BuildArgs) -> Result<Outcome> {
    if a.reps == 0 {
        bail!("--reps must be at least 1");
    }
    let block = load_block(&a.block)?;
    let mode = match block {
        BlockSource::Matrix(_) => ConstraintMode::Chi,
        BlockSource::Layered(_) => ConstraintMode::Omega,
    };
    let spec = ConstructionSpec { block, repetitions: a.reps, delta: a.delta, cap_ends: a.cap };
    let g = builder::concatenate(&spec)?;
    let text = match a.format.as_str() {
        "graph6" => g.graph.to_graph6() + "\n",
        "edges" => g.graph.to_edge_list(),
        "layered" => g.to_layered_text(),
        other => bail!("unknown format `{other}`; expected graph6, edges or layered"),
    };
    let report = builder::verify_construction(&g.graph, g.colors.as_deref(), a.delta, mode)?;
    let mut payload = None;
    match &a.output {
        Some(p) => fs::write(p, &text).with_context(|| format!("writing {}", p.display()))?,
        None => payload = Some(text),
    }
    Ok(Outcome {
        config: json!({
            "block": a.block.display().to_string(),
            "reps": a.reps,
            "delta": a.delta,
            "cap": a.cap,
            "format": a.format,
        }),
        result: json!({
            "layers": g.layers.len(),
            "layer_sizes": g.layer_sizes(),
            "report": report,
            "passed": if a.cap { report.passed() } else { report.constraint_ok },
        }),
        conditional: vec![],
        exit: 0,
        payload,
    })
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let mode: ConstraintMode = a.mode.parse()?;
    let (g, colors) = load_graph(&a.graph)?;
    let report = builder::verify_construction(&g, colors.as_deref(), a.delta, mode)?;
    let exit = if report.passed() { 0 } else { 1 };
    Ok(Outcome {
        config: json!({"graph": a.graph.display().to_string(), "delta": a.delta, "mode": mode}),
        result: json!({"report": report, "passed": report.passed()}),
        conditional: vec![],
        exit,
        payload: None,
    })
}
