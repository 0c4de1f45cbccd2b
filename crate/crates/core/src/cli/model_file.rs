//! Text form of a built model: a header in config syntax, then the gap
//! table with exact lengths and exact cumulative gap length to the left of
//! each gap, and decimal endpoints.

use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::Zero;

use crate::action_models::{ActionModel, Variant};

use super::config::RunConfig;

const HEADER_KEYS: [&str; 7] = ["variant", "depth", "gap_ratio", "gap_scale", "base_point", "t1", "t2"];

pub fn write_model(model: &ActionModel) -> String {
    let c = model.config();
    let mut out = String::from("# action model\n");
    let _ = writeln!(out, "variant = {}", c.variant);
    let _ = writeln!(out, "depth = {}", c.depth);
    let _ = writeln!(out, "gap_ratio = {}", c.schedule.q);
    let _ = writeln!(out, "gap_scale = {}", c.schedule.c);
    let _ = writeln!(out, "base_point = {}", c.base_point);
    let _ = writeln!(out, "t1 = {}", c.flow_times.0);
    let _ = writeln!(out, "t2 = {}", c.flow_times.1);
    let _ = writeln!(out, "gaps = {}", model.gaps().len());
    let _ = writeln!(out, "materialized = {}", model.materialized_length());
    let _ = writeln!(out, "residual = {}", model.truncation_residual());
    let _ = writeln!(out, "# word length gaps_to_the_left left right");
    let mut order: Vec<usize> = (0..model.gaps().len()).collect();
    order.sort_by(|&a, &b| model.gaps()[a].left.total_cmp(&model.gaps()[b].left));
    let mut cum = BigRational::zero();
    for i in order {
        let g = &model.gaps()[i];
        let _ = writeln!(out, "{} {} {} {:e} {:e}", g.word, g.length_exact, cum, g.left, g.right());
        cum += &g.length_exact;
    }
    out
}

/// Rebuilds the model a file describes and checks the recorded gap count
/// and total against the rebuild.
pub fn read_model(text: &str) -> Result<ActionModel, String> {
    let mut cfg = RunConfig::default();
    let mut gaps: Option<usize> = None;
    let mut materialized: Option<BigRational> = None;
    let mut seen = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(" = ") else { break };
        match key {
            "gaps" => gaps = Some(value.parse().map_err(|_| format!("line {}: bad gap count", i + 1))?),
            "materialized" => materialized = Some(value.parse().map_err(|_| format!("line {}: bad total", i + 1))?),
            "residual" => {}
            k if HEADER_KEYS.contains(&k) => {
                cfg.set(k, value).map_err(|e| format!("line {}: `{k}`: {e}", i + 1))?;
                seen.push(k);
            }
            other => return Err(format!("line {}: unexpected key `{other}`", i + 1)),
        }
    }
    if let Some(missing) = HEADER_KEYS.iter().find(|k| !seen.contains(k)) {
        return Err(format!("missing `{missing}`"));
    }
    let model = ActionModel::build(cfg.model_config()).map_err(|e| e.to_string())?;
    if gaps != Some(model.gaps().len()) {
        return Err(format!("file lists {gaps:?} gaps, the rebuild has {}", model.gaps().len()));
    }
    if materialized.as_ref() != Some(model.materialized_length()) {
        return Err("recorded materialized length does not match the rebuild".into());
    }
    Ok(model)
}

/// The variant a model file declares, without building it.
pub fn declared_variant(text: &str) -> Option<Variant> {
    text.lines().find_map(|l| l.strip_prefix("variant = ")).and_then(|v| v.parse().ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action_models::ModelConfig;

    #[test]
    fn round_trip() {
        for v in [Variant::Circle, Variant::Interval] {
            let m = ActionModel::build(ModelConfig::default_for(v, 2)).unwrap();
            let text = write_model(&m);
            assert_eq!(declared_variant(&text), Some(v));
            let back = read_model(&text).unwrap();
            assert_eq!(back.config(), m.config());
            assert_eq!(text, write_model(&back));
            // 1 + 4 + 12 gaps
            assert_eq!(text.lines().filter(|l| !l.starts_with('#') && !l.contains(" = ")).count(), 17);
        }
    }

    #[test]
    fn tampered_files_are_rejected() {
        let m = ActionModel::build(ModelConfig::default_for(Variant::Interval, 1)).unwrap();
        let text = write_model(&m);
        assert!(read_model(&text.replace("gaps = 5", "gaps = 6")).is_err());
        assert!(read_model(&text.replace("depth = 1", "depth = 2")).is_err());
        assert!(read_model(&text.replace("t1 = 1\n", "")).is_err());
    }
}
