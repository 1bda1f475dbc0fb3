use formanet_core::analysis::{descriptives, descriptives_csv, outcome_model, regression_csv, OutcomeModel};
use formanet_core::features::{assemble, display_name, default_candidate_sets, FeatureConfig, ValenceMode, OUTCOMES};
use formanet_core::render::correlogram_svg;
use formanet_core::stats::correlogram;
use formanet_core::ClosenessVariant;
use rayon::prelude::*;
use serde::Serialize;

use super::{file_stem, load_dataset, load_item_map, normalize_list, pretty_json, warn};
use crate::config::{check_alpha, pick, FileConfig};
use crate::error::{validation, Result};
use crate::manifest::{OutputDir, MANIFEST_FILE};
use crate::AnalyzeArgs;

pub const REGRESSIONS_CSV: &str = "regressions.csv";
pub const CORRELOGRAM_SVG: &str = "correlogram.svg";
pub const DESCRIPTIVES_CSV: &str = "descriptives.csv";

#[derive(Debug, Serialize)]
struct Settings {
    input: String,
    focus: Vec<String>,
    closeness: ClosenessVariant,
    valence_mode: ValenceMode,
    correlation_alpha: f64,
    candidate_sets: Vec<Vec<String>>,
    item_map: Option<String>,
}

pub fn run(args: AnalyzeArgs, file: &FileConfig) -> Result<()> {
    let defaults = FeatureConfig::default();
    let features = FeatureConfig {
        focus: normalize_list(pick(args.focus, &file.focus, defaults.focus)),
        closeness: pick(args.closeness, &file.closeness, defaults.closeness),
        valence_mode: pick(args.valence_mode, &file.valence_mode, defaults.valence_mode),
    };
    let candidate_sets = match &file.candidate_sets {
        Some(sets) => sets.clone(),
        None => default_candidate_sets(&features)?,
    };
    if candidate_sets.is_empty() || candidate_sets.iter().any(Vec::is_empty) {
        return Err(validation("candidate predictor sets must be non-empty"));
    }
    let item_map_path = args.item_map.or_else(|| file.item_map.clone());
    let settings = Settings {
        input: args.input.display().to_string(),
        focus: features.focus.clone(),
        closeness: features.closeness,
        valence_mode: features.valence_mode,
        correlation_alpha: check_alpha(
            "correlation alpha",
            pick(args.correlation_alpha, &file.correlation_alpha, 0.05),
        )?,
        candidate_sets,
        item_map: item_map_path.as_ref().map(|p| p.display().to_string()),
    };

    let (records, input) = load_dataset(&args.input)?;
    let (item_map, map_digest) = load_item_map(item_map_path.as_deref())?;
    if records.is_empty() {
        return Err(validation(format!("{}: dataset is empty", args.input.display())));
    }
    let table = assemble(&records, &features, &item_map)?;
    let mut warnings = Vec::new();

    let cg = correlogram(&table, settings.correlation_alpha)?;
    for (i, row) in cg.cells.iter().enumerate() {
        for cell in row.iter().skip(i + 1) {
            if let Some(e) = &cell.error {
                warn(&mut warnings, format!("undefined correlation: {e}"));
            }
        }
    }

    let models: Vec<OutcomeModel> = OUTCOMES
        .par_iter()
        .map(|outcome| outcome_model(&table, outcome, &settings.candidate_sets))
        .collect();
    for m in &models {
        if let Some(e) = &m.error {
            warn(&mut warnings, format!("no model for {}: {e}", m.outcome));
        }
    }

    let columns: Vec<&str> = table.names().collect();
    let desc = descriptives(&table, &columns)?;

    let mut out = OutputDir::create(&args.out_dir)?;
    out.write("features.csv", table.to_csv())?;
    out.write("correlogram_r.csv", cg.r_csv())?;
    out.write("correlogram_p.csv", cg.p_csv())?;
    out.write("correlogram.json", pretty_json(&cg))?;
    out.write(CORRELOGRAM_SVG, correlogram_svg(&cg, display_name))?;
    out.write(REGRESSIONS_CSV, regression_csv(&models)?)?;
    out.write("regressions.json", pretty_json(&models))?;
    for m in &models {
        out.write(&format!("regressions/{}.json", file_stem(&m.outcome)), pretty_json(m))?;
    }
    out.write(DESCRIPTIVES_CSV, descriptives_csv(&desc)?)?;
    let mut inputs = vec![input];
    inputs.extend(map_digest);
    out.finish(MANIFEST_FILE, "analyze", &settings, inputs, warnings)?;
    println!(
        "analyze: {} participants, {} models -> {}",
        table.n_rows(),
        models.iter().filter(|m| m.selection.is_some()).count(),
        args.out_dir.display()
    );
    Ok(())
}
