use formanet_core::ingest::{clean_participants, write_json, CleaningConfig, Format, TargetRule};
use serde::Serialize;

use super::{normalize_list, pretty_json, warn};
use crate::config::{pick, FileConfig};
use crate::error::{validation, Result};
use crate::manifest::{FileDigest, OutputDir, MANIFEST_FILE};
use crate::IngestArgs;

pub const DATASET_FILE: &str = "dataset.json";
pub const REPORT_FILE: &str = "cleaning_report.json";

#[derive(Debug, Serialize)]
struct Settings {
    input: String,
    format: Format,
    target_cues: Vec<String>,
    target_rule: TargetRule,
}

pub fn run(args: IngestArgs, file: &FileConfig) -> Result<()> {
    let settings = Settings {
        input: args.input.display().to_string(),
        format: pick(args.format, &file.format, Format::from_path(&args.input)),
        target_cues: normalize_list(pick(
            args.targets,
            &file.target_cues,
            CleaningConfig::default().target_cues,
        )),
        target_rule: pick(args.rule, &file.target_rule, TargetRule::AllBlank),
    };
    let input = FileDigest::of_file(&args.input)?;
    let records = formanet_core::ingest::parse_participants(&args.input, settings.format)
        .map_err(|e| validation(format!("{}: {e}", args.input.display())))?;
    let cleaning = CleaningConfig {
        target_cues: settings.target_cues.clone(),
        rule: settings.target_rule,
    };
    let (kept, report) = clean_participants(records, &cleaning)?;

    let mut warnings = Vec::new();
    if kept.is_empty() {
        warn(&mut warnings, "no participant survived cleaning".into());
    }
    let mut out = OutputDir::create(&args.out_dir)?;
    out.write(DATASET_FILE, write_json(&kept)?)?;
    out.write(REPORT_FILE, pretty_json(&report))?;
    out.finish(MANIFEST_FILE, "ingest", &settings, vec![input], warnings)?;
    println!(
        "ingest: kept {}, excluded {} -> {}",
        report.kept.len(),
        report.excluded.len(),
        args.out_dir.display()
    );
    Ok(())
}
