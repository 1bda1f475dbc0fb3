use std::collections::BTreeSet;

use formanet_core::frames::{build_group_network, semantic_frame, split_by_median, GroupNetwork, SemanticFrame};
use formanet_core::render::{frame_dot, frame_svg};
use formanet_core::valence::DEFAULT_GROUP_ALPHA;
use formanet_core::Error as CoreError;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{file_stem, load_dataset, load_item_map, normalize_list, pretty_json, warn};
use crate::config::{check_alpha, pick, FileConfig};
use crate::error::{validation, Result};
use crate::manifest::{OutputDir, MANIFEST_FILE};
use crate::FramesArgs;

pub const COHORTS_FILE: &str = "cohorts.json";

#[derive(Debug, Clone, Serialize)]
struct Source {
    name: String,
    path: String,
}

#[derive(Debug, Serialize)]
struct Settings {
    groups: Vec<Source>,
    targets: Vec<String>,
    valence_alpha: f64,
    item_map: Option<String>,
}

/// One row of `cohorts.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSummary {
    pub cohort: String,
    pub source: String,
    /// `low` or `high` Total MA.
    pub side: String,
    pub participants: usize,
    pub median_total_ma: f64,
    pub excluded_at_median: usize,
    pub nodes: usize,
    pub edges: usize,
    pub frames: Vec<String>,
    pub skipped: Vec<String>,
}

fn parse_group(spec: &str) -> Result<Source> {
    let (name, path) = match spec.split_once('=') {
        Some((n, p)) => (n.trim().to_string(), p.trim().to_string()),
        None => {
            let stem = std::path::Path::new(spec)
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("dataset")
                .to_string();
            (stem, spec.to_string())
        }
    };
    if name.is_empty() || path.is_empty() {
        return Err(validation(format!("bad --group `{spec}`, expected name=path")));
    }
    if file_stem(&name) != name {
        return Err(validation(format!(
            "group name `{name}` may only contain letters, digits, `-` and `_`"
        )));
    }
    Ok(Source { name, path })
}

struct Cohort {
    summary: CohortSummary,
    group: GroupNetwork,
}

pub fn run(args: FramesArgs, file: &FileConfig) -> Result<()> {
    let groups = args
        .groups
        .iter()
        .map(|g| parse_group(g))
        .collect::<Result<Vec<_>>>()?;
    let mut names = BTreeSet::new();
    for g in &groups {
        if !names.insert(g.name.clone()) {
            return Err(validation(format!("group name `{}` used twice", g.name)));
        }
    }
    let item_map_path = args.item_map.or_else(|| file.item_map.clone());
    let settings = Settings {
        groups,
        targets: normalize_list(pick(
            args.targets,
            &file.frame_targets,
            vec!["math".into(), "anxiety".into()],
        )),
        valence_alpha: check_alpha(
            "valence alpha",
            pick(args.valence_alpha, &file.valence_alpha, DEFAULT_GROUP_ALPHA),
        )?,
        item_map: item_map_path.as_ref().map(|p| p.display().to_string()),
    };
    if settings.targets.is_empty() {
        return Err(validation("no frame targets given"));
    }
    let (item_map, map_digest) = load_item_map(item_map_path.as_deref())?;
    let mut inputs: Vec<_> = map_digest.into_iter().collect();
    let mut warnings = Vec::new();

    let mut cohorts: Vec<Cohort> = Vec::new();
    for source in &settings.groups {
        let (records, digest) = load_dataset(std::path::Path::new(&source.path))?;
        inputs.push(digest);
        if records.is_empty() {
            warn(&mut warnings, format!("dataset `{}` is empty, skipped", source.name));
            continue;
        }
        let split = split_by_median(&records, &item_map)?;
        let (low, high) = split.partition(&records);
        for (side, members) in [("low", low), ("high", high)] {
            let cohort = format!("{}-{side}", source.name);
            if members.is_empty() {
                warn(&mut warnings, format!("cohort `{cohort}` is empty, skipped"));
                continue;
            }
            let mut group = build_group_network(members.iter().copied())?;
            group.label(settings.valence_alpha)?;
            cohorts.push(Cohort {
                summary: CohortSummary {
                    cohort,
                    source: source.name.clone(),
                    side: side.into(),
                    participants: members.len(),
                    median_total_ma: split.median_total_ma,
                    excluded_at_median: split.excluded.len(),
                    nodes: group.network.node_count(),
                    edges: group.network.edge_count(),
                    frames: Vec::new(),
                    skipped: Vec::new(),
                },
                group,
            });
        }
    }

    let jobs: Vec<(usize, &str)> = (0..cohorts.len())
        .flat_map(|c| settings.targets.iter().map(move |t| (c, t.as_str())))
        .collect();
    let results: Vec<(usize, &str, std::result::Result<SemanticFrame, CoreError>)> = jobs
        .par_iter()
        .map(|&(c, target)| (c, target, semantic_frame(&cohorts[c].group.network, target)))
        .collect();

    let mut out = OutputDir::create(&args.out_dir)?;
    for cohort in &cohorts {
        let doc = cohort.group.network.to_document();
        out.write(
            &format!("networks/{}.json", cohort.summary.cohort),
            pretty_json(&doc),
        )?;
    }
    for (c, target, result) in results {
        let cohort = &mut cohorts[c].summary;
        match result {
            Ok(frame) => {
                let base = format!("frames/{}/{}", cohort.cohort, file_stem(target));
                out.write(&format!("{base}.svg"), frame_svg(&frame))?;
                out.write(&format!("{base}.dot"), frame_dot(&frame))?;
                out.write(&format!("{base}.json"), frame.to_json()?)?;
                cohort.frames.push(target.to_string());
            }
            Err(CoreError::UnknownNode(_)) => {
                warn(
                    &mut warnings,
                    format!("target `{target}` absent from cohort `{}`, skipped", cohort.cohort),
                );
                cohort.skipped.push(target.to_string());
            }
            Err(e) => return Err(e.into()),
        }
    }
    let summaries: Vec<&CohortSummary> = cohorts.iter().map(|c| &c.summary).collect();
    out.write(COHORTS_FILE, pretty_json(&summaries))?;
    let emitted: usize = summaries.iter().map(|s| s.frames.len()).sum();
    out.finish(MANIFEST_FILE, "frames", &settings, inputs, warnings)?;
    println!(
        "frames: {} cohorts, {emitted} frames -> {}",
        summaries.len(),
        args.out_dir.display()
    );
    Ok(())
}
