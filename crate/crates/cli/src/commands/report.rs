use std::path::{Path, PathBuf};

use formanet_core::ingest::CleaningReport;
use formanet_sim::RunLog;

use super::frames::{CohortSummary, COHORTS_FILE};
use super::ingest::REPORT_FILE;
use super::analyze::{CORRELOGRAM_SVG, DESCRIPTIVES_CSV, REGRESSIONS_CSV};
use crate::error::{validation, Result};
use crate::manifest::{FileDigest, Manifest, OutputDir, MANIFEST_FILE};
use crate::{ReportArgs, ReportFormat};

enum Block {
    Heading(u8, String),
    Para(String),
    List(Vec<String>),
    Table(Vec<String>, Vec<Vec<String>>),
    /// Inline SVG in HTML, a link in Markdown.
    Figure { path: String, svg: String },
}

fn is_manifest(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n == MANIFEST_FILE || n.ends_with(".manifest.json"))
}

fn find_manifests(dir: &Path, found: &mut Vec<PathBuf>) -> Result<()> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| validation(format!("cannot read `{}`: {e}", dir.display())))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            find_manifests(&path, found)?;
        } else if is_manifest(&path) {
            found.push(path);
        }
    }
    Ok(())
}

fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| validation(format!("{}: {e}", path.display())))?;
    let header = reader
        .headers()
        .map_err(|e| validation(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let rows = reader
        .records()
        .map(|r| r.map(|r| r.iter().map(str::to_string).collect()))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| validation(format!("{}: {e}", path.display())))?;
    Ok((header, rows))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| validation(format!("cannot read `{}`: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))
}

fn section(manifest: &Manifest, path: &Path) -> Result<Vec<Block>> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut blocks = vec![Block::Heading(2, format!("{} ({})", manifest.command, dir.display()))];
    match manifest.command.as_str() {
        "ingest" => {
            let report: CleaningReport = read_json(&dir.join(REPORT_FILE))?;
            blocks.push(Block::Para(format!(
                "Kept {} participants, excluded {}.",
                report.kept.len(),
                report.excluded.len()
            )));
            if !report.excluded.is_empty() {
                blocks.push(Block::Table(
                    vec!["Participant".into(), "Reason".into()],
                    report
                        .excluded
                        .iter()
                        .map(|e| vec![e.participant_id.clone(), e.reason.to_string()])
                        .collect(),
                ));
            }
        }
        "analyze" => {
            let (header, rows) = read_csv(&dir.join(REGRESSIONS_CSV))?;
            blocks.push(Block::Heading(3, "Regressions".into()));
            blocks.push(Block::Table(header, rows));
            let (header, rows) = read_csv(&dir.join(DESCRIPTIVES_CSV))?;
            blocks.push(Block::Heading(3, "Descriptive statistics".into()));
            blocks.push(Block::Table(header, rows));
            let svg_path = dir.join(CORRELOGRAM_SVG);
            blocks.push(Block::Heading(3, "Correlogram".into()));
            blocks.push(Block::Figure {
                path: svg_path.display().to_string(),
                svg: std::fs::read_to_string(&svg_path)?,
            });
        }
        "frames" => {
            let cohorts: Vec<CohortSummary> = read_json(&dir.join(COHORTS_FILE))?;
            blocks.push(Block::Table(
                ["Cohort", "Participants", "Median Total MA", "Nodes", "Edges", "Frames", "Skipped"]
                    .map(String::from)
                    .to_vec(),
                cohorts
                    .iter()
                    .map(|c| {
                        vec![
                            c.cohort.clone(),
                            c.participants.to_string(),
                            format!("{:.1}", c.median_total_ma),
                            c.nodes.to_string(),
                            c.edges.to_string(),
                            c.frames.join(", "),
                            c.skipped.join(", "),
                        ]
                    })
                    .collect(),
            ));
        }
        "simulate" => {
            let log_name = manifest.config["log"].as_str().unwrap_or_default();
            let log = RunLog::from_jsonl(&std::fs::read_to_string(dir.join(log_name))?)
                .map_err(|e| validation(format!("{log_name}: {e}")))?;
            blocks.push(Block::Para(format!(
                "Model `{}`, {} participants requested, {} failed, {} requests, {} retries.",
                log.header.model,
                log.header.n,
                log.failures.len(),
                log.requests.len(),
                log.retries()
            )));
        }
        _ => {}
    }
    if !manifest.warnings.is_empty() {
        blocks.push(Block::Para("Warnings:".into()));
        blocks.push(Block::List(manifest.warnings.clone()));
    }
    Ok(blocks)
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn markdown(blocks: &[Block]) -> String {
    let mut out = String::new();
    for b in blocks {
        match b {
            Block::Heading(level, text) => {
                out.push_str(&format!("{} {text}\n\n", "#".repeat(usize::from(*level))))
            }
            Block::Para(text) => out.push_str(&format!("{text}\n\n")),
            Block::List(items) => {
                for i in items {
                    out.push_str(&format!("- {i}\n"));
                }
                out.push('\n');
            }
            Block::Table(header, rows) => {
                let line = |cells: &[String]| {
                    format!("| {} |\n", cells.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "))
                };
                out.push_str(&line(header));
                out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
                for r in rows {
                    out.push_str(&line(r));
                }
                out.push('\n');
            }
            Block::Figure { path, .. } => out.push_str(&format!("![correlogram]({path})\n\n")),
        }
    }
    out
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn html(blocks: &[Block]) -> String {
    let mut out = String::from(
        "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>formanet report</title>\n\
         <style>table{border-collapse:collapse}td,th{border:1px solid #999;padding:2px 6px}</style>\n\
         </head>\n<body>\n",
    );
    for b in blocks {
        match b {
            Block::Heading(level, text) => out.push_str(&format!("<h{level}>{}</h{level}>\n", esc(text))),
            Block::Para(text) => out.push_str(&format!("<p>{}</p>\n", esc(text))),
            Block::List(items) => {
                out.push_str("<ul>\n");
                for i in items {
                    out.push_str(&format!("<li>{}</li>\n", esc(i)));
                }
                out.push_str("</ul>\n");
            }
            Block::Table(header, rows) => {
                out.push_str("<table>\n<tr>");
                for h in header {
                    out.push_str(&format!("<th>{}</th>", esc(h)));
                }
                out.push_str("</tr>\n");
                for r in rows {
                    out.push_str("<tr>");
                    for c in r {
                        out.push_str(&format!("<td>{}</td>", esc(c)));
                    }
                    out.push_str("</tr>\n");
                }
                out.push_str("</table>\n");
            }
            Block::Figure { svg, .. } => {
                out.push_str("<figure>\n");
                out.push_str(svg.trim_start_matches(|c| c != '<'));
                out.push_str("</figure>\n");
            }
        }
    }
    out.push_str("</body>\n</html>\n");
    out
}

pub fn run(args: ReportArgs) -> Result<()> {
    let mut paths = Vec::new();
    for dir in &args.dirs {
        find_manifests(dir, &mut paths)?;
    }
    let mut blocks = vec![Block::Heading(1, "Analysis report".into())];
    let mut inputs = Vec::new();
    for path in &paths {
        let manifest = Manifest::read(path)?;
        if manifest.command == "report" {
            continue;
        }
        inputs.push(FileDigest::of_file(path)?);
        blocks.extend(section(&manifest, path)?);
    }
    if inputs.is_empty() {
        return Err(validation("no command manifests found"));
    }
    let text = match args.format {
        ReportFormat::Markdown => markdown(&blocks),
        ReportFormat::Html => html(&blocks),
    };
    let dir = match args.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = args
        .out
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| validation("--out must name a file"))?
        .to_string();
    let mut out = OutputDir::create(&dir)?;
    out.write(&name, text)?;
    let settings = serde_json::json!({
        "from": args.dirs.iter().map(|d| d.display().to_string()).collect::<Vec<_>>(),
        "format": args.format,
    });
    out.finish(&format!("{name}.manifest.json"), "report", &settings, inputs, Vec::new())?;
    println!("report: {} sections -> {}", paths.len(), args.out.display());
    Ok(())
}
