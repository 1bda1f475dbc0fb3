pub mod analyze;
pub mod frames;
pub mod ingest;
pub mod report;
pub mod simulate;

use std::path::Path;

use formanet_core::ingest::{parse_participants, Format};
use formanet_core::psychometrics::ItemMap;
use formanet_core::reference::mas_item_map;
use formanet_core::ParticipantRecord;

use crate::error::{validation, Result};
use crate::manifest::FileDigest;

/// Reads a dataset, choosing the parser from the file extension.
pub(crate) fn load_dataset(path: &Path) -> Result<(Vec<ParticipantRecord>, FileDigest)> {
    let digest = FileDigest::of_file(path)?;
    let records = parse_participants(path, Format::from_path(path))
        .map_err(|e| validation(format!("{}: {e}", path.display())))?;
    Ok((records, digest))
}

pub(crate) fn load_item_map(path: Option<&Path>) -> Result<(ItemMap, Option<FileDigest>)> {
    match path {
        None => Ok((mas_item_map(), None)),
        Some(p) => {
            let digest = FileDigest::of_file(p)?;
            let text = std::fs::read_to_string(p)?;
            let map = ItemMap::from_json(&text)
                .map_err(|e| validation(format!("{}: {e}", p.display())))?;
            Ok((map, Some(digest)))
        }
    }
}

pub(crate) fn normalize_list(words: Vec<String>) -> Vec<String> {
    words
        .iter()
        .map(|w| formanet_core::record::normalize_word(w))
        .filter(|w| !w.is_empty())
        .collect()
}

/// File-name-safe form of a concept or cohort name.
pub(crate) fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

pub(crate) fn warn(warnings: &mut Vec<String>, message: String) {
    eprintln!("warning: {message}");
    warnings.push(message);
}

pub(crate) fn pretty_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("value serializes");
    s.push('\n');
    s
}
