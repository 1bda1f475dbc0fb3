//! Bundled stimulus lists and questionnaire items.

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::psychometrics::ItemMap;

const CUES_EXP1: &str = include_str!("../data/cues_exp1.json");
const CUES_EXP2: &str = include_str!("../data/cues_exp2.json");
const MAS_ITEMS: &str = include_str!("../data/mas_items.json");

#[derive(Debug, Clone, Deserialize)]
pub struct Cue {
    pub word: String,
    pub category: String,
}

#[derive(Debug, Deserialize)]
struct CueFile {
    cues: Vec<Cue>,
}

fn load(raw: &str) -> Vec<Cue> {
    serde_json::from_str::<CueFile>(raw)
        .expect("bundled cue list is valid JSON")
        .cues
}

/// The 40 cue words of the first human experiment, in administration order.
pub fn exp1_cues() -> Vec<Cue> {
    load(CUES_EXP1)
}

/// The cue words of the second human experiment.
pub fn exp2_cues() -> Vec<Cue> {
    load(CUES_EXP2)
}

/// Resolves a cue-set name (`exp1`, `exp2`) or a comma-separated word list.
pub fn cue_set(name: &str) -> Result<Vec<String>> {
    let words: Vec<String> = match name.trim() {
        "exp1" => exp1_cues().into_iter().map(|c| c.word).collect(),
        "exp2" => exp2_cues().into_iter().map(|c| c.word).collect(),
        list => list
            .split(',')
            .map(crate::record::normalize_word)
            .filter(|w| !w.is_empty())
            .collect(),
    };
    if words.is_empty() {
        return Err(Error::invalid(format!("empty cue set `{name}`")));
    }
    Ok(words)
}

/// Raw JSON of the bundled MAS item map.
pub fn mas_items_json() -> &'static str {
    MAS_ITEMS
}

pub fn mas_item_map() -> ItemMap {
    ItemMap::from_json(MAS_ITEMS).expect("bundled MAS item map is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn exp1_has_forty_unique_cues() {
        let cues = exp1_cues();
        assert_eq!(cues.len(), 40);
        let unique: BTreeSet<_> = cues.iter().map(|c| c.word.as_str()).collect();
        assert_eq!(unique.len(), 40);
        assert!(unique.contains("math"));
        assert!(unique.contains("anxiety"));
    }

    #[test]
    fn exp2_contains_targets() {
        let words: Vec<_> = exp2_cues().into_iter().map(|c| c.word).collect();
        assert_eq!(words.len(), 44);
        assert!(words.contains(&"math".to_string()));
        assert!(words.contains(&"anxiety".to_string()));
    }

    #[test]
    fn custom_cue_list() {
        assert_eq!(cue_set(" Math, anxiety ").unwrap(), vec!["math", "anxiety"]);
        assert!(cue_set(" , ").is_err());
    }

    #[test]
    fn bundled_item_map_has_standard_factor_counts() {
        let map = mas_item_map();
        assert_eq!(map.items().len(), 23);
    }
}
