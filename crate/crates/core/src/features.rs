//! Per-participant network and questionnaire features.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{Bfmn, ClosenessVariant};
use crate::psychometrics::{score_mas, ItemMap};
use crate::record::ParticipantRecord;
use crate::stats::FeatureTable;
use crate::valence::{individual_labels, median_rating};

/// How valence enters the feature table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValenceMode {
    /// Median 1–5 rating of the concept.
    #[default]
    Raw,
    /// Individual −1/0/+1 label.
    Label,
}

impl FromStr for ValenceMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(ValenceMode::Raw),
            "label" => Ok(ValenceMode::Label),
            other => Err(format!("unknown valence mode `{other}`")),
        }
    }
}

pub const OUTCOMES: [&str; 4] = [
    "total_ma",
    "evaluation_ma",
    "everyday_social_ma",
    "passive_observation_ma",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureConfig {
    /// Concepts whose degree, closeness and valence become features.
    pub focus: Vec<String>,
    pub closeness: ClosenessVariant,
    pub valence_mode: ValenceMode,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        FeatureConfig {
            focus: vec!["anxiety".into(), "math".into()],
            closeness: ClosenessVariant::GraphSize,
            valence_mode: ValenceMode::Raw,
        }
    }
}

pub fn degree_column(concept: &str) -> String {
    format!("{concept}_degree")
}

pub fn closeness_column(concept: &str) -> String {
    format!("{concept}_closeness")
}

pub fn valence_column(concept: &str) -> String {
    format!("{concept}_valence")
}

/// Table-style label for a column name, e.g. `anxiety_degree` → `"Anxiety" Degree`.
pub fn display_name(column: &str) -> String {
    match column {
        "total_ma" => return "Total MA".into(),
        "evaluation_ma" => return "Evaluation MA".into(),
        "everyday_social_ma" => return "Everyday/Social MA".into(),
        "passive_observation_ma" => return "Passive Observation MA".into(),
        _ => {}
    }
    for (suffix, label) in [
        ("_degree", "Degree"),
        ("_closeness", "Closeness Centrality"),
        ("_valence", "Valence"),
    ] {
        if let Some(concept) = column.strip_suffix(suffix) {
            let mut chars = concept.chars();
            let cap: String = match chars.next() {
                Some(c) => c.to_uppercase().chain(chars).collect(),
                None => String::new(),
            };
            return format!("\"{cap}\" {label}");
        }
    }
    column.to_string()
}

/// The two candidate predictor sets compared by AIC: degree and valence of the
/// first focus concept plus valence of the second, with and without the
/// second concept's degree.
pub fn default_candidate_sets(config: &FeatureConfig) -> Result<Vec<Vec<String>>> {
    let [first, second] = config.focus.as_slice() else {
        return Err(Error::invalid(
            "candidate predictor sets need exactly two focus concepts",
        ));
    };
    let three = vec![
        degree_column(first),
        valence_column(first),
        valence_column(second),
    ];
    let four = vec![
        degree_column(first),
        degree_column(second),
        valence_column(first),
        valence_column(second),
    ];
    Ok(vec![three, four])
}

/// Builds the network of each record and collects focus-concept features plus MAS outcomes.
pub fn assemble(
    records: &[ParticipantRecord],
    config: &FeatureConfig,
    item_map: &ItemMap,
) -> Result<FeatureTable> {
    let mut rows = Vec::with_capacity(records.len());
    for record in records {
        rows.push(participant_features(record, config, item_map)?);
    }
    let mut table = FeatureTable::new(records.iter().map(|r| r.participant_id.clone()).collect());
    let mut names = Vec::new();
    for concept in &config.focus {
        names.push(valence_column(concept));
        names.push(degree_column(concept));
        names.push(closeness_column(concept));
    }
    names.extend(OUTCOMES.iter().map(|s| s.to_string()));
    for (c, name) in names.iter().enumerate() {
        table.add_column(name.clone(), rows.iter().map(|r| r[c]).collect())?;
    }
    Ok(table)
}

fn participant_features(
    record: &ParticipantRecord,
    config: &FeatureConfig,
    item_map: &ItemMap,
) -> Result<Vec<f64>> {
    let pid = &record.participant_id;
    let net = Bfmn::from_record(record);
    let labels = match config.valence_mode {
        ValenceMode::Label => Some(individual_labels(record)?),
        ValenceMode::Raw => None,
    };
    let mut row = Vec::new();
    for concept in &config.focus {
        let ratings = record.valence_ratings.get(concept).ok_or_else(|| {
            Error::validation(pid, concept, "focus concept has no valence rating")
        })?;
        let valence = match &labels {
            Some(l) => f64::from(l[concept].as_i8()),
            None => median_rating(ratings)?,
        };
        let (degree, closeness) = if net.contains(concept) {
            (
                net.degree(concept)? as f64,
                net.closeness(concept, config.closeness)?,
            )
        } else {
            return Err(Error::validation(pid, concept, "focus concept is not a cue"));
        };
        row.extend([valence, degree, closeness]);
    }
    let scores = score_mas(&record.mas_answers, item_map)
        .map_err(|e| Error::validation(pid, "mas_answers", e.to_string()))?;
    row.extend(
        [
            scores.total,
            scores.evaluation,
            scores.everyday_social,
            scores.passive_observation,
        ]
        .map(f64::from),
    );
    Ok(row)
}
