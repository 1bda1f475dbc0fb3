//! Participant file parsing, serialisation and cleaning.
//!
//! Two on-disk layouts are supported. The CSV layout is one row per
//! participant with `participant_id`, optional `source`, per-cue response
//! columns `cue_<word>_resp_{1,2,3}`, per-concept rating columns `val_<word>`
//! (ratings separated by `;` when a concept was rated more than once),
//! `mas_01..mas_23`, and optional `profile_*` columns. The JSON layout is an
//! array of [`ParticipantRecord`] objects. See `docs/data-format.md`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{
    normalize_word, Education, Gender, ParticipantRecord, Socioeconomic, Source, StudentProfile,
    MAS_ITEM_COUNT, RESPONSES_PER_CUE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// Guesses the format from a file extension, defaulting to CSV.
    pub fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
            _ => Format::Csv,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

pub fn parse_participants(path: &Path, format: Format) -> Result<Vec<ParticipantRecord>> {
    let text = std::fs::read_to_string(path)?;
    match format {
        Format::Csv => parse_csv(&text),
        Format::Json => parse_json(&text),
    }
}

// ---------------------------------------------------------------------------
// CSV

#[derive(Debug, Clone)]
enum Column {
    Id,
    Source,
    Response { cue: String, slot: usize },
    Valence(String),
    Mas(usize),
    Gender,
    Age,
    Education,
    Socioeconomic,
    Seed,
}

fn classify_header(name: &str) -> Option<Column> {
    let name = name.trim();
    match name {
        "participant_id" => return Some(Column::Id),
        "source" => return Some(Column::Source),
        "profile_gender" => return Some(Column::Gender),
        "profile_age" => return Some(Column::Age),
        "profile_education" => return Some(Column::Education),
        "profile_socioeconomic" => return Some(Column::Socioeconomic),
        "profile_seed" => return Some(Column::Seed),
        _ => {}
    }
    if let Some(rest) = name.strip_prefix("cue_") {
        let (cue, slot) = rest.rsplit_once("_resp_")?;
        let slot: usize = slot.parse().ok()?;
        let cue = normalize_word(cue);
        if cue.is_empty() || !(1..=RESPONSES_PER_CUE).contains(&slot) {
            return None;
        }
        return Some(Column::Response { cue, slot });
    }
    if let Some(word) = name.strip_prefix("val_") {
        let word = normalize_word(word);
        return (!word.is_empty()).then_some(Column::Valence(word));
    }
    if let Some(idx) = name.strip_prefix("mas_") {
        let idx: usize = idx.parse().ok()?;
        return (1..=MAS_ITEM_COUNT)
            .contains(&idx)
            .then_some(Column::Mas(idx));
    }
    None
}

fn parse_err(row: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        row,
        field: field.to_string(),
        message: message.into(),
    }
}

/// Parses the wide CSV layout. Row numbers in errors count the header as row 1.
pub fn parse_csv(text: &str) -> Result<Vec<ParticipantRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::None)
        .from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();

    let mut columns = Vec::with_capacity(headers.len());
    let mut cue_order: IndexSet<String> = IndexSet::new();
    let mut seen = std::collections::HashSet::new();
    for name in headers.iter() {
        let col = classify_header(name)
            .ok_or_else(|| parse_err(1, name, "unrecognised column"))?;
        if !seen.insert(name.trim().to_string()) {
            return Err(parse_err(1, name, "duplicate column"));
        }
        if let Column::Response { cue, .. } = &col {
            cue_order.insert(cue.clone());
        }
        columns.push(col);
    }
    if !columns.iter().any(|c| matches!(c, Column::Id)) {
        return Err(parse_err(1, "participant_id", "missing required column"));
    }
    let mas_cols = columns.iter().filter(|c| matches!(c, Column::Mas(_))).count();

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 2;
        let row = row?;
        let mut record = ParticipantRecord::new("");
        let mut slots: IndexMap<String, [Option<String>; RESPONSES_PER_CUE]> = cue_order
            .iter()
            .map(|c| (c.clone(), Default::default()))
            .collect();
        let mut mas: BTreeMap<usize, Option<u8>> = BTreeMap::new();
        let mut profile = ProfileCells::default();

        for (col, (cell, name)) in columns.iter().zip(row.iter().zip(headers.iter())) {
            let value = cell.trim();
            match col {
                Column::Id => record.participant_id = value.to_string(),
                Column::Source => {
                    record.source = value.parse().map_err(|m| parse_err(row_no, name, m))?
                }
                Column::Response { cue, slot } => {
                    if !value.is_empty() {
                        slots[cue.as_str()][slot - 1] = Some(normalize_word(value));
                    }
                }
                Column::Valence(word) => {
                    if value.is_empty() {
                        continue;
                    }
                    let mut ratings = Vec::new();
                    for part in value.split(';') {
                        let r: i64 = part.trim().parse().map_err(|_| {
                            parse_err(row_no, name, format!("`{part}` is not an integer rating"))
                        })?;
                        ratings.push(r);
                    }
                    let ratings = check_ratings(&record.participant_id, word, &ratings)?;
                    record.valence_ratings.insert(word.clone(), ratings);
                }
                Column::Mas(idx) => {
                    let answer = if value.is_empty() {
                        None
                    } else {
                        let v: i64 = value.parse().map_err(|_| {
                            parse_err(row_no, name, format!("`{value}` is not an integer answer"))
                        })?;
                        if !(1..=5).contains(&v) {
                            return Err(Error::validation(
                                &record.participant_id,
                                format!("mas_{idx:02}"),
                                format!("answer {v} outside [1, 5]"),
                            ));
                        }
                        Some(v as u8)
                    };
                    mas.insert(*idx, answer);
                }
                Column::Gender => profile.gender = non_empty(value),
                Column::Age => profile.age = non_empty(value),
                Column::Education => profile.education = non_empty(value),
                Column::Socioeconomic => profile.socioeconomic = non_empty(value),
                Column::Seed => profile.seed = non_empty(value),
            }
        }

        if record.participant_id.is_empty() {
            return Err(parse_err(row_no, "participant_id", "empty participant id"));
        }
        record.cue_responses = slots
            .into_iter()
            .map(|(cue, s)| (cue, s.into_iter().flatten().collect()))
            .collect();

        let answered: Vec<u8> = mas.values().flatten().copied().collect();
        if !answered.is_empty() {
            if mas_cols != MAS_ITEM_COUNT || answered.len() != MAS_ITEM_COUNT {
                return Err(Error::validation(
                    &record.participant_id,
                    "mas_answers",
                    format!(
                        "expected {MAS_ITEM_COUNT} answers, found {}",
                        answered.len()
                    ),
                ));
            }
            record.mas_answers = answered;
        }
        record.profile = profile.build(row_no)?;
        record.validate()?;
        records.push(record);
    }
    Ok(records)
}

fn non_empty(value: &str) -> Option<String> {
    (!value.is_empty()).then(|| value.to_string())
}

#[derive(Default)]
struct ProfileCells {
    gender: Option<String>,
    age: Option<String>,
    education: Option<String>,
    socioeconomic: Option<String>,
    seed: Option<String>,
}

impl ProfileCells {
    fn build(self, row: usize) -> Result<Option<StudentProfile>> {
        let ProfileCells {
            gender,
            age,
            education,
            socioeconomic,
            seed,
        } = self;
        let present = [&gender, &age, &education, &socioeconomic, &seed]
            .iter()
            .filter(|c| c.is_some())
            .count();
        if present == 0 {
            return Ok(None);
        }
        let need = |v: Option<String>, field: &str| {
            v.ok_or_else(|| parse_err(row, field, "incomplete profile"))
        };
        let gender: Gender = need(gender, "profile_gender")?
            .parse()
            .map_err(|m| parse_err(row, "profile_gender", m))?;
        let age: u8 = need(age, "profile_age")?
            .parse()
            .map_err(|_| parse_err(row, "profile_age", "not an integer age"))?;
        let education: Education = need(education, "profile_education")?
            .parse()
            .map_err(|m| parse_err(row, "profile_education", m))?;
        let socioeconomic: Socioeconomic = need(socioeconomic, "profile_socioeconomic")?
            .parse()
            .map_err(|m| parse_err(row, "profile_socioeconomic", m))?;
        let rng_seed: u64 = need(seed, "profile_seed")?
            .parse()
            .map_err(|_| parse_err(row, "profile_seed", "not an unsigned integer"))?;
        Ok(Some(StudentProfile {
            gender,
            age,
            education,
            socioeconomic,
            rng_seed,
        }))
    }
}

fn check_ratings(participant: &str, concept: &str, raw: &[i64]) -> Result<Vec<u8>> {
    raw.iter()
        .map(|&r| {
            if (1..=5).contains(&r) {
                Ok(r as u8)
            } else {
                Err(Error::validation(
                    participant,
                    concept,
                    format!("rating {r} outside [1, 5]"),
                ))
            }
        })
        .collect()
}

/// Writes records in the wide CSV layout.
///
/// Cue columns are the union of cues over all records in first-seen order,
/// so records are expected to share a cue set; a cue missing from a record is
/// written as three blank cells.
pub fn write_csv(records: &[ParticipantRecord]) -> Result<String> {
    let mut cues: IndexSet<&str> = IndexSet::new();
    let mut concepts: std::collections::BTreeSet<&str> = Default::default();
    for r in records {
        cues.extend(r.cues());
        concepts.extend(r.valence_ratings.keys().map(String::as_str));
    }
    let with_source = records.iter().any(|r| r.source != Source::Human);
    let with_mas = records.iter().any(|r| !r.mas_answers.is_empty());
    let with_profile = records.iter().any(|r| r.profile.is_some());

    let mut header = vec!["participant_id".to_string()];
    if with_source {
        header.push("source".into());
    }
    for cue in &cues {
        for slot in 1..=RESPONSES_PER_CUE {
            header.push(format!("cue_{cue}_resp_{slot}"));
        }
    }
    header.extend(concepts.iter().map(|c| format!("val_{c}")));
    if with_mas {
        header.extend((1..=MAS_ITEM_COUNT).map(|i| format!("mas_{i:02}")));
    }
    if with_profile {
        header.extend(
            [
                "profile_gender",
                "profile_age",
                "profile_education",
                "profile_socioeconomic",
                "profile_seed",
            ]
            .map(String::from),
        );
    }

    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(&header)?;
    for r in records {
        let mut row = vec![r.participant_id.clone()];
        if with_source {
            row.push(r.source.to_string());
        }
        for cue in &cues {
            let responses = r.responses(cue);
            for slot in 0..RESPONSES_PER_CUE {
                row.push(responses.get(slot).cloned().unwrap_or_default());
            }
        }
        for concept in &concepts {
            row.push(
                r.valence_ratings
                    .get(*concept)
                    .map(|v| join_ratings(v))
                    .unwrap_or_default(),
            );
        }
        if with_mas {
            for i in 0..MAS_ITEM_COUNT {
                row.push(
                    r.mas_answers
                        .get(i)
                        .map(|a| a.to_string())
                        .unwrap_or_default(),
                );
            }
        }
        if with_profile {
            match &r.profile {
                Some(p) => row.extend([
                    p.gender.to_string(),
                    p.age.to_string(),
                    p.education.to_string(),
                    p.socioeconomic.to_string(),
                    p.rng_seed.to_string(),
                ]),
                None => row.extend(std::iter::repeat_n(String::new(), 5)),
            }
        }
        writer.write_record(&row)?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
}

fn join_ratings(ratings: &[u8]) -> String {
    ratings
        .iter()
        .map(|r| r.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    participant_id: String,
    #[serde(default)]
    source: Source,
    #[serde(default)]
    cue_responses: IndexMap<String, Vec<Option<String>>>,
    #[serde(default)]
    valence_ratings: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    mas_answers: Vec<i64>,
    #[serde(default)]
    profile: Option<StudentProfile>,
}

/// Parses a JSON array of participant objects; blank or null responses are dropped.
pub fn parse_json(text: &str) -> Result<Vec<ParticipantRecord>> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(text)?;
    let mut records = Vec::with_capacity(raw.len());
    for (i, value) in raw.into_iter().enumerate() {
        let raw: RawRecord = serde_json::from_value(value)
            .map_err(|e| parse_err(i + 1, "object", e.to_string()))?;
        let pid = raw.participant_id.trim().to_string();
        let mut record = ParticipantRecord::new(pid.clone());
        record.source = raw.source;
        for (cue, responses) in raw.cue_responses {
            let cue = normalize_word(&cue);
            let responses: Vec<String> = responses
                .into_iter()
                .flatten()
                .map(|r| normalize_word(&r))
                .filter(|r| !r.is_empty())
                .collect();
            if record.cue_responses.insert(cue.clone(), responses).is_some() {
                return Err(parse_err(i + 1, &cue, "duplicate cue after normalisation"));
            }
        }
        for (concept, ratings) in raw.valence_ratings {
            let concept = normalize_word(&concept);
            let ratings = check_ratings(&pid, &concept, &ratings)?;
            record
                .valence_ratings
                .entry(concept)
                .or_default()
                .extend(ratings);
        }
        if let Some((idx, bad)) = raw
            .mas_answers
            .iter()
            .enumerate()
            .find(|(_, a)| !(1..=5).contains(*a))
        {
            return Err(Error::validation(
                &pid,
                format!("mas_{:02}", idx + 1),
                format!("answer {bad} outside [1, 5]"),
            ));
        }
        record.mas_answers = raw.mas_answers.iter().map(|&a| a as u8).collect();
        record.profile = raw.profile;
        record.validate()?;
        records.push(record);
    }
    Ok(records)
}

pub fn write_json(records: &[ParticipantRecord]) -> Result<String> {
    let mut text = serde_json::to_string_pretty(records)?;
    text.push('\n');
    Ok(text)
}

// ---------------------------------------------------------------------------
// Cleaning

/// How the target-cue exclusion rule combines several target cues.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetRule {
    /// Exclude only when every target cue is blank.
    #[default]
    AllBlank,
    /// Exclude when any target cue is blank.
    AnyBlank,
}

impl FromStr for TargetRule {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all-blank" | "all" => Ok(TargetRule::AllBlank),
            "any-blank" | "any" => Ok(TargetRule::AnyBlank),
            other => Err(format!("unknown target rule `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CleaningConfig {
    pub target_cues: Vec<String>,
    #[serde(default)]
    pub rule: TargetRule,
}

impl Default for CleaningConfig {
    fn default() -> Self {
        CleaningConfig {
            target_cues: vec!["math".into(), "anxiety".into()],
            rule: TargetRule::AllBlank,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExclusionReason {
    NoTargetAssociations,
    ExcessMissing,
    Malformed,
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExclusionReason::NoTargetAssociations => "no_target_associations",
            ExclusionReason::ExcessMissing => "excess_missing",
            ExclusionReason::Malformed => "malformed",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub participant_id: String,
    pub reason: ExclusionReason,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub kept: Vec<String>,
    pub excluded: Vec<Exclusion>,
}

/// Decides whether a single record survives cleaning.
pub fn exclusion_reason(
    record: &ParticipantRecord,
    config: &CleaningConfig,
) -> Option<ExclusionReason> {
    if !record.has_full_mas() || record.validate().is_err() {
        return Some(ExclusionReason::Malformed);
    }
    let mut blanks = config
        .target_cues
        .iter()
        .map(|cue| record.responses(cue).is_empty());
    let target_fail = match config.rule {
        TargetRule::AllBlank => blanks.all(|b| b),
        TargetRule::AnyBlank => blanks.any(|b| b),
    };
    if target_fail {
        return Some(ExclusionReason::NoTargetAssociations);
    }
    // missing / total > 1/3, kept in integers
    if 3 * record.missing_slots() > record.total_slots() {
        return Some(ExclusionReason::ExcessMissing);
    }
    None
}

/// Applies the exclusion rules, preserving the order of kept records.
pub fn clean_participants(
    records: Vec<ParticipantRecord>,
    config: &CleaningConfig,
) -> Result<(Vec<ParticipantRecord>, CleaningReport)> {
    if records.is_empty() {
        return Ok((Vec::new(), CleaningReport::default()));
    }
    if config.target_cues.is_empty() {
        return Err(Error::invalid("at least one target cue is required"));
    }
    let mut kept = Vec::with_capacity(records.len());
    let mut report = CleaningReport::default();
    for record in records {
        match exclusion_reason(&record, config) {
            None => {
                report.kept.push(record.participant_id.clone());
                kept.push(record);
            }
            Some(reason) => report.excluded.push(Exclusion {
                participant_id: record.participant_id.clone(),
                reason,
            }),
        }
    }
    Ok((kept, report))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> String {
        let mut cols = vec!["participant_id".to_string()];
        for cue in ["math", "anxiety"] {
            for s in 1..=3 {
                cols.push(format!("cue_{cue}_resp_{s}"));
            }
        }
        cols.extend(["val_math", "val_anxiety", "val_exam", "val_numbers", "val_fear"].map(String::from));
        cols.extend((1..=23).map(|i| format!("mas_{i:02}")));
        cols.join(",")
    }

    fn row(id: &str, math: [&str; 3], anxiety: [&str; 3], val_math: &str) -> String {
        let mut cells = vec![id.to_string()];
        cells.extend(math.iter().map(|s| s.to_string()));
        cells.extend(anxiety.iter().map(|s| s.to_string()));
        cells.extend([val_math, "1", "2;3", "4", "1"].map(String::from));
        cells.extend(std::iter::repeat_n("3".to_string(), 23));
        cells.join(",")
    }

    #[test]
    fn blank_cells_are_skipped() {
        let text = format!(
            "{}\n{}\n",
            header(),
            row("p1", ["Exam ", "", "numbers"], ["fear", "", ""], "2")
        );
        let records = parse_csv(&text).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].responses("math"), ["exam", "numbers"]);
        assert_eq!(records[0].responses("anxiety"), ["fear"]);
        assert_eq!(records[0].valence_ratings["exam"], vec![2, 3]);
        assert_eq!(records[0].mas_answers.len(), 23);
    }

    #[test]
    fn out_of_range_rating_is_a_validation_error() {
        let text = format!("{}\n{}\n", header(), row("p7", ["a", "b", "c"], ["d", "", ""], "7"));
        match parse_csv(&text) {
            Err(Error::Validation {
                participant, field, ..
            }) => {
                assert_eq!(participant, "p7");
                assert_eq!(field, "math");
            }
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_rating_is_a_parse_error_with_locus() {
        let text = format!("{}\n{}\n", header(), row("p1", ["a", "b", "c"], ["d", "", ""], "x"));
        match parse_csv(&text) {
            Err(Error::Parse { row, field, .. }) => {
                assert_eq!(row, 2);
                assert_eq!(field, "val_math");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_column_rejected() {
        let text = "participant_id,shoe_size\np1,42\n";
        assert!(matches!(parse_csv(text), Err(Error::Parse { row: 1, .. })));
    }

    #[test]
    fn partial_mas_rejected() {
        let mut text = format!("{}\n{}\n", header(), row("p1", ["a", "b", "c"], ["d", "", ""], "3"));
        // blank out the last MAS answer
        text = text.trim_end().trim_end_matches('3').to_string() + "\n";
        match parse_csv(&text) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "mas_answers"),
            other => panic!("expected MAS validation error, got {other:?}"),
        }
    }

    #[test]
    fn json_participant_with_full_mas() {
        let text = r#"[{
            "participant_id": "j1",
            "cue_responses": {"Math": ["exam", "", null, "  "]},
            "valence_ratings": {"math": [2], "exam": [1]},
            "mas_answers": [1,2,3,4,5,1,2,3,4,5,1,2,3,4,5,1,2,3,4,5,1,2,3]
        }]"#;
        let records = parse_json(text).unwrap();
        assert_eq!(records[0].mas_answers.len(), 23);
        assert_eq!(records[0].responses("math"), ["exam"]);
        assert_eq!(records[0].source, Source::Human);
    }

    #[test]
    fn json_bad_mas_answer() {
        let text = r#"[{"participant_id": "j1", "cue_responses": {}, "valence_ratings": {},
            "mas_answers": [9]}]"#;
        assert!(matches!(parse_json(text), Err(Error::Validation { .. })));
    }

    fn record(id: &str, responses: &[(&str, usize)]) -> ParticipantRecord {
        let mut r = ParticipantRecord::new(id);
        for (cue, n) in responses {
            let words = (0..*n).map(|i| format!("{cue}-w{i}")).collect();
            r.cue_responses.insert(cue.to_string(), words);
            r.valence_ratings.insert(cue.to_string(), vec![3]);
        }
        r.mas_answers = vec![2; 23];
        r
    }

    #[test]
    fn one_target_answered_is_kept() {
        let r = record(
            "p",
            &[("math", 3), ("anxiety", 0), ("physics", 3), ("biology", 3)],
        );
        let (kept, report) = clean_participants(vec![r], &CleaningConfig::default()).unwrap();
        assert_eq!(kept.len(), 1);
        assert!(report.excluded.is_empty());
    }

    #[test]
    fn both_targets_blank_is_excluded() {
        let r = record("p", &[("math", 0), ("anxiety", 0), ("fun", 3)]);
        let (_, report) = clean_participants(vec![r], &CleaningConfig::default()).unwrap();
        assert_eq!(report.excluded[0].reason, ExclusionReason::NoTargetAssociations);
    }

    #[test]
    fn any_blank_rule_is_stricter() {
        let r = record(
            "p",
            &[("math", 3), ("anxiety", 0), ("physics", 3), ("biology", 3)],
        );
        let config = CleaningConfig {
            rule: TargetRule::AnyBlank,
            ..Default::default()
        };
        let (kept, _) = clean_participants(vec![r], &config).unwrap();
        assert!(kept.is_empty());
    }

    #[test]
    fn forty_one_blanks_of_one_twenty() {
        // 40 cues: math and anxiety full, 13 cues fully blank (39) + 1 cue with 1 response (2) = 41
        let mut spec: Vec<(String, usize)> = vec![("math".into(), 3), ("anxiety".into(), 3)];
        for i in 0..38 {
            let n = match i {
                0..=12 => 0,
                13 => 1,
                _ => 3,
            };
            spec.push((format!("c{i}"), n));
        }
        let spec_ref: Vec<(&str, usize)> = spec.iter().map(|(c, n)| (c.as_str(), *n)).collect();
        let r = record("p", &spec_ref);
        assert_eq!(r.total_slots(), 120);
        assert_eq!(r.missing_slots(), 41);
        let (_, report) = clean_participants(vec![r.clone()], &CleaningConfig::default()).unwrap();
        assert_eq!(report.excluded[0].reason, ExclusionReason::ExcessMissing);

        // exactly 40 blanks is one third, which is kept
        let mut r40 = r;
        r40.cue_responses["c13"].push("extra".into());
        assert_eq!(r40.missing_slots(), 40);
        let (kept, _) = clean_participants(vec![r40], &CleaningConfig::default()).unwrap();
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn missing_mas_is_malformed() {
        let mut r = record("p", &[("math", 3), ("anxiety", 3)]);
        r.mas_answers.clear();
        let (_, report) = clean_participants(vec![r], &CleaningConfig::default()).unwrap();
        assert_eq!(report.excluded[0].reason, ExclusionReason::Malformed);
    }

    #[test]
    fn empty_input_is_not_an_error() {
        let (kept, report) = clean_participants(vec![], &CleaningConfig::default()).unwrap();
        assert!(kept.is_empty());
        assert_eq!(report, CleaningReport::default());
    }
}
