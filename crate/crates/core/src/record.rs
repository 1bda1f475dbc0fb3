//! Canonical participant data model.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of questionnaire items on the MAS-IT / MAS-UK scale.
pub const MAS_ITEM_COUNT: usize = 23;

/// Response slots per cue in the free-association task.
pub const RESPONSES_PER_CUE: usize = 3;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    #[default]
    Human,
    Simulated { model: String },
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Human => f.write_str("human"),
            Source::Simulated { model } => write!(f, "simulated:{model}"),
        }
    }
}

impl FromStr for Source {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "" | "human" => Ok(Source::Human),
            other => match other.strip_prefix("simulated:") {
                Some(model) if !model.is_empty() => Ok(Source::Simulated {
                    model: model.to_string(),
                }),
                _ => Err(format!("expected `human` or `simulated:<model>`, got `{other}`")),
            },
        }
    }
}

macro_rules! string_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text),+
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s.trim() {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!("unknown {} `{other}`", stringify!($name))),
                }
            }
        }
    };
}

string_enum!(Gender {
    Male => "male",
    Female => "female",
});

string_enum!(Education {
    LastYearHighSchool => "last-year-high-school",
    BscYear1 => "bsc-year-1",
    BscYear2 => "bsc-year-2",
    BscYear3 => "bsc-year-3",
});

string_enum!(Socioeconomic {
    Low => "low",
    MediumLow => "medium-low",
    Medium => "medium",
    MediumHigh => "medium-high",
    High => "high",
});

pub const MIN_AGE: u8 = 18;
pub const MAX_AGE: u8 = 25;

/// Socio-demographic persona attached to a simulated participant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StudentProfile {
    pub gender: Gender,
    pub age: u8,
    pub education: Education,
    pub socioeconomic: Socioeconomic,
    pub rng_seed: u64,
}

impl StudentProfile {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if !(MIN_AGE..=MAX_AGE).contains(&self.age) {
            return Err(format!(
                "age {} outside [{MIN_AGE}, {MAX_AGE}]",
                self.age
            ));
        }
        Ok(())
    }
}

/// One participant's free associations, valence ratings and questionnaire.
///
/// `cue_responses` keeps cue order as administered; each list holds only the
/// non-blank responses (at most three). `mas_answers` is either empty (not
/// collected) or exactly [`MAS_ITEM_COUNT`] long.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParticipantRecord {
    pub participant_id: String,
    #[serde(default)]
    pub source: Source,
    pub cue_responses: IndexMap<String, Vec<String>>,
    pub valence_ratings: BTreeMap<String, Vec<u8>>,
    #[serde(default)]
    pub mas_answers: Vec<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<StudentProfile>,
}

/// Canonical word form: surrounding whitespace trimmed, lowercased.
pub fn normalize_word(raw: &str) -> String {
    raw.trim().to_lowercase()
}

impl ParticipantRecord {
    pub fn new(participant_id: impl Into<String>) -> Self {
        ParticipantRecord {
            participant_id: participant_id.into(),
            source: Source::Human,
            cue_responses: IndexMap::new(),
            valence_ratings: BTreeMap::new(),
            mas_answers: Vec::new(),
            profile: None,
        }
    }

    pub fn cues(&self) -> impl Iterator<Item = &str> {
        self.cue_responses.keys().map(String::as_str)
    }

    pub fn responses(&self, cue: &str) -> &[String] {
        self.cue_responses
            .get(cue)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Blank response slots across all cues.
    pub fn missing_slots(&self) -> usize {
        self.cue_responses
            .values()
            .map(|r| RESPONSES_PER_CUE.saturating_sub(r.len()))
            .sum()
    }

    pub fn total_slots(&self) -> usize {
        self.cue_responses.len() * RESPONSES_PER_CUE
    }

    pub fn has_full_mas(&self) -> bool {
        self.mas_answers.len() == MAS_ITEM_COUNT
    }

    /// Checks every record-level invariant.
    pub fn validate(&self) -> Result<()> {
        let pid = &self.participant_id;
        if pid.trim().is_empty() {
            return Err(Error::validation("", "participant_id", "empty participant id"));
        }
        for (cue, responses) in &self.cue_responses {
            if responses.len() > RESPONSES_PER_CUE {
                return Err(Error::validation(
                    pid,
                    cue,
                    format!("{} responses, at most {RESPONSES_PER_CUE} allowed", responses.len()),
                ));
            }
            if responses.iter().any(|r| r.trim().is_empty()) {
                return Err(Error::validation(pid, cue, "blank response stored as entry"));
            }
            if !self.valence_ratings.contains_key(cue) {
                return Err(Error::validation(pid, cue, "cue has no valence rating"));
            }
        }
        for (concept, ratings) in &self.valence_ratings {
            if ratings.is_empty() {
                return Err(Error::validation(pid, concept, "empty rating list"));
            }
            if let Some(bad) = ratings.iter().find(|r| !(1..=5).contains(*r)) {
                return Err(Error::validation(
                    pid,
                    concept,
                    format!("rating {bad} outside [1, 5]"),
                ));
            }
        }
        if !self.mas_answers.is_empty() {
            if self.mas_answers.len() != MAS_ITEM_COUNT {
                return Err(Error::validation(
                    pid,
                    "mas_answers",
                    format!(
                        "expected {MAS_ITEM_COUNT} answers, found {}",
                        self.mas_answers.len()
                    ),
                ));
            }
            if let Some((i, bad)) = self
                .mas_answers
                .iter()
                .enumerate()
                .find(|(_, a)| !(1..=5).contains(*a))
            {
                return Err(Error::validation(
                    pid,
                    format!("mas_{:02}", i + 1),
                    format!("answer {bad} outside [1, 5]"),
                ));
            }
        }
        if let Some(profile) = &self.profile {
            profile
                .validate()
                .map_err(|m| Error::validation(pid, "profile", m))?;
        }
        Ok(())
    }
}
