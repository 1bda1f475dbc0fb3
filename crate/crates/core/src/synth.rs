//! Seeded synthetic cohorts with a known link between network features and MA.
//!
//! Each participant's Total MA is built as `69 + 10·(a·z_deg − b·z_val + ε)`,
//! where `z_deg` is the standardized degree of the first focus concept,
//! `z_val` the standardized rating of the second and ε ~ N(0, σ²).

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::record::{ParticipantRecord, MAS_ITEM_COUNT, RESPONSES_PER_CUE};
use crate::stats::standardize;

/// Response vocabulary. Words that collide with the cue list are dropped at generation time.
pub const VOCABULARY: &[&str] = &[
    "therapist", "numbers", "fear", "stress", "formula", "calculator", "logic", "homework",
    "grade", "failure", "success", "study", "book", "library", "school", "classroom",
    "friend", "family", "future", "career", "money", "job", "brain", "memory", "learning",
    "thinking", "reasoning", "problem", "solution", "error", "effort", "discipline",
    "patience", "worry", "panic", "calm", "joy", "boredom", "interest", "discovery",
    "experiment", "laboratory", "data", "research", "theory", "method", "result", "chart",
    "graph", "geometry", "algebra", "calculus", "probability", "variance", "mean", "logic gate",
    "code", "programming", "robot", "space", "nature", "life", "cell", "doctor", "health",
    "therapy", "support", "empathy", "love", "trust", "anger", "sadness", "happiness",
    "freedom", "dream", "travel", "art", "music", "sport", "time",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub cues: Vec<String>,
    pub n: usize,
    /// Concept whose degree drives MA (coefficient `a`).
    pub degree_concept: String,
    /// Concept whose rating lowers MA (coefficient `b`).
    pub valence_concept: String,
    pub degree_coef: f64,
    pub valence_coef: f64,
    pub noise_sd: f64,
    /// Probability that a non-focus response slot is left blank.
    pub blank_rate: f64,
    pub seed: u64,
}

impl SynthConfig {
    pub fn new(cues: Vec<String>, n: usize, seed: u64) -> Self {
        SynthConfig {
            cues,
            n,
            degree_concept: "anxiety".into(),
            valence_concept: "math".into(),
            degree_coef: 0.6,
            valence_coef: 0.4,
            noise_sd: 0.3,
            blank_rate: 0.1,
            seed,
        }
    }

    /// Population standardized coefficients of the degree and valence
    /// predictors when both enter the model with independent noise.
    pub fn expected_standardized(&self) -> (f64, f64) {
        let (a, b, s) = (self.degree_coef, self.valence_coef, self.noise_sd);
        let sd_y = (a * a + b * b + s * s).sqrt();
        (a / sd_y, -b / sd_y)
    }
}

/// Generates `config.n` valid participants with full MAS answers.
pub fn generate(config: &SynthConfig) -> Result<Vec<ParticipantRecord>> {
    let (deg_c, val_c) = (&config.degree_concept, &config.valence_concept);
    if !config.cues.contains(deg_c) || !config.cues.contains(val_c) || deg_c == val_c {
        return Err(Error::invalid(
            "degree and valence concepts must be two distinct cues",
        ));
    }
    if config.n < 3 {
        return Err(Error::invalid("synthetic cohort needs at least 3 participants"));
    }
    let cue_set: BTreeSet<&str> = config.cues.iter().map(String::as_str).collect();
    let vocab: Vec<&str> = VOCABULARY
        .iter()
        .copied()
        .filter(|w| !cue_set.contains(w))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    // latent valence of each concept on the 1–5 scale
    let latent: BTreeMap<&str, u8> = vocab
        .iter()
        .copied()
        .chain(config.cues.iter().map(String::as_str))
        .map(|w| (w, rng.random_range(1..=5u8)))
        .collect();
    let feeders: Vec<&str> = config
        .cues
        .iter()
        .map(String::as_str)
        .filter(|c| *c != deg_c && *c != val_c)
        .collect();

    let mut records = Vec::with_capacity(config.n);
    let mut degrees = Vec::with_capacity(config.n);
    let mut valences = Vec::with_capacity(config.n);
    for i in 0..config.n {
        let mut r = ParticipantRecord::new(format!("S{:03}", i + 1));
        let n_feeding = rng.random_range(0..=feeders.len().min(8));
        let feeding: BTreeSet<&str> = feeders
            .choose_multiple(&mut rng, n_feeding)
            .copied()
            .collect();
        let own = rng.random_range(1..=RESPONSES_PER_CUE);
        for cue in &config.cues {
            let responses: Vec<String> = if cue == deg_c || cue == val_c {
                let k = if cue == deg_c {
                    own
                } else {
                    rng.random_range(1..=RESPONSES_PER_CUE)
                };
                vocab.choose_multiple(&mut rng, k).map(|w| w.to_string()).collect()
            } else {
                let mut out = Vec::new();
                for slot in 0..RESPONSES_PER_CUE {
                    if slot == 0 && feeding.contains(cue.as_str()) {
                        out.push(deg_c.clone());
                    } else if !rng.random_bool(config.blank_rate) {
                        out.push(vocab.choose(&mut rng).expect("vocabulary").to_string());
                    }
                }
                out
            };
            r.cue_responses.insert(cue.clone(), responses);
        }
        let mut concepts: BTreeSet<String> = config.cues.iter().cloned().collect();
        for responses in r.cue_responses.values() {
            concepts.extend(responses.iter().cloned());
        }
        for concept in concepts {
            let rating = if &concept == val_c || &concept == deg_c {
                rng.random_range(1..=5u8)
            } else {
                let base = i16::from(latent[concept.as_str()]) + rng.random_range(-1..=1i16);
                base.clamp(1, 5) as u8
            };
            r.valence_ratings.insert(concept, vec![rating]);
        }
        degrees.push((own + feeding.len()) as f64);
        valences.push(f64::from(r.valence_ratings[val_c.as_str()][0]));
        records.push(r);
    }

    let z_deg = standardize(&degrees)?;
    let z_val = standardize(&valences)?;
    let noise = Normal::new(0.0, config.noise_sd).map_err(|e| Error::invalid(e.to_string()))?;
    for (i, r) in records.iter_mut().enumerate() {
        let y = config.degree_coef * z_deg[i] - config.valence_coef * z_val[i]
            + noise.sample(&mut rng);
        let total = (69.0 + 10.0 * y).round().clamp(23.0, 115.0) as usize;
        r.mas_answers = spread_total(total, &mut rng);
    }
    Ok(records)
}

/// Random answer vector in [1, 5] whose sum is `total`.
fn spread_total(total: usize, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut answers = vec![1u8; MAS_ITEM_COUNT];
    let mut open: Vec<usize> = (0..MAS_ITEM_COUNT).collect();
    for _ in MAS_ITEM_COUNT..total {
        let pick = rng.random_range(0..open.len());
        let item = open[pick];
        answers[item] += 1;
        if answers[item] == 5 {
            open.swap_remove(pick);
        }
    }
    answers
}

/// 75 participants over the given cues: 70 valid ones followed by five that
/// each trip one cleaning rule (two with both focus cues blank, two with more
/// than a third of response slots blank, one without MAS answers). Rows are
/// shuffled so the failing ones are spread through the file.
pub fn exclusion_fixture(cues: Vec<String>, seed: u64) -> Result<Vec<ParticipantRecord>> {
    let mut config = SynthConfig::new(cues, 75, seed);
    config.blank_rate = 0.05;
    let mut records = generate(&config)?;
    let targets = [config.degree_concept.clone(), config.valence_concept.clone()];
    for r in &mut records[70..72] {
        for t in &targets {
            r.cue_responses.insert(t.clone(), Vec::new());
        }
    }
    for r in &mut records[72..74] {
        let cues: Vec<String> = r.cue_responses.keys().cloned().collect();
        for cue in cues.iter().filter(|c| !targets.contains(c)) {
            if 3 * r.missing_slots() > r.total_slots() {
                break;
            }
            r.cue_responses.insert(cue.clone(), Vec::new());
        }
    }
    records[74].mas_answers.clear();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    records.shuffle(&mut rng);
    Ok(records)
}
