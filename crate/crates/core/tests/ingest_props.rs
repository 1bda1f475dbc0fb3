//! Round trips, cleaning idempotence and the slot-counting oracle.

use std::collections::BTreeMap;

use formanet_core::ingest::{
    clean_participants, parse_csv, parse_json, write_csv, write_json, CleaningConfig,
    ExclusionReason, TargetRule,
};
use formanet_core::record::{Education, Gender, ParticipantRecord, Socioeconomic, Source, StudentProfile};
use proptest::prelude::*;

const CUES: [&str; 6] = ["math", "anxiety", "physics", "exam", "computer science", "fun"];

fn word() -> impl Strategy<Value = String> {
    "[a-zà-ù]{1,7}( [a-z]{1,5})?"
}

fn profile() -> impl Strategy<Value = Option<StudentProfile>> {
    prop::option::of(
        (0usize..2, 18u8..=25, 0usize..4, 0usize..5, any::<u64>()).prop_map(|(g, age, e, s, seed)| {
            StudentProfile {
                gender: Gender::ALL[g],
                age,
                education: Education::ALL[e],
                socioeconomic: Socioeconomic::ALL[s],
                rng_seed: seed,
            }
        }),
    )
}

fn record(id: usize) -> impl Strategy<Value = ParticipantRecord> {
    (
        prop::collection::vec(prop::collection::vec(word(), 0..=3), CUES.len()),
        prop::collection::btree_map(word(), prop::collection::vec(1u8..=5, 1..=3), 0..5),
        prop::collection::vec(1u8..=5, CUES.len()),
        prop::option::of(prop::collection::vec(1u8..=5, 23)),
        profile(),
        prop::option::of("[a-z0-9-]{1,10}"),
    )
        .prop_map(move |(responses, extra, cue_ratings, mas, profile, model)| {
            let mut r = ParticipantRecord::new(format!("P{id:03}"));
            for ((cue, resp), rating) in CUES.iter().zip(responses).zip(cue_ratings) {
                r.cue_responses.insert(cue.to_string(), resp);
                r.valence_ratings.insert(cue.to_string(), vec![rating]);
            }
            for (w, v) in extra {
                r.valence_ratings.entry(w).or_insert(v);
            }
            r.mas_answers = mas.unwrap_or_default();
            r.profile = profile;
            r.source = match model {
                Some(m) => Source::Simulated { model: m },
                None => Source::Human,
            };
            r
        })
}

fn dataset() -> impl Strategy<Value = Vec<ParticipantRecord>> {
    (1usize..8).prop_flat_map(|n| (0..n).map(record).collect::<Vec<_>>())
}

/// Counts absent slots one by one.
fn oracle_reason(r: &ParticipantRecord, targets: &[&str]) -> Option<ExclusionReason> {
    if r.mas_answers.len() != 23 {
        return Some(ExclusionReason::Malformed);
    }
    let mut all_targets_blank = true;
    for t in targets {
        if r.cue_responses.get(*t).is_some_and(|v| !v.is_empty()) {
            all_targets_blank = false;
        }
    }
    if all_targets_blank {
        return Some(ExclusionReason::NoTargetAssociations);
    }
    let mut missing = 0;
    let mut total = 0;
    for responses in r.cue_responses.values() {
        for slot in 0..3 {
            total += 1;
            if responses.get(slot).is_none() {
                missing += 1;
            }
        }
    }
    if missing as f64 / total as f64 > 1.0 / 3.0 {
        return Some(ExclusionReason::ExcessMissing);
    }
    None
}

proptest! {
    #[test]
    fn csv_round_trip(records in dataset()) {
        let text = write_csv(&records).unwrap();
        let back = parse_csv(&text).unwrap();
        prop_assert_eq!(&back, &records);
        prop_assert_eq!(write_csv(&back).unwrap(), text);
    }

    #[test]
    fn json_round_trip(records in dataset()) {
        let text = write_json(&records).unwrap();
        prop_assert_eq!(&parse_json(&text).unwrap(), &records);
    }

    #[test]
    fn cleaning_is_idempotent(records in dataset()) {
        let config = CleaningConfig::default();
        let (kept, _) = clean_participants(records, &config).unwrap();
        let (again, report) = clean_participants(kept.clone(), &config).unwrap();
        prop_assert_eq!(again, kept);
        prop_assert!(report.excluded.is_empty());
    }

    #[test]
    fn cleaning_matches_counting_oracle(records in dataset()) {
        let ids: Vec<String> = records.iter().map(|r| r.participant_id.clone()).collect();
        let expected: BTreeMap<String, Option<ExclusionReason>> = records
            .iter()
            .map(|r| (r.participant_id.clone(), oracle_reason(r, &["math", "anxiety"])))
            .collect();
        let (kept, report) = clean_participants(records, &CleaningConfig::default()).unwrap();
        for r in &kept {
            prop_assert_eq!(expected[&r.participant_id], None);
        }
        for e in &report.excluded {
            prop_assert_eq!(expected[&e.participant_id], Some(e.reason));
        }
        // partition of the input, order preserved
        let mut all: Vec<&String> = report.kept.iter().chain(report.excluded.iter().map(|e| &e.participant_id)).collect();
        all.sort();
        let mut sorted_ids: Vec<&String> = ids.iter().collect();
        sorted_ids.sort();
        prop_assert_eq!(all, sorted_ids);
        let kept_order: Vec<&String> = ids.iter().filter(|i| report.kept.contains(i)).collect();
        prop_assert_eq!(kept_order, report.kept.iter().collect::<Vec<_>>());
    }
}

#[test]
fn any_blank_rule_is_stricter() {
    let mut r = ParticipantRecord::new("p");
    for cue in CUES {
        let resp = if cue == "anxiety" { vec![] } else { vec!["a".into(), "b".into(), "c".into()] };
        r.cue_responses.insert(cue.into(), resp);
        r.valence_ratings.insert(cue.into(), vec![3]);
    }
    r.mas_answers = vec![3; 23];
    let all = CleaningConfig::default();
    let any = CleaningConfig { rule: TargetRule::AnyBlank, ..CleaningConfig::default() };
    assert_eq!(clean_participants(vec![r.clone()], &all).unwrap().0.len(), 1);
    assert_eq!(clean_participants(vec![r], &any).unwrap().0.len(), 0);
}
