use std::collections::BTreeSet;

use formanet_core::record::{Education, Gender, Socioeconomic, StudentProfile, MAX_AGE, MIN_AGE};
use formanet_core::reference::{cue_set, mas_item_map};
use formanet_sim::prompt::expected_fields;
use formanet_sim::{
    parse_llm_reply, participant_seed, render_persona_prompt, render_task_prompt, sample_profile,
    Payload, Task,
};
use proptest::prelude::*;

#[test]
fn gender_frequencies_are_balanced() {
    let n = 10_000;
    let female = (0..n)
        .filter(|&i| sample_profile(participant_seed(42, i)).gender == Gender::Female)
        .count();
    let share = female as f64 / n as f64;
    assert!((0.45..=0.55).contains(&share), "female share {share}");
}

#[test]
fn every_category_is_drawn_and_ages_stay_in_range() {
    let profiles: Vec<StudentProfile> = (0..2000).map(|i| sample_profile(participant_seed(1, i))).collect();
    assert!(profiles.iter().all(|p| (MIN_AGE..=MAX_AGE).contains(&p.age) && p.validate().is_ok()));
    let ages: BTreeSet<u8> = profiles.iter().map(|p| p.age).collect();
    assert_eq!(ages.len(), usize::from(MAX_AGE - MIN_AGE + 1));
    let edu: BTreeSet<Education> = profiles.iter().map(|p| p.education).collect();
    assert_eq!(edu.len(), Education::ALL.len());
    let ses: BTreeSet<Socioeconomic> = profiles.iter().map(|p| p.socioeconomic).collect();
    assert_eq!(ses.len(), Socioeconomic::ALL.len());
}

#[test]
fn persona_is_injective_modulo_seed() {
    let mut seen = BTreeSet::new();
    for &gender in Gender::ALL {
        for age in MIN_AGE..=MAX_AGE {
            for &education in Education::ALL {
                for &socioeconomic in Socioeconomic::ALL {
                    let p = StudentProfile {
                        gender,
                        age,
                        education,
                        socioeconomic,
                        rng_seed: 0,
                    };
                    assert!(seen.insert(render_persona_prompt(&p)));
                }
            }
        }
    }
}

#[test]
fn mas_prompt_lists_all_italian_items() {
    let items: Vec<String> = mas_item_map().items().iter().map(|i| i.italian.clone()).collect();
    let p = render_task_prompt(Task::Mas, &items);
    for (k, item) in items.iter().enumerate() {
        assert!(p.contains(&format!("{}. {item}\n", k + 1)), "item {k} missing");
    }
    assert!(p.contains("exactly 23 integers"));
}

#[test]
fn association_prompt_keeps_cue_order() {
    let cues = cue_set("exp1").unwrap();
    let p = render_task_prompt(Task::Associations, &cues);
    let mut last = 0;
    for cue in &cues {
        let at = p.find(&format!(". {cue}\n")).unwrap();
        assert!(at > last);
        last = at;
    }
}

#[test]
fn valence_prompt_requests_every_word() {
    let words: Vec<String> = (0..160).map(|i| format!("w{i}")).collect();
    let p = render_task_prompt(Task::Valence, &words);
    assert!(p.contains("exactly 160 integers"));
    assert_eq!(expected_fields(Task::Valence, &words), 160);
}

proptest! {
    #[test]
    fn ratings_round_trip(values in prop::collection::vec(1u8..=5, 1..60), spaces in 0usize..3) {
        let sep = format!(",{}", " ".repeat(spaces));
        let text = values.iter().map(u8::to_string).collect::<Vec<_>>().join(&sep);
        prop_assert_eq!(parse_llm_reply(Task::Valence, &text, values.len()), Ok(Payload::Ratings(values.clone())));
        prop_assert!(parse_llm_reply(Task::Valence, &text, values.len() + 1).is_err());
    }

    #[test]
    fn associations_keep_blanks(fields in prop::collection::vec(prop_oneof![Just(String::new()), "[a-z]{1,8}"], 1..30)) {
        let text = fields.join(",");
        let Payload::Associations(got) = parse_llm_reply(Task::Associations, &text, fields.len()).unwrap() else {
            panic!("wrong payload");
        };
        let expected: Vec<Option<String>> = fields.iter().map(|f| (!f.is_empty()).then(|| f.clone())).collect();
        prop_assert_eq!(got, expected);
    }
}
