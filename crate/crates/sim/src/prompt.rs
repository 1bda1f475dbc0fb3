//! Persona and task prompts.

use std::fmt::{self, Write};

use formanet_core::record::{Education, Gender, Socioeconomic, StudentProfile, RESPONSES_PER_CUE};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Mas,
    Associations,
    Valence,
}

impl Task {
    /// Administration order.
    pub const ORDER: [Task; 3] = [Task::Mas, Task::Associations, Task::Valence];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Mas => "mas",
            Task::Associations => "associations",
            Task::Valence => "valence",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn year_and_course(education: Education) -> (&'static str, &'static str) {
    match education {
        Education::LastYearHighSchool => ("quinto", "scuola superiore"),
        Education::BscYear1 => ("primo", "università"),
        Education::BscYear2 => ("secondo", "università"),
        Education::BscYear3 => ("terzo", "università"),
    }
}

fn socioeconomic_it(s: Socioeconomic) -> &'static str {
    match s {
        Socioeconomic::Low => "basse",
        Socioeconomic::MediumLow => "medio-basse",
        Socioeconomic::Medium => "medie",
        Socioeconomic::MediumHigh => "medio-alte",
        Socioeconomic::High => "alte",
    }
}

/// Italian persona with grammatical gender agreement.
pub fn render_persona_prompt(profile: &StudentProfile) -> String {
    let (article, student, national, suffix) = match profile.gender {
        Gender::Male => ("uno", "studente", "italiano", "o"),
        Gender::Female => ("una", "studentessa", "italiana", "a"),
    };
    let (year, course) = year_and_course(profile.education);
    format!(
        "Sei {article} {student} {national} di {age} anni. \
         Sei iscritt{suffix} al {year} anno di {course}. \
         Sei cresciut{suffix} e vivi in condizioni socio-economiche {socio}. \
         Pertanto, ricorda che le risposte da fornire nel compito devono essere originali, \
         creative e coerenti con le tue caratteristiche uniche.",
        age = profile.age,
        socio = socioeconomic_it(profile.socioeconomic),
    )
}

const FORMAT_DIRECTIVE: &str = "Provide your answer as a .txt file, with each response separated by a comma (','). \
Write nothing else: no numbering, no explanations.";

const ORIGINALITY: &str = "Your responses must be original, creative, and coherent with your profile.";

fn numbered(out: &mut String, items: &[String]) {
    for (i, item) in items.iter().enumerate() {
        let _ = writeln!(out, "{}. {item}", i + 1);
    }
}

/// Number of comma-separated fields the reply to `task` must contain.
pub fn expected_fields(task: Task, materials: &[String]) -> usize {
    match task {
        Task::Associations => materials.len() * RESPONSES_PER_CUE,
        Task::Mas | Task::Valence => materials.len(),
    }
}

/// Instructions for one task. `materials` are the questionnaire items, the
/// cue words or the words to rate.
pub fn render_task_prompt(task: Task, materials: &[String]) -> String {
    let n = materials.len();
    let mut out = String::new();
    match task {
        Task::Mas => {
            let _ = writeln!(
                out,
                "Questionnaire. Read the following {n} statements and rate how anxious each situation \
                 would make you feel, from 1 (low anxiety) to 5 (high anxiety)."
            );
            let _ = writeln!(out, "{ORIGINALITY}");
            numbered(&mut out, materials);
            let _ = writeln!(out, "Answer with exactly {n} integers between 1 and 5, in the order of the statements.");
        }
        Task::Associations => {
            let slots = n * RESPONSES_PER_CUE;
            let _ = writeln!(
                out,
                "Free association. For each of the following {n} cue words, write the first three words \
                 that come to mind. You may leave a response empty if nothing comes to mind."
            );
            let _ = writeln!(out, "{ORIGINALITY}");
            numbered(&mut out, materials);
            let _ = writeln!(
                out,
                "Answer with exactly {slots} entries: three per cue word, cue words in the order listed."
            );
        }
        Task::Valence => {
            let _ = writeln!(
                out,
                "Valence rating. Rate each of the following {n} words from 1 (very negative) to 5 (very positive)."
            );
            let _ = writeln!(out, "{ORIGINALITY}");
            numbered(&mut out, materials);
            let _ = writeln!(out, "Answer with exactly {n} integers between 1 and 5, in the order of the words.");
        }
    }
    out.push_str(FORMAT_DIRECTIVE);
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(g: Gender, age: u8, e: Education, s: Socioeconomic) -> StudentProfile {
        StudentProfile {
            gender: g,
            age,
            education: e,
            socioeconomic: s,
            rng_seed: 0,
        }
    }

    #[test]
    fn female_persona() {
        let p = render_persona_prompt(&profile(
            Gender::Female,
            20,
            Education::BscYear2,
            Socioeconomic::Medium,
        ));
        assert!(p.contains("una studentessa italiana di 20 anni"));
        assert!(p.contains("condizioni socio-economiche medie"));
        assert!(p.contains("iscritta al secondo anno"));
        assert!(p.contains("cresciuta"));
    }

    #[test]
    fn male_persona() {
        let p = render_persona_prompt(&profile(
            Gender::Male,
            19,
            Education::LastYearHighSchool,
            Socioeconomic::High,
        ));
        assert!(p.contains("uno studente"));
        assert!(p.contains("socio-economiche alte"));
        assert!(p.contains("iscritto"));
    }

    #[test]
    fn task_prompts_list_materials() {
        let cues: Vec<String> = (0..40).map(|i| format!("cue{i}")).collect();
        let p = render_task_prompt(Task::Associations, &cues);
        assert!(p.contains("\n40. cue39\n"));
        assert!(p.contains("exactly 120 entries"));
        assert!(p.contains("original, creative, and coherent"));
        assert!(p.contains(".txt file, with each response separated by a comma (',')"));
        assert_eq!(expected_fields(Task::Associations, &cues), 120);
    }
}
