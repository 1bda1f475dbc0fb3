//! Parsing of comma-separated model replies.

use formanet_core::record::normalize_word;
use thiserror::Error;

use crate::prompt::Task;

/// Fields longer than this many words are taken as echoed instructions.
pub const MAX_FIELD_WORDS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MalformedReply {
    #[error("expected {expected} fields, got {got}")]
    Count { expected: usize, got: usize },
    #[error("field {index} `{field}` is not an integer rating in [1, 5]")]
    Rating { index: usize, field: String },
    #[error("field {index} has more than {MAX_FIELD_WORDS} words")]
    Verbose { index: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    Ratings(Vec<u8>),
    /// Normalized words; `None` for blank fields.
    Associations(Vec<Option<String>>),
}

/// Drops a surrounding markdown code fence, if any.
fn strip_fence(text: &str) -> &str {
    let t = text.trim();
    let Some(rest) = t.strip_prefix("```") else {
        return t;
    };
    let body = rest.split_once('\n').map_or("", |(_, b)| b);
    body.strip_suffix("```").unwrap_or(body).trim()
}

pub fn parse_llm_reply(task: Task, text: &str, expected: usize) -> Result<Payload, MalformedReply> {
    let fields: Vec<&str> = strip_fence(text).split(',').map(str::trim).collect();
    if fields.len() != expected {
        return Err(MalformedReply::Count {
            expected,
            got: fields.len(),
        });
    }
    if let Some(index) = fields
        .iter()
        .position(|f| f.split_whitespace().count() > MAX_FIELD_WORDS)
    {
        return Err(MalformedReply::Verbose { index });
    }
    match task {
        Task::Associations => Ok(Payload::Associations(
            fields
                .iter()
                .map(|f| (!f.is_empty()).then(|| normalize_word(f)))
                .collect(),
        )),
        Task::Mas | Task::Valence => fields
            .iter()
            .enumerate()
            .map(|(index, f)| match f.parse::<u8>() {
                Ok(v) if (1..=5).contains(&v) => Ok(v),
                _ => Err(MalformedReply::Rating {
                    index,
                    field: f.to_string(),
                }),
            })
            .collect::<Result<Vec<u8>, _>>()
            .map(Payload::Ratings),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn associations() {
        let p = parse_llm_reply(Task::Associations, "ansia, Paura , esame", 3).unwrap();
        assert_eq!(
            p,
            Payload::Associations(vec![
                Some("ansia".into()),
                Some("paura".into()),
                Some("esame".into())
            ])
        );
        let p = parse_llm_reply(Task::Associations, "a,,b", 3).unwrap();
        assert_eq!(p, Payload::Associations(vec![Some("a".into()), None, Some("b".into())]));
    }

    #[test]
    fn mas_counts() {
        let ok = vec!["4"; 23].join(",");
        assert_eq!(
            parse_llm_reply(Task::Mas, &ok, 23).unwrap(),
            Payload::Ratings(vec![4; 23])
        );
        let short = vec!["4"; 22].join(",");
        assert_eq!(
            parse_llm_reply(Task::Mas, &short, 23),
            Err(MalformedReply::Count { expected: 23, got: 22 })
        );
    }

    #[test]
    fn bad_ratings() {
        assert!(matches!(
            parse_llm_reply(Task::Valence, "1,6,3", 3),
            Err(MalformedReply::Rating { index: 1, .. })
        ));
        assert!(matches!(
            parse_llm_reply(Task::Valence, "1,x,3", 3),
            Err(MalformedReply::Rating { .. })
        ));
    }

    #[test]
    fn echoed_instructions() {
        let text = "Here are my answers to the questionnaire as requested, 3";
        assert_eq!(
            parse_llm_reply(Task::Mas, text, 2),
            Err(MalformedReply::Verbose { index: 0 })
        );
    }

    #[test]
    fn code_fence() {
        let p = parse_llm_reply(Task::Mas, "```text\n1,2,3\n```", 3).unwrap();
        assert_eq!(p, Payload::Ratings(vec![1, 2, 3]));
    }
}
