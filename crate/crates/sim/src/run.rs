//! Simulation driver: profiles, prompts, retries and the run log.

use std::time::Duration;

use formanet_core::record::{ParticipantRecord, Source, StudentProfile};
use formanet_core::reference::mas_item_map;
use futures::stream::{self, StreamExt};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::client::{ChatClient, ChatRequest, ClientError, Message};
use crate::profile::{participant_seed, sample_profile};
use crate::prompt::{expected_fields, render_persona_prompt, render_task_prompt, Task};
use crate::reply::{parse_llm_reply, Payload};

pub const DEFAULT_API_KEY_ENV: &str = "OPENAI_API_KEY";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Base URL; `/chat/completions` is appended when missing.
    pub endpoint: String,
    pub model: String,
    /// Name of the environment variable holding the bearer token.
    pub api_key_env: String,
    pub n: usize,
    pub concurrency: usize,
    /// Extra attempts per task after the first.
    pub retries: u32,
    pub temperature: f64,
    pub cues: Vec<String>,
    pub master_seed: u64,
    /// Run the three tasks as one conversation; otherwise each task is an
    /// independent call carrying only the persona.
    pub shared_conversation: bool,
    /// Base delay before retrying a transport failure, doubled per attempt.
    pub backoff_ms: u64,
    pub timeout_secs: u64,
}

impl SimConfig {
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>, cues: Vec<String>) -> Self {
        SimConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key_env: DEFAULT_API_KEY_ENV.into(),
            n: 300,
            concurrency: 4,
            retries: 3,
            temperature: 1.0,
            cues,
            master_seed: 42,
            shared_conversation: true,
            backoff_ms: 500,
            timeout_secs: 120,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let fail = |m: &str| Err(SimError::InvalidConfig(m.to_string()));
        if self.n == 0 {
            return fail("n must be at least 1");
        }
        if self.concurrency == 0 {
            return fail("concurrency must be at least 1");
        }
        if self.cues.is_empty() {
            return fail("cue list is empty");
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return fail("temperature must be a non-negative number");
        }
        if self.model.trim().is_empty() {
            return fail("model name is empty");
        }
        if self.endpoint.trim().is_empty() {
            return fail("endpoint is empty");
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("environment variable `{0}` with the API key is not set")]
    MissingApiKey(String),
    #[error(transparent)]
    Client(#[from] ClientError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ok,
    Malformed,
    HttpError,
    TransportError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunHeader {
    pub model: String,
    pub endpoint: String,
    pub temperature: f64,
    pub n: usize,
    pub master_seed: u64,
    pub retries: u32,
    pub shared_conversation: bool,
    pub cue_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequestEntry {
    /// 1-based participant index.
    pub participant: usize,
    pub participant_id: String,
    pub task: Task,
    /// 1-based attempt number within the task.
    pub attempt: u32,
    pub request_sha256: String,
    pub response_sha256: Option<String>,
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureEntry {
    pub participant: usize,
    pub participant_id: String,
    pub task: Task,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum LogLine {
    Run(RunHeader),
    Request(RequestEntry),
    Failure(FailureEntry),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunLog {
    pub header: RunHeader,
    /// Sorted by participant, task order, attempt.
    pub requests: Vec<RequestEntry>,
    pub failures: Vec<FailureEntry>,
}

impl RunLog {
    /// Requests beyond the first attempt of each task.
    pub fn retries(&self) -> usize {
        self.requests.iter().filter(|r| r.attempt > 1).count()
    }

    /// JSON lines: the run header, then requests, then failures.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let lines = std::iter::once(LogLine::Run(self.header.clone()))
            .chain(self.requests.iter().cloned().map(LogLine::Request))
            .chain(self.failures.iter().cloned().map(LogLine::Failure));
        for line in lines {
            out.push_str(&serde_json::to_string(&line).expect("log line serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<RunLog, serde_json::Error> {
        let mut header = None;
        let mut requests = Vec::new();
        let mut failures = Vec::new();
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            match serde_json::from_str::<LogLine>(line)? {
                LogLine::Run(h) => header = Some(h),
                LogLine::Request(r) => requests.push(r),
                LogLine::Failure(f) => failures.push(f),
            }
        }
        let header = header.ok_or_else(|| {
            <serde_json::Error as serde::de::Error>::custom("run log has no header line")
        })?;
        Ok(RunLog {
            header,
            requests,
            failures,
        })
    }
}

pub fn participant_id(index: usize) -> String {
    format!("sim-{index:03}")
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Cues in order, then every new response word in order of first use.
fn valence_words(cues: &[String], associations: &[Option<String>]) -> Vec<String> {
    let mut words: Vec<String> = cues.to_vec();
    for w in associations.iter().flatten() {
        if !words.contains(w) {
            words.push(w.clone());
        }
    }
    words
}

struct Participant<'a> {
    config: &'a SimConfig,
    client: &'a ChatClient,
    index: usize,
    id: String,
    log: Vec<RequestEntry>,
}

impl Participant<'_> {
    /// Sends one task with retries; returns the parsed payload and raw reply.
    async fn ask(
        &mut self,
        task: Task,
        messages: Vec<Message>,
        expected: usize,
    ) -> Result<(Payload, String), String> {
        let request = ChatRequest {
            model: self.config.model.clone(),
            messages,
            temperature: self.config.temperature,
        };
        let body = serde_json::to_vec(&request).expect("request serializes");
        let request_sha256 = sha256_hex(&body);
        let mut transport_failures = 0u32;
        let mut last_error = String::new();
        for attempt in 1..=self.config.retries + 1 {
            let mut entry = RequestEntry {
                participant: self.index,
                participant_id: self.id.clone(),
                task,
                attempt,
                request_sha256: request_sha256.clone(),
                response_sha256: None,
                outcome: Outcome::Ok,
                detail: None,
            };
            match self.client.complete_raw(&body).await {
                Ok(text) => {
                    entry.response_sha256 = Some(sha256_hex(text.as_bytes()));
                    match parse_llm_reply(task, &text, expected) {
                        Ok(payload) => {
                            self.log.push(entry);
                            return Ok((payload, text));
                        }
                        Err(e) => {
                            last_error = format!("malformed reply: {e}");
                            entry.outcome = Outcome::Malformed;
                            entry.detail = Some(e.to_string());
                            self.log.push(entry);
                        }
                    }
                }
                Err(e) => {
                    last_error = e.to_string();
                    entry.outcome = match e {
                        ClientError::Status { .. } => Outcome::HttpError,
                        _ => Outcome::TransportError,
                    };
                    entry.detail = Some(e.to_string());
                    self.log.push(entry);
                    if !e.is_retryable() {
                        return Err(last_error);
                    }
                    if attempt <= self.config.retries {
                        let delay = self.config.backoff_ms.saturating_mul(1 << transport_failures.min(16));
                        transport_failures += 1;
                        tokio::time::sleep(Duration::from_millis(delay)).await;
                    }
                }
            }
        }
        Err(format!("retries exhausted, last error: {last_error}"))
    }

    async fn run(&mut self, profile: StudentProfile) -> Result<ParticipantRecord, FailureEntry> {
        let persona = Message::system(render_persona_prompt(&profile));
        let mut history = vec![persona.clone()];
        let mut record = ParticipantRecord::new(self.id.clone());
        record.source = Source::Simulated {
            model: self.config.model.clone(),
        };
        let mas_items: Vec<String> = mas_item_map()
            .items()
            .iter()
            .map(|i| i.italian.clone())
            .collect();
        let mut associations: Vec<Option<String>> = Vec::new();

        for task in Task::ORDER {
            let materials = match task {
                Task::Mas => mas_items.clone(),
                Task::Associations => self.config.cues.clone(),
                Task::Valence => valence_words(&self.config.cues, &associations),
            };
            let prompt = render_task_prompt(task, &materials);
            let messages = if self.config.shared_conversation {
                let mut m = history.clone();
                m.push(Message::user(prompt.clone()));
                m
            } else {
                vec![persona.clone(), Message::user(prompt.clone())]
            };
            let expected = expected_fields(task, &materials);
            let (payload, text) = self.ask(task, messages, expected).await.map_err(|reason| FailureEntry {
                participant: self.index,
                participant_id: self.id.clone(),
                task,
                reason,
            })?;
            history.push(Message::user(prompt));
            history.push(Message::assistant(text));
            match (task, payload) {
                (Task::Mas, Payload::Ratings(r)) => record.mas_answers = r,
                (Task::Associations, Payload::Associations(a)) => associations = a,
                (Task::Valence, Payload::Ratings(r)) => {
                    for (word, rating) in materials.into_iter().zip(r) {
                        record.valence_ratings.insert(word, vec![rating]);
                    }
                }
                _ => unreachable!("parser returns the payload kind of its task"),
            }
        }

        for (cue, slots) in self
            .config
            .cues
            .iter()
            .zip(associations.chunks(formanet_core::record::RESPONSES_PER_CUE))
        {
            record
                .cue_responses
                .insert(cue.clone(), slots.iter().flatten().cloned().collect());
        }
        record.profile = Some(profile);
        record.validate().map_err(|e| FailureEntry {
            participant: self.index,
            participant_id: self.id.clone(),
            task: Task::Valence,
            reason: e.to_string(),
        })?;
        Ok(record)
    }
}

/// Runs the simulation with the key named by `config.api_key_env`.
pub async fn run_simulation(config: &SimConfig) -> Result<(Vec<ParticipantRecord>, RunLog), SimError> {
    config.validate()?;
    let key = std::env::var(&config.api_key_env)
        .ok()
        .filter(|k| !k.is_empty())
        .ok_or_else(|| SimError::MissingApiKey(config.api_key_env.clone()))?;
    run_simulation_with_key(config, &key).await
}

pub async fn run_simulation_with_key(
    config: &SimConfig,
    api_key: &str,
) -> Result<(Vec<ParticipantRecord>, RunLog), SimError> {
    config.validate()?;
    let client = ChatClient::new(&config.endpoint, api_key, Duration::from_secs(config.timeout_secs))?;
    let mut results: Vec<_> = stream::iter(1..=config.n)
        .map(|index| {
            let client = &client;
            async move {
                let mut p = Participant {
                    config,
                    client,
                    index,
                    id: participant_id(index),
                    log: Vec::new(),
                };
                let profile = sample_profile(participant_seed(config.master_seed, (index - 1) as u64));
                let outcome = p.run(profile).await;
                (index, outcome, p.log)
            }
        })
        .buffer_unordered(config.concurrency)
        .collect()
        .await;
    results.sort_by_key(|(index, _, _)| *index);

    let mut records = Vec::new();
    let mut requests = Vec::new();
    let mut failures = Vec::new();
    for (_, outcome, log) in results {
        requests.extend(log);
        match outcome {
            Ok(r) => records.push(r),
            Err(f) => failures.push(f),
        }
    }
    requests.sort_by(|a, b| {
        (a.participant, a.task, a.attempt).cmp(&(b.participant, b.task, b.attempt))
    });
    let header = RunHeader {
        model: config.model.clone(),
        endpoint: config.endpoint.clone(),
        temperature: config.temperature,
        n: config.n,
        master_seed: config.master_seed,
        retries: config.retries,
        shared_conversation: config.shared_conversation,
        cue_count: config.cues.len(),
    };
    Ok((
        records,
        RunLog {
            header,
            requests,
            failures,
        },
    ))
}
