//! End-to-end runs against the bundled mock server.

use formanet_core::ingest::write_json;
use formanet_core::record::Source;
use formanet_core::reference::cue_set;
use formanet_sim::mock::{MockConfig, MockServer};
use formanet_sim::run::Outcome;
use formanet_sim::{run_simulation, run_simulation_with_key, SimConfig};

fn config(server: &MockServer, n: usize) -> SimConfig {
    let mut c = SimConfig::new(server.url(), "mock-model", cue_set("exp1").unwrap());
    c.n = n;
    c.concurrency = 4;
    c.backoff_ms = 1;
    c.timeout_secs = 10;
    c
}

#[tokio::test(flavor = "multi_thread")]
async fn five_valid_participants() {
    let server = MockServer::spawn(MockConfig::default()).unwrap();
    let (records, log) = run_simulation_with_key(&config(&server, 5), "k").await.unwrap();
    assert_eq!(records.len(), 5);
    assert_eq!(log.retries(), 0);
    assert!(log.failures.is_empty());
    assert_eq!(log.requests.len(), 15);
    for (i, r) in records.iter().enumerate() {
        r.validate().unwrap();
        assert_eq!(r.participant_id, format!("sim-{:03}", i + 1));
        assert_eq!(r.source, Source::Simulated { model: "mock-model".into() });
        assert_eq!(r.mas_answers.len(), 23);
        assert_eq!(r.cue_responses.len(), 40);
        assert!(r.profile.is_some());
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn reruns_are_identical() {
    let server = MockServer::spawn(MockConfig::default()).unwrap();
    let mut c = config(&server, 12);
    let (a, log_a) = run_simulation_with_key(&c, "k").await.unwrap();
    c.concurrency = 1;
    let (b, log_b) = run_simulation_with_key(&c, "k").await.unwrap();
    assert_eq!(write_json(&a).unwrap(), write_json(&b).unwrap());
    assert_eq!(log_a.to_jsonl(), log_b.to_jsonl());
}

#[tokio::test(flavor = "multi_thread")]
async fn one_malformed_reply_one_retry() {
    let server = MockServer::spawn(MockConfig {
        malformed_first_n: 1,
        ..MockConfig::default()
    })
    .unwrap();
    let (records, log) = run_simulation_with_key(&config(&server, 5), "k").await.unwrap();
    assert_eq!(records.len(), 5);
    assert_eq!(log.retries(), 1);
    let malformed: Vec<_> = log.requests.iter().filter(|r| r.outcome == Outcome::Malformed).collect();
    assert_eq!(malformed.len(), 1);
    assert_eq!(server.malformed_count(), 1);
}

#[tokio::test(flavor = "multi_thread")]
async fn exhausted_retries_drop_the_participant() {
    let server = MockServer::spawn(MockConfig {
        malformed_first_n: 1,
        ..MockConfig::default()
    })
    .unwrap();
    let mut c = config(&server, 3);
    c.retries = 0;
    c.concurrency = 1;
    let (records, log) = run_simulation_with_key(&c, "k").await.unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(log.failures.len(), 1);
    assert_eq!(log.failures[0].participant, 1);
    assert!(records.iter().all(|r| r.participant_id != "sim-001"));
}

#[tokio::test(flavor = "multi_thread")]
async fn server_errors_are_retried() {
    let server = MockServer::spawn(MockConfig {
        fail_first_n: 2,
        ..MockConfig::default()
    })
    .unwrap();
    let mut c = config(&server, 2);
    c.concurrency = 1;
    let (records, log) = run_simulation_with_key(&c, "k").await.unwrap();
    assert_eq!(records.len(), 2);
    assert_eq!(log.retries(), 2);
    assert_eq!(
        log.requests.iter().filter(|r| r.outcome == Outcome::HttpError).count(),
        2
    );
}

#[tokio::test(flavor = "multi_thread")]
async fn rejected_credentials_fail_without_retry() {
    let server = MockServer::spawn(MockConfig::default()).unwrap();
    let (records, log) = run_simulation_with_key(&config(&server, 2), "").await.unwrap();
    assert!(records.is_empty());
    assert_eq!(log.failures.len(), 2);
    assert_eq!(log.retries(), 0);
}

#[tokio::test(flavor = "multi_thread")]
async fn log_round_trips() {
    let server = MockServer::spawn(MockConfig::default()).unwrap();
    let (_, log) = run_simulation_with_key(&config(&server, 2), "k").await.unwrap();
    let text = log.to_jsonl();
    assert_eq!(text.lines().count(), 1 + 6);
    assert!(text.lines().next().unwrap().contains("\"kind\":\"run\""));
    assert_eq!(formanet_sim::RunLog::from_jsonl(&text).unwrap(), log);
}

#[tokio::test(flavor = "multi_thread")]
async fn missing_key_is_reported() {
    let mut c = SimConfig::new("http://127.0.0.1:9", "m", vec!["math".into()]);
    c.api_key_env = "FORMANET_TEST_UNSET_KEY_VARIABLE".into();
    assert!(matches!(
        run_simulation(&c).await,
        Err(formanet_sim::SimError::MissingApiKey(_))
    ));
}

#[test]
fn full_scale_config_is_accepted() {
    let c = SimConfig::new("http://localhost", "gpt", cue_set("exp1").unwrap());
    assert_eq!(c.n, 300);
    c.validate().unwrap();
}

/// Opt-in: set FORMANET_LIVE_ENDPOINT, FORMANET_LIVE_MODEL and the API key
/// variable to query a real endpoint with one participant.
#[tokio::test(flavor = "multi_thread")]
async fn live_endpoint() {
    let (Ok(endpoint), Ok(model)) = (
        std::env::var("FORMANET_LIVE_ENDPOINT"),
        std::env::var("FORMANET_LIVE_MODEL"),
    ) else {
        return;
    };
    let mut c = SimConfig::new(endpoint, model, cue_set("exp1").unwrap());
    c.n = 1;
    let (records, log) = run_simulation(&c).await.unwrap();
    assert!(records.len() + log.failures.len() == 1);
    for r in &records {
        r.validate().unwrap();
    }
}
