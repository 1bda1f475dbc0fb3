//! Local chat-completions server with deterministic replies, for tests and
//! offline runs.
//!
//! Each reply is drawn from an RNG seeded with the SHA-256 of the request
//! body, so identical requests always get identical replies.

use std::net::SocketAddr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::post;
use axum::{Json, Router};
use formanet_core::record::RESPONSES_PER_CUE;
use formanet_core::synth::VOCABULARY;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use sha2::{Digest, Sha256};
use tokio::sync::oneshot;

use crate::client::ChatRequest;

/// Failure injection. Counters are global to the server, so with
/// concurrent clients the affected participant depends on arrival order.
#[derive(Debug, Clone, Copy, Default)]
pub struct MockConfig {
    /// The first `n` requests get a reply with one field missing.
    pub malformed_first_n: usize,
    /// The first `n` requests get HTTP 503.
    pub fail_first_n: usize,
}

#[derive(Debug, Default)]
struct Counters {
    requests: AtomicUsize,
    malformed: AtomicUsize,
}

#[derive(Clone)]
struct AppState {
    config: MockConfig,
    counters: Arc<Counters>,
}

/// A running mock; stops when dropped.
pub struct MockServer {
    addr: SocketAddr,
    counters: Arc<Counters>,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<std::thread::JoinHandle<()>>,
}

impl MockServer {
    /// Starts the server on an ephemeral local port in a background thread.
    pub fn spawn(config: MockConfig) -> std::io::Result<MockServer> {
        let listener = std::net::TcpListener::bind("127.0.0.1:0")?;
        listener.set_nonblocking(true)?;
        let addr = listener.local_addr()?;
        let counters = Arc::new(Counters::default());
        let state = AppState {
            config,
            counters: Arc::clone(&counters),
        };
        let (tx, rx) = oneshot::channel::<()>();
        let thread = std::thread::spawn(move || {
            let runtime = tokio::runtime::Builder::new_multi_thread()
                .worker_threads(2)
                .enable_all()
                .build()
                .expect("mock runtime");
            runtime.block_on(async move {
                let listener = tokio::net::TcpListener::from_std(listener).expect("mock listener");
                axum::serve(listener, router(state))
                    .with_graceful_shutdown(async {
                        let _ = rx.await;
                    })
                    .await
                    .expect("mock server");
            });
        });
        Ok(MockServer {
            addr,
            counters,
            shutdown: Some(tx),
            thread: Some(thread),
        })
    }

    /// Base URL to use as the endpoint, e.g. `http://127.0.0.1:4000/v1`.
    pub fn url(&self) -> String {
        format!("http://{}/v1", self.addr)
    }

    pub fn request_count(&self) -> usize {
        self.counters.requests.load(Ordering::SeqCst)
    }

    pub fn malformed_count(&self) -> usize {
        self.counters.malformed.load(Ordering::SeqCst)
    }
}

impl Drop for MockServer {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(thread) = self.thread.take() {
            let _ = thread.join();
        }
    }
}

fn router(state: AppState) -> Router {
    Router::new()
        .route("/v1/chat/completions", post(complete))
        .route("/chat/completions", post(complete))
        .with_state(state)
}

async fn complete(State(state): State<AppState>, headers: HeaderMap, body: Bytes) -> Response {
    let authorized = headers
        .get("authorization")
        .and_then(|v| v.to_str().ok())
        .is_some_and(|v| v.starts_with("Bearer ") && v.len() > "Bearer ".len());
    if !authorized {
        return (StatusCode::UNAUTHORIZED, "missing bearer token").into_response();
    }
    let request: ChatRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return (StatusCode::BAD_REQUEST, e.to_string()).into_response(),
    };
    let seq = state.counters.requests.fetch_add(1, Ordering::SeqCst);
    if seq < state.config.fail_first_n {
        return (StatusCode::SERVICE_UNAVAILABLE, "injected failure").into_response();
    }
    let digest = Sha256::digest(&body);
    let prompt = request
        .messages
        .iter()
        .rev()
        .find(|m| m.role == "user")
        .map(|m| m.content.as_str())
        .unwrap_or("");
    let mut fields = canned_reply(prompt, digest.as_slice());
    let limit = state.config.malformed_first_n;
    let inject = state
        .counters
        .malformed
        .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |c| (c < limit).then_some(c + 1))
        .is_ok();
    if inject {
        fields.pop();
    }
    let id = format!("mock-{}", hex::encode(&digest[..8]));
    Json(json!({
        "id": id,
        "object": "chat.completion",
        "model": request.model,
        "choices": [{
            "index": 0,
            "message": {"role": "assistant", "content": fields.join(", ")},
            "finish_reason": "stop"
        }]
    }))
    .into_response()
}

/// Items listed as `N. text` lines in a task prompt.
fn listed_items(prompt: &str) -> Vec<&str> {
    prompt
        .lines()
        .filter_map(|line| {
            let (num, rest) = line.split_once(". ")?;
            (!num.is_empty() && num.bytes().all(|b| b.is_ascii_digit())).then_some(rest.trim())
        })
        .collect()
}

/// Well-formed reply fields for the task the prompt describes.
fn canned_reply(prompt: &str, digest: &[u8]) -> Vec<String> {
    let mut seed = [0u8; 32];
    seed.copy_from_slice(&digest[..32]);
    let mut rng = ChaCha8Rng::from_seed(seed);
    let items = listed_items(prompt);
    if prompt.contains("first three words") {
        let mut out = Vec::with_capacity(items.len() * RESPONSES_PER_CUE);
        for cue in &items {
            let pool: Vec<&str> = VOCABULARY.iter().copied().filter(|w| w != cue).collect();
            for _ in 0..RESPONSES_PER_CUE {
                out.push(pool.choose(&mut rng).expect("vocabulary").to_string());
            }
        }
        out
    } else {
        items
            .iter()
            .map(|_| rng.random_range(1..=5u8).to_string())
            .collect()
    }
}
