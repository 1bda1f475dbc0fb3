use std::path::{Path, PathBuf};

use formanet_core::ingest::{write_csv, write_json};
use formanet_core::reference::cue_set;
use formanet_sim::run::DEFAULT_API_KEY_ENV;
use formanet_sim::{run_simulation_with_key, SimConfig, SimError};
use serde::Serialize;

use super::warn;
use crate::config::{pick, FileConfig};
use crate::error::{validation, CliError, Result};
use crate::manifest::OutputDir;
use crate::SimulateArgs;

#[derive(Debug, Serialize)]
struct Settings {
    cue_set: String,
    dataset: String,
    log: String,
    #[serde(flatten)]
    sim: SimConfig,
}

fn default_log_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("simulation");
    out.with_file_name(format!("{stem}.log.jsonl"))
}

fn file_name(path: &Path) -> Result<String> {
    path.file_name()
        .and_then(|n| n.to_str())
        .map(str::to_string)
        .ok_or_else(|| validation(format!("`{}` is not a file path", path.display())))
}

pub fn run(args: SimulateArgs, file: &FileConfig) -> Result<()> {
    let model = args
        .model
        .or_else(|| file.model.clone())
        .ok_or_else(|| validation("--model is required"))?;
    let endpoint = args
        .endpoint
        .or_else(|| file.endpoint.clone())
        .ok_or_else(|| validation("--endpoint is required"))?;
    let cue_name = pick(args.cues, &file.cues, "exp1".to_string());
    let cues = cue_set(&cue_name)?;
    let mut sim = SimConfig::new(endpoint, model, cues);
    sim.n = pick(args.n, &file.n, sim.n);
    sim.master_seed = pick(args.seed, &file.seed, sim.master_seed);
    sim.concurrency = pick(args.concurrency, &file.concurrency, sim.concurrency);
    sim.retries = pick(args.retries, &file.retries, sim.retries);
    sim.temperature = pick(args.temperature, &file.temperature, sim.temperature);
    sim.api_key_env = pick(args.api_key_env, &file.api_key_env, DEFAULT_API_KEY_ENV.to_string());
    sim.shared_conversation = !(args.independent_calls || file.independent_calls.unwrap_or(false));
    sim.backoff_ms = pick(args.backoff_ms, &file.backoff_ms, sim.backoff_ms);
    sim.validate().map_err(|e| validation(e.to_string()))?;

    let key = std::env::var(&sim.api_key_env)
        .ok()
        .filter(|k| !k.is_empty())
        .ok_or_else(|| {
            CliError::Environment(format!("environment variable `{}` is not set", sim.api_key_env))
        })?;

    let log_path = args.log.unwrap_or_else(|| default_log_path(&args.out));
    let dir = match args.out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let dataset_name = file_name(&args.out)?;
    if log_path.parent() != args.out.parent() {
        return Err(validation("the run log must sit in the same directory as the dataset"));
    }
    let log_name = file_name(&log_path)?;

    let runtime = tokio::runtime::Runtime::new()?;
    let (records, log) = runtime
        .block_on(run_simulation_with_key(&sim, &key))
        .map_err(|e| match e {
            SimError::InvalidConfig(m) => CliError::Validation(m),
            SimError::MissingApiKey(m) => CliError::Environment(m),
            SimError::Client(c) => CliError::Remote(c.to_string()),
        })?;

    let mut warnings = Vec::new();
    for f in &log.failures {
        warn(
            &mut warnings,
            format!("participant {} failed at {}: {}", f.participant_id, f.task, f.reason),
        );
    }
    let dataset = if dataset_name.to_ascii_lowercase().ends_with(".csv") {
        write_csv(&records)?
    } else {
        write_json(&records)?
    };
    let mut out = OutputDir::create(&dir)?;
    out.write(&dataset_name, dataset)?;
    out.write(&log_name, log.to_jsonl())?;
    let settings = Settings {
        cue_set: cue_name,
        dataset: dataset_name.clone(),
        log: log_name,
        sim,
    };
    out.finish(
        &format!("{dataset_name}.manifest.json"),
        "simulate",
        &settings,
        Vec::new(),
        warnings,
    )?;
    println!(
        "simulate: {} of {} participants, {} retries -> {}",
        records.len(),
        settings.sim.n,
        log.retries(),
        args.out.display()
    );
    if records.is_empty() {
        return Err(CliError::Remote(format!(
            "no participant could be simulated; see {}",
            log_path.display()
        )));
    }
    Ok(())
}
