//! Writes the bundled 75-row synthetic dataset over the Experiment-1 cues.
//!
//! Usage: `cargo run -p formanet-core --example make_synthetic -- data/synthetic_exp1.csv`

use std::path::PathBuf;

use formanet_core::ingest::write_csv;
use formanet_core::reference::cue_set;
use formanet_core::synth::exclusion_fixture;

pub const SEED: u64 = 2024;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data/synthetic_exp1.csv"));
    let records = exclusion_fixture(cue_set("exp1")?, SEED)?;
    std::fs::write(&out, write_csv(&records)?)?;
    eprintln!("wrote {} participants to {}", records.len(), out.display());
    Ok(())
}
