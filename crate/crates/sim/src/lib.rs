//! Simulated survey participants from chat-completions language models.
//!
//! Each participant gets a sampled student profile, an Italian persona prompt
//! and the three survey tasks (questionnaire, free associations, valence
//! ratings). Replies are parsed into the same records the human data uses.

pub mod client;
pub mod mock;
pub mod profile;
pub mod prompt;
pub mod reply;
pub mod run;

pub use profile::{participant_seed, sample_profile};
pub use prompt::{render_persona_prompt, render_task_prompt, Task};
pub use reply::{parse_llm_reply, MalformedReply, Payload};
pub use run::{run_simulation, run_simulation_with_key, RunLog, SimConfig, SimError};
