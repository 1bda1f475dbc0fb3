//! Behavioural forma mentis networks (BFMNs) built from free-association,
//! valence and math-anxiety questionnaire data.
//!
//! The crate covers the whole desk-side analysis path:
//!
//! - [`ingest`]: CSV/JSON participant files, validation and cleaning rules.
//! - [`network`]: individual and group BFMNs with degree, shortest paths,
//!   closeness and local clustering.
//! - [`valence`]: quartile-based individual labels and Kruskal–Wallis group labels.
//! - [`psychometrics`]: MAS factor scoring and descriptive statistics.
//! - [`stats`]: Pearson correlograms, standardisation and OLS with AIC selection.
//! - [`features`]: per-participant feature tables feeding the regressions.
//! - [`analysis`]: standardized outcome models and report tables.
//! - [`frames`]: median split, group networks and semantic frames.
//! - [`render`]: deterministic SVG/DOT output for frames and correlograms.
//! - [`synth`]: seeded synthetic cohorts with a known generative model.

pub mod analysis;
pub mod error;
pub mod features;
pub mod frames;
pub mod ingest;
pub mod network;
pub mod psychometrics;
pub mod record;
pub mod reference;
pub mod render;
pub mod stats;
pub mod synth;
pub mod valence;

pub use error::{Error, Result};
pub use network::{Bfmn, ClosenessVariant};
pub use record::{ParticipantRecord, Source, StudentProfile};
pub use valence::Valence;
