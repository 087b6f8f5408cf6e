//! Desk-scale aimbot / anti-cheat laboratory.
//!
//! The crate simulates a 2-D angular aim duel, drives it with a calibrated
//! synthetic human controller, rule-based aimbots and a conditional WGAN
//! aimbot, trains a dense-network cheat detector on fire-window mouse
//! features, and scores detectability with EER / min-DCF / DET metrics
//! under several defender-knowledge scenarios.
//!
//! Module map:
//!
//! - [`types`] / [`dataset`] / [`features`] — domain types, JSONL datasets,
//!   feature extraction and GAN windowing
//! - [`sim`] — deterministic aim-duel simulator and human motor model
//! - [`heuristic`] — light / strong rule-based aimbots
//! - [`nn`] — minimal dense-network engine (forward, backward, optimizers,
//!   checkpoints)
//! - [`gan`] — conditional WGAN training and generator-as-aimbot runtime
//! - [`detector`] — the anti-cheat classifier
//! - [`eval`] — metrics, movement statistics, evaluation scenarios and
//!   whole-game aggregation
//! - [`config`] — toolkit run configuration and artifact manifests
//! - [`pipeline`] — end-to-end orchestration shared by the CLI and tests

pub mod config;
pub mod dataset;
pub mod detector;
pub mod error;
pub mod eval;
pub mod features;
pub mod gan;
pub mod heuristic;
pub mod nn;
pub mod pipeline;
pub mod sim;
pub mod types;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
