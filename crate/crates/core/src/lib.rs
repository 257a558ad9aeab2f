//! Resource allocation for full-duplex wireless networks.
//!
//! - [`channel`]: fading, residual self-interference (RSI), SINR, rate, SER.
//! - [`mimo`]: bidirectional transmit/receive antenna selection.
//! - [`ofdma`]: price-based user pairing and subcarrier matching.
//! - [`relay`]: relay and antenna selection, relay power, FD/HD switching.
//! - [`power`]: water-filling, including the RSI-coupled FD-MIMO variant.
//! - [`harness`], [`config`], [`report`]: seeded Monte-Carlo experiments.

pub mod channel;
pub mod config;
pub mod error;
pub mod harness;
pub mod mimo;
pub mod ofdma;
pub mod power;
pub mod relay;
pub mod report;

pub use config::{parse_config, ConfigError, ExperimentConfig, ExperimentKind};
pub use error::{Error, Result};
pub use harness::{run_experiment, run_experiment_with, Exec, ResultRecord};
