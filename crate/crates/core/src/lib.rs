//! Indoor THz/VLC integrated sensing and communication network model.
//!
//! Build a [`Scenario`] from a [`ScenarioConfig`], then call
//! [`run_trial`] or [`run_monte_carlo`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blockage;
pub mod channel;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod power;
pub mod scenario;
pub mod sensing;
pub mod special;

pub use engine::{
    aggregate, associate_users, run_monte_carlo, run_monte_carlo_with_threads, run_trial, run_trials,
    trial_seed, AggregateResult, Association, Decision, MetricSummary, TrialResult, UserReport,
};
pub use error::{Error, Result};
pub use metrics::{MetricsSnapshot, METRIC_NAMES};
pub use scenario::{default_config, default_scenario, Mode, Scenario, ScenarioConfig};
pub use sensing::DetectorForm;
