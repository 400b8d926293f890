//! Scalar performance metrics of one trial.

use serde::{Deserialize, Serialize};

use crate::engine::{Association, Decision};
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::sensing::DetectionOutcome;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsSnapshot {
    /// bits/s/Hz.
    pub avg_se: f64,
    /// bits/J/Hz.
    pub avg_ee: f64,
    /// bits/s.
    pub avg_sens_rate: f64,
    /// bits/s.
    pub avg_comm_rate: f64,
    pub sc_p: f64,
    pub mean_pd: f64,
    /// W.
    pub total_power: f64,
    pub rho1: f64,
    pub required_rho1: f64,
    pub thz_user_count: usize,
    pub vlc_user_count: usize,
    pub unserved_count: usize,
    pub active_vlc_aps: usize,
    pub sensing_ok: bool,
    pub min_illuminance_ok: bool,
}

/// Metric names in report column order.
pub const METRIC_NAMES: [&str; 15] = [
    "avg_se",
    "avg_ee",
    "avg_sens_rate",
    "avg_comm_rate",
    "sc_p",
    "mean_pd",
    "total_power",
    "rho1",
    "required_rho1",
    "thz_user_count",
    "vlc_user_count",
    "unserved_count",
    "active_vlc_aps",
    "sensing_ok",
    "min_illuminance_ok",
];

impl MetricsSnapshot {
    /// Values as floats in [`METRIC_NAMES`] order; counts and flags become
    /// numbers so they can be averaged.
    pub fn values(&self) -> [f64; METRIC_NAMES.len()] {
        let flag = |b: bool| if b { 1.0 } else { 0.0 };
        [
            self.avg_se,
            self.avg_ee,
            self.avg_sens_rate,
            self.avg_comm_rate,
            self.sc_p,
            self.mean_pd,
            self.total_power,
            self.rho1,
            self.required_rho1,
            self.thz_user_count as f64,
            self.vlc_user_count as f64,
            self.unserved_count as f64,
            self.active_vlc_aps as f64,
            flag(self.sensing_ok),
            flag(self.min_illuminance_ok),
        ]
    }

    pub fn user_count(&self) -> usize {
        self.thz_user_count + self.vlc_user_count + self.unserved_count
    }
}

/// Spectral efficiency per user, normalised by the total user count;
/// unserved users contribute nothing.
pub fn average_se(association: &Association) -> f64 {
    let n = association.decisions.len();
    if n == 0 {
        return 0.0;
    }
    let sum: f64 = association
        .served()
        .map(|(_, _, snr)| (1.0 + snr).log2())
        .sum();
    sum / n as f64
}

pub fn average_ee(avg_se: f64, total_power: f64) -> Result<f64> {
    if !(total_power > 0.0) {
        return Err(Error::domain(
            "average_ee",
            format!("total power must be positive, got {total_power}"),
        ));
    }
    Ok(avg_se / total_power)
}

/// Shannon rate B log2(1 + snr), bits/s.
pub fn shannon_rate(bandwidth: f64, snr: f64) -> f64 {
    bandwidth * (1.0 + snr).log2()
}

/// Bandwidth of the link a decision uses; zero for unserved users.
pub fn link_bandwidth(decision: Decision, scenario: &Scenario) -> f64 {
    match decision {
        Decision::ThzComm => scenario.thz.bandwidth,
        Decision::Vlc(l) => scenario.vlc_aps[l].bandwidth,
        Decision::Unserved => 0.0,
    }
}

/// (average sensing rate over every sensed user, average communication rate
/// over served users). Empty sets give 0.
pub fn link_rates(
    association: &Association,
    detections: &[DetectionOutcome],
    scenario: &Scenario,
) -> (f64, f64) {
    let sens = if detections.is_empty() {
        0.0
    } else {
        detections
            .iter()
            .map(|d| shannon_rate(scenario.thz.bandwidth, d.snr_sens))
            .sum::<f64>()
            / detections.len() as f64
    };
    let (count, total) = association
        .served()
        .fold((0usize, 0.0), |(c, t), (_, decision, snr)| {
            (c + 1, t + shannon_rate(link_bandwidth(decision, scenario), snr))
        });
    let comm = if count == 0 { 0.0 } else { total / count as f64 };
    (sens, comm)
}
