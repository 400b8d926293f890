//! One Monte Carlo trial end to end, and aggregation over many.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::illuminance_at;
use crate::error::{Error, Result};
use crate::metrics::{average_ee, average_se, link_bandwidth, link_rates, shannon_rate, MetricsSnapshot, METRIC_NAMES};
use crate::power::{
    comm_gain, minimize_network_power, non_optimized_power, solve_power_split, vlc_gain, vlc_required_power,
    vlc_snr, MilpSolution, SplitSolution, VlcDemand, VlcPowerProblem,
};
use crate::scenario::{place_users, Mode, Scenario, UserRx, VlcAp};
use crate::sensing::{detect, sensing_coverage, sensing_gain, snr_from_gain, DetectionOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    ThzComm,
    Vlc(usize),
    Unserved,
}

impl Decision {
    pub fn is_served(&self) -> bool {
        !matches!(self, Decision::Unserved)
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::ThzComm => f.write_str("thz"),
            Decision::Vlc(l) => write!(f, "vlc{l}"),
            Decision::Unserved => f.write_str("unserved"),
        }
    }
}

/// Per-user serving decision and the SNR achieved on it (0 when unserved).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Association {
    pub decisions: Vec<Decision>,
    pub snr: Vec<f64>,
}

impl Association {
    /// (user, decision, snr) for every served user.
    pub fn served(&self) -> impl Iterator<Item = (usize, Decision, f64)> + '_ {
        self.decisions
            .iter()
            .zip(&self.snr)
            .enumerate()
            .filter(|(_, (d, _))| d.is_served())
            .map(|(n, (&d, &s))| (n, d, s))
    }

    pub fn count(&self, pred: impl Fn(&Decision) -> bool) -> usize {
        self.decisions.iter().filter(|d| pred(d)).count()
    }

    fn drop_user(&mut self, n: usize) {
        self.decisions[n] = Decision::Unserved;
        self.snr[n] = 0.0;
    }
}

/// Detected users go to THz; the rest to their strongest VLC AP when that
/// AP can meet `gamma_vlc` at full power, otherwise they stay unserved.
/// `vlc_snrs[n][l]` is user n's SNR from AP l at its maximum power. Ties go
/// to the lower AP index.
pub fn associate_users(
    detections: &[DetectionOutcome],
    thz_snrs: &[f64],
    vlc_snrs: &[Vec<f64>],
    pd_th: f64,
    gamma_vlc: f64,
) -> Association {
    let mut decisions = Vec::with_capacity(detections.len());
    let mut snr = Vec::with_capacity(detections.len());
    for (n, det) in detections.iter().enumerate() {
        if det.p_d > pd_th {
            decisions.push(Decision::ThzComm);
            snr.push(thz_snrs[n]);
            continue;
        }
        let best = vlc_snrs[n]
            .iter()
            .enumerate()
            .fold(None, |best: Option<(usize, f64)>, (l, &s)| match best {
                Some((_, b)) if s <= b => best,
                _ => Some((l, s)),
            });
        match best {
            Some((l, s)) if s > 0.0 && s >= gamma_vlc => {
                decisions.push(Decision::Vlc(l));
                snr.push(s);
            }
            _ => {
                decisions.push(Decision::Unserved);
                snr.push(0.0);
            }
        }
    }
    Association { decisions, snr }
}

/// Per-user line of the reporting trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserReport {
    pub index: usize,
    pub x: f64,
    pub y: f64,
    pub rcs: f64,
    pub snr_sens: f64,
    pub p_d: f64,
    pub covered: bool,
    pub detected: bool,
    pub snr_thz: f64,
    pub decision: Decision,
    pub snr: f64,
    /// bits/s.
    pub rate: f64,
    /// lux.
    pub illuminance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub seed: u64,
    pub split: SplitSolution,
    pub detections: Vec<DetectionOutcome>,
    pub association: Association,
    pub milp: MilpSolution,
    pub metrics: MetricsSnapshot,
    pub users: Vec<UserReport>,
}

fn vlc_power_problem(scenario: &Scenario, association: &Association, gains: &[Vec<f64>], users: &[UserRx]) -> VlcPowerProblem {
    let demands = association
        .served()
        .filter_map(|(n, d, _)| match d {
            Decision::Vlc(l) => {
                let ap = &scenario.vlc_aps[l];
                let min_power = vlc_required_power(gains[n][l], scenario.thresholds.gamma_vlc, &users[n], ap);
                Some(VlcDemand { user: n, ap: l, min_power })
            }
            _ => None,
        })
        .collect();
    VlcPowerProblem {
        max_power: scenario.vlc_aps.iter().map(|ap| ap.max_power).collect(),
        demands,
        fixed_power: scenario.thz.power_budget(),
    }
}

/// Runs one trial. Deterministic in `(scenario, seed)`.
pub fn run_trial(scenario: &Scenario, seed: u64) -> Result<TrialResult> {
    let users = place_users(scenario, seed);
    let split = solve_power_split(scenario, &users)?;
    let rho1 = split.rho1;

    let mut detections = Vec::with_capacity(users.len());
    let mut thz_snrs = Vec::with_capacity(users.len());
    let mut gains = Vec::with_capacity(users.len());
    let mut full_power_snrs = Vec::with_capacity(users.len());
    for user in &users {
        let snr_sens = snr_from_gain(scenario, rho1, sensing_gain(user, scenario)?);
        detections.push(detect(snr_sens, &scenario.thresholds)?);
        thz_snrs.push(snr_from_gain(scenario, 1.0 - rho1, comm_gain(user, scenario)?));
        let g = scenario
            .vlc_aps
            .iter()
            .map(|ap| vlc_gain(ap, user, scenario))
            .collect::<Result<Vec<f64>>>()?;
        full_power_snrs.push(
            g.iter()
                .zip(&scenario.vlc_aps)
                .map(|(&h, ap)| vlc_snr(h, ap.max_power, user, ap))
                .collect::<Vec<f64>>(),
        );
        gains.push(g);
    }

    let t = &scenario.thresholds;
    let mut association = associate_users(&detections, &thz_snrs, &full_power_snrs, t.pd_th, t.gamma_vlc);

    let milp = match scenario.mode {
        Mode::StandaloneThz => {
            for n in 0..users.len() {
                if matches!(association.decisions[n], Decision::Vlc(_)) {
                    association.drop_user(n);
                }
            }
            minimize_network_power(&VlcPowerProblem {
                max_power: scenario.vlc_aps.iter().map(|ap| ap.max_power).collect(),
                demands: Vec::new(),
                fixed_power: scenario.thz.power_budget(),
            })?
        }
        Mode::Proposed => minimize_network_power(&vlc_power_problem(scenario, &association, &gains, &users))?,
        Mode::NonOptimized => {
            let problem = vlc_power_problem(scenario, &association, &gains, &users);
            let mut all_on = non_optimized_power(scenario);
            all_on.unserved = problem
                .demands
                .iter()
                .filter(|d| d.min_power > problem.max_power[d.ap])
                .map(|d| d.user)
                .collect();
            all_on
        }
    };
    for &n in &milp.unserved {
        association.drop_user(n);
    }
    for n in 0..users.len() {
        if let Decision::Vlc(l) = association.decisions[n] {
            association.snr[n] = vlc_snr(gains[n][l], milp.power[l], &users[n], &scenario.vlc_aps[l]);
        }
    }

    let lit: Vec<(VlcAp, f64)> = scenario
        .vlc_aps
        .iter()
        .zip(&milp.power)
        .filter(|(_, &p)| p > 0.0)
        .map(|(ap, &p)| (*ap, p))
        .collect();
    let illuminance = users
        .iter()
        .map(|u| illuminance_at(u, &lit))
        .collect::<Result<Vec<f64>>>()?;

    let metrics = snapshot(scenario, &split, &detections, &association, &milp, &illuminance)?;
    let reports = users
        .iter()
        .enumerate()
        .map(|(n, u)| {
            let decision = association.decisions[n];
            UserReport {
                index: n,
                x: u.position.x,
                y: u.position.y,
                rcs: u.rcs,
                snr_sens: detections[n].snr_sens,
                p_d: detections[n].p_d,
                covered: detections[n].covered,
                detected: detections[n].detected,
                snr_thz: thz_snrs[n],
                decision,
                snr: association.snr[n],
                rate: shannon_rate(link_bandwidth(decision, scenario), association.snr[n]),
                illuminance: illuminance[n],
            }
        })
        .collect();
    Ok(TrialResult {
        seed,
        split,
        detections,
        association,
        milp,
        metrics,
        users: reports,
    })
}

fn snapshot(
    scenario: &Scenario,
    split: &SplitSolution,
    detections: &[DetectionOutcome],
    association: &Association,
    milp: &MilpSolution,
    illuminance: &[f64],
) -> Result<MetricsSnapshot> {
    let n = detections.len();
    let avg_se = average_se(association);
    let total_power = milp.objective;
    let (avg_sens_rate, avg_comm_rate) = link_rates(association, detections, scenario);
    let (sc_p, mean_pd) = if n == 0 {
        (0.0, 0.0)
    } else {
        (
            sensing_coverage(detections)?,
            detections.iter().map(|d| d.p_d).sum::<f64>() / n as f64,
        )
    };
    Ok(MetricsSnapshot {
        avg_se,
        avg_ee: average_ee(avg_se, total_power)?,
        avg_sens_rate,
        avg_comm_rate,
        sc_p,
        mean_pd,
        total_power,
        rho1: split.rho1,
        required_rho1: split.required_rho1,
        thz_user_count: association.count(|d| *d == Decision::ThzComm),
        vlc_user_count: association.count(|d| matches!(d, Decision::Vlc(_))),
        unserved_count: association.count(|d| *d == Decision::Unserved),
        active_vlc_aps: milp.active_count(),
        sensing_ok: split.sensing_ok,
        min_illuminance_ok: illuminance.iter().all(|&e| e >= scenario.thresholds.min_illuminance),
    })
}

/// Seed of trial `index` under `base_seed` (splitmix64 of the pair).
pub fn trial_seed(base_seed: u64, index: u64) -> u64 {
    let mut z = base_seed
        .wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Metrics of every trial, in trial order. `threads = None` uses rayon's
/// global pool.
pub fn run_trials(scenario: &Scenario, trials: usize, base_seed: u64, threads: Option<usize>) -> Result<Vec<MetricsSnapshot>> {
    if trials == 0 {
        return Err(Error::domain("run_trials", "at least one trial is required"));
    }
    let work = || {
        (0..trials as u64)
            .into_par_iter()
            .map(|i| run_trial(scenario, trial_seed(base_seed, i)).map(|t| t.metrics))
            .collect::<Result<Vec<_>>>()
    };
    match threads {
        None => work(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub name: String,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateResult {
    pub trials: usize,
    pub base_seed: u64,
    pub mode: Mode,
    pub blockage_enabled: bool,
    /// One entry per metric, in [`METRIC_NAMES`] order.
    pub metrics: Vec<MetricSummary>,
}

impl AggregateResult {
    pub fn get(&self, name: &str) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn mean(&self, name: &str) -> f64 {
        self.get(name).map_or(f64::NAN, |m| m.mean)
    }
}

/// Compensated (Neumaier) sum.
fn stable_sum(values: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Means and population standard deviations of each metric.
pub fn aggregate(snapshots: &[MetricsSnapshot]) -> Vec<MetricSummary> {
    let rows: Vec<_> = snapshots.iter().map(MetricsSnapshot::values).collect();
    let count = rows.len() as f64;
    METRIC_NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let mean = stable_sum(rows.iter().map(|r| r[k])) / count;
            let var = stable_sum(rows.iter().map(|r| (r[k] - mean).powi(2))) / count;
            MetricSummary {
                name: name.to_string(),
                mean,
                std: var.sqrt(),
            }
        })
        .collect()
}

pub fn run_monte_carlo(scenario: &Scenario, trials: usize, base_seed: u64) -> Result<AggregateResult> {
    run_monte_carlo_with_threads(scenario, trials, base_seed, None)
}

pub fn run_monte_carlo_with_threads(
    scenario: &Scenario,
    trials: usize,
    base_seed: u64,
    threads: Option<usize>,
) -> Result<AggregateResult> {
    let snapshots = run_trials(scenario, trials, base_seed, threads)?;
    Ok(AggregateResult {
        trials,
        base_seed,
        mode: scenario.mode,
        blockage_enabled: scenario.blockage_enabled,
        metrics: aggregate(&snapshots),
    })
}
