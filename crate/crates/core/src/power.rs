//! Sensing/communication power split and the VLC network power minimisation.

use serde::{Deserialize, Serialize};

use crate::blockage::link_blockage_weight;
use crate::channel::{thz_comm_gain, vlc_channel_gain};
use crate::error::{Error, Result};
use crate::scenario::{Scenario, UserRx, VlcAp};
use crate::sensing::{check_fraction, sensing_gain, snr_from_gain};

/// Outcome of the minimum sensing fraction search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SensingFraction {
    Feasible(f64),
    /// More than the whole budget would be needed.
    Infeasible { required: f64 },
}

impl SensingFraction {
    pub fn required(&self) -> f64 {
        match *self {
            SensingFraction::Feasible(r) => r,
            SensingFraction::Infeasible { required } => required,
        }
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, SensingFraction::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSolution {
    /// Fraction of the THz budget spent on sensing, in [0, 1].
    pub rho1: f64,
    /// Unclamped fraction the sensing constraints ask for.
    pub required_rho1: f64,
    /// Users meeting both their sensing and communication thresholds at `rho1`.
    pub feasible_for: Vec<usize>,
    pub sensing_ok: bool,
}

/// Blockage-weighted THz communication gain G_t G_r H(d) for a user.
pub fn comm_gain(user: &UserRx, scenario: &Scenario) -> Result<f64> {
    let ap = scenario.thz_comm_ap;
    let thz = &scenario.thz;
    let link = thz_comm_gain(
        ap.distance(&user.position),
        thz.carrier_frequency,
        thz.absorption_coefficient,
    )?;
    let weight = link_blockage_weight(&ap, &user.position, &scenario.blockage, scenario.blockage_enabled)?;
    Ok(thz.antenna_gain() * link.gain * weight.snr_factor(scenario.blockage.literal_pb_weighting))
}

/// THz communication SNR with a fraction `1 - rho1` of the budget.
pub fn comm_snr(user: &UserRx, scenario: &Scenario, rho1: f64) -> Result<f64> {
    check_fraction("comm_snr", rho1)?;
    Ok(snr_from_gain(scenario, 1.0 - rho1, comm_gain(user, scenario)?))
}

/// Fraction a user with sensing gain `gain` needs to reach `gamma`, rounded
/// up until the recomputed SNR really meets it.
fn required_fraction(scenario: &Scenario, gamma: f64, gain: f64) -> f64 {
    if !(gain > 0.0) {
        return f64::INFINITY;
    }
    let mut rho = gamma * scenario.thz.noise_power() / (scenario.thz.power_budget() * gain);
    while rho.is_finite() && snr_from_gain(scenario, rho, gain) < gamma {
        rho = rho.next_up();
    }
    rho
}

/// Smallest sensing fraction meeting gamma_sens for every candidate.
pub fn min_sensing_fraction(candidates: &[UserRx], scenario: &Scenario) -> Result<SensingFraction> {
    if candidates.is_empty() {
        return Err(Error::domain("min_sensing_fraction", "empty candidate set"));
    }
    let gamma = scenario.thresholds.gamma_sens;
    let mut required: f64 = 0.0;
    for user in candidates {
        required = required.max(required_fraction(scenario, gamma, sensing_gain(user, scenario)?));
    }
    Ok(if required <= 1.0 {
        SensingFraction::Feasible(required)
    } else {
        SensingFraction::Infeasible { required }
    })
}

/// Solves the split over all users. An infeasible requirement is clamped to
/// the whole budget and flagged; a configured override replaces the solved
/// value.
pub fn solve_power_split(scenario: &Scenario, users: &[UserRx]) -> Result<SplitSolution> {
    let required_rho1 = if users.is_empty() {
        0.0
    } else {
        min_sensing_fraction(users, scenario)?.required()
    };
    let (rho1, sensing_ok) = match scenario.rho1_override {
        Some(r) => (r, required_rho1 <= r),
        None => (required_rho1.min(1.0), required_rho1 <= 1.0),
    };
    let t = &scenario.thresholds;
    let mut feasible_for = Vec::new();
    for (n, user) in users.iter().enumerate() {
        let sens = snr_from_gain(scenario, rho1, sensing_gain(user, scenario)?);
        let comm = snr_from_gain(scenario, 1.0 - rho1, comm_gain(user, scenario)?);
        if sens >= t.gamma_sens && comm >= t.gamma_comm {
            feasible_for.push(n);
        }
    }
    Ok(SplitSolution {
        rho1,
        required_rho1,
        feasible_for,
        sensing_ok,
    })
}

/// Blockage-weighted VLC channel gain H^(B) from `ap` to `user`.
pub fn vlc_gain(ap: &VlcAp, user: &UserRx, scenario: &Scenario) -> Result<f64> {
    let h = vlc_channel_gain(ap, user)?.gain;
    let weight = link_blockage_weight(&ap.position, &user.position, &scenario.blockage, scenario.blockage_enabled)?;
    Ok(h * weight.snr_factor(scenario.blockage.literal_pb_weighting))
}

/// Electrical SNR (R H p / k_oe)^2 / (N B) of a VLC link driven at `power`.
pub fn vlc_snr(gain: f64, power: f64, user: &UserRx, ap: &VlcAp) -> f64 {
    let current = user.responsivity * gain * power / user.conversion;
    current * current / ap.noise_power()
}

/// Power at which a link of gain `gain` exactly reaches `gamma`; infinite
/// for a dead link.
pub fn vlc_required_power(gain: f64, gamma: f64, user: &UserRx, ap: &VlcAp) -> f64 {
    if gain > 0.0 {
        user.conversion / (user.responsivity * gain) * (gamma * ap.noise_power()).sqrt()
    } else {
        f64::INFINITY
    }
}

/// Minimum transmit power for `user` served by `ap`, or `None` when the link
/// is dead or needs more than the AP's maximum.
pub fn vlc_min_power(user: &UserRx, ap: &VlcAp, scenario: &Scenario) -> Result<Option<f64>> {
    let gain = vlc_gain(ap, user, scenario)?;
    let p = vlc_required_power(gain, scenario.thresholds.gamma_vlc, user, ap);
    Ok((p <= ap.max_power).then_some(p))
}

/// One VLC-assigned user: its serving AP and its minimum power there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VlcDemand {
    pub user: usize,
    pub ap: usize,
    pub min_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VlcPowerProblem {
    /// Per-AP maximum power.
    pub max_power: Vec<f64>,
    pub demands: Vec<VlcDemand>,
    /// Power drawn regardless of the VLC decision (P_w + P_cir).
    pub fixed_power: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilpSolution {
    pub active: Vec<bool>,
    pub power: Vec<f64>,
    /// Total network power, W.
    pub objective: f64,
    /// Users whose demand could not be met.
    pub unserved: Vec<usize>,
}

impl MilpSolution {
    pub fn vlc_power(&self) -> f64 {
        self.power.iter().sum()
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }
}

/// Branch-and-bound node: a partial assignment of the activation binaries.
#[derive(Clone)]
struct Node {
    fixed: Vec<Option<bool>>,
}

/// LP relaxation with alpha in [0, 1] for free binaries. Each AP's power
/// must cover its largest demand and stay below alpha * p_max, so the
/// relaxation sets p_l = floor_l and alpha_l = floor_l / p_max. Returns the
/// bound and the AP with the most fractional alpha, or `None` if infeasible.
fn relax(node: &Node, floor: &[f64], max_power: &[f64]) -> Option<(f64, Option<usize>)> {
    let mut bound = 0.0;
    let mut branch: Option<(usize, f64)> = None;
    for (l, (&need, &cap)) in floor.iter().zip(max_power).enumerate() {
        match node.fixed[l] {
            Some(false) if need > 0.0 => return None,
            Some(false) => {}
            Some(true) => bound += need,
            None => {
                bound += need;
                let alpha = if cap > 0.0 { need / cap } else { 0.0 };
                let frac = alpha.min(1.0 - alpha);
                if frac > 1e-12 && branch.is_none_or(|(_, f)| frac > f) {
                    branch = Some((l, frac));
                }
            }
        }
    }
    Some((bound, branch.map(|(l, _)| l)))
}

/// Minimum total power serving every feasible demand at its assigned AP.
/// Demands above their AP's maximum are reported unserved.
pub fn minimize_network_power(problem: &VlcPowerProblem) -> Result<MilpSolution> {
    let l_count = problem.max_power.len();
    let mut floor = vec![0.0; l_count];
    let mut unserved = Vec::new();
    for d in &problem.demands {
        if d.ap >= l_count {
            return Err(Error::domain(
                "minimize_network_power",
                format!("demand for user {} names AP {} of {l_count}", d.user, d.ap),
            ));
        }
        if !(d.min_power >= 0.0) {
            return Err(Error::domain(
                "minimize_network_power",
                format!("negative or undefined power demand for user {}", d.user),
            ));
        }
        if d.min_power > problem.max_power[d.ap] {
            unserved.push(d.user);
        } else {
            floor[d.ap] = f64::max(floor[d.ap], d.min_power);
        }
    }

    let mut best: Option<(f64, Vec<bool>)> = None;
    let mut stack = vec![Node {
        fixed: vec![None; l_count],
    }];
    while let Some(node) = stack.pop() {
        let Some((bound, branch)) = relax(&node, &floor, &problem.max_power) else {
            continue;
        };
        if best.as_ref().is_some_and(|(b, _)| bound >= *b) {
            continue;
        }
        match branch {
            Some(l) => {
                for choice in [false, true] {
                    let mut child = node.clone();
                    child.fixed[l] = Some(choice);
                    stack.push(child);
                }
            }
            None => {
                // Integral: free APs round to on iff they carry demand.
                let active: Vec<bool> = node
                    .fixed
                    .iter()
                    .zip(&floor)
                    .map(|(f, &need)| f.unwrap_or(need > 0.0) && need > 0.0)
                    .collect();
                best = Some((bound, active));
            }
        }
    }
    let (_, active) = best.expect("all-needed activation is always feasible");
    let power: Vec<f64> = active
        .iter()
        .zip(&floor)
        .map(|(&a, &need)| if a { need } else { 0.0 })
        .collect();
    let objective = power.iter().sum::<f64>() + problem.fixed_power;
    Ok(MilpSolution {
        active,
        power,
        objective,
        unserved,
    })
}

/// Every VLC AP switched on at full power.
pub fn non_optimized_power(scenario: &Scenario) -> MilpSolution {
    let power: Vec<f64> = scenario.vlc_aps.iter().map(|ap| ap.max_power).collect();
    let objective = power.iter().sum::<f64>() + scenario.thz.power_budget();
    MilpSolution {
        active: vec![true; power.len()],
        power,
        objective,
        unserved: Vec::new(),
    }
}
