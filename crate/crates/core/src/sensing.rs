//! Monostatic detection: sensing SNR, Neyman-Pearson detection probability
//! and sensing coverage.

use serde::{Deserialize, Serialize};

use crate::blockage::link_blockage_weight;
use crate::channel::sensing_path_loss;
use crate::error::{Error, Result};
use crate::scenario::{Scenario, Thresholds, UserRx};
use crate::special::{erf_inv, erfc, erfc_inv};

/// Which closed form of the detection probability to evaluate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DetectorForm {
    /// `½ erfc(erfcinv(2 FA) - sqrt(SNR / 2))`.
    #[default]
    Standard,
    /// `½ erfc(erfinv(2 FA) - sqrt(SNR) / 2)`. Kept for comparison plots;
    /// defined only for FA < 0.5.
    Alternate,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionOutcome {
    pub snr_sens: f64,
    pub p_d: f64,
    /// snr_sens >= gamma_sens.
    pub covered: bool,
    /// p_d > pd_th.
    pub detected: bool,
}

/// Blockage-weighted round-trip gain G_t G_r L(d_f) between the sensing AP
/// and the user.
pub fn sensing_gain(user: &UserRx, scenario: &Scenario) -> Result<f64> {
    let ap = scenario.thz_sensing_ap;
    let thz = &scenario.thz;
    let loss = sensing_path_loss(
        ap.distance(&user.position),
        thz.carrier_frequency,
        thz.absorption_coefficient,
        user.rcs,
    )?;
    let weight = link_blockage_weight(&ap, &user.position, &scenario.blockage, scenario.blockage_enabled)?;
    Ok(thz.antenna_gain() * loss.gain * weight.snr_factor(scenario.blockage.literal_pb_weighting))
}

/// Sensing SNR when a fraction `rho1` of the THz budget goes to sensing.
pub fn sensing_snr(user: &UserRx, scenario: &Scenario, rho1: f64) -> Result<f64> {
    check_fraction("sensing_snr", rho1)?;
    let gain = sensing_gain(user, scenario)?;
    Ok(snr_from_gain(scenario, rho1, gain))
}

pub(crate) fn snr_from_gain(scenario: &Scenario, fraction: f64, gain: f64) -> f64 {
    scenario.thz.power_budget() * fraction * gain / scenario.thz.noise_power()
}

pub(crate) fn check_fraction(op: &'static str, rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::domain(op, format!("power fraction must lie in [0, 1], got {rho}")))
    }
}

/// Detection probability of the Gaussian Neyman-Pearson detector.
pub fn detection_probability(snr: f64, fa_p: f64) -> Result<f64> {
    detection_probability_with(DetectorForm::Standard, snr, fa_p)
}

pub fn detection_probability_with(form: DetectorForm, snr: f64, fa_p: f64) -> Result<f64> {
    if !(fa_p > 0.0 && fa_p < 1.0) {
        return Err(Error::domain(
            "detection_probability",
            format!("false-alarm probability must lie in (0, 1), got {fa_p}"),
        ));
    }
    if !(snr >= 0.0) {
        return Err(Error::domain(
            "detection_probability",
            format!("snr must be non-negative, got {snr}"),
        ));
    }
    let arg = match form {
        DetectorForm::Standard => erfc_inv(2.0 * fa_p) - (snr / 2.0).sqrt(),
        DetectorForm::Alternate => {
            if fa_p >= 0.5 {
                return Err(Error::domain(
                    "detection_probability",
                    format!("alternate form needs fa_p < 0.5, got {fa_p}"),
                ));
            }
            erf_inv(2.0 * fa_p) - snr.sqrt() / 2.0
        }
    };
    Ok((0.5 * erfc(arg)).clamp(0.0, 1.0))
}

/// Classifies one user given its sensing SNR.
pub fn detect(snr_sens: f64, thresholds: &Thresholds) -> Result<DetectionOutcome> {
    let p_d = detection_probability_with(thresholds.detector, snr_sens, thresholds.fa_p)?;
    Ok(DetectionOutcome {
        snr_sens,
        p_d,
        covered: snr_sens >= thresholds.gamma_sens,
        detected: p_d > thresholds.pd_th,
    })
}

/// Fraction of users whose sensing SNR reaches the sensing threshold.
pub fn sensing_coverage(outcomes: &[DetectionOutcome]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::domain("sensing_coverage", "no users to cover"));
    }
    let covered = outcomes.iter().filter(|o| o.covered).count();
    Ok(covered as f64 / outcomes.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::SPEED_OF_LIGHT;
    use crate::scenario::{default_scenario, Point3};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Upper Gaussian tail Q(x) = ½ erfc(x / √2) by composite Simpson on
    /// the substitution t = x + u / (1 - u), u ∈ [0, 1).
    fn q_tail(x: f64) -> f64 {
        let n = 200_000;
        let h = 1.0 / n as f64;
        let f = |u: f64| {
            if u >= 1.0 {
                return 0.0;
            }
            let t = x + u / (1.0 - u);
            (-0.5 * t * t).exp() / (1.0 - u).powi(2)
        };
        let mut sum = f(0.0) + f(1.0);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            sum += w * f(i as f64 * h);
        }
        sum * h / 3.0 / (2.0 * PI).sqrt()
    }

    /// Inverse of q_tail by bisection.
    fn q_inv(p: f64) -> f64 {
        let (mut lo, mut hi) = (-10.0, 10.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if q_tail(mid) > p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn erfc_matches_integration() {
        for &x in &[-2.0, -0.5, 0.0, 0.3, 1.0, 2.5, 4.0] {
            let oracle = 2.0 * q_tail(x * std::f64::consts::SQRT_2);
            assert!((erfc(x) - oracle).abs() < 1e-12 * oracle.max(1e-300) + 1e-15, "x = {x}");
        }
    }

    #[test]
    fn detection_at_zero_snr_is_false_alarm() {
        for &fa in &[1e-5, 1e-2, 0.3, 0.9] {
            let pd = detection_probability(0.0, fa).unwrap();
            assert!((pd - fa).abs() < 1e-12, "fa = {fa}: {pd}");
        }
    }

    #[test]
    fn detection_ten_db_example() {
        // P_d = Q(Q^{-1}(fa) - sqrt(snr)).
        let oracle = q_tail(q_inv(1e-2) - 10f64.sqrt());
        let pd = detection_probability(10.0, 1e-2).unwrap();
        assert!((pd - oracle).abs() < 1e-9, "{pd} vs {oracle}");
        assert!((pd - 0.7986).abs() < 5e-4);
        assert!((pd - 0.798_403).abs() < 1e-6);
    }

    #[test]
    fn half_false_alarm_is_at_least_half() {
        for &snr in &[0.0, 0.1, 1.0, 30.0] {
            assert!(detection_probability(snr, 0.5).unwrap() >= 0.5);
        }
    }

    #[test]
    fn detection_domain_errors() {
        assert!(detection_probability(1.0, 0.0).is_err());
        assert!(detection_probability(1.0, 1.0).is_err());
        assert!(detection_probability(1.0, 1.5).is_err());
        assert!(detection_probability(-1.0, 0.1).is_err());
        assert!(detection_probability_with(DetectorForm::Alternate, 1.0, 0.6).is_err());
        assert!(detection_probability_with(DetectorForm::Alternate, 1.0, 0.1).is_ok());
    }

    #[test]
    fn snr_examples() {
        let s = default_scenario();
        let mut user = s.user_template;
        user.position = Point3::new(2.5, 2.5, 0.85);
        assert_eq!(sensing_snr(&user, &s, 0.0).unwrap(), 0.0);

        let a = sensing_snr(&user, &s, 0.5).unwrap();
        user.rcs = 3.0;
        let b = sensing_snr(&user, &s, 0.5).unwrap();
        assert!((b / a - 3.0).abs() < 1e-14);
        user.rcs = 1.0;

        // Composed directly from the textbook forms.
        let d = ((1.0f64).powi(2) + (1.95f64).powi(2)).sqrt();
        let f = 370e9;
        let loss = SPEED_OF_LIGHT.powi(2) / ((4.0 * PI).powi(3) * f * f * d.powi(4))
            * (-2.0 * 0.0033 * d).exp();
        let noise = 10f64.powf(-17.4) * 1e-3 * 1e8;
        let expected = 2.0056 * 0.5 * loss / noise;
        assert!((a / expected - 1.0).abs() < 1e-12);
        assert!((a - 35.612_828_194_756_92).abs() < 1e-9, "{a}");
        assert!(sensing_snr(&user, &s, 1.5).is_err());
    }

    #[test]
    fn coverage_counts() {
        let o = |covered| DetectionOutcome {
            snr_sens: 0.0,
            p_d: 0.0,
            covered,
            detected: false,
        };
        assert_eq!(sensing_coverage(&[o(true), o(true)]).unwrap(), 1.0);
        assert_eq!(sensing_coverage(&[o(false), o(false)]).unwrap(), 0.0);
        assert_eq!(sensing_coverage(&[o(true), o(false), o(true), o(false)]).unwrap(), 0.5);
        assert!(sensing_coverage(&[]).is_err());
    }

    #[test]
    fn detect_flags() {
        let s = default_scenario();
        let out = detect(10.0, &s.thresholds).unwrap();
        assert!(out.covered && out.detected);
        let out = detect(0.01, &s.thresholds).unwrap();
        assert!(!out.covered && !out.detected);
    }

    proptest! {
        #[test]
        fn increasing_in_snr(fa in 1e-6f64..0.99, snr in 0.0f64..200.0, ds in 1e-3f64..5.0) {
            let a = detection_probability(snr, fa).unwrap();
            let b = detection_probability(snr + ds, fa).unwrap();
            prop_assume!(a < 1.0 - 1e-12);
            prop_assert!(b > a);
        }

        #[test]
        fn increasing_in_false_alarm(fa in 1e-6f64..0.9, dfa in 1e-3f64..0.09, snr in 0.0f64..30.0) {
            let a = detection_probability(snr, fa).unwrap();
            let b = detection_probability(snr, fa + dfa).unwrap();
            prop_assume!(a < 1.0 - 1e-12);
            prop_assert!(b > a);
        }

        #[test]
        fn probability_in_unit_interval(fa in 1e-9f64..0.999_999, snr in 0.0f64..1e6) {
            let p = detection_probability(snr, fa).unwrap();
            prop_assert!((0.0..=1.0).contains(&p));
        }
    }
}
