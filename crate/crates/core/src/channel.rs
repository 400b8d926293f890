//! Line-of-sight channel gains: THz communication, THz monostatic sensing,
//! LED (Lambertian) VLC links and the illuminance they produce.

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{UserRx, VlcAp, MIN_SEMI_ANGLE};

/// m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkKind {
    ThzComm,
    Vlc,
    ThzSensing,
}

/// Dimensionless power gain of one AP-user link and the distance it was
/// evaluated at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkGain {
    pub gain: f64,
    pub distance: f64,
    pub kind: LinkKind,
}

fn require(ok: bool, op: &'static str, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::domain(op, detail()))
    }
}

/// Free-space spreading factor c / (4 pi d f).
pub fn thz_spreading_gain(distance: f64, frequency: f64) -> Result<f64> {
    require(distance > 0.0 && distance.is_finite(), "thz_spreading_gain", || {
        format!("distance must be positive, got {distance}")
    })?;
    require(frequency > 0.0 && frequency.is_finite(), "thz_spreading_gain", || {
        format!("frequency must be positive, got {frequency}")
    })?;
    Ok(SPEED_OF_LIGHT / (4.0 * PI * distance * frequency))
}

/// Molecular absorption factor exp(-k d / 2).
pub fn molecular_absorption_gain(absorption: f64, distance: f64) -> Result<f64> {
    require(absorption >= 0.0, "molecular_absorption_gain", || {
        format!("absorption coefficient must be non-negative, got {absorption}")
    })?;
    require(distance >= 0.0, "molecular_absorption_gain", || {
        format!("distance must be non-negative, got {distance}")
    })?;
    Ok((-0.5 * absorption * distance).exp())
}

/// THz communication LoS gain: spreading times absorption. The composed
/// factor is used as-is wherever an SNR needs the THz channel gain; it is
/// not squared.
pub fn thz_comm_gain(distance: f64, frequency: f64, absorption: f64) -> Result<LinkGain> {
    let gain =
        thz_spreading_gain(distance, frequency)? * molecular_absorption_gain(absorption, distance)?;
    Ok(LinkGain {
        gain,
        distance,
        kind: LinkKind::ThzComm,
    })
}

/// Lambertian order m = -ln 2 / ln cos(semi_angle).
///
/// Orders within the input's rounding noise of an integer are returned as
/// that integer, so a 60 degree LED has order exactly 1.
pub fn lambertian_order(semi_angle: f64) -> Result<f64> {
    require(
        (MIN_SEMI_ANGLE..PI / 2.0).contains(&semi_angle),
        "lambertian_order",
        || format!("semi angle must lie in [1 mrad, pi/2), got {semi_angle}"),
    )?;
    let m = -LN_2 / semi_angle.cos().ln();
    let nearest = m.round();
    if (m - nearest).abs() <= 4.0 * f64::EPSILON * m {
        Ok(nearest)
    } else {
        Ok(m)
    }
}

/// Optical concentrator gain ci^2 / sin^2(fov) inside the field of view,
/// zero outside it.
pub fn concentrator_gain(incidence: f64, fov: f64, refractive_index: f64) -> Result<f64> {
    require(fov > 0.0, "concentrator_gain", || {
        format!("field of view must be positive, got {fov}")
    })?;
    require(incidence >= 0.0, "concentrator_gain", || {
        format!("incidence angle must be non-negative, got {incidence}")
    })?;
    if incidence <= fov {
        let s = fov.sin();
        Ok(refractive_index * refractive_index / (s * s))
    } else {
        Ok(0.0)
    }
}

/// LoS DC gain from a downward-facing LED to an upward-facing photodetector.
/// Irradiance and incidence angles coincide for this geometry.
pub fn vlc_channel_gain(ap: &VlcAp, user: &UserRx) -> Result<LinkGain> {
    let distance = ap.position.distance(&user.position);
    require(distance > 0.0, "vlc_channel_gain", || {
        "user coincides with the access point".to_string()
    })?;
    let cos_angle = ((ap.position.z - user.position.z) / distance).clamp(-1.0, 1.0);
    let incidence = cos_angle.acos();
    let concentrator = concentrator_gain(incidence, user.fov, ap.concentrator_index)?;
    let gain = if concentrator == 0.0 {
        0.0
    } else {
        let m = lambertian_order(ap.semi_angle)?;
        (m + 1.0) * user.pd_area / (2.0 * PI * distance * distance)
            * cos_angle.powf(m)
            * ap.filter_gain
            * concentrator
            * cos_angle
    };
    Ok(LinkGain {
        gain,
        distance,
        kind: LinkKind::Vlc,
    })
}

/// Monostatic round-trip path gain
/// c^2 sigma / ((4 pi)^3 f^2 d^4) * exp(-2 k d).
pub fn sensing_path_loss(
    distance: f64,
    frequency: f64,
    absorption: f64,
    rcs: f64,
) -> Result<LinkGain> {
    require(distance > 0.0 && distance.is_finite(), "sensing_path_loss", || {
        format!("distance must be positive, got {distance}")
    })?;
    require(frequency > 0.0, "sensing_path_loss", || {
        format!("frequency must be positive, got {frequency}")
    })?;
    require(absorption >= 0.0, "sensing_path_loss", || {
        format!("absorption coefficient must be non-negative, got {absorption}")
    })?;
    require(rcs >= 0.0, "sensing_path_loss", || {
        format!("rcs must be non-negative, got {rcs}")
    })?;
    let d2 = distance * distance;
    let spreading =
        SPEED_OF_LIGHT * SPEED_OF_LIGHT / ((4.0 * PI).powi(3) * frequency * frequency * d2 * d2);
    Ok(LinkGain {
        gain: spreading * rcs * (-2.0 * absorption * distance).exp(),
        distance,
        kind: LinkKind::ThzSensing,
    })
}

/// Horizontal illuminance in lux at the user's photodetector from the active
/// LEDs, each emitting `lumen_constant * power` lumens. The channel gain is
/// the fraction of flux landing on the PD, hence the division by its area.
pub fn illuminance_at(user: &UserRx, active: &[(VlcAp, f64)]) -> Result<f64> {
    active.iter().try_fold(0.0, |acc, (ap, power)| {
        require(*power >= 0.0, "illuminance_at", || {
            format!("power must be non-negative, got {power}")
        })?;
        let h = vlc_channel_gain(ap, user)?.gain;
        Ok(acc + h * ap.lumen_constant * power / user.pd_area)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{default_scenario, Point3};
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn spreading_halves_with_double_distance() {
        let f = 370e9;
        let a = thz_spreading_gain(1.3, f).unwrap();
        let b = thz_spreading_gain(2.6, f).unwrap();
        assert!(rel(b, a / 2.0) < 1e-15);
    }

    #[test]
    fn spreading_at_one_metre() {
        // 299792458 / (4 pi * 3.7e11), evaluated independently.
        let expected = 6.447_763_73e-5;
        assert!(rel(thz_spreading_gain(1.0, 370e9).unwrap(), expected) < 1e-7);
    }

    #[test]
    fn spreading_rejects_bad_inputs() {
        assert!(thz_spreading_gain(0.0, 370e9).is_err());
        assert!(thz_spreading_gain(1.0, 0.0).is_err());
        assert!(thz_spreading_gain(-1.0, 370e9).is_err());
    }

    #[test]
    fn absorption_examples() {
        assert_eq!(molecular_absorption_gain(0.0, 12.0).unwrap(), 1.0);
        assert_eq!(molecular_absorption_gain(0.3, 0.0).unwrap(), 1.0);
        assert!((molecular_absorption_gain(0.01, 5.0).unwrap() - 0.975_309_912).abs() < 1e-9);
        assert!(molecular_absorption_gain(-0.1, 1.0).is_err());
        assert!(molecular_absorption_gain(0.1, -1.0).is_err());
    }

    #[test]
    fn comm_gain_composes_the_two_factors() {
        let g = thz_comm_gain(1.0, 370e9, 0.0033).unwrap();
        assert_eq!(g.kind, LinkKind::ThzComm);
        let expected = 6.447_763_73e-5 * (-0.00165f64).exp();
        assert!(rel(g.gain, expected) < 1e-7);
        let pure = thz_comm_gain(2.0, 370e9, 0.0).unwrap().gain;
        assert_eq!(pure, thz_spreading_gain(2.0, 370e9).unwrap());
    }

    #[test]
    fn lambertian_examples() {
        assert_eq!(lambertian_order(60f64.to_radians()).unwrap(), 1.0);
        assert!((lambertian_order(30f64.to_radians()).unwrap() - 4.818_841_68).abs() < 1e-7);
        assert!(lambertian_order(5e-4).is_err());
        assert!(lambertian_order(PI / 2.0).is_err());
        assert!(lambertian_order(0.0).is_err());
    }

    #[test]
    fn concentrator_examples() {
        assert_eq!(concentrator_gain(0.8, 0.7, 1.5).unwrap(), 0.0);
        assert!((concentrator_gain(0.3, PI / 2.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((concentrator_gain(0.1, PI / 3.0, 1.5).unwrap() - 3.0).abs() < 1e-12);
        assert!(concentrator_gain(0.1, 0.0, 1.5).is_err());
    }

    fn ap_at(x: f64, y: f64) -> VlcAp {
        VlcAp {
            position: Point3::new(x, y, 2.8),
            ..default_scenario().vlc_aps[0]
        }
    }

    fn user_at(x: f64, y: f64) -> UserRx {
        UserRx {
            position: Point3::new(x, y, 0.85),
            ..default_scenario().user_template
        }
    }

    #[test]
    fn vlc_gain_directly_below() {
        let ap = ap_at(1.0, 1.0);
        let user = user_at(1.0, 1.0);
        let h: f64 = 2.8 - 0.85;
        let expected = user.pd_area / (PI * h * h);
        let g = vlc_channel_gain(&ap, &user).unwrap();
        assert_eq!(g.kind, LinkKind::Vlc);
        assert!(rel(g.gain, expected) < 1e-14);
    }

    #[test]
    fn vlc_gain_outside_fov_is_zero() {
        let ap = ap_at(1.0, 1.0);
        let mut user = user_at(3.0, 1.0);
        user.fov = 30f64.to_radians();
        assert_eq!(vlc_channel_gain(&ap, &user).unwrap().gain, 0.0);
    }

    #[test]
    fn vlc_gain_inverse_square_at_fixed_angle() {
        // Scale the AP-user offset while keeping its direction.
        let ap = ap_at(0.0, 0.0);
        let near = UserRx {
            position: Point3::new(0.5, 0.3, 2.8 - 1.0),
            ..user_at(0.0, 0.0)
        };
        let far = UserRx {
            position: Point3::new(1.0, 0.6, 2.8 - 2.0),
            ..near
        };
        let a = vlc_channel_gain(&ap, &near).unwrap().gain;
        let b = vlc_channel_gain(&ap, &far).unwrap().gain;
        assert!(rel(b, a / 4.0) < 1e-13);
    }

    #[test]
    fn vlc_gain_rejects_coincident_points() {
        let ap = ap_at(1.0, 1.0);
        let user = UserRx {
            position: ap.position,
            ..user_at(1.0, 1.0)
        };
        assert!(vlc_channel_gain(&ap, &user).is_err());
    }

    #[test]
    fn sensing_loss_examples() {
        let base = sensing_path_loss(2.0, 370e9, 0.0, 1.0).unwrap();
        assert_eq!(base.kind, LinkKind::ThzSensing);
        // c^2 / ((4 pi)^3 f^2 16), evaluated independently.
        assert!(rel(base.gain, 2.067_704_07e-11) < 1e-7);
        let double = sensing_path_loss(4.0, 370e9, 0.0, 1.0).unwrap();
        assert!(rel(double.gain, base.gain / 16.0) < 1e-14);
        let scaled = sensing_path_loss(2.0, 370e9, 0.0, 2.5).unwrap();
        assert!(rel(scaled.gain, 2.5 * base.gain) < 1e-15);
        assert!(sensing_path_loss(0.0, 370e9, 0.0, 1.0).is_err());
        assert!(sensing_path_loss(1.0, 370e9, 0.0, -1.0).is_err());
    }

    #[test]
    fn illuminance_is_linear_in_power() {
        let s = default_scenario();
        let user = user_at(2.5, 2.5);
        assert_eq!(illuminance_at(&user, &[]).unwrap(), 0.0);
        let one: Vec<_> = s.vlc_aps.iter().map(|ap| (*ap, 2.0)).collect();
        let two: Vec<_> = s.vlc_aps.iter().map(|ap| (*ap, 4.0)).collect();
        let a = illuminance_at(&user, &one).unwrap();
        let b = illuminance_at(&user, &two).unwrap();
        assert!(rel(b, 2.0 * a) < 1e-14);
    }

    #[test]
    fn centre_illuminance_at_full_power() {
        // Four APs at 5 W, centre user: each link has horizontal offset
        // 1.25*sqrt(2) and drop 1.95, m = 1, so H/A = cos^2 / (pi D^2).
        let s = default_scenario();
        let user = user_at(2.5, 2.5);
        let all: Vec<_> = s.vlc_aps.iter().map(|ap| (*ap, ap.max_power)).collect();
        let lux = illuminance_at(&user, &all).unwrap();
        let d2 = 2.0 * 1.25f64.powi(2) + 1.95f64.powi(2);
        let cos2 = 1.95f64.powi(2) / d2;
        let expected = 4.0 * cos2 / (PI * d2) * 300.0 * 5.0;
        assert!(rel(lux, expected) < 1e-12);
        // Below the 300 lux office level at the default lumen constant.
        assert!(lux < 300.0);
    }

    proptest! {
        #[test]
        fn gains_finite_and_decreasing(d in 0.1f64..20.0, k in 0.0f64..0.5, step in 0.01f64..5.0) {
            let a = thz_comm_gain(d, 370e9, k).unwrap().gain;
            let b = thz_comm_gain(d + step, 370e9, k).unwrap().gain;
            prop_assert!(a.is_finite() && a > 0.0 && b < a);
            let a = sensing_path_loss(d, 370e9, k, 1.0).unwrap().gain;
            let b = sensing_path_loss(d + step, 370e9, k, 1.0).unwrap().gain;
            prop_assert!(a.is_finite() && a > 0.0 && b < a);
        }

        #[test]
        fn vlc_gain_non_negative(x in 0.0f64..5.0, y in 0.0f64..5.0) {
            let s = default_scenario();
            for ap in &s.vlc_aps {
                let g = vlc_channel_gain(ap, &user_at(x, y)).unwrap().gain;
                prop_assert!(g.is_finite() && g >= 0.0);
            }
        }
    }
}
