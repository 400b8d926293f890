//! Human blockage as an analytic expected-attenuation weight per link.
//!
//! Blockers are cylinders of radius `r_B` and height `h_B` scattered as a
//! hard-core (Matérn type II) process. A blocker cuts the ceiling-to-user ray
//! only within the AP-side stretch `d_B = d_T (1 - h_B / H)` of the horizontal
//! separation `d_T`; the LoS survives that stretch with probability
//! `exp(-2 λ_B d_B r_B²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{BlockageParams, Point3};

/// Obstruction probability of one link and its complement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageWeight {
    pub p_block: f64,
    pub los_weight: f64,
    pub d_b: f64,
}

impl BlockageWeight {
    pub const CLEAR: BlockageWeight = BlockageWeight {
        p_block: 0.0,
        los_weight: 1.0,
        d_b: 0.0,
    };

    /// Multiplicative factor applied to the link's SNR.
    pub fn snr_factor(&self, literal_pb_weighting: bool) -> f64 {
        if literal_pb_weighting {
            self.p_block
        } else {
            self.los_weight
        }
    }
}

/// Effective density of a hard-core thinned Poisson process with parent
/// intensity `baseline_intensity` and hard-core distance `hardcore_distance`.
pub fn effective_density(baseline_intensity: f64, hardcore_distance: f64) -> Result<f64> {
    if !(hardcore_distance > 0.0) {
        return Err(Error::domain(
            "effective_density",
            format!("hard-core distance must be positive, got {hardcore_distance}"),
        ));
    }
    if !(baseline_intensity >= 0.0) {
        return Err(Error::domain(
            "effective_density",
            format!("baseline intensity must be non-negative, got {baseline_intensity}"),
        ));
    }
    let area = PI * hardcore_distance * hardcore_distance;
    let x = baseline_intensity * area;
    // (1 - e^{-x}) / area, written with exp_m1 so the small-x limit is exact.
    Ok(-(-x).exp_m1() / area)
}

/// AP-side length of the horizontal separation over which a blocker of
/// height `blocker_height` intersects the LoS from a mount at `mount_height`.
pub fn blocker_distance(horizontal: f64, blocker_height: f64, mount_height: f64) -> Result<f64> {
    if !(blocker_height > 0.0 && blocker_height <= mount_height) {
        return Err(Error::domain(
            "blocker_distance",
            format!("blocker height {blocker_height} must lie in (0, {mount_height}]"),
        ));
    }
    if !(horizontal >= 0.0) {
        return Err(Error::domain(
            "blocker_distance",
            format!("horizontal distance must be non-negative, got {horizontal}"),
        ));
    }
    Ok(horizontal * (1.0 - blocker_height / mount_height))
}

pub fn blockage_probability(density: f64, d_b: f64, blocker_radius: f64) -> Result<BlockageWeight> {
    if !(density >= 0.0) || !(d_b >= 0.0) {
        return Err(Error::domain(
            "blockage_probability",
            format!("density ({density}) and d_B ({d_b}) must be non-negative"),
        ));
    }
    if !(blocker_radius > 0.0) {
        return Err(Error::domain(
            "blockage_probability",
            format!("blocker radius must be positive, got {blocker_radius}"),
        ));
    }
    let exponent = -2.0 * density * d_b * blocker_radius * blocker_radius;
    let los_weight = exponent.exp();
    Ok(BlockageWeight {
        // 1 - los_weight, so the pair sums to one exactly.
        p_block: 1.0 - los_weight,
        los_weight,
        d_b,
    })
}

/// Blockage weight of the link between a ceiling AP and a user. When
/// blockage is disabled every link is clear.
pub fn link_blockage_weight(
    ap: &Point3,
    user: &Point3,
    params: &BlockageParams,
    enabled: bool,
) -> Result<BlockageWeight> {
    if !enabled {
        return Ok(BlockageWeight::CLEAR);
    }
    let horizontal = ap.horizontal_distance(user);
    let d_b = blocker_distance(horizontal, params.blocker_height, ap.z)?;
    blockage_probability(params.effective_density, d_b, params.blocker_radius)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::default_scenario;
    use proptest::prelude::*;

    #[test]
    fn density_limits_and_example() {
        let tiny = effective_density(1e-9, 0.5).unwrap();
        assert!((tiny / 1e-9 - 1.0).abs() < 1e-8);
        let cap = 1.0 / (PI * 0.25);
        assert!((effective_density(1e6, 0.5).unwrap() - cap).abs() < 1e-12);
        assert!((effective_density(1.0, 0.5).unwrap() - 0.692_721_090_5).abs() < 1e-10);
        assert!(effective_density(1.0, 0.0).is_err());
        assert!(effective_density(-1.0, 0.5).is_err());
    }

    #[test]
    fn blocker_distance_examples() {
        assert_eq!(blocker_distance(3.0, 2.8, 2.8).unwrap(), 0.0);
        assert!((blocker_distance(2.8, 1.8, 2.8).unwrap() - 1.0).abs() < 1e-15);
        let a = blocker_distance(1.1, 1.8, 2.8).unwrap();
        let b = blocker_distance(3.3, 1.8, 2.8).unwrap();
        assert!((b - 3.0 * a).abs() < 1e-15);
        assert!(blocker_distance(1.0, 3.5, 2.8).is_err());
    }

    #[test]
    fn probability_examples() {
        let clear = blockage_probability(4.0, 0.0, 2.0).unwrap();
        assert_eq!((clear.p_block, clear.los_weight), (0.0, 1.0));
        let w = blockage_probability(0.1, 0.1, 0.3).unwrap();
        assert!((w.p_block - 0.001_798_380_971_6).abs() < 1e-13);
        assert!(blockage_probability(-0.1, 0.1, 0.3).is_err());
        assert!(blockage_probability(0.1, -0.1, 0.3).is_err());
        assert!(blockage_probability(0.1, 0.1, 0.0).is_err());
    }

    #[test]
    fn link_weight_examples() {
        let s = default_scenario();
        let ap = Point3::new(2.0, 2.0, 2.8);
        let far = Point3::new(3.0, 2.0, 0.85);
        let below = Point3::new(2.0, 2.0, 0.85);
        let off = link_blockage_weight(&ap, &far, &s.blockage, false).unwrap();
        assert_eq!(off.los_weight, 1.0);
        let at_zero = link_blockage_weight(&ap, &below, &s.blockage, true).unwrap();
        assert_eq!(at_zero.los_weight, 1.0);
        let w = link_blockage_weight(&ap, &far, &s.blockage, true).unwrap();
        let expected = (-2.0 * 4.0 * (1.0 / 2.8) * 4.0f64).exp();
        assert!((w.los_weight / expected - 1.0).abs() < 1e-12);
        assert!((w.los_weight - 1.088_014_022e-5).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn weight_pair_sums_to_one(l in 0.0f64..20.0, d in 0.0f64..10.0, r in 0.01f64..3.0) {
            let w = blockage_probability(l, d, r).unwrap();
            prop_assert_eq!(w.p_block + w.los_weight, 1.0);
            prop_assert!((0.0..=1.0).contains(&w.p_block));
            prop_assert!((0.0..=1.0).contains(&w.los_weight));
        }

        #[test]
        fn obstruction_monotone(l in 0.0f64..10.0, d in 0.0f64..5.0, r in 0.01f64..3.0, dl in 0.0f64..3.0) {
            let base = blockage_probability(l, d, r).unwrap().p_block;
            prop_assert!(blockage_probability(l + dl, d, r).unwrap().p_block >= base);
            prop_assert!(blockage_probability(l, d + dl, r).unwrap().p_block >= base);
            prop_assert!(blockage_probability(l, d, r + dl).unwrap().p_block >= base);
        }
    }
}
