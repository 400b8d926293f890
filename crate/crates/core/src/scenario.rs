//! Deployment, device and threshold configuration.
//!
//! Two layers live here. [`ScenarioConfig`] is the on-disk JSON document and
//! carries human units (dB, dBm, degrees, GHz/MHz, cm², mW). [`Scenario`] is the
//! validated model input and holds linear SI values only; every other module
//! works exclusively on it.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::sensing::DetectorForm;

/// Default molecular absorption coefficient k(f) at 370 GHz, in 1/m.
pub const DEFAULT_ABSORPTION: f64 = 0.0033;

/// Smallest accepted LED semi-angle. The Lambertian order diverges as the
/// semi-angle goes to zero.
pub const MIN_SEMI_ANGLE: f64 = 1e-3;

const MOUNT_TOLERANCE: f64 = 1e-9;

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    10.0 * watts.log10() + 30.0
}

/// A position in the room frame, metres. The origin is a floor corner, `z` up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    /// Distance between the floor projections of the two points.
    pub fn horizontal_distance(&self, other: &Point3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Point3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Room {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

/// Shared THz front end of the sensing and communication APs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThzPhy {
    /// Hz.
    pub carrier_frequency: f64,
    /// k(f), 1/m.
    pub absorption_coefficient: f64,
    pub tx_gain: f64,
    pub rx_gain: f64,
    /// Hz.
    pub bandwidth: f64,
    /// W/Hz.
    pub noise_psd: f64,
    /// P_w, W. Split between sensing and communication.
    pub total_power: f64,
    /// W.
    pub circuitry_power: f64,
}

impl ThzPhy {
    pub fn noise_power(&self) -> f64 {
        self.noise_psd * self.bandwidth
    }

    /// P_w + P_cir, the budget the power split acts on.
    pub fn power_budget(&self) -> f64 {
        self.total_power + self.circuitry_power
    }

    pub fn antenna_gain(&self) -> f64 {
        self.tx_gain * self.rx_gain
    }
}

/// A ceiling-mounted LED access point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VlcAp {
    pub position: Point3,
    /// Semi-angle at half illuminance, rad.
    pub semi_angle: f64,
    /// W.
    pub max_power: f64,
    pub filter_gain: f64,
    pub concentrator_index: f64,
    /// Hz.
    pub bandwidth: f64,
    /// W/Hz.
    pub noise_psd: f64,
    /// lm/W.
    pub lumen_constant: f64,
}

impl VlcAp {
    pub fn noise_power(&self) -> f64 {
        self.noise_psd * self.bandwidth
    }
}

/// A user device: photodetector front end plus its radar cross-section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UserRx {
    pub position: Point3,
    /// m².
    pub pd_area: f64,
    /// A/W.
    pub responsivity: f64,
    /// Optical-to-electrical conversion coefficient.
    pub conversion: f64,
    /// Receiver field of view, rad.
    pub fov: f64,
    /// m².
    pub rcs: f64,
}

/// Human-blocker population parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockageParams {
    /// Intensity of the parent Poisson process when the density is derived
    /// from the hard-core thinning; `None` when λ_B is given directly.
    pub baseline_intensity: Option<f64>,
    pub hardcore_distance: f64,
    pub blocker_radius: f64,
    pub blocker_height: f64,
    /// λ_B, 1/m².
    pub effective_density: f64,
    /// Weight SNRs by the obstruction probability instead of the LoS
    /// probability.
    pub literal_pb_weighting: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub gamma_sens: f64,
    pub gamma_comm: f64,
    pub gamma_vlc: f64,
    pub fa_p: f64,
    pub pd_th: f64,
    /// lux.
    pub min_illuminance: f64,
    pub detector: DetectorForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// THz sensing, THz comm for detected users, MILP-optimised VLC for the rest.
    Proposed,
    /// THz sensing and THz comm only; undetected users stay unserved.
    StandaloneThz,
    /// Same association as `Proposed` with every VLC AP at full power.
    NonOptimized,
}

impl Mode {
    pub const ALL: [Mode; 3] = [Mode::Proposed, Mode::StandaloneThz, Mode::NonOptimized];

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Proposed => "proposed",
            Mode::StandaloneThz => "standalone_thz",
            Mode::NonOptimized => "non_optimized",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::invalid("mode", format!("unknown mode `{s}`")))
    }
}

/// Validated model input in linear SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub room: Room,
    pub thz_sensing_ap: Point3,
    pub thz_comm_ap: Point3,
    pub vlc_aps: Vec<VlcAp>,
    pub thz: ThzPhy,
    pub user_count: usize,
    /// Device parameters shared by every user; position and RCS are
    /// overwritten by [`place_users`].
    pub user_template: UserRx,
    pub blockage: BlockageParams,
    pub thresholds: Thresholds,
    pub blockage_enabled: bool,
    pub mode: Mode,
    /// Forces the sensing fraction instead of solving for it.
    pub rho1_override: Option<f64>,
}

impl Scenario {
    pub fn from_config(config: &ScenarioConfig) -> Result<Scenario> {
        let c = config;
        let density_given = (c.blockage.lambda_b, c.blockage.lambda_p);
        let (baseline_intensity, effective_density) = match density_given {
            (Some(lambda_b), None) => (None, lambda_b),
            (None, Some(lambda_p)) => {
                check(lambda_p >= 0.0 && lambda_p.is_finite(), "blockage.lambda_p", "must be finite and non-negative")?;
                check(c.blockage.hardcore_distance > 0.0, "blockage.hardcore_distance", "must be positive")?;
                let derived =
                    crate::blockage::effective_density(lambda_p, c.blockage.hardcore_distance)?;
                (Some(lambda_p), derived)
            }
            (Some(_), Some(_)) => {
                return Err(Error::invalid(
                    "blockage.lambda_b",
                    "give either lambda_b or lambda_p, not both",
                ))
            }
            (None, None) => {
                return Err(Error::invalid(
                    "blockage.lambda_b",
                    "one of lambda_b or lambda_p is required",
                ))
            }
        };

        let vlc_aps = c
            .aps
            .vlc
            .iter()
            .map(|&position| VlcAp {
                position,
                semi_angle: c.vlc.semi_angle_deg.to_radians(),
                max_power: c.vlc.p_max,
                filter_gain: c.vlc.filter_gain,
                concentrator_index: c.vlc.concentrator_index,
                bandwidth: c.vlc.bandwidth_mhz * 1e6,
                // dBm/MHz -> dBm/Hz is a 60 dB shift.
                noise_psd: dbm_to_watts(c.vlc.noise_dbm_per_mhz - 60.0),
                lumen_constant: c.vlc.lumen_constant,
            })
            .collect();

        let scenario = Scenario {
            room: c.room,
            thz_sensing_ap: c.aps.thz_sensing,
            thz_comm_ap: c.aps.thz_comm,
            vlc_aps,
            thz: ThzPhy {
                carrier_frequency: c.thz.frequency_ghz * 1e9,
                absorption_coefficient: c.thz.k_abs,
                tx_gain: c.thz.g_t,
                rx_gain: c.thz.g_r,
                bandwidth: c.thz.bandwidth_mhz * 1e6,
                noise_psd: dbm_to_watts(c.thz.noise_dbm_per_hz),
                total_power: c.thz.p_w,
                circuitry_power: c.thz.p_cir_mw * 1e-3,
            },
            user_count: c.users.count,
            user_template: UserRx {
                position: Point3::new(0.0, 0.0, c.users.height),
                pd_area: c.users.pd_area_cm2 * 1e-4,
                responsivity: c.users.responsivity,
                conversion: c.users.k_oe,
                fov: c.users.fov_deg.to_radians(),
                rcs: 1.0,
            },
            blockage: BlockageParams {
                baseline_intensity,
                hardcore_distance: c.blockage.hardcore_distance,
                blocker_radius: c.blockage.r_b,
                blocker_height: c.blockage.h_b,
                effective_density,
                literal_pb_weighting: c.blockage.literal_pb_weighting,
            },
            thresholds: Thresholds {
                gamma_sens: db_to_linear(c.thresholds.gamma_sens_db),
                gamma_comm: db_to_linear(c.thresholds.gamma_comm_db),
                gamma_vlc: db_to_linear(c.thresholds.gamma_vlc_db),
                fa_p: c.thresholds.fa_p,
                pd_th: c.thresholds.pd_th,
                min_illuminance: c.thresholds.min_illuminance_lux,
                detector: c.thresholds.detector,
            },
            blockage_enabled: c.blockage.enabled,
            mode: c.mode,
            rho1_override: c.thz.rho1_override,
        };
        validate_scenario(scenario)
    }

    /// Converts back to the human-unit document. Exact up to float rounding
    /// in the dB conversions.
    pub fn to_config(&self) -> ScenarioConfig {
        let first = self.vlc_aps.first();
        let vlc = match first {
            Some(ap) => VlcConfig {
                semi_angle_deg: ap.semi_angle.to_degrees(),
                p_max: ap.max_power,
                filter_gain: ap.filter_gain,
                concentrator_index: ap.concentrator_index,
                bandwidth_mhz: ap.bandwidth / 1e6,
                noise_dbm_per_mhz: watts_to_dbm(ap.noise_psd) + 60.0,
                lumen_constant: ap.lumen_constant,
            },
            None => default_config().vlc,
        };
        let (lambda_b, lambda_p) = match self.blockage.baseline_intensity {
            Some(p) => (None, Some(p)),
            None => (Some(self.blockage.effective_density), None),
        };
        ScenarioConfig {
            room: self.room,
            aps: ApsConfig {
                thz_sensing: self.thz_sensing_ap,
                thz_comm: self.thz_comm_ap,
                vlc: self.vlc_aps.iter().map(|ap| ap.position).collect(),
            },
            thz: ThzConfig {
                frequency_ghz: self.thz.carrier_frequency / 1e9,
                k_abs: self.thz.absorption_coefficient,
                g_t: self.thz.tx_gain,
                g_r: self.thz.rx_gain,
                bandwidth_mhz: self.thz.bandwidth / 1e6,
                noise_dbm_per_hz: watts_to_dbm(self.thz.noise_psd),
                p_w: self.thz.total_power,
                p_cir_mw: self.thz.circuitry_power * 1e3,
                rho1_override: self.rho1_override,
            },
            vlc,
            users: UsersConfig {
                count: self.user_count,
                height: self.user_template.position.z,
                pd_area_cm2: self.user_template.pd_area * 1e4,
                responsivity: self.user_template.responsivity,
                k_oe: self.user_template.conversion,
                fov_deg: self.user_template.fov.to_degrees(),
            },
            blockage: BlockageConfig {
                enabled: self.blockage_enabled,
                lambda_b,
                lambda_p,
                hardcore_distance: self.blockage.hardcore_distance,
                r_b: self.blockage.blocker_radius,
                h_b: self.blockage.blocker_height,
                literal_pb_weighting: self.blockage.literal_pb_weighting,
            },
            thresholds: ThresholdsConfig {
                gamma_sens_db: linear_to_db(self.thresholds.gamma_sens),
                gamma_comm_db: linear_to_db(self.thresholds.gamma_comm),
                gamma_vlc_db: linear_to_db(self.thresholds.gamma_vlc),
                fa_p: self.thresholds.fa_p,
                pd_th: self.thresholds.pd_th,
                min_illuminance_lux: self.thresholds.min_illuminance,
                detector: self.thresholds.detector,
            },
            mode: self.mode,
        }
    }

    /// Ceiling mount height shared by every AP.
    pub fn mount_height(&self) -> f64 {
        self.thz_sensing_ap.z
    }

    pub fn user_height(&self) -> f64 {
        self.user_template.position.z
    }

    /// Short SHA-256 digest of the canonical JSON form of the scenario.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_string(self).expect("scenario serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }
}

fn check(ok: bool, path: &str, message: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(path, message))
    }
}

fn positive(value: f64, path: &str, name: &str) -> Result<()> {
    check(
        value.is_finite() && value > 0.0,
        path,
        &format!("{name} must be positive"),
    )
}

fn non_negative(value: f64, path: &str, name: &str) -> Result<()> {
    check(
        value.is_finite() && value >= 0.0,
        path,
        &format!("{name} must be non-negative"),
    )
}

fn open_unit(value: f64, path: &str, name: &str) -> Result<()> {
    check(
        value > 0.0 && value < 1.0,
        path,
        &format!("{name} must lie in (0, 1)"),
    )
}

/// Checks every invariant and returns the scenario unchanged. Errors name the
/// config path of the first violated field.
pub fn validate_scenario(s: Scenario) -> Result<Scenario> {
    let room = &s.room;
    positive(room.length, "room.length", "length")?;
    positive(room.width, "room.width", "width")?;
    positive(room.height, "room.height", "height")?;

    let mount = s.thz_sensing_ap.z;
    let inside = |p: &Point3| {
        p.is_finite()
            && (0.0..=room.length).contains(&p.x)
            && (0.0..=room.width).contains(&p.y)
    };
    let aps = [("aps.thz_sensing".to_string(), s.thz_sensing_ap), ("aps.thz_comm".to_string(), s.thz_comm_ap)]
        .into_iter()
        .chain(
            s.vlc_aps
                .iter()
                .enumerate()
                .map(|(i, ap)| (format!("aps.vlc[{i}]"), ap.position)),
        );
    for (path, p) in aps {
        check(inside(&p), &path, "AP must lie inside the room footprint")?;
        check(
            (p.z - mount).abs() <= MOUNT_TOLERANCE,
            &path,
            "all APs must share one ceiling mount height",
        )?;
    }
    check(
        mount > 0.0 && mount <= room.height,
        "aps.thz_sensing",
        "mount height must lie in (0, room.height]",
    )?;

    let thz = &s.thz;
    positive(thz.carrier_frequency, "thz.frequency_ghz", "carrier frequency")?;
    non_negative(thz.absorption_coefficient, "thz.k_abs", "k_abs")?;
    positive(thz.tx_gain, "thz.g_t", "g_t")?;
    positive(thz.rx_gain, "thz.g_r", "g_r")?;
    positive(thz.bandwidth, "thz.bandwidth_mhz", "bandwidth")?;
    positive(thz.noise_psd, "thz.noise_dbm_per_hz", "noise psd")?;
    positive(thz.total_power, "thz.p_w", "p_w")?;
    non_negative(thz.circuitry_power, "thz.p_cir_mw", "p_cir")?;
    if let Some(rho1) = s.rho1_override {
        check(
            (0.0..=1.0).contains(&rho1),
            "thz.rho1_override",
            "rho1_override must lie in [0, 1]",
        )?;
    }

    for ap in &s.vlc_aps {
        check(
            ap.semi_angle >= MIN_SEMI_ANGLE && ap.semi_angle < PI / 2.0,
            "vlc.semi_angle_deg",
            "semi angle must lie in [1 mrad, 90 deg)",
        )?;
        positive(ap.max_power, "vlc.p_max", "p_max")?;
        positive(ap.filter_gain, "vlc.filter_gain", "filter gain")?;
        check(
            ap.concentrator_index >= 1.0 && ap.concentrator_index.is_finite(),
            "vlc.concentrator_index",
            "concentrator index must be >= 1",
        )?;
        positive(ap.bandwidth, "vlc.bandwidth_mhz", "bandwidth")?;
        positive(ap.noise_psd, "vlc.noise_dbm_per_mhz", "noise psd")?;
        non_negative(ap.lumen_constant, "vlc.lumen_constant", "lumen constant")?;
    }

    check(s.user_count >= 1, "users.count", "at least one user is required")?;
    let user = &s.user_template;
    check(
        user.position.z.is_finite() && user.position.z >= 0.0 && user.position.z < mount,
        "users.height",
        "user plane must lie between the floor and the AP mount height",
    )?;
    positive(user.pd_area, "users.pd_area_cm2", "pd area")?;
    positive(user.responsivity, "users.responsivity", "responsivity")?;
    positive(user.conversion, "users.k_oe", "k_oe")?;
    check(
        user.fov > 0.0 && user.fov <= PI / 2.0,
        "users.fov_deg",
        "fov must lie in (0, 90] deg",
    )?;
    non_negative(user.rcs, "users.rcs", "rcs")?;

    let b = &s.blockage;
    non_negative(b.effective_density, "blockage.lambda_b", "lambda_b")?;
    positive(b.hardcore_distance, "blockage.hardcore_distance", "hardcore distance")?;
    positive(b.blocker_radius, "blockage.r_b", "r_b")?;
    check(
        b.blocker_height > 0.0 && b.blocker_height <= mount,
        "blockage.h_b",
        "h_b must lie in (0, AP mount height]",
    )?;
    if b.baseline_intensity.is_some() {
        let cap = 1.0 / (PI * b.hardcore_distance * b.hardcore_distance);
        check(
            b.effective_density <= cap * (1.0 + 1e-12),
            "blockage.lambda_p",
            "derived density exceeds the hard-core packing bound",
        )?;
    }

    let t = &s.thresholds;
    positive(t.gamma_sens, "thresholds.gamma_sens_db", "gamma_sens")?;
    positive(t.gamma_comm, "thresholds.gamma_comm_db", "gamma_comm")?;
    positive(t.gamma_vlc, "thresholds.gamma_vlc_db", "gamma_vlc")?;
    open_unit(t.fa_p, "thresholds.fa_p", "fa_p")?;
    open_unit(t.pd_th, "thresholds.pd_th", "pd_th")?;
    non_negative(t.min_illuminance, "thresholds.min_illuminance_lux", "min illuminance")?;

    if s.mode == Mode::Proposed {
        check(
            !s.vlc_aps.is_empty(),
            "aps.vlc",
            "proposed mode needs at least one VLC AP",
        )?;
    }
    Ok(s)
}

/// Default deployment: 5 m x 5 m x 3 m room, APs on a 2.8 m ceiling.
pub fn default_scenario() -> Scenario {
    Scenario::from_config(&default_config()).expect("built-in default scenario is valid")
}

/// Draws `scenario.user_count` users uniformly over the room footprint with
/// unit-mean exponential RCS. Users are drawn one at a time (x, y, RCS), so
/// the first `k` users for a seed do not depend on the user count.
pub fn place_users(scenario: &Scenario, seed: u64) -> Vec<UserRx> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let template = scenario.user_template;
    (0..scenario.user_count)
        .map(|_| {
            let x = rng.random::<f64>() * scenario.room.length;
            let y = rng.random::<f64>() * scenario.room.width;
            let rcs: f64 = Exp1.sample(&mut rng);
            UserRx {
                position: Point3::new(x, y, template.position.z),
                rcs,
                ..template
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// On-disk configuration document
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub room: Room,
    pub aps: ApsConfig,
    pub thz: ThzConfig,
    pub vlc: VlcConfig,
    pub users: UsersConfig,
    pub blockage: BlockageConfig,
    pub thresholds: ThresholdsConfig,
    pub mode: Mode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApsConfig {
    pub thz_sensing: Point3,
    pub thz_comm: Point3,
    pub vlc: Vec<Point3>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThzConfig {
    pub frequency_ghz: f64,
    pub k_abs: f64,
    pub g_t: f64,
    pub g_r: f64,
    pub bandwidth_mhz: f64,
    pub noise_dbm_per_hz: f64,
    pub p_w: f64,
    pub p_cir_mw: f64,
    #[serde(default)]
    pub rho1_override: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VlcConfig {
    pub semi_angle_deg: f64,
    pub p_max: f64,
    pub filter_gain: f64,
    pub concentrator_index: f64,
    pub bandwidth_mhz: f64,
    pub noise_dbm_per_mhz: f64,
    pub lumen_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UsersConfig {
    pub count: usize,
    pub height: f64,
    pub pd_area_cm2: f64,
    pub responsivity: f64,
    pub k_oe: f64,
    pub fov_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockageConfig {
    pub enabled: bool,
    #[serde(default)]
    pub lambda_b: Option<f64>,
    #[serde(default)]
    pub lambda_p: Option<f64>,
    pub hardcore_distance: f64,
    pub r_b: f64,
    pub h_b: f64,
    #[serde(default)]
    pub literal_pb_weighting: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdsConfig {
    pub gamma_sens_db: f64,
    pub gamma_comm_db: f64,
    pub gamma_vlc_db: f64,
    pub fa_p: f64,
    pub pd_th: f64,
    pub min_illuminance_lux: f64,
    #[serde(default)]
    pub detector: DetectorForm,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_value(value: serde_json::Value) -> Result<Self> {
        serde_json::from_value(value).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}

/// Default parameters in configuration units.
pub fn default_config() -> ScenarioConfig {
    ScenarioConfig {
        room: Room {
            length: 5.0,
            width: 5.0,
            height: 3.0,
        },
        aps: ApsConfig {
            thz_sensing: Point3::new(1.5, 2.5, 2.8),
            thz_comm: Point3::new(3.0, 2.5, 2.8),
            vlc: vec![
                Point3::new(1.25, 1.25, 2.8),
                Point3::new(1.25, 3.75, 2.8),
                Point3::new(3.75, 3.75, 2.8),
                Point3::new(3.75, 1.25, 2.8),
            ],
        },
        thz: ThzConfig {
            frequency_ghz: 370.0,
            k_abs: DEFAULT_ABSORPTION,
            g_t: 1.0,
            g_r: 1.0,
            bandwidth_mhz: 100.0,
            noise_dbm_per_hz: -174.0,
            p_w: 2.0,
            p_cir_mw: 5.6,
            rho1_override: None,
        },
        vlc: VlcConfig {
            semi_angle_deg: 60.0,
            p_max: 5.0,
            filter_gain: 1.0,
            concentrator_index: 1.0,
            bandwidth_mhz: 40.0,
            noise_dbm_per_mhz: -210.0,
            lumen_constant: 300.0,
        },
        users: UsersConfig {
            count: 10,
            height: 0.85,
            pd_area_cm2: 1.0,
            responsivity: 0.53,
            k_oe: 3.0,
            fov_deg: 90.0,
        },
        blockage: BlockageConfig {
            enabled: false,
            lambda_b: Some(4.0),
            lambda_p: None,
            hardcore_distance: 0.5,
            r_b: 2.0,
            h_b: 1.8,
            literal_pb_weighting: false,
        },
        thresholds: ThresholdsConfig {
            gamma_sens_db: -5.0,
            gamma_comm_db: 25.0,
            gamma_vlc_db: 15.0,
            fa_p: 1e-2,
            pd_th: 0.5,
            min_illuminance_lux: 300.0,
            detector: DetectorForm::Standard,
        },
        mode: Mode::Proposed,
    }
}
