//! Scenario configuration (TOML). Every section except `motion` has
//! defaults, so a minimal file only names what it changes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use vitals_core::antenna::{AntennaKind, AntennaSpec, JonesVector};
use vitals_core::geometry::Vec3;
use vitals_core::propagation::{FrontEnd, Reflector, ReflectorKind, Scene, Station};
use vitals_core::radar::{CarrierConfig, MotionWaveform, NoiseSpec};

use crate::error::{config_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Polarization {
    LpHorizontal,
    LpVertical,
    Rhcp,
    Lhcp,
}

impl Polarization {
    pub fn jones(self) -> JonesVector {
        match self {
            Polarization::LpHorizontal => JonesVector::lp_horizontal(),
            Polarization::LpVertical => JonesVector::lp_vertical(),
            Polarization::Rhcp => JonesVector::rhcp(),
            Polarization::Lhcp => JonesVector::lhcp(),
        }
    }

    fn is_circular(self) -> bool {
        matches!(self, Polarization::Rhcp | Polarization::Lhcp)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    pub i_std: f64,
    pub q_std: f64,
    pub i_offset: f64,
    pub q_offset: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            i_std: 0.0,
            q_std: 0.0,
            i_offset: 0.0,
            q_offset: 0.0,
        }
    }
}

impl NoiseConfig {
    pub fn spec(&self, seed: u64) -> NoiseSpec {
        NoiseSpec {
            i_std: self.i_std,
            q_std: self.q_std,
            i_offset: self.i_offset,
            q_offset: self.q_offset,
            seed,
        }
    }
}

/// How each antenna kind is realized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AntennaConfig {
    pub peak_gain_dbi: f64,
    pub single_hpbw_deg: f64,
    pub array_hpbw_deg: f64,
    pub lp: Polarization,
    pub cp_tx: Polarization,
    /// Opposite hand to `cp_tx`, so one specular bounce arrives co-polarized.
    pub cp_rx: Polarization,
}

impl Default for AntennaConfig {
    fn default() -> Self {
        AntennaConfig {
            peak_gain_dbi: 5.8,
            single_hpbw_deg: 81.0,
            array_hpbw_deg: 37.0,
            lp: Polarization::LpVertical,
            cp_tx: Polarization::Lhcp,
            cp_rx: Polarization::Rhcp,
        }
    }
}

impl AntennaConfig {
    pub fn spec(&self, kind: AntennaKind, cp: Polarization) -> AntennaSpec {
        AntennaSpec {
            polarization: if kind.is_circular() { cp.jones() } else { self.lp.jones() },
            peak_gain_dbi: self.peak_gain_dbi,
            hpbw_deg: if kind.is_array() { self.array_hpbw_deg } else { self.single_hpbw_deg },
        }
    }
}

/// Tx and Rx mounted side by side, `spacing_m` apart horizontally,
/// both looking along `boresight`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RadarConfig {
    pub center_m: Vec3,
    pub spacing_m: f64,
    pub boresight: Vec3,
}

impl Default for RadarConfig {
    fn default() -> Self {
        RadarConfig {
            center_m: Vec3::new(0.0, 0.0, 1.2),
            spacing_m: 0.06,
            boresight: Vec3::new(1.0, 0.0, 0.0),
        }
    }
}

impl RadarConfig {
    fn lateral(&self) -> Vec3 {
        let up = Vec3::new(0.0, 0.0, 1.0);
        let l = up.cross(self.boresight);
        if l.norm() < 1e-9 {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            l.normalized()
        }
    }

    pub fn tx_position(&self) -> Vec3 {
        self.center_m + self.lateral() * (self.spacing_m / 2.0)
    }

    pub fn rx_position(&self) -> Vec3 {
        self.center_m - self.lateral() * (self.spacing_m / 2.0)
    }
}

/// The moving plate, placed `distance_m` from the radar centre along a ray
/// tilted `depression_deg` below boresight, facing back along that ray.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TargetConfig {
    pub distance_m: f64,
    pub depression_deg: f64,
    pub extent_m: (f64, f64),
    pub roughness_height_m: f64,
    pub reflection_magnitude: f64,
    pub depolarization_fraction: f64,
}

impl Default for TargetConfig {
    fn default() -> Self {
        TargetConfig {
            distance_m: 1.5,
            depression_deg: 20.0,
            extent_m: (0.3, 0.2),
            roughness_height_m: 0.02,
            reflection_magnitude: 1.0,
            depolarization_fraction: 0.3,
        }
    }
}

impl TargetConfig {
    pub fn reflector(&self, radar: &RadarConfig) -> Reflector {
        let b = radar.boresight.normalized();
        let down = Vec3::new(0.0, 0.0, -1.0);
        let t = self.depression_deg.to_radians();
        let dir = (b * t.cos() + down * t.sin()).normalized();
        let mut r = Reflector::new(
            "target",
            radar.center_m + dir * self.distance_m,
            dir * -1.0,
            self.extent_m,
            ReflectorKind::TargetPlate,
        );
        r.roughness_height_m = self.roughness_height_m;
        r.reflection_magnitude = self.reflection_magnitude;
        r.depolarization_fraction = self.depolarization_fraction;
        r
    }
}

/// Tx→Rx isolation in dB keyed by `"<kind>/<kind>"`, order-free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IsolationTable(pub BTreeMap<String, f64>);

impl IsolationTable {
    fn key(a: AntennaKind, b: AntennaKind) -> String {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        format!("{a}/{b}")
    }

    pub fn get(&self, tx: AntennaKind, rx: AntennaKind) -> Option<f64> {
        self.0.get(&Self::key(tx, rx)).copied()
    }

    pub fn set(&mut self, a: AntennaKind, b: AntennaKind, db: f64) {
        self.0.insert(Self::key(a, b), db);
    }

    fn validate(&self) -> Result<()> {
        for (k, v) in &self.0 {
            let ok = k
                .split_once('/')
                .map(|(a, b)| a.parse::<AntennaKind>().is_ok() && b.parse::<AntennaKind>().is_ok())
                .unwrap_or(false);
            if !ok {
                return Err(config_err(
                    format!("front_end.isolation_db.{k}"),
                    "key must be <kind>/<kind>",
                ));
            }
            if !v.is_finite() {
                return Err(config_err(format!("front_end.isolation_db.{k}"), "must be finite"));
            }
        }
        Ok(())
    }
}

impl Default for IsolationTable {
    fn default() -> Self {
        use AntennaKind::*;
        let mut t = IsolationTable(BTreeMap::new());
        t.set(LpSingle, CpSingle, 30.66);
        t.set(LpSingle, LpArray, 31.55);
        t.set(LpSingle, CpArray, 36.29);
        t.set(CpSingle, LpArray, 34.56);
        // Pairs below are not measured; they follow the same ordering
        // (co-polarized worst, LP/CP better, arrays better than singles).
        t.set(LpSingle, LpSingle, 27.0);
        t.set(CpSingle, CpSingle, 27.0);
        t.set(CpSingle, CpArray, 31.0);
        t.set(LpArray, LpArray, 33.0);
        t.set(CpArray, CpArray, 33.5);
        t.set(LpArray, CpArray, 37.5);
        t
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontEndConfig {
    pub isolation_db: IsolationTable,
    pub leakage_phase_rad: f64,
    /// `inf` disables compression.
    pub saturation_power_w: f64,
    pub ambient_power_w: f64,
    pub ambient_polarization: Polarization,
    pub ambient_noise_coupling: f64,
    pub leakage_noise_coupling: f64,
    pub reference_power_w: f64,
}

impl Default for FrontEndConfig {
    fn default() -> Self {
        FrontEndConfig {
            isolation_db: IsolationTable::default(),
            leakage_phase_rad: 0.7,
            saturation_power_w: 6e-7,
            ambient_power_w: 2e-6,
            ambient_polarization: Polarization::LpVertical,
            ambient_noise_coupling: 1e-8,
            leakage_noise_coupling: 1e-9,
            reference_power_w: 1e-12,
        }
    }
}

impl FrontEndConfig {
    /// No leakage, ambient, compression or coupled noise.
    pub fn ideal() -> Self {
        FrontEndConfig {
            isolation_db: IsolationTable(BTreeMap::new()),
            leakage_phase_rad: 0.0,
            saturation_power_w: f64::INFINITY,
            ambient_power_w: 0.0,
            ambient_polarization: Polarization::LpVertical,
            ambient_noise_coupling: 0.0,
            leakage_noise_coupling: 0.0,
            reference_power_w: 1e-12,
        }
    }

    pub fn front_end(&self, tx: AntennaKind, rx: AntennaKind) -> FrontEnd {
        FrontEnd {
            isolation_db: self.isolation_db.get(tx, rx),
            leakage_phase_rad: self.leakage_phase_rad,
            saturation_power_w: Some(self.saturation_power_w).filter(|p| p.is_finite()),
            ambient_power_w: self.ambient_power_w,
            ambient_polarization: self.ambient_polarization.jones(),
            ambient_noise_coupling: self.ambient_noise_coupling,
            leakage_noise_coupling: self.leakage_noise_coupling,
            reference_power_w: self.reference_power_w,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub zero_pad: usize,
    /// Fundamental search band.
    pub fundamental_band_hz: (f64, f64),
    pub noise_band_hz: (f64, f64),
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            zero_pad: vitals_core::dsp::DEFAULT_ZERO_PAD,
            fundamental_band_hz: (0.05, 0.5),
            noise_band_hz: (1.0, 5.0),
        }
    }
}

/// Simulated-subject session and the rate-tracking chain applied to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhysioConfig {
    pub subjects: usize,
    pub session_s: f64,
    pub distances_m: Vec<f64>,
    pub resp_rate_bpm: f64,
    pub resp_amp_mm: f64,
    pub heart_rate_bpm: f64,
    pub heart_amp_mm: f64,
    pub hrv_jitter_fraction: f64,
    /// Relative spread of per-subject rates and amplitudes; subject 0 is
    /// always nominal.
    pub subject_spread: f64,
    pub filter_order: usize,
    pub heart_band_hz: (f64, f64),
    pub resp_lowpass_hz: f64,
    pub resp_search_hz: (f64, f64),
    pub window_s: f64,
    pub step_s: f64,
    pub tolerance: f64,
    pub standard: (AntennaKind, AntennaKind),
    pub recommended: (AntennaKind, AntennaKind),
}

impl Default for PhysioConfig {
    fn default() -> Self {
        PhysioConfig {
            subjects: 5,
            session_s: 300.0,
            distances_m: vec![0.5, 1.5],
            resp_rate_bpm: 20.0,
            resp_amp_mm: 4.0,
            heart_rate_bpm: 70.0,
            heart_amp_mm: 0.3,
            hrv_jitter_fraction: 0.03,
            subject_spread: 0.1,
            filter_order: 5,
            heart_band_hz: (0.85, 2.5),
            resp_lowpass_hz: 0.35,
            resp_search_hz: (0.1, 0.6),
            window_s: 10.0,
            step_s: 0.1,
            tolerance: vitals_core::dsp::DEFAULT_TOLERANCE,
            standard: (AntennaKind::LpSingle, AntennaKind::LpSingle),
            recommended: (AntennaKind::LpSingle, AntennaKind::CpArray),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default = "default_sample_rate")]
    pub sample_rate_hz: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_tx")]
    pub tx_kind: AntennaKind,
    #[serde(default = "default_rx")]
    pub rx_kind: AntennaKind,
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    #[serde(default)]
    pub carrier: CarrierConfig,
    pub motion: MotionWaveform,
    #[serde(default)]
    pub noise: NoiseConfig,
    #[serde(default)]
    pub antennas: AntennaConfig,
    #[serde(default)]
    pub radar: RadarConfig,
    #[serde(default)]
    pub target: TargetConfig,
    #[serde(default)]
    pub statics: Vec<Reflector>,
    #[serde(default)]
    pub front_end: FrontEndConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub physio: Option<PhysioConfig>,
}

fn default_duration() -> f64 {
    30.0
}
fn default_sample_rate() -> f64 {
    100.0
}
fn default_trials() -> usize {
    5
}
fn default_tx() -> AntennaKind {
    AntennaKind::LpSingle
}
fn default_rx() -> AntennaKind {
    AntennaKind::CpArray
}
fn default_max_order() -> usize {
    2
}

/// Furniture of the default room: floor, the table under the radar, the
/// stand holding the target and a side wall.
pub fn default_room() -> Vec<Reflector> {
    let mut floor = Reflector::new(
        "floor",
        Vec3::new(1.0, 0.0, 0.0),
        Vec3::new(0.0, 0.0, 1.0),
        (4.0, 3.0),
        ReflectorKind::Static,
    );
    floor.roughness_height_m = 0.001;
    floor.reflection_magnitude = 0.4;
    let mut table = Reflector::new(
        "table",
        Vec3::new(0.2, 0.0, 0.75),
        Vec3::new(0.0, 0.0, 1.0),
        (0.8, 0.6),
        ReflectorKind::Static,
    );
    table.reflection_magnitude = 0.3;
    let mut stand = Reflector::new(
        "stand",
        Vec3::new(1.35, 0.0, 0.5),
        Vec3::new(0.0, 0.0, 1.0),
        (0.5, 0.5),
        ReflectorKind::Static,
    );
    stand.reflection_magnitude = 0.3;
    let mut wall = Reflector::new(
        "side-wall",
        Vec3::new(1.0, 1.5, 1.2),
        Vec3::new(0.0, -1.0, 0.0),
        (4.0, 2.4),
        ReflectorKind::Static,
    );
    wall.roughness_height_m = 0.005;
    wall.reflection_magnitude = 0.5;
    vec![floor, table, stand, wall]
}

impl ScenarioConfig {
    /// The actuator bench: 2 cm, 5.8 s sinusoid on a foil-covered plate.
    pub fn actuator() -> Self {
        ScenarioConfig {
            seed: 2013,
            duration_s: default_duration(),
            sample_rate_hz: default_sample_rate(),
            trials: default_trials(),
            tx_kind: default_tx(),
            rx_kind: default_rx(),
            max_order: default_max_order(),
            carrier: CarrierConfig::default(),
            motion: MotionWaveform::Sinusoid {
                amplitude_m: 0.02,
                period_s: 5.8,
            },
            noise: NoiseConfig {
                i_std: 0.25,
                q_std: 0.25,
                ..NoiseConfig::default()
            },
            antennas: AntennaConfig::default(),
            radar: RadarConfig::default(),
            target: TargetConfig::default(),
            statics: default_room(),
            front_end: FrontEndConfig::default(),
            analysis: AnalysisConfig::default(),
            physio: None,
        }
    }

    /// A seated subject; the motion is replaced per session.
    pub fn physio() -> Self {
        let p = PhysioConfig::default();
        ScenarioConfig {
            trials: 1,
            duration_s: p.session_s,
            motion: MotionWaveform::TwoTone {
                resp_amplitude_m: p.resp_amp_mm * 1e-3,
                resp_rate_hz: p.resp_rate_bpm / 60.0,
                heart_amplitude_m: p.heart_amp_mm * 1e-3,
                heart_rate_hz: p.heart_rate_bpm / 60.0,
            },
            target: TargetConfig {
                extent_m: (0.3, 0.3),
                roughness_height_m: 0.02,
                reflection_magnitude: 0.6,
                depolarization_fraction: 0.5,
                ..TargetConfig::default()
            },
            physio: Some(p),
            ..Self::actuator()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(config_err(name, format!("must be positive, got {v}")))
            }
        };
        if self.seed > i64::MAX as u64 {
            return Err(config_err("seed", "must fit a signed 64-bit TOML integer"));
        }
        positive("duration_s", self.duration_s)?;
        positive("sample_rate_hz", self.sample_rate_hz)?;
        if self.trials == 0 {
            return Err(config_err("trials", "must be at least 1"));
        }
        if !(1..=3).contains(&self.max_order) {
            return Err(config_err("max_order", "must be 1, 2 or 3"));
        }
        self.carrier
            .validate()
            .map_err(|e| config_err("carrier", e.to_string()))?;
        self.motion
            .validate()
            .map_err(|e| config_err("motion", e.to_string()))?;
        for (name, v) in [("noise.i_std", self.noise.i_std), ("noise.q_std", self.noise.q_std)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(config_err(name, "must be non-negative"));
            }
        }
        let a = &self.antennas;
        if a.lp.is_circular() {
            return Err(config_err("antennas.lp", "must be a linear polarization"));
        }
        if !a.cp_tx.is_circular() || !a.cp_rx.is_circular() {
            return Err(config_err("antennas.cp_tx/cp_rx", "must be circular"));
        }
        for (name, h) in [
            ("antennas.single_hpbw_deg", a.single_hpbw_deg),
            ("antennas.array_hpbw_deg", a.array_hpbw_deg),
        ] {
            if !(h > 0.0 && h < 180.0) {
                return Err(config_err(name, "must lie in (0, 180)"));
            }
        }
        if !a.peak_gain_dbi.is_finite() {
            return Err(config_err("antennas.peak_gain_dbi", "must be finite"));
        }
        positive("radar.spacing_m", self.radar.spacing_m)?;
        if !self.radar.center_m.is_finite() || self.radar.boresight.norm() < 1e-9 {
            return Err(config_err("radar.boresight", "must be a finite non-zero vector"));
        }
        positive("target.distance_m", self.target.distance_m)?;
        if !(self.target.depression_deg.abs() < 90.0) {
            return Err(config_err("target.depression_deg", "must lie in (-90, 90)"));
        }
        for r in &self.statics {
            if r.kind != ReflectorKind::Static {
                return Err(config_err(format!("statics.{}", r.id), "kind must be static"));
            }
            r.validate()
                .map_err(|e| config_err(format!("statics.{}", r.id), e.to_string()))?;
        }
        self.front_end.isolation_db.validate()?;
        if !(self.front_end.saturation_power_w > 0.0) {
            return Err(config_err("front_end.saturation_power_w", "must be positive (inf disables)"));
        }
        positive("front_end.reference_power_w", self.front_end.reference_power_w)?;
        if self.analysis.zero_pad == 0 {
            return Err(config_err("analysis.zero_pad", "must be at least 1"));
        }
        let (lo, hi) = self.analysis.noise_band_hz;
        if !(lo >= 0.0 && lo < hi && hi <= self.sample_rate_hz / 2.0) {
            return Err(config_err("analysis.noise_band_hz", "must be an ordered band below Nyquist"));
        }
        let (lo, hi) = self.analysis.fundamental_band_hz;
        if !(lo >= 0.0 && lo < hi) {
            return Err(config_err("analysis.fundamental_band_hz", "must be an ordered band"));
        }
        if let Some(p) = &self.physio {
            p.validate(self.sample_rate_hz)?;
        }
        // Full geometric check for the configured pair.
        self.scene(self.tx_kind, self.rx_kind)?
            .validate()
            .map_err(|e| config_err("scene", e.to_string()))
    }

    pub fn scene(&self, tx: AntennaKind, rx: AntennaKind) -> Result<Scene> {
        let boresight = self.radar.boresight.normalized();
        Ok(Scene {
            tx: Station {
                antenna: self.antennas.spec(tx, self.antennas.cp_tx),
                position_m: self.radar.tx_position(),
                boresight,
            },
            rx: Station {
                antenna: self.antennas.spec(rx, self.antennas.cp_rx),
                position_m: self.radar.rx_position(),
                boresight,
            },
            target: self.target.reflector(&self.radar),
            motion: self.motion.clone(),
            statics: self.statics.clone(),
            max_order: self.max_order,
            front_end: self.front_end.front_end(tx, rx),
        })
    }
}

impl PhysioConfig {
    fn validate(&self, fs: f64) -> Result<()> {
        let f = |name: &str| format!("physio.{name}");
        if self.subjects == 0 {
            return Err(config_err(f("subjects"), "must be at least 1"));
        }
        for (name, v) in [
            ("session_s", self.session_s),
            ("resp_rate_bpm", self.resp_rate_bpm),
            ("resp_amp_mm", self.resp_amp_mm),
            ("heart_rate_bpm", self.heart_rate_bpm),
            ("window_s", self.window_s),
            ("step_s", self.step_s),
            ("tolerance", self.tolerance),
            ("resp_lowpass_hz", self.resp_lowpass_hz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(f(name), "must be positive"));
            }
        }
        if !(self.heart_amp_mm >= 0.0) {
            return Err(config_err(f("heart_amp_mm"), "must be non-negative"));
        }
        if !(0.0..=0.2).contains(&self.hrv_jitter_fraction) {
            return Err(config_err(f("hrv_jitter_fraction"), "must lie in [0, 0.2]"));
        }
        if !(0.0..0.5).contains(&self.subject_spread) {
            return Err(config_err(f("subject_spread"), "must lie in [0, 0.5)"));
        }
        if self.distances_m.is_empty() || self.distances_m.iter().any(|d| !(*d > 0.0)) {
            return Err(config_err(f("distances_m"), "must be a non-empty list of positive values"));
        }
        if self.window_s > self.session_s {
            return Err(config_err(f("window_s"), "longer than the session"));
        }
        let nyq = fs / 2.0;
        for (name, (lo, hi)) in [
            ("heart_band_hz", self.heart_band_hz),
            ("resp_search_hz", self.resp_search_hz),
        ] {
            if !(lo > 0.0 && lo < hi && hi < nyq) {
                return Err(config_err(f(name), "must be an ordered band below Nyquist"));
            }
        }
        if self.filter_order == 0 {
            return Err(config_err(f("filter_order"), "must be at least 1"));
        }
        Ok(())
    }
}

impl fmt::Display for ScenarioConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}, seed {}", self.tx_kind, self.rx_kind, self.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        ScenarioConfig::actuator().validate().unwrap();
        ScenarioConfig::physio().validate().unwrap();
    }

    #[test]
    fn minimal_file_uses_defaults() {
        let cfg = ScenarioConfig::from_toml(
            r#"
            [motion]
            kind = "sinusoid"
            amplitude_m = 0.02
            period_s = 5.8
            "#,
        )
        .unwrap();
        assert_eq!(cfg.duration_s, 30.0);
        assert_eq!(cfg.sample_rate_hz, 100.0);
        assert_eq!(cfg.trials, 5);
    }

    #[test]
    fn errors_name_the_field() {
        let mut cfg = ScenarioConfig::actuator();
        cfg.trials = 0;
        assert!(cfg.validate().unwrap_err().to_string().contains("trials"));
        let mut cfg = ScenarioConfig::actuator();
        cfg.antennas.cp_rx = Polarization::LpVertical;
        assert!(cfg.validate().unwrap_err().to_string().contains("cp_rx"));
        let err = ScenarioConfig::from_toml("bogus = 1\n[motion]\nkind=\"sinusoid\"\namplitude_m=0.01\nperiod_s=4.0\n")
            .unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn isolation_is_order_free() {
        let t = IsolationTable::default();
        for a in AntennaKind::ALL {
            for b in AntennaKind::ALL {
                assert_eq!(t.get(a, b), t.get(b, a));
                assert!(t.get(a, b).is_some());
            }
        }
        assert_eq!(t.get(AntennaKind::CpArray, AntennaKind::LpSingle), Some(36.29));
    }

    #[test]
    fn toml_round_trip() {
        for cfg in [ScenarioConfig::actuator(), ScenarioConfig::physio()] {
            let text = cfg.to_toml().unwrap();
            assert_eq!(ScenarioConfig::from_toml(&text).unwrap(), cfg);
        }
    }
}
