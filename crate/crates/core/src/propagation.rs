//! Bistatic link budget, flat-plate RCS, Rayleigh roughness and image-method
//! multipath between a Tx antenna, a moving target plate and static
//! reflectors.
//!
//! Field amplitudes are in √W: `|a|²` is the power delivered to a matched,
//! polarization-ideal receiver, multiplied by the polarization factor `ρ`.
//! Phases follow `exp(-jkL)` for a path of length `L`, so a target moving
//! towards the radar advances the baseband phase by `4πx/λ`.
//!
//! Every static bounce and the target scattering add a phase of π (metal-like
//! reflection). Occlusion is not modelled: any specular path whose bounce
//! points land on the finite reflector faces is kept.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::antenna::{
    pattern_gain, polarization_mismatch, reflect_polarization, AntennaSpec, JonesVector,
    SurfaceKind, DEFAULT_DEPOLARIZATION,
};
use crate::geometry::Vec3;
use crate::radar::{check_nyquist, sample_count, BasebandIQ, CarrierConfig, MotionWaveform, NoiseSpec};
use crate::{Error, Result};

pub const DEFAULT_MAX_ORDER: usize = 2;

const GEOM_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReflectorKind {
    TargetPlate,
    Static,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Roughness {
    Smooth,
    Rough,
}

fn default_reflection_magnitude() -> f64 {
    1.0
}

fn default_depolarization() -> f64 {
    DEFAULT_DEPOLARIZATION
}

/// A finite rectangular reflector. Only its front face (the side `normal`
/// points to) reflects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Reflector {
    pub id: String,
    pub center_m: Vec3,
    pub normal: Vec3,
    /// (width, height); the width axis is horizontal unless the reflector
    /// itself is horizontal, in which case it is +x.
    pub extent_m: (f64, f64),
    #[serde(default)]
    pub roughness_height_m: f64,
    pub kind: ReflectorKind,
    #[serde(default = "default_reflection_magnitude")]
    pub reflection_magnitude: f64,
    #[serde(default = "default_depolarization")]
    pub depolarization_fraction: f64,
}

impl Reflector {
    pub fn new(
        id: impl Into<String>,
        center_m: Vec3,
        normal: Vec3,
        extent_m: (f64, f64),
        kind: ReflectorKind,
    ) -> Self {
        Reflector {
            id: id.into(),
            center_m,
            normal: normal.normalized(),
            extent_m,
            roughness_height_m: 0.0,
            kind,
            reflection_magnitude: 1.0,
            depolarization_fraction: DEFAULT_DEPOLARIZATION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.center_m.is_finite() && self.normal.is_finite()) {
            return Err(Error::NonFinite("reflector geometry"));
        }
        if (self.normal.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::invalid("normal", format!("{} is not a unit vector", self.id)));
        }
        if !(self.extent_m.0 > 0.0 && self.extent_m.1 > 0.0) {
            return Err(Error::invalid("extent_m", format!("{} must be positive", self.id)));
        }
        if !(self.roughness_height_m >= 0.0 && self.roughness_height_m.is_finite()) {
            return Err(Error::invalid("roughness_height_m", "must be non-negative"));
        }
        if !(0.0..=1.0).contains(&self.reflection_magnitude) {
            return Err(Error::invalid("reflection_magnitude", "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.depolarization_fraction) {
            return Err(Error::invalid("depolarization_fraction", "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// In-plane (width, height) unit axes.
    pub fn axes(&self) -> (Vec3, Vec3) {
        let up = Vec3::new(0.0, 0.0, 1.0);
        let w = if self.normal.dot(up).abs() < 0.9 {
            up.cross(self.normal).normalized()
        } else {
            let x = Vec3::new(1.0, 0.0, 0.0);
            (x - self.normal * x.dot(self.normal)).normalized()
        };
        (w, self.normal.cross(w))
    }

    fn contains(&self, p: Vec3) -> bool {
        let (w, h) = self.axes();
        let d = p - self.center_m;
        d.dot(self.normal).abs() < 1e-6
            && d.dot(w).abs() <= self.extent_m.0 / 2.0 + GEOM_EPS
            && d.dot(h).abs() <= self.extent_m.1 / 2.0 + GEOM_EPS
    }

    fn in_front(&self, p: Vec3) -> bool {
        (p - self.center_m).dot(self.normal) > GEOM_EPS
    }

    fn mirror(&self, p: Vec3) -> Vec3 {
        p.mirror(self.center_m, self.normal)
    }
}

/// An antenna placed in the room. All stations share the same transverse
/// polarization frame (x horizontal, y vertical).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Station {
    pub antenna: AntennaSpec,
    pub position_m: Vec3,
    pub boresight: Vec3,
}

impl Station {
    fn gain_towards(&self, p: Vec3) -> f64 {
        pattern_gain(&self.antenna, self.boresight.angle_to(p - self.position_m))
    }
}

/// Receiver non-idealities that do not depend on the target: Tx→Rx leakage,
/// ambient interference captured by the Rx antenna, gain compression from
/// strong unmodulated input, and the noise these couple into baseband.
///
/// The default is an ideal linear receiver with a 1 W reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrontEnd {
    /// Tx→Rx isolation; `None` disables leakage.
    pub isolation_db: Option<f64>,
    pub leakage_phase_rad: f64,
    /// Input power at which small-signal gain halves; `None` is linear.
    pub saturation_power_w: Option<f64>,
    /// Ambient 2.4 GHz interference incident power density expressed as the
    /// power an isotropic matched antenna would capture.
    pub ambient_power_w: f64,
    pub ambient_polarization: JonesVector,
    /// Baseband noise variance per watt of captured ambient power.
    pub ambient_noise_coupling: f64,
    /// Baseband noise variance per watt of leakage (phase-noise proxy).
    pub leakage_noise_coupling: f64,
    /// Received power mapped to unit baseband amplitude.
    pub reference_power_w: f64,
}

impl Default for FrontEnd {
    fn default() -> Self {
        FrontEnd {
            isolation_db: None,
            leakage_phase_rad: 0.0,
            saturation_power_w: None,
            ambient_power_w: 0.0,
            ambient_polarization: JonesVector::lp_vertical(),
            ambient_noise_coupling: 0.0,
            leakage_noise_coupling: 0.0,
            reference_power_w: 1.0,
        }
    }
}

impl FrontEnd {
    pub fn validate(&self) -> Result<()> {
        if !(self.reference_power_w > 0.0 && self.reference_power_w.is_finite()) {
            return Err(Error::invalid("reference_power_w", "must be positive"));
        }
        if let Some(p) = self.saturation_power_w {
            if !(p > 0.0) {
                return Err(Error::invalid("saturation_power_w", "must be positive"));
            }
        }
        for (name, v) in [
            ("ambient_power_w", self.ambient_power_w),
            ("ambient_noise_coupling", self.ambient_noise_coupling),
            ("leakage_noise_coupling", self.leakage_noise_coupling),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be non-negative"));
            }
        }
        if matches!(self.isolation_db, Some(v) if !v.is_finite()) {
            return Err(Error::NonFinite("isolation_db"));
        }
        Ok(())
    }

    /// Leakage phasor at the Rx input, √W.
    pub fn leakage(&self, tx_power_w: f64) -> Complex64 {
        match self.isolation_db {
            Some(iso) => Complex64::from_polar(
                (tx_power_w * 10f64.powf(-iso / 10.0)).sqrt(),
                self.leakage_phase_rad,
            ),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn ambient_captured_w(&self, rx: &AntennaSpec) -> f64 {
        self.ambient_power_w
            * rx.mean_gain()
            * polarization_mismatch(&self.ambient_polarization, &rx.polarization)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub tx: Station,
    pub rx: Station,
    pub target: Reflector,
    /// Displacement of the target along its normal (positive = towards the
    /// face it reflects from).
    pub motion: MotionWaveform,
    pub statics: Vec<Reflector>,
    pub max_order: usize,
    pub front_end: FrontEnd,
}

impl Scene {
    pub fn validate(&self) -> Result<()> {
        if (self.tx.position_m - self.rx.position_m).norm() < GEOM_EPS {
            return Err(Error::DegenerateGeometry("Tx and Rx coincide".into()));
        }
        for s in [&self.tx, &self.rx] {
            s.antenna.validate()?;
            if !s.position_m.is_finite() || (s.boresight.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::invalid("boresight", "must be a finite unit vector"));
            }
        }
        if self.target.kind != ReflectorKind::TargetPlate {
            return Err(Error::invalid("target", "kind must be target-plate"));
        }
        if self.statics.iter().any(|r| r.kind != ReflectorKind::Static) {
            return Err(Error::invalid("statics", "exactly one target-plate is allowed"));
        }
        for r in std::iter::once(&self.target).chain(&self.statics) {
            r.validate()?;
            for (name, s) in [("Tx", &self.tx), ("Rx", &self.rx)] {
                if r.contains(s.position_m) {
                    return Err(Error::DegenerateGeometry(format!(
                        "{name} lies on reflector {}",
                        r.id
                    )));
                }
            }
        }
        self.motion.validate()?;
        self.front_end.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathContribution {
    pub order: usize,
    pub reflector_ids: Vec<String>,
    pub path_length_m: f64,
    pub complex_amplitude: Complex64,
    pub polarization_at_rx: JonesVector,
    pub includes_target: bool,
    /// Images of Tx (through the bounces before the target) and of Rx
    /// (through the bounces after it). For target paths the length is
    /// `|P - a| + |P - b|` for target position `P`.
    anchors: Option<(Vec3, Vec3)>,
}

impl PathContribution {
    pub fn power_w(&self) -> f64 {
        self.complex_amplitude.norm_sqr()
    }

    /// Path length with the target centre moved to `target_center`.
    pub fn length_with_target_at(&self, target_center: Vec3) -> f64 {
        match self.anchors {
            Some((a, b)) => (target_center - a).norm() + (target_center - b).norm(),
            None => self.path_length_m,
        }
    }
}

/// `h_c = λ / (8 sin θi)`, with `θi` measured from the surface plane.
pub fn rayleigh_critical_height(wavelength_m: f64, incidence_rad: f64) -> Result<f64> {
    if !(wavelength_m > 0.0 && wavelength_m.is_finite()) {
        return Err(Error::invalid("wavelength_m", "must be positive"));
    }
    if !(incidence_rad > 0.0 && incidence_rad <= PI / 2.0 + 1e-12) {
        return Err(Error::invalid("incidence_rad", "must lie in (0, π/2]"));
    }
    let s = incidence_rad.sin();
    if s <= 0.0 {
        return Err(Error::invalid("incidence_rad", "grazing incidence"));
    }
    Ok(wavelength_m / (8.0 * s))
}

/// Smooth iff `h < h_c`; a tie counts as rough.
pub fn classify_surface(h_m: f64, h_c_m: f64) -> Roughness {
    if h_m < h_c_m {
        Roughness::Smooth
    } else {
        Roughness::Rough
    }
}

/// Specular field attenuation `exp(-2(2πh·sin θi/λ)²)`.
pub fn rayleigh_roughness_factor(h_m: f64, incidence_rad: f64, wavelength_m: f64) -> f64 {
    let g = 2.0 * PI * h_m * incidence_rad.sin() / wavelength_m;
    (-2.0 * g * g).exp()
}

/// `P_r = P_t G_t G_r σ λ² ρ / ((4π)³ R1² R2²)`
#[allow(clippy::too_many_arguments)]
pub fn bistatic_received_power(
    pt_w: f64,
    gt: f64,
    gr: f64,
    sigma_m2: f64,
    wavelength_m: f64,
    rho: f64,
    r1_m: f64,
    r2_m: f64,
) -> Result<f64> {
    for (name, v) in [
        ("pt_w", pt_w),
        ("gt", gt),
        ("gr", gr),
        ("sigma_m2", sigma_m2),
        ("wavelength_m", wavelength_m),
    ] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::invalid(name, "must be non-negative"));
        }
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::invalid("rho", "must lie in [0, 1]"));
    }
    if !(r1_m > 0.0 && r2_m > 0.0) {
        return Err(Error::invalid("distance", "must be positive"));
    }
    let four_pi = 4.0 * PI;
    Ok(pt_w * gt * gr * sigma_m2 * wavelength_m.powi(2) * rho
        / (four_pi.powi(3) * r1_m.powi(2) * r2_m.powi(2)))
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Monostatic physical-optics RCS of a `w × h` plate, rotated by
/// `aspect_rad` about its height axis.
pub fn plate_rcs(extent_m: (f64, f64), wavelength_m: f64, aspect_rad: f64) -> f64 {
    let (w, h) = extent_m;
    let k = 2.0 * PI / wavelength_m;
    4.0 * PI * (w * h).powi(2) / wavelength_m.powi(2) * sinc(k * w * aspect_rad.sin()).powi(2)
}

/// Bistatic form of [`plate_rcs`] for unit propagation directions `d_in`
/// (towards the plate) and `d_out` (away from it). Reduces to [`plate_rcs`]
/// when `d_out = -d_in` lies in the width plane.
pub fn plate_rcs_bistatic(plate: &Reflector, d_in: Vec3, d_out: Vec3, wavelength_m: f64) -> f64 {
    let (w_axis, h_axis) = plate.axes();
    let (w, h) = plate.extent_m;
    let k = 2.0 * PI / wavelength_m;
    let v = (d_out - d_in) * 0.5;
    4.0 * PI * (w * h).powi(2) / wavelength_m.powi(2)
        * sinc(k * w * v.dot(w_axis)).powi(2)
        * sinc(k * h * v.dot(h_axis)).powi(2)
}

struct Leg {
    bounces: Vec<Vec3>,
    anchor: Vec3,
    length: f64,
}

/// Specular route `src → mirrors… → dst` by repeated imaging. `None` if a
/// bounce point misses its reflector face.
fn unfold(src: Vec3, mirrors: &[&Reflector], dst: Vec3) -> Option<Leg> {
    let mut images = Vec::with_capacity(mirrors.len() + 1);
    images.push(src);
    for m in mirrors {
        let last = *images.last().unwrap();
        images.push(m.mirror(last));
    }
    let anchor = *images.last().unwrap();
    let mut bounces = vec![Vec3::default(); mirrors.len()];
    let mut q = dst;
    for i in (0..mirrors.len()).rev() {
        let m = mirrors[i];
        let a = images[i + 1];
        let denom = (q - a).dot(m.normal);
        if denom.abs() < GEOM_EPS {
            return None;
        }
        let t = (m.center_m - a).dot(m.normal) / denom;
        if !(t > 0.0 && t < 1.0) {
            return None;
        }
        let b = a + (q - a) * t;
        if !m.contains(b) {
            return None;
        }
        bounces[i] = b;
        q = b;
    }
    let mut pts = Vec::with_capacity(mirrors.len() + 2);
    pts.push(src);
    pts.extend_from_slice(&bounces);
    pts.push(dst);
    for (i, m) in mirrors.iter().enumerate() {
        if !(m.in_front(pts[i]) && m.in_front(pts[i + 2])) {
            return None;
        }
    }
    Some(Leg {
        bounces,
        anchor,
        length: (dst - anchor).norm(),
    })
}

fn image_through(p: Vec3, mirrors: &[&Reflector]) -> Vec3 {
    mirrors.iter().fold(p, |acc, m| m.mirror(acc))
}

/// Grazing angle of a ray travelling along `d` onto a surface with `normal`.
fn grazing_angle(d: Vec3, normal: Vec3) -> f64 {
    d.normalized().dot(normal).abs().clamp(0.0, 1.0).asin()
}

struct Bounce<'a> {
    reflector: &'a Reflector,
    incoming: Vec3,
}

/// Applies one bounce: returns the field factor (|Γ| × roughness loss) and
/// updates the polarization.
fn bounce(b: &Bounce<'_>, pol: &mut JonesVector, wavelength_m: f64) -> Result<f64> {
    let r = b.reflector;
    let theta = grazing_angle(b.incoming, r.normal);
    let surface = if theta > 0.0 {
        let hc = rayleigh_critical_height(wavelength_m, theta)?;
        match classify_surface(r.roughness_height_m, hc) {
            Roughness::Smooth => SurfaceKind::SmoothSpecular,
            Roughness::Rough => SurfaceKind::Rough {
                depolarization_fraction: r.depolarization_fraction,
            },
        }
    } else {
        SurfaceKind::SmoothSpecular
    };
    *pol = reflect_polarization(pol, surface);
    Ok(r.reflection_magnitude * rayleigh_roughness_factor(r.roughness_height_m, theta, wavelength_m))
}

/// Enumerates specular paths with 1 ..= `max_order` reflections. The target
/// appears at most once per path and no reflector is hit twice in a row.
pub fn trace_paths(
    scene: &Scene,
    carrier: &CarrierConfig,
    max_order: usize,
) -> Result<Vec<PathContribution>> {
    if !(1..=3).contains(&max_order) {
        return Err(Error::invalid("max_order", "must be 1, 2 or 3"));
    }
    scene.validate()?;
    carrier.validate()?;
    let lambda = carrier.wavelength_m();
    let k = 2.0 * PI / lambda;
    let pt = carrier.tx_power_w();

    // index 0 is the target
    let all: Vec<&Reflector> = std::iter::once(&scene.target).chain(&scene.statics).collect();
    let mut sequences: Vec<Vec<usize>> = (0..all.len()).map(|i| vec![i]).collect();
    let mut frontier = sequences.clone();
    for _ in 1..max_order {
        let mut next = Vec::new();
        for seq in &frontier {
            for i in 0..all.len() {
                if Some(&i) == seq.last() || (i == 0 && seq.contains(&0)) {
                    continue;
                }
                let mut s = seq.clone();
                s.push(i);
                next.push(s);
            }
        }
        sequences.extend(next.iter().cloned());
        frontier = next;
    }

    let tx = scene.tx.position_m;
    let rx = scene.rx.position_m;
    let mut paths = Vec::new();
    for seq in sequences {
        let ids: Vec<String> = seq.iter().map(|&i| all[i].id.clone()).collect();
        let contribution = match seq.iter().position(|&i| i == 0) {
            None => {
                let mirrors: Vec<&Reflector> = seq.iter().map(|&i| all[i]).collect();
                let Some(leg) = unfold(tx, &mirrors, rx) else {
                    continue;
                };
                let mut pts = vec![tx];
                pts.extend_from_slice(&leg.bounces);
                pts.push(rx);
                let mut pol = scene.tx.antenna.polarization;
                let mut factor = 1.0;
                for (j, m) in mirrors.iter().enumerate() {
                    let b = Bounce {
                        reflector: m,
                        incoming: pts[j + 1] - pts[j],
                    };
                    factor *= bounce(&b, &mut pol, lambda)?;
                }
                let gt = scene.tx.gain_towards(pts[1]);
                let gr = scene.rx.gain_towards(pts[pts.len() - 2]);
                let mag = (pt * gt * gr).sqrt() * lambda / (4.0 * PI * leg.length) * factor;
                (leg.length, mag, pol, None)
            }
            Some(tpos) => {
                let target = all[0];
                let p = target.center_m;
                let before: Vec<&Reflector> = seq[..tpos].iter().map(|&i| all[i]).collect();
                let after: Vec<&Reflector> = seq[tpos + 1..].iter().map(|&i| all[i]).collect();
                let (Some(leg_in), Some(leg_out)) = (unfold(tx, &before, p), unfold(p, &after, rx))
                else {
                    continue;
                };
                let mut pts = vec![tx];
                pts.extend_from_slice(&leg_in.bounces);
                pts.push(p);
                pts.extend_from_slice(&leg_out.bounces);
                pts.push(rx);
                let prev = pts[tpos];
                let next = pts[tpos + 2];
                if !(target.in_front(prev) && target.in_front(next)) {
                    continue;
                }
                let mut pol = scene.tx.antenna.polarization;
                let mut factor = 1.0;
                for (j, &i) in seq.iter().enumerate() {
                    let b = Bounce {
                        reflector: all[i],
                        incoming: pts[j + 1] - pts[j],
                    };
                    factor *= bounce(&b, &mut pol, lambda)?;
                }
                let d_in = (p - prev).normalized();
                let d_out = (next - p).normalized();
                let sigma = plate_rcs_bistatic(target, d_in, d_out, lambda);
                let gt = scene.tx.gain_towards(pts[1]);
                let gr = scene.rx.gain_towards(pts[pts.len() - 2]);
                let (r1, r2) = (leg_in.length, leg_out.length);
                let four_pi = 4.0 * PI;
                let mag = (pt * gt * gr * sigma * lambda * lambda
                    / (four_pi.powi(3) * r1 * r1 * r2 * r2))
                    .sqrt()
                    * factor;
                let anchor_out = image_through(rx, &after.iter().rev().copied().collect::<Vec<_>>());
                (r1 + r2, mag, pol, Some((leg_in.anchor, anchor_out)))
            }
        };
        let (length, mag, pol, anchors) = contribution;
        let projection = scene.rx.antenna.polarization.inner(&pol);
        let sign = if seq.len() % 2 == 0 { 1.0 } else { -1.0 };
        let amplitude = Complex64::from_polar(mag * sign, -k * length) * projection;
        if !amplitude.is_finite() {
            return Err(Error::NonFinite("path amplitude"));
        }
        paths.push(PathContribution {
            order: seq.len(),
            reflector_ids: ids,
            path_length_m: length,
            complex_amplitude: amplitude,
            polarization_at_rx: pol,
            includes_target: anchors.is_some(),
            anchors,
        });
    }
    Ok(paths)
}

/// Summary of the receiver operating point for a scene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// Constant input phasor (static paths + leakage), √W.
    pub static_phasor: Complex64,
    pub leakage_w: f64,
    pub ambient_w: f64,
    /// Small-signal gain after compression, 1 = linear.
    pub gain: f64,
    /// Extra baseband noise standard deviation from leakage and ambient.
    pub coupled_noise_std: f64,
}

pub fn link_budget(
    scene: &Scene,
    carrier: &CarrierConfig,
    paths: &[PathContribution],
) -> LinkBudget {
    let fe = &scene.front_end;
    let leak = fe.leakage(carrier.tx_power_w());
    let clutter: Complex64 = paths
        .iter()
        .filter(|p| !p.includes_target)
        .map(|p| p.complex_amplitude)
        .sum();
    let ambient = fe.ambient_captured_w(&scene.rx.antenna);
    let blocking = leak.norm_sqr() + clutter.norm_sqr() + ambient;
    let gain = match fe.saturation_power_w {
        Some(psat) => 1.0 / (1.0 + blocking / psat),
        None => 1.0,
    };
    let var = (fe.ambient_noise_coupling * ambient + fe.leakage_noise_coupling * leak.norm_sqr())
        / fe.reference_power_w;
    LinkBudget {
        static_phasor: clutter + leak,
        leakage_w: leak.norm_sqr(),
        ambient_w: ambient,
        gain,
        coupled_noise_std: var.sqrt(),
    }
}

/// Baseband I/Q for a full scene: the coherent sum of all traced paths with
/// the target displaced along its normal, plus leakage, scaled by the
/// front-end gain, rotated by the carrier phase and mapped to unit amplitude
/// at `reference_power_w`.
pub fn compose_baseband(
    scene: &Scene,
    carrier: &CarrierConfig,
    duration_s: f64,
    sample_rate_hz: f64,
    noise: &NoiseSpec,
) -> Result<BasebandIQ> {
    noise.validate()?;
    let n = sample_count(duration_s, sample_rate_hz)?;
    check_nyquist(&scene.motion, sample_rate_hz)?;
    let paths = trace_paths(scene, carrier, scene.max_order)?;
    let budget = link_budget(scene, carrier, &paths);
    let k = 2.0 * PI / carrier.wavelength_m();
    let scale = Complex64::from_polar(
        budget.gain / scene.front_end.reference_power_w.sqrt(),
        carrier.total_phase_rad(),
    );
    let moving: Vec<&PathContribution> = paths.iter().filter(|p| p.includes_target).collect();

    let mut i = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for s in 0..n {
        let t = s as f64 / sample_rate_hz;
        let x = scene.motion.displacement(t);
        if !x.is_finite() {
            return Err(Error::NonFinite("motion sample"));
        }
        let center = scene.target.center_m + scene.target.normal * x;
        let mut sum = budget.static_phasor;
        for p in &moving {
            let dl = p.length_with_target_at(center) - p.path_length_m;
            sum += p.complex_amplitude * Complex64::from_polar(1.0, -k * dl);
        }
        let v = sum * scale;
        i.push(carrier.i_amplitude * v.re);
        q.push(carrier.q_amplitude * v.im);
    }

    let extra = budget.coupled_noise_std;
    let effective = NoiseSpec {
        i_std: noise.i_std.hypot(extra),
        q_std: noise.q_std.hypot(extra),
        ..noise.clone()
    };
    effective.apply(&mut i, &mut q);
    let mut iq = BasebandIQ::new(i, q, sample_rate_hz)?;
    iq.i_amplitude = carrier.i_amplitude;
    iq.q_amplitude = carrier.q_amplitude;
    Ok(iq)
}
