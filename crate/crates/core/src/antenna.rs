//! Antenna polarization, gain patterns, the sequentially rotated 2×2 array
//! and synthesis of its corporate feed network.
//!
//! Polarization convention: Jones vectors `(ex, ey)` are expressed in a fixed
//! transverse basis (x horizontal, y vertical) under `exp(+jωt)` time
//! dependence. RHCP is `(1, -j)/√2`, LHCP is `(1, +j)/√2`. The mismatch
//! factor between a wave `w` and a receive antenna `r` is `|⟨r, w⟩|²` with
//! the Hermitian inner product `⟨a, b⟩ = a_x* b_x + a_y* b_y`, so an antenna
//! accepts exactly the wave that carries its own label.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::geometry::Vec3;
use crate::{Error, Result};

/// Default fraction of reflected power scattered into an unpolarized
/// component by a rough surface.
pub const DEFAULT_DEPOLARIZATION: f64 = 0.3;

/// Back-hemisphere floor of the cosⁿ pattern, dB relative to peak.
pub const BACK_LOBE_DB: f64 = -20.0;

/// Axial ratios below this are classified as circular.
pub const CP_AXIAL_RATIO_DB: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JonesVector {
    pub ex: Complex64,
    pub ey: Complex64,
}

impl JonesVector {
    /// Normalizes `(ex, ey)` to unit power.
    pub fn new(ex: Complex64, ey: Complex64) -> Result<Self> {
        let p = ex.norm_sqr() + ey.norm_sqr();
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::invalid("jones vector", "must have finite non-zero power"));
        }
        let s = 1.0 / p.sqrt();
        Ok(JonesVector { ex: ex * s, ey: ey * s })
    }

    pub fn lp_horizontal() -> Self {
        JonesVector {
            ex: Complex64::new(1.0, 0.0),
            ey: Complex64::new(0.0, 0.0),
        }
    }

    pub fn lp_vertical() -> Self {
        JonesVector {
            ex: Complex64::new(0.0, 0.0),
            ey: Complex64::new(1.0, 0.0),
        }
    }

    /// Linear polarization tilted `angle_rad` from horizontal towards vertical.
    pub fn linear(angle_rad: f64) -> Self {
        JonesVector {
            ex: Complex64::new(angle_rad.cos(), 0.0),
            ey: Complex64::new(angle_rad.sin(), 0.0),
        }
    }

    pub fn rhcp() -> Self {
        JonesVector {
            ex: Complex64::new(FRAC_1_SQRT_2, 0.0),
            ey: Complex64::new(0.0, -FRAC_1_SQRT_2),
        }
    }

    pub fn lhcp() -> Self {
        JonesVector {
            ex: Complex64::new(FRAC_1_SQRT_2, 0.0),
            ey: Complex64::new(0.0, FRAC_1_SQRT_2),
        }
    }

    pub fn power(&self) -> f64 {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    /// `⟨self, other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &JonesVector) -> Complex64 {
        self.ex.conj() * other.ex + self.ey.conj() * other.ey
    }

    /// The orthogonal state `(-ey*, ex*)`.
    pub fn orthogonal(&self) -> JonesVector {
        JonesVector {
            ex: -self.ey.conj(),
            ey: self.ex.conj(),
        }
    }

    /// Components on the (RHCP, LHCP) basis.
    pub fn circular_components(&self) -> (Complex64, Complex64) {
        (
            JonesVector::rhcp().inner(self),
            JonesVector::lhcp().inner(self),
        )
    }

    /// Ratio of polarization-ellipse axes in dB (0 dB = circular, ∞ = linear).
    pub fn axial_ratio_db(&self) -> f64 {
        let (r, l) = self.circular_components();
        axial_ratio_db(r.norm(), l.norm())
    }

    /// Positive for left-handed, negative for right-handed, zero for linear.
    pub fn handedness(&self) -> f64 {
        let (r, l) = self.circular_components();
        l.norm_sqr() - r.norm_sqr()
    }

    fn rotated(&self, angle_rad: f64) -> JonesVector {
        let (s, c) = angle_rad.sin_cos();
        JonesVector {
            ex: self.ex * c - self.ey * s,
            ey: self.ex * s + self.ey * c,
        }
    }

    fn scaled(&self, a: Complex64) -> JonesVector {
        JonesVector {
            ex: self.ex * a,
            ey: self.ey * a,
        }
    }
}

/// AR in dB from the magnitudes of the two circular components.
pub fn axial_ratio_db(a: f64, b: f64) -> f64 {
    let (major, minor) = (a + b, (a - b).abs());
    if minor == 0.0 {
        return f64::INFINITY;
    }
    20.0 * (major / minor).log10()
}

/// Power fraction a receive antenna with polarization `rx` captures from a
/// wave with polarization `tx`. Symmetric in its arguments.
pub fn polarization_mismatch(tx: &JonesVector, rx: &JonesVector) -> f64 {
    (rx.inner(tx).norm_sqr() / (tx.power() * rx.power())).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SurfaceKind {
    SmoothSpecular,
    /// A fraction `depolarization_fraction` of the reflected power loses its
    /// polarization. Unpolarized power splits evenly, so half of it lands in
    /// the state orthogonal to the specular reflection.
    Rough { depolarization_fraction: f64 },
}

/// Polarization of a wave after a specular bounce.
///
/// The bounce reverses propagation, so in the fixed transverse basis the
/// relative phase of `ey` to `ex` is conjugated: circular states change hand
/// and linear states are preserved. On rough surfaces the specular state is
/// mixed with its orthogonal state:
/// `out = √(1-f/2)·s + √(f/2)·s⊥`.
pub fn reflect_polarization(incident: &JonesVector, surface: SurfaceKind) -> JonesVector {
    let specular = if incident.ex.norm() > 0.0 {
        let ref_phase = incident.ex / incident.ex.norm();
        JonesVector {
            ex: incident.ex.conj() * ref_phase * ref_phase,
            ey: incident.ey.conj() * ref_phase * ref_phase,
        }
    } else {
        let ref_phase = incident.ey / incident.ey.norm();
        JonesVector {
            ex: incident.ex.conj() * ref_phase * ref_phase,
            ey: incident.ey.conj() * ref_phase * ref_phase,
        }
    };
    match surface {
        SurfaceKind::SmoothSpecular => specular,
        SurfaceKind::Rough {
            depolarization_fraction,
        } => {
            let f = depolarization_fraction.clamp(0.0, 1.0);
            let a = (1.0 - f / 2.0).sqrt();
            let b = (f / 2.0).sqrt();
            let o = specular.orthogonal();
            let mixed = JonesVector {
                ex: specular.ex * a + o.ex * b,
                ey: specular.ey * a + o.ey * b,
            };
            JonesVector::new(mixed.ex, mixed.ey).unwrap_or(specular)
        }
    }
}

/// The four fabricated antenna types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntennaKind {
    LpSingle,
    CpSingle,
    LpArray,
    CpArray,
}

impl AntennaKind {
    pub const ALL: [AntennaKind; 4] = [
        AntennaKind::LpSingle,
        AntennaKind::CpSingle,
        AntennaKind::LpArray,
        AntennaKind::CpArray,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AntennaKind::LpSingle => "lp-single",
            AntennaKind::CpSingle => "cp-single",
            AntennaKind::LpArray => "lp-array",
            AntennaKind::CpArray => "cp-array",
        }
    }

    pub fn is_circular(self) -> bool {
        matches!(self, AntennaKind::CpSingle | AntennaKind::CpArray)
    }

    pub fn is_array(self) -> bool {
        matches!(self, AntennaKind::LpArray | AntennaKind::CpArray)
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for AntennaKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AntennaKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AntennaKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid("antenna kind", format!("unknown kind {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AntennaSpec {
    pub polarization: JonesVector,
    pub peak_gain_dbi: f64,
    pub hpbw_deg: f64,
}

impl AntennaSpec {
    pub fn new(polarization: JonesVector, peak_gain_dbi: f64, hpbw_deg: f64) -> Result<Self> {
        let spec = AntennaSpec {
            polarization,
            peak_gain_dbi,
            hpbw_deg,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.peak_gain_dbi.is_finite() {
            return Err(Error::invalid("peak_gain_dbi", "must be finite"));
        }
        hpbw_to_exponent(self.hpbw_deg).map(|_| ())
    }

    /// Measured defaults: 5.8 dBi peak, 81° HPBW for singles and 37° for
    /// arrays, vertical LP or the requested CP sense.
    pub fn for_kind(kind: AntennaKind, cp_sense: JonesVector) -> Self {
        let polarization = if kind.is_circular() {
            cp_sense
        } else {
            JonesVector::lp_vertical()
        };
        let hpbw_deg = if kind.is_array() { 37.0 } else { 81.0 };
        AntennaSpec {
            polarization,
            peak_gain_dbi: 5.8,
            hpbw_deg,
        }
    }

    pub fn peak_gain_linear(&self) -> f64 {
        10f64.powf(self.peak_gain_dbi / 10.0)
    }

    pub fn pattern_exponent(&self) -> f64 {
        hpbw_to_exponent(self.hpbw_deg).expect("validated hpbw")
    }

    /// Gain averaged over the full sphere (equals radiation efficiency for a
    /// physical antenna).
    pub fn mean_gain(&self) -> f64 {
        let n = self.pattern_exponent();
        let floor = 10f64.powf(BACK_LOBE_DB / 10.0);
        // cosⁿθ meets the floor at cos θf = floor^(1/n)
        let cf = floor.powf(1.0 / n);
        let front = (1.0 - cf.powf(n + 1.0)) / (n + 1.0) + floor * cf;
        self.peak_gain_linear() * (front + floor) / 2.0
    }
}

/// Exponent `n` such that `cosⁿ(hpbw/2) = 1/2`.
pub fn hpbw_to_exponent(hpbw_deg: f64) -> Result<f64> {
    if !(hpbw_deg > 0.0 && hpbw_deg < 180.0) {
        return Err(Error::invalid("hpbw_deg", "must lie in (0, 180)"));
    }
    let half = (hpbw_deg / 2.0).to_radians();
    Ok(0.5f64.ln() / half.cos().ln())
}

/// Linear power gain `G_peak·max(cosⁿθ, floor)` in front and the floor
/// behind the antenna.
pub fn pattern_gain(spec: &AntennaSpec, theta_rad: f64) -> f64 {
    let floor = 10f64.powf(BACK_LOBE_DB / 10.0);
    let rel = if theta_rad < PI / 2.0 {
        theta_rad.cos().powf(spec.pattern_exponent()).max(floor)
    } else {
        floor
    };
    spec.peak_gain_linear() * rel
}

/// Element positions of a planar array, in the array's own frame with
/// boresight along +z.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    pub positions: Vec<Vec3>,
}

impl ArrayGeometry {
    /// 2×2 grid in the xy-plane, elements ordered counter-clockwise from the
    /// lower-left corner as seen from boresight.
    pub fn square_2x2(spacing_m: f64) -> Self {
        let h = spacing_m / 2.0;
        ArrayGeometry {
            positions: vec![
                Vec3::new(-h, -h, 0.0),
                Vec3::new(h, -h, 0.0),
                Vec3::new(h, h, 0.0),
                Vec3::new(-h, h, 0.0),
            ],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.positions.len() != 4 {
            return Err(Error::invalid("array geometry", "expected 4 elements"));
        }
        if self.positions.iter().any(|p| p.z.abs() > 1e-12) {
            return Err(Error::invalid("array geometry", "elements must lie in the z = 0 plane"));
        }
        Ok(())
    }
}

/// Far field of the array split into the co-polar (LHCP, the sense produced
/// by a counter-clockwise 0/90/180/270° rotation) and cross-polar (RHCP)
/// components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPair {
    pub co: Complex64,
    pub cross: Complex64,
}

impl FieldPair {
    pub fn magnitude(&self) -> f64 {
        (self.co.norm_sqr() + self.cross.norm_sqr()).sqrt()
    }

    pub fn power(&self) -> f64 {
        self.co.norm_sqr() + self.cross.norm_sqr()
    }

    pub fn axial_ratio_db(&self) -> f64 {
        axial_ratio_db(self.co.norm(), self.cross.norm())
    }
}

/// Sums the four element fields in direction `(theta, phi)`.
///
/// Each element is physically rotated by its feed phase (sequential
/// rotation), carries polarization `element` and field pattern
/// `cos^(n/2) θ` with `n = element_exponent`.
pub fn array_factor(
    geometry: &ArrayGeometry,
    wavelength_m: f64,
    phases_deg: &[f64],
    element: &JonesVector,
    element_exponent: f64,
    theta_rad: f64,
    phi_rad: f64,
) -> Result<FieldPair> {
    geometry.validate()?;
    if phases_deg.len() != geometry.positions.len() {
        return Err(Error::invalid("phases_deg", "one phase per element"));
    }
    if !(wavelength_m > 0.0) {
        return Err(Error::invalid("wavelength_m", "must be positive"));
    }
    let k = 2.0 * PI / wavelength_m;
    let dir = Vec3::new(
        theta_rad.sin() * phi_rad.cos(),
        theta_rad.sin() * phi_rad.sin(),
        theta_rad.cos(),
    );
    let element_field = if theta_rad < PI / 2.0 {
        theta_rad.cos().powf(element_exponent / 2.0)
    } else {
        0.0
    };
    let mut total = JonesVector {
        ex: Complex64::new(0.0, 0.0),
        ey: Complex64::new(0.0, 0.0),
    };
    for (pos, &phase_deg) in geometry.positions.iter().zip(phases_deg) {
        let rot = phase_deg.to_radians();
        let excitation = Complex64::from_polar(element_field, rot + k * pos.dot(dir));
        let e = element.rotated(rot).scaled(excitation);
        total.ex += e.ex;
        total.ey += e.ey;
    }
    let (r, l) = total.circular_components();
    Ok(FieldPair { co: l, cross: r })
}

/// Branch impedance multipliers `Z_i / Z_0` of the equal-split corporate
/// feed: the input divides 1:3, the 3/4 branch divides 1:2 and the last
/// half splits evenly.
pub const BRANCH_RATIOS: [(i64, i64); 6] = [(4, 1), (4, 3), (4, 1), (2, 1), (4, 1), (4, 1)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedNetwork {
    pub z0_ohm: f64,
    /// `Z1 ..= Z6`
    pub branch_impedances_ohm: [f64; 6],
    pub transformer_impedance_ohm: f64,
    /// Widths of `Z0, Z1 ..= Z6` and the transformer, when a substrate has
    /// been applied.
    pub line_widths_mm: Option<Vec<f64>>,
}

impl FeedNetwork {
    pub fn branch_ratio(i: usize) -> Ratio<i64> {
        let (n, d) = BRANCH_RATIOS[i - 1];
        Ratio::new(n, d)
    }

    /// T-junctions as `(input, [out_a, out_b])` branch indices (0 = feed line).
    pub fn junctions() -> [(usize, [usize; 2]); 3] {
        [(0, [1, 2]), (2, [3, 4]), (4, [5, 6])]
    }

    /// `(label, impedance)` rows: Z0, Z1..Z6, then the quarter-wave
    /// transformer.
    pub fn rows(&self) -> Vec<(String, f64)> {
        let mut rows = vec![("Z0".to_string(), self.z0_ohm)];
        for (i, z) in self.branch_impedances_ohm.iter().enumerate() {
            rows.push((format!("Z{}", i + 1), *z));
        }
        rows.push(("T".to_string(), self.transformer_impedance_ohm));
        rows
    }

    pub fn with_line_widths(mut self, substrate: &SubstrateSpec) -> Result<Self> {
        let widths = self
            .rows()
            .into_iter()
            .map(|(_, z)| microstrip_width(z, substrate))
            .collect::<Result<Vec<_>>>()?;
        self.line_widths_mm = Some(widths);
        Ok(self)
    }
}

/// Impedances of the equal-power feed for reference impedance `z0`, with a
/// quarter-wave transformer from `z0` to 50 Ω.
pub fn feed_impedances(z0_ohm: f64) -> Result<FeedNetwork> {
    if !(z0_ohm > 0.0 && z0_ohm.is_finite()) {
        return Err(Error::invalid("z0_ohm", "must be positive"));
    }
    let mut branch = [0.0; 6];
    for (i, z) in branch.iter_mut().enumerate() {
        let (n, d) = BRANCH_RATIOS[i];
        *z = z0_ohm * n as f64 / d as f64;
    }
    Ok(FeedNetwork {
        z0_ohm,
        branch_impedances_ohm: branch,
        transformer_impedance_ohm: (z0_ohm * 50.0).sqrt(),
        line_widths_mm: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubstrateSpec {
    pub epsilon_r: f64,
    pub height_mm: f64,
    pub loss_tangent: f64,
}

impl SubstrateSpec {
    pub fn fr4() -> Self {
        SubstrateSpec {
            epsilon_r: 4.4,
            height_mm: 1.6,
            loss_tangent: 0.017,
        }
    }

    pub fn rt_duroid_5880() -> Self {
        SubstrateSpec {
            epsilon_r: 2.2,
            height_mm: 1.6,
            loss_tangent: 0.0007,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon_r >= 1.0 && self.epsilon_r.is_finite()) {
            return Err(Error::invalid("epsilon_r", "must be >= 1"));
        }
        if !(self.height_mm > 0.0 && self.height_mm.is_finite()) {
            return Err(Error::invalid("height_mm", "must be positive"));
        }
        Ok(())
    }
}

/// Microstrip width for characteristic impedance `zc_ohm`.
///
/// Narrow-line closed form first; if it gives `W/d ≥ 2` the wide-line
/// (B-parameter) form is used instead.
pub fn microstrip_width(zc_ohm: f64, substrate: &SubstrateSpec) -> Result<f64> {
    substrate.validate()?;
    if !(zc_ohm > 0.0 && zc_ohm.is_finite()) {
        return Err(Error::invalid("zc_ohm", "must be positive"));
    }
    let er = substrate.epsilon_r;
    let a = zc_ohm / 60.0 * ((er + 1.0) / 2.0).sqrt()
        + (er - 1.0) / (er + 1.0) * (0.23 + 0.11 / er);
    let e2a = (2.0 * a).exp();
    if e2a <= 2.0 {
        return Err(Error::invalid(
            "zc_ohm",
            format!("{zc_ohm} Ω is outside the synthesis range on εr = {er}"),
        ));
    }
    let narrow = 8.0 * a.exp() / (e2a - 2.0);
    let w_over_d = if narrow < 2.0 {
        narrow
    } else {
        let b = 377.0 * PI / (2.0 * zc_ohm * er.sqrt());
        if b <= 1.0 {
            return Err(Error::invalid("zc_ohm", "too high for the wide-line form"));
        }
        2.0 / PI
            * (b - 1.0 - (2.0 * b - 1.0).ln()
                + (er - 1.0) / (2.0 * er) * ((b - 1.0).ln() + 0.39 - 0.61 / er))
    };
    if !(w_over_d > 0.0 && w_over_d.is_finite()) {
        return Err(Error::invalid("zc_ohm", "synthesis produced a non-positive width"));
    }
    Ok(w_over_d * substrate.height_mm)
}

/// Quasi-static characteristic impedance of a microstrip of width `width_mm`.
pub fn microstrip_impedance(width_mm: f64, substrate: &SubstrateSpec) -> f64 {
    let er = substrate.epsilon_r;
    let u = width_mm / substrate.height_mm;
    let e_eff = (er + 1.0) / 2.0 + (er - 1.0) / 2.0 / (1.0 + 12.0 / u).sqrt();
    if u <= 1.0 {
        60.0 / e_eff.sqrt() * (8.0 / u + u / 4.0).ln()
    } else {
        120.0 * PI / (e_eff.sqrt() * (u + 1.393 + 0.667 * (u + 1.444).ln()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bisect_exponent(hpbw_deg: f64) -> f64 {
        let c = (hpbw_deg / 2.0).to_radians().cos();
        let (mut lo, mut hi) = (1e-6, 1e3);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if c.powf(mid) > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn exponent_matches_bisection() {
        for (hpbw, approx) in [(81.0, 2.53), (37.0, 13.06), (60.0, 4.82)] {
            let n = hpbw_to_exponent(hpbw).unwrap();
            assert!((n - bisect_exponent(hpbw)).abs() < 1e-9);
            assert!((n - approx).abs() < 0.01, "{hpbw}: {n}");
        }
        assert!(hpbw_to_exponent(180.0).is_err());
        assert!(hpbw_to_exponent(0.0).is_err());
    }

    #[test]
    fn pattern_half_power_at_half_beamwidth() {
        for kind in AntennaKind::ALL {
            let spec = AntennaSpec::for_kind(kind, JonesVector::lhcp());
            let g0 = pattern_gain(&spec, 0.0);
            assert!((g0 - 3.80).abs() < 0.01);
            let gh = pattern_gain(&spec, (spec.hpbw_deg / 2.0).to_radians());
            assert!((gh / g0 - 0.5).abs() < 1e-9);
            // half-power width by scanning
            let mut theta: f64 = 0.0;
            while pattern_gain(&spec, theta.to_radians()) > 0.5 * g0 {
                theta += 1e-4;
            }
            assert!((2.0 * theta - spec.hpbw_deg).abs() < 0.01);
            let back = pattern_gain(&spec, PI);
            assert!((10.0 * (back / g0).log10() - BACK_LOBE_DB).abs() < 1e-9);
        }
    }

    #[test]
    fn mean_gain_matches_quadrature() {
        let spec = AntennaSpec::for_kind(AntennaKind::LpSingle, JonesVector::lhcp());
        let steps = 200_000;
        let dt = PI / steps as f64;
        let integral: f64 = (0..steps)
            .map(|i| {
                let t = (i as f64 + 0.5) * dt;
                pattern_gain(&spec, t) * t.sin() * dt
            })
            .sum();
        assert!((integral / 2.0 - spec.mean_gain()).abs() < 1e-6);
    }

    #[test]
    fn mismatch_examples() {
        let v = JonesVector::lp_vertical();
        let h = JonesVector::lp_horizontal();
        assert_eq!(polarization_mismatch(&v, &v), 1.0);
        assert_eq!(polarization_mismatch(&v, &h), 0.0);
        for lp in [v, h] {
            for cp in [JonesVector::rhcp(), JonesVector::lhcp()] {
                assert!((polarization_mismatch(&lp, &cp) - 0.5).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn specular_flips_handedness() {
        let out = reflect_polarization(&JonesVector::lhcp(), SurfaceKind::SmoothSpecular);
        assert!(polarization_mismatch(&out, &JonesVector::lhcp()) < 1e-30);
        assert!((polarization_mismatch(&out, &JonesVector::rhcp()) - 1.0).abs() < 1e-15);
        let v = reflect_polarization(&JonesVector::lp_vertical(), SurfaceKind::SmoothSpecular);
        assert!((polarization_mismatch(&v, &JonesVector::lp_vertical()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rough_mixing_by_jones_algebra() {
        let out = reflect_polarization(
            &JonesVector::lp_vertical(),
            SurfaceKind::Rough {
                depolarization_fraction: 0.5,
            },
        );
        // oracle: specular V keeps √0.75, orthogonal (-1, 0) gets √0.25
        let want_ex = -(0.25f64).sqrt();
        let want_ey = (0.75f64).sqrt();
        assert!((out.ex.re - want_ex).abs() < 1e-15 && (out.ey.re - want_ey).abs() < 1e-15);
        let rho = polarization_mismatch(&out, &JonesVector::lp_horizontal());
        assert!((rho - 0.25).abs() < 1e-15);
    }

    #[test]
    fn axial_ratio_of_canonical_states() {
        assert!(JonesVector::rhcp().axial_ratio_db().abs() < 1e-12);
        assert!(JonesVector::lp_vertical().axial_ratio_db().is_infinite());
        assert!(JonesVector::lhcp().handedness() > 0.0);
        assert!(JonesVector::rhcp().handedness() < 0.0);
    }

    #[test]
    fn kind_round_trip() {
        for k in AntennaKind::ALL {
            assert_eq!(k.name().parse::<AntennaKind>().unwrap(), k);
        }
        assert!("dipole".parse::<AntennaKind>().is_err());
    }

    #[test]
    fn sequential_rotation_is_circular_at_boresight() {
        let geo = ArrayGeometry::square_2x2(0.0625);
        let f = array_factor(
            &geo,
            0.125,
            &[0.0, 90.0, 180.0, 270.0],
            &JonesVector::lp_horizontal(),
            2.53,
            0.0,
            0.0,
        )
        .unwrap();
        assert!(f.cross.norm() < 1e-12);
        assert!(f.axial_ratio_db() < 1e-9);
    }

    #[test]
    fn in_phase_lp_array_adds_coherently() {
        let geo = ArrayGeometry::square_2x2(0.0625);
        let f = array_factor(&geo, 0.125, &[0.0; 4], &JonesVector::lp_vertical(), 2.53, 0.0, 0.0)
            .unwrap();
        assert!((f.magnitude() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn array_pattern_off_boresight() {
        // closed form for λ/2 spacing in the φ = 0 plane:
        // |AF|² = 16 cos²(π/2·sin θ), element power cosⁿ θ
        let n = hpbw_to_exponent(81.0).unwrap();
        let geo = ArrayGeometry::square_2x2(0.0625);
        let phases = [0.0, 90.0, 180.0, 270.0];
        let e = JonesVector::lp_horizontal();
        let p0 = array_factor(&geo, 0.125, &phases, &e, n, 0.0, 0.0).unwrap().power();
        let theta = 18.5f64.to_radians();
        let p = array_factor(&geo, 0.125, &phases, &e, n, theta, 0.0).unwrap().power();
        let want = (PI / 2.0 * theta.sin()).cos().powi(2) * theta.cos().powf(n);
        assert!((p / p0 - want).abs() < 1e-12);
    }

    #[test]
    fn array_rejects_non_planar() {
        let mut geo = ArrayGeometry::square_2x2(0.06);
        geo.positions[2].z = 0.01;
        let r = array_factor(&geo, 0.125, &[0.0; 4], &JonesVector::lp_vertical(), 2.0, 0.0, 0.0);
        assert!(r.is_err());
    }

    #[test]
    fn feed_network_values() {
        let f = feed_impedances(25.0).unwrap();
        let want = [100.0, 100.0 / 3.0 * 1.0, 100.0, 50.0, 100.0, 100.0];
        for (a, b) in f.branch_impedances_ohm.iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((f.transformer_impedance_ohm - 35.355_339).abs() < 1e-6);
        let f50 = feed_impedances(50.0).unwrap();
        assert_eq!(f50.branch_impedances_ohm[0], 200.0);
        assert!((f50.branch_impedances_ohm[1] - 66.666_666_666).abs() < 1e-8);
        assert_eq!(f50.branch_impedances_ohm[3], 100.0);
        assert_eq!(f50.transformer_impedance_ohm, 50.0);
        assert!(feed_impedances(0.0).is_err());
    }

    #[test]
    fn junction_admittances_balance() {
        let ratio = |i: usize| {
            if i == 0 {
                Ratio::from_integer(1)
            } else {
                FeedNetwork::branch_ratio(i)
            }
        };
        for (input, [a, b]) in FeedNetwork::junctions() {
            assert_eq!(ratio(a).recip() + ratio(b).recip(), ratio(input).recip());
        }
    }

    #[test]
    fn microstrip_fifty_ohm_on_fr4() {
        let fr4 = SubstrateSpec::fr4();
        let w = microstrip_width(50.0, &fr4).unwrap();
        assert!((w - 3.06).abs() < 0.01, "{w}");
        let w100 = microstrip_width(100.0, &fr4).unwrap();
        assert!(w100 / fr4.height_mm < 1.0);
        assert!((w100 - 0.7).abs() < 0.05, "{w100}");
    }

    #[test]
    fn microstrip_rejects_invalid() {
        let fr4 = SubstrateSpec::fr4();
        assert!(microstrip_width(-5.0, &fr4).is_err());
        assert!(microstrip_width(1.0, &fr4).is_err());
        let bad = SubstrateSpec {
            epsilon_r: 0.5,
            ..fr4
        };
        assert!(microstrip_width(50.0, &bad).is_err());
    }
}
