//! Quadrature Doppler phase model.
//!
//! A target displaced by `x(t)` along the line of sight modulates the
//! baseband phase by `4πx/λ`. The in-phase and quadrature channels are the
//! cosine and sine of that phase plus the static phase `θ0 + Δφ`.
//! Expanding `exp(j·β·sin ωt)` with the Jacobi–Anger identity gives line
//! amplitudes `J_n(β)` with `β = 4πk/λ`; a single channel sees those lines
//! weighted by `cos φ` (even n) or `sin φ` (odd n) while the complex signal
//! `I + jQ` does not depend on `φ` at all.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::bessel::bessel_j_sequence;
use crate::{Error, Result, SPEED_OF_LIGHT};

/// `|sin φ|` below this is a null point, above `1 - NULL_TOLERANCE` the
/// fundamental dominates.
pub const NULL_TOLERANCE: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarrierConfig {
    pub frequency_hz: f64,
    pub tx_power_dbm: f64,
    /// Radar-to-target distance `d0`.
    pub nominal_distance_m: f64,
    /// Residual phase `Δφ`.
    pub residual_phase_rad: f64,
    /// Surface reflection phase `θ0`.
    pub surface_phase_rad: f64,
    /// `A_I`
    pub i_amplitude: f64,
    /// `A_Q`
    pub q_amplitude: f64,
}

impl Default for CarrierConfig {
    fn default() -> Self {
        CarrierConfig {
            frequency_hz: 2.4e9,
            tx_power_dbm: 0.0,
            nominal_distance_m: 1.5,
            residual_phase_rad: 0.0,
            surface_phase_rad: 0.0,
            i_amplitude: 1.0,
            q_amplitude: 1.0,
        }
    }
}

impl CarrierConfig {
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.frequency_hz
    }

    pub fn tx_power_w(&self) -> f64 {
        1e-3 * 10f64.powf(self.tx_power_dbm / 10.0)
    }

    /// `θ0 + Δφ`
    pub fn total_phase_rad(&self) -> f64 {
        self.surface_phase_rad + self.residual_phase_rad
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.frequency_hz > 0.0 && self.frequency_hz.is_finite()) {
            return Err(Error::invalid("frequency_hz", "must be positive and finite"));
        }
        if !(self.nominal_distance_m > 0.0 && self.nominal_distance_m.is_finite()) {
            return Err(Error::invalid("nominal_distance_m", "must be positive"));
        }
        for (name, v) in [
            ("tx_power_dbm", self.tx_power_dbm),
            ("residual_phase_rad", self.residual_phase_rad),
            ("surface_phase_rad", self.surface_phase_rad),
        ] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        for (name, v) in [("i_amplitude", self.i_amplitude), ("q_amplitude", self.q_amplitude)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Target displacement `x(t)` in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MotionWaveform {
    /// `k·sin(2πt/T)`
    Sinusoid { amplitude_m: f64, period_s: f64 },
    /// Constant-speed back-and-forth travel with the same zero crossings and
    /// peaks as the sinusoid of equal amplitude and period.
    Triangle { amplitude_m: f64, period_s: f64 },
    /// Respiration plus heartbeat, both sinusoidal.
    TwoTone {
        resp_amplitude_m: f64,
        resp_rate_hz: f64,
        heart_amplitude_m: f64,
        heart_rate_hz: f64,
    },
    /// Uniformly sampled displacement, linearly interpolated between samples
    /// and held at the ends.
    Sampled {
        displacement_m: Vec<f64>,
        sample_rate_hz: f64,
    },
}

impl MotionWaveform {
    pub fn still() -> Self {
        MotionWaveform::Sinusoid {
            amplitude_m: 0.0,
            period_s: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        fn amp(name: &'static str, v: f64) -> Result<()> {
            if !v.is_finite() {
                return Err(Error::NonFinite(name));
            }
            if v < 0.0 {
                return Err(Error::invalid(name, "must be >= 0"));
            }
            Ok(())
        }
        fn pos(name: &'static str, v: f64) -> Result<()> {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be positive and finite"));
            }
            Ok(())
        }
        match self {
            MotionWaveform::Sinusoid {
                amplitude_m,
                period_s,
            }
            | MotionWaveform::Triangle {
                amplitude_m,
                period_s,
            } => {
                amp("amplitude_m", *amplitude_m)?;
                pos("period_s", *period_s)
            }
            MotionWaveform::TwoTone {
                resp_amplitude_m,
                resp_rate_hz,
                heart_amplitude_m,
                heart_rate_hz,
            } => {
                amp("resp_amplitude_m", *resp_amplitude_m)?;
                amp("heart_amplitude_m", *heart_amplitude_m)?;
                pos("resp_rate_hz", *resp_rate_hz)?;
                pos("heart_rate_hz", *heart_rate_hz)
            }
            MotionWaveform::Sampled {
                displacement_m,
                sample_rate_hz,
            } => {
                pos("sample_rate_hz", *sample_rate_hz)?;
                if displacement_m.is_empty() {
                    return Err(Error::Empty("displacement_m"));
                }
                if displacement_m.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite("displacement_m"));
                }
                Ok(())
            }
        }
    }

    pub fn displacement(&self, t: f64) -> f64 {
        match self {
            MotionWaveform::Sinusoid {
                amplitude_m,
                period_s,
            } => amplitude_m * (2.0 * PI * t / period_s).sin(),
            MotionWaveform::Triangle {
                amplitude_m,
                period_s,
            } => {
                let u = (t / period_s + 0.25).rem_euclid(1.0);
                // rises from -1 at u=0 to +1 at u=0.5, back to -1 at u=1
                let tri = if u < 0.5 { 4.0 * u - 1.0 } else { 3.0 - 4.0 * u };
                amplitude_m * tri
            }
            MotionWaveform::TwoTone {
                resp_amplitude_m,
                resp_rate_hz,
                heart_amplitude_m,
                heart_rate_hz,
            } => {
                resp_amplitude_m * (2.0 * PI * resp_rate_hz * t).sin()
                    + heart_amplitude_m * (2.0 * PI * heart_rate_hz * t).sin()
            }
            MotionWaveform::Sampled {
                displacement_m,
                sample_rate_hz,
            } => {
                let pos = (t * sample_rate_hz).max(0.0);
                let idx = pos.floor() as usize;
                if idx + 1 >= displacement_m.len() {
                    return *displacement_m.last().unwrap_or(&0.0);
                }
                let frac = pos - idx as f64;
                displacement_m[idx] * (1.0 - frac) + displacement_m[idx + 1] * frac
            }
        }
    }

    /// Highest frequency the waveform declares. Sampled series are assumed to
    /// already satisfy the 4× rule at their own rate.
    pub fn highest_frequency_hz(&self) -> f64 {
        match self {
            MotionWaveform::Sinusoid { period_s, .. } | MotionWaveform::Triangle { period_s, .. } => {
                1.0 / period_s
            }
            MotionWaveform::TwoTone {
                resp_rate_hz,
                heart_rate_hz,
                ..
            } => resp_rate_hz.max(*heart_rate_hz),
            MotionWaveform::Sampled { sample_rate_hz, .. } => sample_rate_hz / 4.0,
        }
    }

    /// Peak displacement magnitude.
    pub fn peak_amplitude_m(&self) -> f64 {
        match self {
            MotionWaveform::Sinusoid { amplitude_m, .. }
            | MotionWaveform::Triangle { amplitude_m, .. } => *amplitude_m,
            MotionWaveform::TwoTone {
                resp_amplitude_m,
                heart_amplitude_m,
                ..
            } => resp_amplitude_m + heart_amplitude_m,
            MotionWaveform::Sampled { displacement_m, .. } => {
                displacement_m.iter().fold(0.0, |m, v| m.max(v.abs()))
            }
        }
    }
}

/// Additive white Gaussian noise plus a constant offset on each channel.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseSpec {
    pub i_std: f64,
    pub q_std: f64,
    pub i_offset: f64,
    pub q_offset: f64,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        NoiseSpec::default()
    }

    pub fn awgn(std: f64, seed: u64) -> Self {
        NoiseSpec {
            i_std: std,
            q_std: std,
            seed,
            ..NoiseSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("i_std", self.i_std), ("q_std", self.q_std)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, "must be non-negative"));
            }
        }
        if !(self.i_offset.is_finite() && self.q_offset.is_finite()) {
            return Err(Error::NonFinite("noise offset"));
        }
        Ok(())
    }

    /// Adds offsets and noise in place. The draws depend only on `seed`.
    pub fn apply(&self, i: &mut [f64], q: &mut [f64]) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let std_normal = Normal::new(0.0, 1.0).expect("unit normal");
        for (vi, vq) in i.iter_mut().zip(q.iter_mut()) {
            let ni: f64 = std_normal.sample(&mut rng);
            let nq: f64 = std_normal.sample(&mut rng);
            *vi += self.i_offset + self.i_std * ni;
            *vq += self.q_offset + self.q_std * nq;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasebandIQ {
    pub i: Vec<f64>,
    pub q: Vec<f64>,
    pub sample_rate_hz: f64,
    pub i_amplitude: f64,
    pub q_amplitude: f64,
}

impl BasebandIQ {
    pub fn new(i: Vec<f64>, q: Vec<f64>, sample_rate_hz: f64) -> Result<Self> {
        if i.len() != q.len() {
            return Err(Error::LengthMismatch(format!(
                "i has {} samples, q has {}",
                i.len(),
                q.len()
            )));
        }
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return Err(Error::invalid("sample_rate_hz", "must be positive"));
        }
        Ok(BasebandIQ {
            i,
            q,
            sample_rate_hz,
            i_amplitude: 1.0,
            q_amplitude: 1.0,
        })
    }

    pub fn from_complex(samples: &[Complex64], sample_rate_hz: f64) -> Result<Self> {
        BasebandIQ::new(
            samples.iter().map(|c| c.re).collect(),
            samples.iter().map(|c| c.im).collect(),
            sample_rate_hz,
        )
    }

    pub fn len(&self) -> usize {
        self.i.len()
    }

    pub fn is_empty(&self) -> bool {
        self.i.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.len() as f64 / self.sample_rate_hz
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(move |n| n as f64 / self.sample_rate_hz)
    }

    pub fn check(&self) -> Result<()> {
        if self.i.len() != self.q.len() {
            return Err(Error::LengthMismatch("i/q channel lengths differ".into()));
        }
        Ok(())
    }
}

pub(crate) fn sample_count(duration_s: f64, sample_rate_hz: f64) -> Result<usize> {
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return Err(Error::invalid("duration_s", "must be positive"));
    }
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return Err(Error::invalid("sample_rate_hz", "must be positive"));
    }
    Ok((duration_s * sample_rate_hz).round() as usize)
}

pub(crate) fn check_nyquist(motion: &MotionWaveform, sample_rate_hz: f64) -> Result<()> {
    let highest = motion.highest_frequency_hz();
    if sample_rate_hz < 4.0 * highest {
        return Err(Error::BelowNyquist {
            sample_rate_hz,
            highest_hz: highest,
        });
    }
    Ok(())
}

/// Baseband I/Q for a single line-of-sight target:
/// `i = A_I cos(4πx/λ + θ0 + Δφ)`, `q = A_Q sin(…)`, plus noise.
pub fn synthesize_iq(
    motion: &MotionWaveform,
    carrier: &CarrierConfig,
    duration_s: f64,
    sample_rate_hz: f64,
    noise: &NoiseSpec,
) -> Result<BasebandIQ> {
    motion.validate()?;
    carrier.validate()?;
    noise.validate()?;
    let n = sample_count(duration_s, sample_rate_hz)?;
    check_nyquist(motion, sample_rate_hz)?;

    let lambda = carrier.wavelength_m();
    let phi = carrier.total_phase_rad();
    let mut i = Vec::with_capacity(n);
    let mut q = Vec::with_capacity(n);
    for k in 0..n {
        let t = k as f64 / sample_rate_hz;
        let x = motion.displacement(t);
        if !x.is_finite() {
            return Err(Error::NonFinite("motion sample"));
        }
        let arg = 4.0 * PI * x / lambda + phi;
        i.push(carrier.i_amplitude * arg.cos());
        q.push(carrier.q_amplitude * arg.sin());
    }
    noise.apply(&mut i, &mut q);
    let mut iq = BasebandIQ::new(i, q, sample_rate_hz)?;
    iq.i_amplitude = carrier.i_amplitude;
    iq.q_amplitude = carrier.q_amplitude;
    Ok(iq)
}

/// `r[n] = i[n] + j·q[n]`
pub fn complex_demodulate(iq: &BasebandIQ) -> Result<Vec<Complex64>> {
    iq.check()?;
    Ok(iq
        .i
        .iter()
        .zip(&iq.q)
        .map(|(&re, &im)| Complex64::new(re, im))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    I,
    Q,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicEntry {
    pub index: usize,
    pub amplitude: f64,
    /// `20·log10(amplitude / largest amplitude among n ≥ 1)`
    pub amplitude_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTable {
    pub entries: Vec<HarmonicEntry>,
}

impl HarmonicTable {
    pub fn amplitude(&self, n: usize) -> Option<f64> {
        self.entries.iter().find(|e| e.index == n).map(|e| e.amplitude)
    }

    /// Harmonic index (n ≥ 1) with the largest amplitude.
    pub fn dominant(&self) -> Option<usize> {
        self.entries
            .iter()
            .filter(|e| e.index >= 1)
            .max_by(|a, b| a.amplitude.total_cmp(&b.amplitude))
            .map(|e| e.index)
    }
}

/// Line amplitudes of harmonics `0..=n_max` of `x(t) = k·sin ωt` as seen on
/// one channel or on the complex signal.
///
/// Real channels report the amplitude of the real sinusoid at `nω`
/// (`2|J_n|·|cos φ|` or `2|J_n|·|sin φ|`, and `|J_0 cos φ|` resp.
/// `|J_0 sin φ|` at DC). The complex channel reports the amplitude of the
/// line at `+nω`, which equals the one at `-nω`: `|J_n|`.
pub fn predict_harmonics(
    k_m: f64,
    wavelength_m: f64,
    phi_rad: f64,
    n_max: usize,
    channel: Channel,
) -> Result<HarmonicTable> {
    if !(wavelength_m > 0.0 && wavelength_m.is_finite()) {
        return Err(Error::invalid("wavelength_m", "must be positive"));
    }
    if !(k_m >= 0.0 && k_m.is_finite()) {
        return Err(Error::invalid("k_m", "must be >= 0"));
    }
    if n_max < 1 {
        return Err(Error::invalid("n_max", "must be >= 1"));
    }
    let beta = 4.0 * PI * k_m / wavelength_m;
    let j = bessel_j_sequence(n_max, beta);
    let (c, s) = (phi_rad.cos().abs(), phi_rad.sin().abs());

    let amplitudes: Vec<f64> = (0..=n_max)
        .map(|n| {
            let jn = j[n].abs();
            match channel {
                Channel::Complex => jn,
                Channel::I if n == 0 => jn * c,
                Channel::Q if n == 0 => jn * s,
                Channel::I if n % 2 == 0 => 2.0 * jn * c,
                Channel::I => 2.0 * jn * s,
                Channel::Q if n % 2 == 0 => 2.0 * jn * s,
                Channel::Q => 2.0 * jn * c,
            }
        })
        .collect();
    let reference = amplitudes[1..].iter().cloned().fold(0.0, f64::max);
    let entries = amplitudes
        .into_iter()
        .enumerate()
        .map(|(index, amplitude)| HarmonicEntry {
            index,
            amplitude,
            amplitude_db: 20.0 * (amplitude / reference).log10(),
        })
        .collect();
    Ok(HarmonicTable { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullState {
    FundamentalDominant,
    NullPoint,
    Intermediate,
}

/// Classifies the single-channel (I) operating point for total phase `φ`.
pub fn null_indicator(phi_rad: f64) -> NullState {
    let s = phi_rad.sin().abs();
    if s < NULL_TOLERANCE {
        NullState::NullPoint
    } else if s > 1.0 - NULL_TOLERANCE {
        NullState::FundamentalDominant
    } else {
        NullState::Intermediate
    }
}
