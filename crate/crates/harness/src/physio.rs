//! Simulated subjects: chest motion with beat-to-beat jitter, the ground
//! truth beat times that stand in for a finger-pulse reference, and the
//! rate-tracking chain that turns baseband into per-window heart rates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::Serialize;
use vitals_core::antenna::AntennaKind;
use vitals_core::dsp::{
    autocorr_pitch, butterworth, dc_cancel, hann, sliding_windows, FilterSpec, PitchEstimator,
    RateTrack,
};
use vitals_core::propagation::compose_baseband;
use vitals_core::radar::{complex_demodulate, BasebandIQ, MotionWaveform};

use crate::config::{PhysioConfig, ScenarioConfig};
use crate::error::{config_err, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubjectParams {
    pub resp_rate_bpm: f64,
    pub resp_amp_mm: f64,
    pub heart_rate_bpm: f64,
    pub heart_amp_mm: f64,
    pub hrv_jitter_fraction: f64,
}

impl SubjectParams {
    pub fn nominal(p: &PhysioConfig) -> Self {
        SubjectParams {
            resp_rate_bpm: p.resp_rate_bpm,
            resp_amp_mm: p.resp_amp_mm,
            heart_rate_bpm: p.heart_rate_bpm,
            heart_amp_mm: p.heart_amp_mm,
            hrv_jitter_fraction: p.hrv_jitter_fraction,
        }
    }

    /// Subject 0 is nominal; others scale each rate and amplitude by an
    /// independent uniform factor in `1 ± subject_spread`.
    pub fn for_subject(p: &PhysioConfig, subject: usize, seed: u64) -> Self {
        let base = Self::nominal(p);
        if subject == 0 || p.subject_spread == 0.0 {
            return base;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[u64::MAX, subject as u64]));
        let mut f = || 1.0 + p.subject_spread * rng.random_range(-1.0..=1.0);
        SubjectParams {
            resp_rate_bpm: base.resp_rate_bpm * f(),
            resp_amp_mm: base.resp_amp_mm * f(),
            heart_rate_bpm: base.heart_rate_bpm * f(),
            heart_amp_mm: base.heart_amp_mm * f(),
            hrv_jitter_fraction: base.hrv_jitter_fraction,
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("resp_rate_bpm", self.resp_rate_bpm),
            ("resp_amp_mm", self.resp_amp_mm),
            ("heart_rate_bpm", self.heart_rate_bpm),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(config_err(name, "must be positive"));
            }
        }
        if !(self.heart_amp_mm >= 0.0 && self.heart_amp_mm.is_finite()) {
            return Err(config_err("heart_amp_mm", "must be non-negative"));
        }
        if !(0.0..=0.2).contains(&self.hrv_jitter_fraction) {
            return Err(config_err("hrv_jitter_fraction", "must lie in [0, 0.2]"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhysioSignal {
    pub motion: MotionWaveform,
    /// Ground-truth beat onsets, covering the whole record.
    pub beat_times_s: Vec<f64>,
}

/// Respiration sinusoid plus a heartbeat whose phase advances one cycle per
/// beat. Each inter-beat interval is the nominal period times
/// `1 + jitter·N(0,1)`, the normal draw clipped to ±3.
pub fn generate_physio(
    params: &SubjectParams,
    duration_s: f64,
    sample_rate_hz: f64,
    seed: u64,
) -> Result<PhysioSignal> {
    params.validate()?;
    if !(duration_s > 0.0 && sample_rate_hz > 0.0) {
        return Err(config_err("duration_s/sample_rate_hz", "must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let period = 60.0 / params.heart_rate_bpm;
    let mut beats = vec![0.0];
    while *beats.last().unwrap() <= duration_s {
        let z: f64 = normal.sample(&mut rng);
        let ibi = period * (1.0 + params.hrv_jitter_fraction * z.clamp(-3.0, 3.0));
        beats.push(beats.last().unwrap() + ibi);
    }

    let n = (duration_s * sample_rate_hz).round() as usize;
    let f_r = params.resp_rate_bpm / 60.0;
    let mut k = 0;
    let displacement_m = (0..n)
        .map(|s| {
            let t = s as f64 / sample_rate_hz;
            while beats[k + 1] <= t {
                k += 1;
            }
            let frac = (t - beats[k]) / (beats[k + 1] - beats[k]);
            1e-3 * (params.resp_amp_mm * (2.0 * PI * f_r * t).sin()
                + params.heart_amp_mm * (2.0 * PI * frac).sin())
        })
        .collect();
    Ok(PhysioSignal {
        motion: MotionWaveform::Sampled {
            displacement_m,
            sample_rate_hz,
        },
        beat_times_s: beats,
    })
}

/// Instantaneous rate (per minute) of the beat interval containing `t`.
fn instantaneous_bpm(beats: &[f64], t: f64) -> f64 {
    let k = beats.partition_point(|&b| b <= t).clamp(1, beats.len() - 1);
    60.0 / (beats[k] - beats[k - 1])
}

/// Reference rate for a window: the instantaneous rate averaged with the
/// same Hann weights the estimator applies.
pub fn reference_rate_bpm(beats: &[f64], start_s: f64, window_len: usize, sample_rate_hz: f64) -> f64 {
    let w = hann(window_len);
    let total: f64 = w.iter().sum();
    w.iter()
        .enumerate()
        .map(|(k, wk)| wk * instantaneous_bpm(beats, start_s + k as f64 / sample_rate_hz))
        .sum::<f64>()
        / total
}

#[derive(Debug, Clone)]
pub struct SessionResult {
    pub heart_track: RateTrack,
    pub heart_rate_bpm: Option<f64>,
    pub resp_rate_bpm: Option<f64>,
    pub accuracy_pct: f64,
}

/// Heart rate per sliding window after band-pass filtering, and one
/// respiration rate for the whole record after low-pass filtering.
pub fn analyze_session(iq: &BasebandIQ, beats: &[f64], p: &PhysioConfig) -> Result<SessionResult> {
    let fs = iq.sample_rate_hz;
    let x = complex_demodulate(&dc_cancel(iq)?)?;

    let bp = butterworth(
        &FilterSpec {
            order: p.filter_order,
            ..FilterSpec::bandpass(p.heart_band_hz.0, p.heart_band_hz.1)
        },
        fs,
    )?;
    let heart = bp.filtfilt_complex(&x)?;
    let windows = sliding_windows(&heart, fs, p.window_s, p.step_s)?;
    let len = windows.window_len();
    let estimator = PitchEstimator::new(len, fs)?;
    let mut starts = Vec::with_capacity(windows.len());
    let mut rates = Vec::with_capacity(windows.len());
    let mut refs = Vec::with_capacity(windows.len());
    for w in windows {
        let est = estimator.estimate(&w.samples, p.heart_band_hz)?;
        rates.push(est.map(|e| e.rate_per_min()));
        refs.push(reference_rate_bpm(beats, w.start_s, len, fs));
        starts.push(w.start_s);
    }
    let heart_track = RateTrack::new(starts, rates, refs, p.tolerance)?;
    let accuracy_pct = vitals_core::dsp::detection_accuracy(&heart_track, p.tolerance);

    let lp = butterworth(
        &FilterSpec {
            order: p.filter_order,
            ..FilterSpec::lowpass(p.resp_lowpass_hz)
        },
        fs,
    )?;
    let resp = lp.filtfilt_complex(&x)?;
    let tapered: Vec<Complex64> = resp.iter().zip(hann(resp.len())).map(|(v, w)| v * w).collect();
    let resp_rate_bpm = autocorr_pitch(&tapered, fs, p.resp_search_hz)?.map(|e| e.rate_per_min());

    Ok(SessionResult {
        heart_rate_bpm: heart_track.median_rate_bpm(),
        heart_track,
        resp_rate_bpm,
        accuracy_pct,
    })
}

#[derive(Debug, Clone)]
pub struct Session {
    pub subject: SubjectParams,
    pub signal: PhysioSignal,
    pub iq: BasebandIQ,
    pub result: SessionResult,
}

fn physio_section(config: &ScenarioConfig) -> Result<&PhysioConfig> {
    config
        .physio
        .as_ref()
        .ok_or_else(|| config_err("physio", "section required for physio sessions"))
}

/// One session of `subject_id` at `distance_m` with the given antenna pair.
/// Motion depends only on the subject; noise only on subject and distance,
/// so antenna pairs are compared on identical draws.
pub fn run_session(
    config: &ScenarioConfig,
    tx: AntennaKind,
    rx: AntennaKind,
    distance_m: f64,
    subject_id: usize,
) -> Result<Session> {
    let p = physio_section(config)?;
    let subject = SubjectParams::for_subject(p, subject_id, config.seed);
    let signal = generate_physio(
        &subject,
        p.session_s,
        config.sample_rate_hz,
        derive_seed(config.seed, &[u64::MAX - 1, subject_id as u64]),
    )?;
    let mut cfg = config.clone();
    cfg.target.distance_m = distance_m;
    cfg.motion = signal.motion.clone();
    let scene = cfg.scene(tx, rx)?;
    let noise = cfg.noise.spec(derive_seed(
        config.seed,
        &[subject_id as u64, distance_m.to_bits()],
    ));
    let iq = compose_baseband(&scene, &cfg.carrier, p.session_s, cfg.sample_rate_hz, &noise)?;
    let result = analyze_session(&iq, &signal.beat_times_s, p)?;
    Ok(Session {
        subject,
        signal,
        iq,
        result,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyRow {
    pub subject_id: usize,
    pub distance_m: f64,
    pub config: String,
    pub accuracy_pct: f64,
}

/// Detection accuracy for every subject × distance × {standard,
/// recommended}, ordered subject, distance, then configuration.
pub fn accuracy_report(config: &ScenarioConfig) -> Result<Vec<AccuracyRow>> {
    config.validate()?;
    let p = physio_section(config)?;
    let mut jobs = Vec::new();
    for subject in 0..p.subjects {
        for &d in &p.distances_m {
            for (name, pair) in [("standard", p.standard), ("recommended", p.recommended)] {
                jobs.push((subject, d, name, pair));
            }
        }
    }
    jobs.par_iter()
        .map(|&(subject, d, name, (tx, rx))| {
            let s = run_session(config, tx, rx, d, subject)?;
            Ok(AccuracyRow {
                subject_id: subject,
                distance_m: d,
                config: name.to_string(),
                accuracy_pct: s.result.accuracy_pct,
            })
        })
        .collect()
}
