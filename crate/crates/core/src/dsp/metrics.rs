use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Relative error allowed for a window to count as detected.
pub const DEFAULT_TOLERANCE: f64 = 0.02;

/// Per-window rate estimates (per minute) against a reference. A window
/// without an estimate holds `None` and never counts as within tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateTrack {
    pub window_starts_s: Vec<f64>,
    pub rates_bpm: Vec<Option<f64>>,
    pub reference_bpm: Vec<f64>,
    pub within_tolerance: Vec<bool>,
}

fn within(est: Option<f64>, reference: f64, tolerance: f64) -> bool {
    est.is_some_and(|e| (e - reference).abs() <= tolerance * reference)
}

impl RateTrack {
    pub fn new(
        window_starts_s: Vec<f64>,
        rates_bpm: Vec<Option<f64>>,
        reference_bpm: Vec<f64>,
        tolerance_fraction: f64,
    ) -> Result<Self> {
        if rates_bpm.len() != window_starts_s.len() || reference_bpm.len() != window_starts_s.len() {
            return Err(Error::LengthMismatch("rate track arrays differ in length".into()));
        }
        if rates_bpm.iter().flatten().any(|r| !(*r >= 0.0)) {
            return Err(Error::invalid("rates_bpm", "must be non-negative"));
        }
        let within_tolerance = rates_bpm
            .iter()
            .zip(&reference_bpm)
            .map(|(e, r)| within(*e, *r, tolerance_fraction))
            .collect();
        Ok(RateTrack {
            window_starts_s,
            rates_bpm,
            reference_bpm,
            within_tolerance,
        })
    }

    pub fn len(&self) -> usize {
        self.window_starts_s.len()
    }

    pub fn is_empty(&self) -> bool {
        self.window_starts_s.is_empty()
    }

    /// Median of the available estimates.
    pub fn median_rate_bpm(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.rates_bpm.iter().flatten().copied().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let m = v.len() / 2;
        Some(if v.len().is_multiple_of(2) { 0.5 * (v[m - 1] + v[m]) } else { v[m] })
    }
}

/// Percentage of windows whose estimate is within `tolerance_fraction` of
/// the reference. An empty track scores 0.
pub fn detection_accuracy(track: &RateTrack, tolerance_fraction: f64) -> f64 {
    if track.is_empty() {
        return 0.0;
    }
    let hits = track
        .rates_bpm
        .iter()
        .zip(&track.reference_bpm)
        .filter(|(e, r)| within(**e, **r, tolerance_fraction))
        .count();
    100.0 * hits as f64 / track.len() as f64
}
