use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::{Error, Result};

/// A candidate rate is accepted only if its power exceeds the in-band
/// median by this much. For a Hann-tapered 10 s window of white noise the
/// in-band max/median ratio exceeds 10 dB in under 0.1% of windows.
pub const MIN_PROMINENCE_DB: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchEstimate {
    pub rate_hz: f64,
    pub prominence_db: f64,
}

impl PitchEstimate {
    pub fn rate_per_min(&self) -> f64 {
        self.rate_hz * 60.0
    }
}

/// Reusable FFT plans for windows of one length.
pub struct PitchEstimator {
    window_len: usize,
    fft_len: usize,
    sample_rate_hz: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    pub min_prominence_db: f64,
}

impl PitchEstimator {
    pub fn new(window_len: usize, sample_rate_hz: f64) -> Result<Self> {
        if window_len < 4 {
            return Err(Error::invalid("window", "needs at least 4 samples"));
        }
        if !(sample_rate_hz > 0.0) {
            return Err(Error::invalid("sample_rate_hz", "must be positive"));
        }
        let fft_len = (2 * window_len).next_power_of_two();
        let mut planner = FftPlanner::new();
        Ok(PitchEstimator {
            window_len,
            fft_len,
            sample_rate_hz,
            forward: planner.plan_fft_forward(fft_len),
            inverse: planner.plan_fft_inverse(fft_len),
            min_prominence_db: MIN_PROMINENCE_DB,
        })
    }

    pub fn resolution_hz(&self) -> f64 {
        self.sample_rate_hz / self.fft_len as f64
    }

    /// Circular autocorrelation over `fft_len` lags (non-aliased since the
    /// window is zero-padded to at least twice its length). Lag `l` sits at
    /// index `l`, lag `-l` at `fft_len - l`.
    pub fn autocorrelation(&self, window: &[Complex64]) -> Result<Vec<Complex64>> {
        if window.len() != self.window_len {
            return Err(Error::LengthMismatch(format!(
                "window of {} samples, estimator built for {}",
                window.len(),
                self.window_len
            )));
        }
        let mut buf = window.to_vec();
        buf.resize(self.fft_len, Complex64::new(0.0, 0.0));
        self.forward.process(&mut buf);
        for v in buf.iter_mut() {
            *v = Complex64::new(v.norm_sqr(), 0.0);
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.fft_len as f64;
        buf.iter_mut().for_each(|v| *v *= scale);
        Ok(buf)
    }

    /// Dominant rate within `band_hz`, from the spectrum of the
    /// autocorrelation, refined by a parabola through the log powers of the
    /// peak bin and its neighbours.
    pub fn estimate(
        &self,
        window: &[Complex64],
        band_hz: (f64, f64),
    ) -> Result<Option<PitchEstimate>> {
        let (lo, hi) = band_hz;
        if !(lo > 0.0 && lo < hi && hi < self.sample_rate_hz / 2.0) {
            return Err(Error::invalid("search_band_hz", "need 0 < low < high < Nyquist"));
        }
        let mut acf = self.autocorrelation(window)?;
        self.forward.process(&mut acf);
        let m = self.fft_len;
        let folded = |k: usize| acf[k].re.max(0.0) + acf[(m - k) % m].re.max(0.0);

        let res = self.resolution_hz();
        let k_lo = (lo / res).ceil() as usize;
        let k_hi = ((hi / res).floor() as usize).min(m / 2 - 1);
        if k_lo < 1 || k_hi < k_lo + 2 {
            return Err(Error::invalid("search_band_hz", "narrower than three bins"));
        }
        let band: Vec<f64> = (k_lo..=k_hi).map(folded).collect();
        let (off, &peak) = band
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("non-empty band");
        if peak <= 0.0 {
            return Ok(None);
        }
        let mut sorted = band.clone();
        sorted.sort_by(f64::total_cmp);
        let median = sorted[sorted.len() / 2];
        let prominence_db = if median > 0.0 {
            10.0 * (peak / median).log10()
        } else {
            f64::INFINITY
        };
        if prominence_db < self.min_prominence_db {
            return Ok(None);
        }
        let k = k_lo + off;
        let (a, b, c) = (folded(k - 1), peak, folded(k + 1));
        let delta = if a > 0.0 && c > 0.0 {
            let (la, lb, lc) = (a.ln(), b.ln(), c.ln());
            let denom = la - 2.0 * lb + lc;
            if denom < 0.0 {
                (0.5 * (la - lc) / denom).clamp(-0.5, 0.5)
            } else {
                0.0
            }
        } else {
            0.0
        };
        Ok(Some(PitchEstimate {
            rate_hz: (k as f64 + delta) * res,
            prominence_db,
        }))
    }
}

/// Autocorrelation of a complex window; see [`PitchEstimator::autocorrelation`].
pub fn autocorrelation(window: &[Complex64], sample_rate_hz: f64) -> Result<Vec<Complex64>> {
    PitchEstimator::new(window.len(), sample_rate_hz)?.autocorrelation(window)
}

/// One-shot form of [`PitchEstimator::estimate`].
pub fn autocorr_pitch(
    window: &[Complex64],
    sample_rate_hz: f64,
    search_band_hz: (f64, f64),
) -> Result<Option<PitchEstimate>> {
    PitchEstimator::new(window.len(), sample_rate_hz)?.estimate(window, search_band_hz)
}
