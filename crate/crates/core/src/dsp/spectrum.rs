use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::radar::{complex_demodulate, BasebandIQ};
use crate::{Error, Result};

pub const DEFAULT_ZERO_PAD: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DbReference {
    /// Largest bin of the spectrum itself is 0 dB.
    OwnMax,
    /// Fixed linear magnitude mapped to 0 dB.
    Absolute(f64),
}

/// Magnitude spectrum of `i + jq` over the non-negative frequency axis.
///
/// With `X` the DFT of the zero-padded record (length `M`) and `N` the
/// number of input samples, bin `k` of `magnitude` is
/// `sqrt(|X[k]|² + |X[M-k]|²) / N`; DC and (for even `M`) Nyquist hold only
/// their own bin. The folding keeps the total power of both sidebands, so
/// `Σ magnitude² · N² / M` equals the record energy `Σ|x|²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub freqs_hz: Vec<f64>,
    pub magnitude: Vec<f64>,
    pub magnitude_db: Vec<f64>,
    pub resolution_hz: f64,
    /// `|X[k]| / N` for bins at `+f`.
    pub positive: Vec<f64>,
    /// `|X[M-k]| / N` for bins at `-f`.
    pub negative: Vec<f64>,
    pub fft_len: usize,
    pub samples: usize,
    pub reference: DbReference,
}

impl Spectrum {
    pub fn with_reference(mut self, reference: DbReference) -> Self {
        self.reference = reference;
        self.magnitude_db = to_db(&self.magnitude, reference);
        self
    }

    /// `Σ|x|²` recovered from the spectrum.
    pub fn energy(&self) -> f64 {
        let n = self.samples as f64;
        self.magnitude.iter().map(|m| m * m).sum::<f64>() * n * n / self.fft_len as f64
    }

    pub fn bin_of(&self, f_hz: f64) -> usize {
        ((f_hz / self.resolution_hz).round().max(0.0) as usize).min(self.freqs_hz.len() - 1)
    }

    /// Largest magnitude within `[lo, hi]` Hz as `(freq, magnitude)`.
    pub fn peak_in(&self, lo_hz: f64, hi_hz: f64) -> Option<(f64, f64)> {
        self.freqs_hz
            .iter()
            .zip(&self.magnitude)
            .filter(|(f, _)| **f >= lo_hz && **f <= hi_hz)
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(f, m)| (*f, *m))
    }

    /// Peak within ± `bins` of `f_hz`.
    pub fn peak_near(&self, f_hz: f64, bins: usize) -> f64 {
        let c = self.bin_of(f_hz);
        let lo = c.saturating_sub(bins);
        let hi = (c + bins).min(self.magnitude.len() - 1);
        self.magnitude[lo..=hi].iter().cloned().fold(0.0, f64::max)
    }
}

fn to_db(mag: &[f64], reference: DbReference) -> Vec<f64> {
    let r = match reference {
        DbReference::OwnMax => mag.iter().cloned().fold(0.0, f64::max),
        DbReference::Absolute(v) => v,
    };
    mag.iter()
        .map(|m| {
            if r > 0.0 {
                20.0 * (m / r).log10()
            } else {
                f64::NEG_INFINITY
            }
        })
        .collect()
}

pub fn complex_spectrum(iq: &BasebandIQ, zero_pad_factor: usize) -> Result<Spectrum> {
    let x = complex_demodulate(iq)?;
    if x.is_empty() {
        return Err(Error::Empty("baseband record"));
    }
    if zero_pad_factor == 0 {
        return Err(Error::invalid("zero_pad_factor", "must be at least 1"));
    }
    let n = x.len();
    let m = n * zero_pad_factor;
    let mut buf = x;
    buf.resize(m, Complex64::new(0.0, 0.0));
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);

    let half = m / 2;
    let nf = n as f64;
    let mut positive = Vec::with_capacity(half + 1);
    let mut negative = Vec::with_capacity(half + 1);
    let mut magnitude = Vec::with_capacity(half + 1);
    for k in 0..=half {
        let p = buf[k].norm() / nf;
        let q = buf[(m - k) % m].norm() / nf;
        positive.push(p);
        negative.push(q);
        let own_bin = k == 0 || (m.is_multiple_of(2) && k == half);
        magnitude.push(if own_bin { p } else { p.hypot(q) });
    }
    let resolution_hz = iq.sample_rate_hz / m as f64;
    let reference = DbReference::OwnMax;
    Ok(Spectrum {
        freqs_hz: (0..=half).map(|k| k as f64 * resolution_hz).collect(),
        magnitude_db: to_db(&magnitude, reference),
        magnitude,
        resolution_hz,
        positive,
        negative,
        fft_len: m,
        samples: n,
        reference,
    })
}

/// `20·log10(peak in signal band / median in noise band)`.
pub fn snr_peak_vs_floor(
    spectrum: &Spectrum,
    signal_band_hz: (f64, f64),
    noise_band_hz: (f64, f64),
) -> Result<f64> {
    let (s_lo, s_hi) = signal_band_hz;
    let (n_lo, n_hi) = noise_band_hz;
    if s_lo > s_hi || n_lo > n_hi {
        return Err(Error::invalid("band", "low edge above high edge"));
    }
    if s_lo <= n_hi && n_lo <= s_hi {
        return Err(Error::invalid("band", "signal and noise bands overlap"));
    }
    let (_, peak) = spectrum
        .peak_in(s_lo, s_hi)
        .ok_or(Error::Empty("signal band"))?;
    let mut noise: Vec<f64> = spectrum
        .freqs_hz
        .iter()
        .zip(&spectrum.magnitude)
        .filter(|(f, _)| **f >= n_lo && **f <= n_hi)
        .map(|(_, m)| *m)
        .collect();
    if noise.is_empty() {
        return Err(Error::Empty("noise band"));
    }
    noise.sort_by(f64::total_cmp);
    let mid = noise.len() / 2;
    let median = if noise.len().is_multiple_of(2) {
        0.5 * (noise[mid - 1] + noise[mid])
    } else {
        noise[mid]
    };
    Ok(20.0 * (peak / median).log10())
}
