//! Baseband processing: DC removal, spectra, Butterworth filtering,
//! windowing, autocorrelation pitch estimation and accuracy metrics.

mod filter;
mod metrics;
mod pitch;
mod spectrum;
mod window;

pub use filter::{butterworth, apply_zero_phase, Butterworth, FilterKind, FilterSpec, Sos};
pub use metrics::{detection_accuracy, RateTrack, DEFAULT_TOLERANCE};
pub use pitch::{autocorr_pitch, autocorrelation, PitchEstimate, PitchEstimator, MIN_PROMINENCE_DB};
pub use spectrum::{complex_spectrum, snr_peak_vs_floor, DbReference, Spectrum, DEFAULT_ZERO_PAD};
pub use window::{hann, sliding_windows, SlidingWindows, Window};

use crate::radar::BasebandIQ;
use crate::{Error, Result};

fn centered(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    // second pass removes the rounding residue of the first
    let residue = x.iter().map(|v| v - mean).sum::<f64>() / n;
    x.iter().map(|v| v - mean - residue).collect()
}

/// Subtracts each channel's mean.
pub fn dc_cancel(iq: &BasebandIQ) -> Result<BasebandIQ> {
    iq.check()?;
    if iq.is_empty() {
        return Err(Error::Empty("baseband record"));
    }
    Ok(BasebandIQ {
        i: centered(&iq.i),
        q: centered(&iq.q),
        ..iq.clone()
    })
}

/// Pointwise mean of phase-aligned trials.
pub fn time_average(trials: &[BasebandIQ]) -> Result<BasebandIQ> {
    let first = trials.first().ok_or(Error::Empty("trial list"))?;
    for t in trials {
        t.check()?;
        if t.len() != first.len() {
            return Err(Error::LengthMismatch(format!(
                "trial of {} samples vs {}",
                t.len(),
                first.len()
            )));
        }
        if t.sample_rate_hz != first.sample_rate_hz {
            return Err(Error::LengthMismatch("trials differ in sample rate".into()));
        }
    }
    let n = trials.len() as f64;
    let mut out = first.clone();
    for k in 0..first.len() {
        out.i[k] = trials.iter().map(|t| t.i[k]).sum::<f64>() / n;
        out.q[k] = trials.iter().map(|t| t.q[k]).sum::<f64>() / n;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rms(x: &[f64]) -> f64 {
        (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
    }

    #[test]
    fn dc_cancel_examples() {
        let c = BasebandIQ::new(vec![3.3; 100], vec![-1.0; 100], 10.0).unwrap();
        let z = dc_cancel(&c).unwrap();
        assert!(z.i.iter().chain(&z.q).all(|v| v.abs() < 1e-15));

        let s: Vec<f64> = (0..1000).map(|n| (2.0 * std::f64::consts::PI * n as f64 / 100.0).sin()).collect();
        let shifted: Vec<f64> = s.iter().map(|v| v + 0.7).collect();
        let iq = BasebandIQ::new(shifted, s.clone(), 100.0).unwrap();
        let out = dc_cancel(&iq).unwrap();
        for (a, b) in out.i.iter().zip(&s) {
            assert!((a - b).abs() < 1e-12);
        }
        for (a, b) in out.q.iter().zip(&s) {
            assert!((a - b).abs() < 1e-12);
        }
        let mean = out.i.iter().sum::<f64>() / out.len() as f64;
        assert!(mean.abs() <= 1e-12 * rms(&out.i));
        assert!(dc_cancel(&BasebandIQ::new(vec![], vec![], 1.0).unwrap()).is_err());
    }

    #[test]
    fn time_average_examples() {
        let a = BasebandIQ::new(vec![1.0, 2.0, 3.0], vec![0.5, 0.0, -0.5], 5.0).unwrap();
        let avg = time_average(&vec![a.clone(); 5]).unwrap();
        for (x, y) in avg.i.iter().zip(&a.i) {
            assert!((x - y).abs() < 1e-15);
        }
        let short = BasebandIQ::new(vec![1.0], vec![1.0], 5.0).unwrap();
        assert!(time_average(&[a, short]).is_err());
        assert!(time_average(&[]).is_err());
    }
}
