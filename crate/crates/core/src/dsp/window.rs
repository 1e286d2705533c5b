use std::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Symmetric Hann taper; both endpoints are zero.
pub fn hann(len: usize) -> Vec<f64> {
    match len {
        0 => vec![],
        1 => vec![1.0],
        _ => (0..len)
            .map(|n| 0.5 * (1.0 - (2.0 * PI * n as f64 / (len - 1) as f64).cos()))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub start_s: f64,
    pub samples: Vec<Complex64>,
}

/// Hann-tapered windows of a complex series. Lazily produced; each window
/// owns its samples.
#[derive(Debug, Clone)]
pub struct SlidingWindows<'a> {
    series: &'a [Complex64],
    sample_rate_hz: f64,
    taper: Vec<f64>,
    step: usize,
    next: usize,
    count: usize,
}

impl SlidingWindows<'_> {
    pub fn window_len(&self) -> usize {
        self.taper.len()
    }

    pub fn step_len(&self) -> usize {
        self.step
    }

    pub fn get(&self, index: usize) -> Option<Window> {
        if index >= self.count {
            return None;
        }
        let start = index * self.step;
        let samples = self.series[start..start + self.taper.len()]
            .iter()
            .zip(&self.taper)
            .map(|(x, w)| x * w)
            .collect();
        Some(Window {
            start_s: start as f64 / self.sample_rate_hz,
            samples,
        })
    }
}

impl Iterator for SlidingWindows<'_> {
    type Item = Window;

    fn next(&mut self) -> Option<Window> {
        let w = self.get(self.next)?;
        self.next += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.count - self.next.min(self.count);
        (left, Some(left))
    }
}

impl ExactSizeIterator for SlidingWindows<'_> {}

/// `floor((N - W) / step) + 1` windows of `window_s` seconds every `step_s`.
pub fn sliding_windows(
    series: &[Complex64],
    sample_rate_hz: f64,
    window_s: f64,
    step_s: f64,
) -> Result<SlidingWindows<'_>> {
    if !(sample_rate_hz > 0.0) {
        return Err(Error::invalid("sample_rate_hz", "must be positive"));
    }
    let len = (window_s * sample_rate_hz).round() as usize;
    let step = (step_s * sample_rate_hz).round() as usize;
    if len == 0 || step == 0 {
        return Err(Error::invalid("window", "window and step must span at least one sample"));
    }
    if series.len() < len {
        return Err(Error::invalid(
            "series",
            format!("{} samples is shorter than the {len}-sample window", series.len()),
        ));
    }
    Ok(SlidingWindows {
        series,
        sample_rate_hz,
        taper: hann(len),
        step,
        next: 0,
        count: (series.len() - len) / step + 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_minute_record_window_count() {
        let x = vec![Complex64::new(1.0, 0.0); 30_000];
        let w = sliding_windows(&x, 100.0, 10.0, 0.1).unwrap();
        assert_eq!(w.len(), 2901);
        let last = w.clone().last().unwrap();
        assert!((last.start_s - 290.0).abs() < 1e-9);
    }

    #[test]
    fn exact_length_gives_one_window() {
        let x = vec![Complex64::new(1.0, 1.0); 1000];
        let mut w = sliding_windows(&x, 100.0, 10.0, 0.1).unwrap();
        assert_eq!(w.len(), 1);
        let first = w.next().unwrap();
        assert_eq!(first.samples[0], Complex64::new(0.0, 0.0));
        assert_eq!(first.samples[999], Complex64::new(0.0, 0.0));
        assert!(w.next().is_none());
    }

    #[test]
    fn short_series_rejected() {
        let x = vec![Complex64::new(1.0, 0.0); 999];
        assert!(sliding_windows(&x, 100.0, 10.0, 0.1).is_err());
    }

    #[test]
    fn hann_shape() {
        let h = hann(101);
        assert_eq!(h[0], 0.0);
        assert!(h[100].abs() < 1e-15);
        assert!((h[50] - 1.0).abs() < 1e-15);
    }
}
