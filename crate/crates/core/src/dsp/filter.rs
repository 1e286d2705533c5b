use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    Lowpass,
    Bandpass,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterSpec {
    pub kind: FilterKind,
    #[serde(default = "default_order")]
    pub order: usize,
    pub edges_hz: Vec<f64>,
}

fn default_order() -> usize {
    5
}

impl FilterSpec {
    pub fn lowpass(cutoff_hz: f64) -> Self {
        FilterSpec {
            kind: FilterKind::Lowpass,
            order: 5,
            edges_hz: vec![cutoff_hz],
        }
    }

    pub fn bandpass(low_hz: f64, high_hz: f64) -> Self {
        FilterSpec {
            kind: FilterKind::Bandpass,
            order: 5,
            edges_hz: vec![low_hz, high_hz],
        }
    }

    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        if self.order == 0 {
            return Err(Error::invalid("order", "must be at least 1"));
        }
        let want = match self.kind {
            FilterKind::Lowpass => 1,
            FilterKind::Bandpass => 2,
        };
        if self.edges_hz.len() != want {
            return Err(Error::invalid("edges_hz", format!("expected {want} edge(s)")));
        }
        let nyquist = sample_rate_hz / 2.0;
        if self.edges_hz.iter().any(|&e| !(e > 0.0 && e < nyquist)) {
            return Err(Error::invalid("edges_hz", format!("must lie in (0, {nyquist}) Hz")));
        }
        if want == 2 && self.edges_hz[0] >= self.edges_hz[1] {
            return Err(Error::invalid("edges_hz", "low edge must be below high edge"));
        }
        Ok(())
    }
}

/// One biquad, `a[0] = 1`, transposed direct form II.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sos {
    pub b: [f64; 3],
    pub a: [f64; 3],
}

impl Sos {
    fn response(&self, z_inv: Complex64) -> Complex64 {
        let z2 = z_inv * z_inv;
        (self.b[0] + z_inv * self.b[1] + z2 * self.b[2])
            / (self.a[0] + z_inv * self.a[1] + z2 * self.a[2])
    }

    fn dc_gain(&self) -> f64 {
        (self.b[0] + self.b[1] + self.b[2]) / (1.0 + self.a[1] + self.a[2])
    }

    /// State that makes a unit constant input pass without a transient.
    fn step_state(&self) -> [f64; 2] {
        let g = self.dc_gain();
        let z2 = self.b[2] - self.a[2] * g;
        let z1 = self.b[1] - self.a[1] * g + z2;
        [z1, z2]
    }

    fn run(&self, x: &mut [f64], mut z: [f64; 2]) {
        for v in x.iter_mut() {
            let y = self.b[0] * *v + z[0];
            z[0] = self.b[1] * *v - self.a[1] * y + z[1];
            z[1] = self.b[2] * *v - self.a[2] * y;
            *v = y;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Butterworth {
    pub spec: FilterSpec,
    pub sample_rate_hz: f64,
    pub sections: Vec<Sos>,
}

impl Butterworth {
    pub fn response(&self, f_hz: f64) -> Complex64 {
        let z_inv = Complex64::from_polar(1.0, -2.0 * PI * f_hz / self.sample_rate_hz);
        self.sections.iter().map(|s| s.response(z_inv)).product()
    }

    pub fn gain_db(&self, f_hz: f64) -> f64 {
        20.0 * self.response(f_hz).norm().log10()
    }

    /// Gain of the forward-backward cascade.
    pub fn zero_phase_gain_db(&self, f_hz: f64) -> f64 {
        2.0 * self.gain_db(f_hz)
    }

    pub fn poles(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for s in &self.sections {
            let (a1, a2) = (s.a[1], s.a[2]);
            if a2 == 0.0 {
                out.push(Complex64::new(-a1, 0.0));
            } else {
                let disc = Complex64::new(a1 * a1 - 4.0 * a2, 0.0).sqrt();
                out.push((-a1 + disc) / 2.0);
                out.push((-a1 - disc) / 2.0);
            }
        }
        out
    }

    /// Causal filtering from rest.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = x.to_vec();
        for s in &self.sections {
            s.run(&mut y, [0.0; 2]);
        }
        y
    }

    fn pad_len(&self) -> usize {
        3 * (2 * self.sections.len() + 1)
    }

    fn run_from_steady_state(&self, x: &mut [f64]) {
        let mut level = x[0];
        for s in &self.sections {
            let z = s.step_state();
            s.run(x, [z[0] * level, z[1] * level]);
            level *= s.dc_gain();
        }
    }

    /// Forward-backward filtering with odd-symmetric end extension and
    /// steady-state initial conditions.
    pub fn filtfilt(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = x.len();
        if n < 2 {
            return Err(Error::invalid("series", "needs at least 2 samples"));
        }
        let pad = self.pad_len().min(n - 1);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|k| 2.0 * x[0] - x[k]));
        ext.extend_from_slice(x);
        ext.extend((1..=pad).map(|k| 2.0 * x[n - 1] - x[n - 1 - k]));
        self.run_from_steady_state(&mut ext);
        ext.reverse();
        self.run_from_steady_state(&mut ext);
        ext.reverse();
        Ok(ext[pad..pad + n].to_vec())
    }

    pub fn filtfilt_complex(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let re: Vec<f64> = x.iter().map(|c| c.re).collect();
        let im: Vec<f64> = x.iter().map(|c| c.im).collect();
        let re = self.filtfilt(&re)?;
        let im = self.filtfilt(&im)?;
        Ok(re.into_iter().zip(im).map(|(a, b)| Complex64::new(a, b)).collect())
    }
}

fn prototype_poles(order: usize) -> Vec<Complex64> {
    (0..order)
        .map(|k| {
            let theta = PI * (2 * k + order + 1) as f64 / (2 * order) as f64;
            Complex64::from_polar(1.0, theta)
        })
        .collect()
}

fn bilinear(s: Complex64, fs: f64) -> Complex64 {
    (2.0 * fs + s) / (2.0 * fs - s)
}

fn prewarp(f_hz: f64, fs: f64) -> f64 {
    2.0 * fs * (PI * f_hz / fs).tan()
}

/// Groups z-plane poles into conjugate pairs (complex) or real pairs.
fn pole_pairs(poles: &[Complex64]) -> Vec<(Complex64, Option<Complex64>)> {
    let tol = 1e-10;
    let mut reals: Vec<f64> = Vec::new();
    let mut out = Vec::new();
    for p in poles {
        if p.im.abs() <= tol {
            reals.push(p.re);
        } else if p.im > 0.0 {
            out.push((*p, Some(p.conj())));
        }
    }
    reals.sort_by(f64::total_cmp);
    for pair in reals.chunks(2) {
        let a = Complex64::new(pair[0], 0.0);
        out.push((a, pair.get(1).map(|&b| Complex64::new(b, 0.0))));
    }
    out
}

/// Digital Butterworth design by bilinear transform with pre-warped edges.
/// A bandpass of order `n` has `2n` poles.
pub fn butterworth(spec: &FilterSpec, sample_rate_hz: f64) -> Result<Butterworth> {
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return Err(Error::invalid("sample_rate_hz", "must be positive"));
    }
    spec.validate(sample_rate_hz)?;
    let fs = sample_rate_hz;
    let proto = prototype_poles(spec.order);
    let mut sections = Vec::new();
    let norm_z_inv;
    match spec.kind {
        FilterKind::Lowpass => {
            let wc = prewarp(spec.edges_hz[0], fs);
            let z: Vec<Complex64> = proto.iter().map(|p| bilinear(*p * wc, fs)).collect();
            for (p, q) in pole_pairs(&z) {
                sections.push(match q {
                    Some(q) => Sos {
                        b: [1.0, 2.0, 1.0],
                        a: [1.0, -(p + q).re, (p * q).re],
                    },
                    None => Sos {
                        b: [1.0, 1.0, 0.0],
                        a: [1.0, -p.re, 0.0],
                    },
                });
            }
            norm_z_inv = Complex64::new(1.0, 0.0);
        }
        FilterKind::Bandpass => {
            let w1 = prewarp(spec.edges_hz[0], fs);
            let w2 = prewarp(spec.edges_hz[1], fs);
            let w0 = (w1 * w2).sqrt();
            let bw = w2 - w1;
            let mut z = Vec::with_capacity(2 * spec.order);
            for p in &proto {
                let half = *p * bw / 2.0;
                let root = (half * half - w0 * w0).sqrt();
                z.push(bilinear(half + root, fs));
                z.push(bilinear(half - root, fs));
            }
            for (p, q) in pole_pairs(&z) {
                let q = q.expect("bandpass poles come in pairs");
                sections.push(Sos {
                    b: [1.0, 0.0, -1.0],
                    a: [1.0, -(p + q).re, (p * q).re],
                });
            }
            let center = 2.0 * (w0 / (2.0 * fs)).atan();
            norm_z_inv = Complex64::from_polar(1.0, -center);
        }
    }
    let g: Complex64 = sections.iter().map(|s| s.response(norm_z_inv)).product();
    let scale = 1.0 / g.norm();
    for b in sections[0].b.iter_mut() {
        *b *= scale;
    }
    Ok(Butterworth {
        spec: spec.clone(),
        sample_rate_hz,
        sections,
    })
}

/// Zero-phase (forward-backward) application to a complex series.
pub fn apply_zero_phase(filter: &Butterworth, series: &[Complex64]) -> Result<Vec<Complex64>> {
    filter.filtfilt_complex(series)
}
