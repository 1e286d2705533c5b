//! Simulation and signal processing for a 2.4 GHz quadrature CW Doppler
//! radar used for non-contact vital-sign monitoring.
//!
//! The crate is split along the signal chain:
//!
//! - [`radar`]: Doppler phase model, I/Q synthesis, complex demodulation and
//!   Bessel harmonic prediction.
//! - [`antenna`]: Jones-vector polarization, cosⁿ patterns, the sequentially
//!   rotated 2×2 array and the corporate feed-network synthesis.
//! - [`propagation`]: bistatic link budget, flat-plate RCS, Rayleigh
//!   roughness, image-method multipath and the receiver front end that turns
//!   a scene into baseband samples.
//! - [`dsp`]: DC cancellation, spectra, Butterworth filtering, sliding
//!   windows, autocorrelation pitch finding and accuracy metrics.

pub mod antenna;
pub mod bessel;
pub mod dsp;
mod error;
pub mod geometry;
pub mod propagation;
pub mod radar;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
