use rayon::prelude::*;
use serde::Serialize;
use vitals_core::antenna::AntennaKind;
use vitals_core::dsp::{complex_spectrum, dc_cancel, snr_peak_vs_floor, time_average, DbReference, Spectrum};
use vitals_core::propagation::compose_baseband;
use vitals_core::radar::BasebandIQ;

use crate::config::ScenarioConfig;
use crate::error::{HarnessError, Result};
use crate::seed::derive_seed;

/// SNR reported when the noise floor is exactly zero.
pub const SNR_CLAMP_DB: f64 = 300.0;
/// dB floor for magnitudes that are exactly zero.
pub const DB_FLOOR: f64 = -400.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Metrics {
    pub fundamental_hz: f64,
    /// Relative to unit baseband amplitude.
    pub fund_db: f64,
    pub h2_db: f64,
    pub snr_db: f64,
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub trials: Vec<BasebandIQ>,
    /// Trial average after DC cancellation.
    pub averaged: BasebandIQ,
    pub spectrum: Spectrum,
    pub metrics: Metrics,
}

pub(crate) fn db(x: f64) -> f64 {
    if x > 0.0 {
        (20.0 * x.log10()).max(DB_FLOOR)
    } else {
        DB_FLOOR
    }
}

pub fn cell_index(tx: AntennaKind, rx: AntennaKind) -> u64 {
    (tx.index() * AntennaKind::ALL.len() + rx.index()) as u64
}

pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioRun> {
    config.validate()?;
    run_cell(config, config.tx_kind, config.rx_kind)
}

/// One antenna pair of `config`. Trial `t` draws noise from the stream
/// `(seed, cell, t)`, so results do not depend on execution order.
pub fn run_cell(config: &ScenarioConfig, tx: AntennaKind, rx: AntennaKind) -> Result<ScenarioRun> {
    let scene = config.scene(tx, rx)?;
    let cell = cell_index(tx, rx);
    let trials = (0..config.trials)
        .map(|t| {
            let noise = config.noise.spec(derive_seed(config.seed, &[cell, t as u64]));
            compose_baseband(&scene, &config.carrier, config.duration_s, config.sample_rate_hz, &noise)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let averaged = dc_cancel(&time_average(&trials)?)?;
    let spectrum = complex_spectrum(&averaged, config.analysis.zero_pad)?
        .with_reference(DbReference::Absolute(1.0));
    let metrics = measure(&spectrum, config)?;
    Ok(ScenarioRun {
        trials,
        averaged,
        spectrum,
        metrics,
    })
}

pub fn measure(spectrum: &Spectrum, config: &ScenarioConfig) -> Result<Metrics> {
    let (lo, hi) = config.analysis.fundamental_band_hz;
    let (f1, m1) = spectrum
        .peak_in(lo, hi)
        .ok_or_else(|| HarnessError::Data("empty fundamental band".into()))?;
    let h2 = spectrum.peak_near(2.0 * f1, 2);
    let half = 2.0 * spectrum.resolution_hz;
    let snr = snr_peak_vs_floor(spectrum, (f1 - half, f1 + half), config.analysis.noise_band_hz)?;
    Ok(Metrics {
        fundamental_hz: f1,
        fund_db: db(m1),
        h2_db: db(h2),
        snr_db: if snr.is_nan() { 0.0 } else { snr.clamp(-SNR_CLAMP_DB, SNR_CLAMP_DB) },
    })
}

#[derive(Debug, Clone)]
pub struct SweepCell {
    pub tx_kind: AntennaKind,
    pub rx_kind: AntennaKind,
    pub metrics: Metrics,
    pub spectrum: Spectrum,
}

impl SweepCell {
    pub fn spectrum_file(&self) -> String {
        format!("spectra/{}__{}.csv", self.tx_kind, self.rx_kind)
    }
}

/// All 16 ordered pairs, Tx-major in [`AntennaKind::ALL`] order.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
}

impl SweepResult {
    pub fn get(&self, tx: AntennaKind, rx: AntennaKind) -> &SweepCell {
        &self.cells[cell_index(tx, rx) as usize]
    }

    pub fn best(&self) -> &SweepCell {
        self.cells
            .iter()
            .max_by(|a, b| a.metrics.fund_db.total_cmp(&b.metrics.fund_db))
            .expect("16 cells")
    }
}

pub fn run_sweep(base: &ScenarioConfig) -> Result<SweepResult> {
    base.validate()?;
    let pairs: Vec<(AntennaKind, AntennaKind)> = AntennaKind::ALL
        .iter()
        .flat_map(|&t| AntennaKind::ALL.iter().map(move |&r| (t, r)))
        .collect();
    let cells = pairs
        .par_iter()
        .map(|&(tx, rx)| {
            let run = run_cell(base, tx, rx)?;
            Ok(SweepCell {
                tx_kind: tx,
                rx_kind: rx,
                metrics: run.metrics,
                spectrum: run.spectrum,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ScenarioConfig;

    fn short() -> ScenarioConfig {
        ScenarioConfig {
            duration_s: 58.0,
            trials: 2,
            ..ScenarioConfig::actuator()
        }
    }

    #[test]
    fn actuator_fundamental() {
        let run = run_scenario(&ScenarioConfig::actuator()).unwrap();
        let res = run.spectrum.resolution_hz;
        assert!((run.metrics.fundamental_hz - 1.0 / 5.8).abs() <= res, "{:?}", run.metrics);
        assert_eq!(run.trials.len(), 5);
        assert!(run.metrics.snr_db.is_finite());
    }

    #[test]
    fn cells_are_order_independent() {
        let cfg = short();
        let sweep = run_sweep(&cfg).unwrap();
        assert_eq!(sweep.cells.len(), 16);
        let alone = run_cell(&cfg, AntennaKind::CpSingle, AntennaKind::LpArray).unwrap();
        assert_eq!(
            sweep.get(AntennaKind::CpSingle, AntennaKind::LpArray).metrics,
            alone.metrics
        );
    }

    #[test]
    fn noiseless_snr_is_clamped() {
        let mut cfg = short();
        cfg.noise = Default::default();
        cfg.front_end = crate::config::FrontEndConfig::ideal();
        cfg.statics.clear();
        let m = run_scenario(&cfg).unwrap().metrics;
        assert!(m.snr_db.is_finite() && m.fund_db.is_finite() && m.h2_db.is_finite());
    }
}
