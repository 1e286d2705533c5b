//! CSV and JSON outputs. All floats go through [`g9`].

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use vitals_core::antenna::FeedNetwork;
use vitals_core::dsp::Spectrum;
use vitals_core::radar::BasebandIQ;

use crate::error::{HarnessError, Result};
use crate::format::g9;
use crate::physio::AccuracyRow;
use crate::scenario::SweepResult;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

fn write_rows<W: std::io::Write>(w: W, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header)?;
    for r in rows {
        out.write_record(&r)?;
    }
    out.flush().map_err(|source| HarnessError::Io {
        path: "<csv>".into(),
        source,
    })
}

fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    if let Some(dir) = path.parent() {
        ensure_dir(dir)?;
    }
    let file = fs::File::create(path).map_err(io_err(path))?;
    write_rows(std::io::BufWriter::new(file), header, rows)
}

pub fn write_iq_csv(path: &Path, iq: &BasebandIQ) -> Result<()> {
    write_csv(
        path,
        &["t_s", "i", "q"],
        iq.times()
            .zip(iq.i.iter().zip(&iq.q))
            .map(|(t, (i, q))| vec![g9(t), g9(*i), g9(*q)]),
    )
}

/// Reads `t_s,i,q`. The sample rate comes from the time column, which must
/// be uniform.
pub fn read_iq_csv(path: &Path) -> Result<BasebandIQ> {
    let mut rdr = csv::Reader::from_path(path)?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| HarnessError::Data(format!("missing column `{name}`")))
    };
    let (ct, ci, cq) = (col("t_s")?, col("i")?, col("q")?);
    let (mut t, mut i, mut q) = (Vec::new(), Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let field = |c: usize| -> Result<f64> {
            rec.get(c)
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| HarnessError::Data(format!("row {}: bad number in column {c}", line + 2)))
        };
        t.push(field(ct)?);
        i.push(field(ci)?);
        q.push(field(cq)?);
    }
    if t.len() < 2 {
        return Err(HarnessError::Data("need at least two samples".into()));
    }
    let dt = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if !(dt > 0.0) {
        return Err(HarnessError::Data("time column must increase".into()));
    }
    if t.windows(2).any(|w| ((w[1] - w[0]) - dt).abs() > 1e-3 * dt) {
        return Err(HarnessError::Data("time column is not uniformly sampled".into()));
    }
    Ok(BasebandIQ::new(i, q, 1.0 / dt)?)
}

pub fn write_spectrum_csv(path: &Path, spectrum: &Spectrum) -> Result<()> {
    write_csv(
        path,
        &["f_hz", "mag", "mag_db"],
        spectrum
            .freqs_hz
            .iter()
            .zip(spectrum.magnitude.iter().zip(&spectrum.magnitude_db))
            .map(|(f, (m, d))| vec![g9(*f), g9(*m), g9(*d)]),
    )
}

pub fn write_sweep_csv(path: &Path, sweep: &SweepResult) -> Result<()> {
    write_csv(
        path,
        &["tx_kind", "rx_kind", "fund_db", "h2_db", "snr_db"],
        sweep.cells.iter().map(|c| {
            vec![
                c.tx_kind.to_string(),
                c.rx_kind.to_string(),
                g9(c.metrics.fund_db),
                g9(c.metrics.h2_db),
                g9(c.metrics.snr_db),
            ]
        }),
    )
}

/// `sweep.csv` plus one spectrum per cell under `spectra/`.
pub fn write_sweep(dir: &Path, sweep: &SweepResult) -> Result<Vec<PathBuf>> {
    let mut written = vec![dir.join("sweep.csv")];
    write_sweep_csv(&written[0], sweep)?;
    for c in &sweep.cells {
        let p = dir.join(c.spectrum_file());
        write_spectrum_csv(&p, &c.spectrum)?;
        written.push(p);
    }
    Ok(written)
}

pub fn write_accuracy_csv(path: &Path, rows: &[AccuracyRow]) -> Result<()> {
    write_csv(
        path,
        &["subject_id", "distance_m", "config", "accuracy_pct"],
        rows.iter().map(|r| {
            vec![
                r.subject_id.to_string(),
                g9(r.distance_m),
                r.config.clone(),
                g9(r.accuracy_pct),
            ]
        }),
    )
}

pub fn feed_rows(feed: &FeedNetwork) -> Vec<Vec<String>> {
    let widths = feed.line_widths_mm.as_deref().unwrap_or(&[]);
    feed.rows()
        .into_iter()
        .enumerate()
        .map(|(k, (branch, z))| {
            vec![branch, g9(z), widths.get(k).map(|w| g9(*w)).unwrap_or_default()]
        })
        .collect()
}

pub fn write_feed_csv<W: std::io::Write>(w: W, feed: &FeedNetwork) -> Result<()> {
    write_rows(w, &["branch", "impedance_ohm", "width_mm"], feed_rows(feed))
}

/// Run metadata. Contains nothing time- or host-dependent so reruns are
/// byte-identical.
#[derive(Debug, Serialize)]
pub struct RunMeta<'a, C: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'a str,
    pub seed: u64,
    pub outputs: Vec<String>,
    pub config: &'a C,
}

pub fn write_run_json<C: Serialize>(dir: &Path, meta: &RunMeta<'_, C>) -> Result<PathBuf> {
    let path = dir.join("run.json");
    ensure_dir(dir)?;
    let text = serde_json::to_string_pretty(meta)? + "\n";
    fs::write(&path, text).map_err(io_err(&path))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use vitals_core::radar::{synthesize_iq, MotionWaveform, NoiseSpec};

    #[test]
    fn iq_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let iq = synthesize_iq(
            &MotionWaveform::Sinusoid {
                amplitude_m: 0.01,
                period_s: 4.0,
            },
            &Default::default(),
            8.0,
            50.0,
            &NoiseSpec::none(),
        )
        .unwrap();
        let p = dir.path().join("iq.csv");
        write_iq_csv(&p, &iq).unwrap();
        let back = read_iq_csv(&p).unwrap();
        assert_eq!(back.len(), iq.len());
        assert!((back.sample_rate_hz - 50.0).abs() < 1e-9);
        for (a, b) in back.i.iter().zip(&iq.i) {
            assert!((a - b).abs() <= 1e-8 * b.abs().max(1e-300) + 1e-15);
        }
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("t_s,i,q\n0,"));
    }

    #[test]
    fn rejects_irregular_time() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "t_s,i,q\n0,1,0\n0.01,1,0\n0.05,1,0\n").unwrap();
        assert!(read_iq_csv(&p).is_err());
        std::fs::write(&p, "t,i,q\n0,1,0\n").unwrap();
        assert!(read_iq_csv(&p).unwrap_err().to_string().contains("t_s"));
    }
}
