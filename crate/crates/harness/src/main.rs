use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use vitals_core::antenna::{feed_impedances, AntennaKind, SubstrateSpec};
use vitals_core::dsp::{complex_spectrum, dc_cancel, DbReference};
use vitals_harness::io::{self, RunMeta};
use vitals_harness::{accuracy_report, run_scenario, run_sweep, ScenarioConfig};

#[derive(Parser)]
#[command(name = "vitals", version, about = "CW Doppler vital-sign radar simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Template {
    Actuator,
    Physio,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario; writes iq.csv, spectrum.csv and run.json.
    Simulate {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Run all 16 Tx/Rx antenna pairs; writes sweep.csv, spectra/ and run.json.
    Sweep {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Simulated-subject sessions; writes accuracy.csv and run.json.
    Physio {
        config: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
    },
    /// Feed-network impedances and microstrip widths as CSV on stdout.
    DesignFeed {
        #[arg(long, default_value_t = 25.0)]
        z0: f64,
        #[arg(long, default_value_t = 4.4)]
        er: f64,
        /// Substrate height in mm.
        #[arg(long, default_value_t = 1.6)]
        height: f64,
    },
    /// Spectrum of a recorded iq.csv (t_s,i,q); writes spectrum.csv.
    Spectrum {
        iq: PathBuf,
        #[arg(short, long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = vitals_core::dsp::DEFAULT_ZERO_PAD)]
        zero_pad: usize,
    },
    /// Print a default configuration file.
    Init {
        #[arg(value_enum, default_value = "actuator")]
        template: Template,
    },
}

fn load(path: &Path) -> Result<ScenarioConfig> {
    ScenarioConfig::load(path).with_context(|| format!("loading {}", path.display()))
}

fn names(dir: &Path, paths: &[PathBuf]) -> Vec<String> {
    paths
        .iter()
        .map(|p| p.strip_prefix(dir).unwrap_or(p).display().to_string())
        .collect()
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate { config, out } => {
            let cfg = load(&config)?;
            let run = run_scenario(&cfg)?;
            let files = [out.join("iq.csv"), out.join("spectrum.csv")];
            io::write_iq_csv(&files[0], &run.averaged)?;
            io::write_spectrum_csv(&files[1], &run.spectrum)?;
            io::write_run_json(
                &out,
                &RunMeta {
                    tool: "vitals",
                    version: env!("CARGO_PKG_VERSION"),
                    command: "simulate",
                    seed: cfg.seed,
                    outputs: names(&out, &files),
                    config: &cfg,
                },
            )?;
            let m = run.metrics;
            println!(
                "{}: f1 {:.4} Hz, fund {:.2} dB, h2 {:.2} dB, snr {:.2} dB",
                cfg, m.fundamental_hz, m.fund_db, m.h2_db, m.snr_db
            );
        }
        Command::Sweep { config, out } => {
            let cfg = load(&config)?;
            let sweep = run_sweep(&cfg)?;
            let files = io::write_sweep(&out, &sweep)?;
            io::write_run_json(
                &out,
                &RunMeta {
                    tool: "vitals",
                    version: env!("CARGO_PKG_VERSION"),
                    command: "sweep",
                    seed: cfg.seed,
                    outputs: names(&out, &files),
                    config: &cfg,
                },
            )?;
            print!("{:>10}", "rx \\ tx");
            for tx in AntennaKind::ALL {
                print!("{:>11}", tx.to_string());
            }
            println!();
            for rx in AntennaKind::ALL {
                print!("{:>10}", rx.to_string());
                for tx in AntennaKind::ALL {
                    print!("{:>11.2}", sweep.get(tx, rx).metrics.fund_db);
                }
                println!();
            }
            let best = sweep.best();
            println!(
                "best: {} -> {} at {:.2} dB",
                best.tx_kind, best.rx_kind, best.metrics.fund_db
            );
        }
        Command::Physio { config, out } => {
            let cfg = load(&config)?;
            let rows = accuracy_report(&cfg)?;
            let path = out.join("accuracy.csv");
            io::write_accuracy_csv(&path, &rows)?;
            io::write_run_json(
                &out,
                &RunMeta {
                    tool: "vitals",
                    version: env!("CARGO_PKG_VERSION"),
                    command: "physio",
                    seed: cfg.seed,
                    outputs: names(&out, &[path]),
                    config: &cfg,
                },
            )?;
            for r in rows {
                println!("{} {} m {}: {:.1}%", r.subject_id, r.distance_m, r.config, r.accuracy_pct);
            }
        }
        Command::DesignFeed { z0, er, height } => {
            let substrate = SubstrateSpec {
                epsilon_r: er,
                height_mm: height,
                loss_tangent: 0.0,
            };
            let feed = feed_impedances(z0)?.with_line_widths(&substrate)?;
            io::write_feed_csv(std::io::stdout().lock(), &feed)?;
        }
        Command::Spectrum { iq, out, zero_pad } => {
            let data = io::read_iq_csv(&iq).with_context(|| format!("reading {}", iq.display()))?;
            let spectrum = complex_spectrum(&dc_cancel(&data)?, zero_pad)?
                .with_reference(DbReference::Absolute(1.0));
            let path = out.join("spectrum.csv");
            io::write_spectrum_csv(&path, &spectrum)?;
            if let Some((f, m)) = spectrum.peak_in(spectrum.resolution_hz, f64::INFINITY) {
                println!("peak {:.4} Hz, {:.2} dB", f, 20.0 * m.log10());
            }
        }
        Command::Init { template } => {
            let cfg = match template {
                Template::Actuator => ScenarioConfig::actuator(),
                Template::Physio => ScenarioConfig::physio(),
            };
            print!("{}", cfg.to_toml()?);
        }
    }
    Ok(())
}
