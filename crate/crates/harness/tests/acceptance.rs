//! Acceptance criteria. Runs as a plain binary so each criterion prints one
//! PASS/FAIL line; exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use vitals_core::antenna::{
    feed_impedances, microstrip_width, pattern_gain, polarization_mismatch, reflect_polarization,
    AntennaKind, AntennaSpec, FeedNetwork, JonesVector, SubstrateSpec, SurfaceKind,
};
use vitals_core::dsp::{butterworth, complex_spectrum, detection_accuracy, FilterSpec, RateTrack};
use vitals_core::geometry::Vec3;
use vitals_core::propagation::{
    bistatic_received_power, plate_rcs_bistatic, rayleigh_critical_height, trace_paths, FrontEnd,
    Reflector, ReflectorKind, Scene, Station,
};
use vitals_core::radar::{synthesize_iq, BasebandIQ, CarrierConfig, MotionWaveform, NoiseSpec};
use vitals_core::SPEED_OF_LIGHT;
use vitals_harness::config::FrontEndConfig;
use vitals_harness::{run_session, run_sweep, ScenarioConfig};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: String) -> Outcome {
    if cond {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn configs_dir() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Power series for J_n.
fn bessel_series(n: u32, x: f64) -> f64 {
    let mut term = (x / 2.0).powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
    let mut sum = term;
    for m in 1..60 {
        term *= -(x * x / 4.0) / (m as f64 * (m + n) as f64);
        sum += term;
    }
    sum
}

fn actuator_carrier(phase: f64) -> CarrierConfig {
    CarrierConfig {
        frequency_hz: SPEED_OF_LIGHT / 0.125,
        residual_phase_rad: phase,
        ..CarrierConfig::default()
    }
}

const ACTUATOR: MotionWaveform = MotionWaveform::Sinusoid {
    amplitude_m: 0.02,
    period_s: 5.8,
};

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let iq = synthesize_iq(&ACTUATOR, &actuator_carrier(0.3), 290.0, 100.0, &NoiseSpec::none())
        .map_err(|e| e.to_string())?;
    let s = complex_spectrum(&iq, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let beta = 4.0 * PI * 0.02 / 0.125;
    let line = |n: usize| s.magnitude[50 * n];
    let mut worst: f64 = 0.0;
    for n in 2..=3 {
        let want = bessel_series(n as u32, beta).abs() / bessel_series(1, beta).abs();
        worst = worst.max((line(n) / line(1) / want - 1.0).abs());
    }
    check(
        worst < 0.01 && elapsed < 5.0,
        format!("Bessel line ratios, beta {beta:.4}: worst error {:.2e}, {elapsed:.2} s", worst),
    )
}

fn criterion_2() -> Outcome {
    let i_only = |iq: &BasebandIQ| BasebandIQ::new(iq.i.clone(), vec![0.0; iq.len()], iq.sample_rate_hz);
    let iq = synthesize_iq(&ACTUATOR, &actuator_carrier(0.0), 290.0, 100.0, &NoiseSpec::none())
        .map_err(|e| e.to_string())?;
    let s = complex_spectrum(&i_only(&iq).map_err(|e| e.to_string())?, 1).map_err(|e| e.to_string())?;
    let depth = 20.0 * (s.magnitude[100] / s.magnitude[50]).log10();
    let mut fund = Vec::new();
    for m in 0..36 {
        let phi = (10.0 * m as f64).to_radians();
        let iq = synthesize_iq(&ACTUATOR, &actuator_carrier(phi), 290.0, 100.0, &NoiseSpec::none())
            .map_err(|e| e.to_string())?;
        fund.push(20.0 * complex_spectrum(&iq, 1).map_err(|e| e.to_string())?.magnitude[50].log10());
    }
    let spread = fund.iter().cloned().fold(f64::MIN, f64::max) - fund.iter().cloned().fold(f64::MAX, f64::min);
    check(
        depth >= 40.0 && spread < 0.1,
        format!("I-channel H2 over fundamental {depth:.1} dB at null; complex fundamental spread {spread:.2e} dB"),
    )
}

fn criterion_3() -> Outcome {
    let hc = rayleigh_critical_height(SPEED_OF_LIGHT / 2.4e9, PI / 2.0).map_err(|e| e.to_string())?;
    check(
        (hc * 100.0 - 1.56).abs() <= 0.01,
        format!("critical height {:.4} cm", hc * 100.0),
    )
}

fn criterion_4() -> Outcome {
    use num_rational::Ratio;
    let f = feed_impedances(25.0).map_err(|e| e.to_string())?;
    let want = [
        Ratio::new(100, 1),
        Ratio::new(100, 3),
        Ratio::new(100, 1),
        Ratio::new(50, 1),
        Ratio::new(100, 1),
        Ratio::new(100, 1),
    ];
    let exact = (1..=6).all(|i| FeedNetwork::branch_ratio(i) * Ratio::from_integer(25) == want[i - 1]);
    let close = f
        .branch_impedances_ohm
        .iter()
        .zip(&want)
        .all(|(z, w)| (z - *w.numer() as f64 / *w.denom() as f64).abs() < 1e-12);
    check(
        exact && close && (f.transformer_impedance_ohm - 35.355).abs() <= 0.01,
        format!(
            "Z1..Z6 = {:?} ohm, transformer {:.4} ohm",
            f.branch_impedances_ohm.map(|z| (z * 100.0).round() / 100.0),
            f.transformer_impedance_ohm
        ),
    )
}

/// Quasi-static microstrip analysis, written out independently.
fn microstrip_oracle(w_over_d: f64, er: f64) -> f64 {
    let e_eff = (er + 1.0) / 2.0 + (er - 1.0) / 2.0 * (1.0 + 12.0 / w_over_d).powf(-0.5);
    if w_over_d <= 1.0 {
        60.0 / e_eff.sqrt() * (8.0 / w_over_d + w_over_d / 4.0).ln()
    } else {
        120.0 * PI / e_eff.sqrt() / (w_over_d + 1.393 + 0.667 * (w_over_d + 1.444).ln())
    }
}

fn criterion_5() -> Outcome {
    let sub = SubstrateSpec::fr4();
    let mut worst: f64 = 0.0;
    let mut worst_width: f64 = 0.0;
    for zc in [25.0, 33.3, 50.0, 100.0] {
        let w = microstrip_width(zc, &sub).map_err(|e| e.to_string())?;
        worst = worst.max((microstrip_oracle(w / sub.height_mm, sub.epsilon_r) / zc - 1.0).abs());
        // Numerical inversion of the oracle (impedance falls with width).
        let (mut lo, mut hi) = (1e-3f64, 100.0f64);
        for _ in 0..200 {
            let mid = (lo * hi).sqrt();
            if microstrip_oracle(mid, sub.epsilon_r) > zc {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        worst_width = worst_width.max((w / (lo * sub.height_mm) - 1.0).abs());
    }
    check(
        worst < 0.02,
        format!("worst impedance error {:.2}%, width vs numeric inverse {:.2}%", 100.0 * worst, 100.0 * worst_width),
    )
}

fn criterion_6() -> Outcome {
    let (v, h) = (JonesVector::lp_vertical(), JonesVector::lp_horizontal());
    let (r, l) = (JonesVector::rhcp(), JonesVector::lhcp());
    let lp_cp = [(v, r), (v, l), (h, r), (h, l), (r, v), (l, h)]
        .iter()
        .all(|(a, b)| (polarization_mismatch(a, b) - 0.5).abs() < 1e-15);
    let co = [v, h, r, l].iter().all(|a| (polarization_mismatch(a, a) - 1.0).abs() < 1e-15);
    let cross = polarization_mismatch(&v, &h) < 1e-15 && polarization_mismatch(&r, &l) < 1e-15;
    let bounce = reflect_polarization(&l, SurfaceKind::SmoothSpecular);
    let flips = polarization_mismatch(&bounce, &l) < 1e-15;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut random = || {
        let mut c = || Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        JonesVector::new(c(), c()).unwrap()
    };
    let fuzz = (0..10_000).all(|_| {
        let rho = polarization_mismatch(&random(), &random());
        (0.0..=1.0).contains(&rho)
    });
    check(
        lp_cp && co && cross && flips && fuzz,
        format!("LP/CP 0.5: {lp_cp}, co 1: {co}, cross 0: {cross}, handedness flip: {flips}, 1e4 fuzz in [0,1]: {fuzz}"),
    )
}

fn criterion_7() -> Outcome {
    let carrier = CarrierConfig::default();
    let lambda = carrier.wavelength_m();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let plate = Reflector::new(
        "plate",
        Vec3::new(0.0, 0.0, 1.0),
        Vec3::new(-1.0, 0.0, 0.0),
        (0.3, 0.2),
        ReflectorKind::TargetPlate,
    );
    let mut point = || {
        Vec3::new(
            -rng.random_range(0.3..3.0),
            rng.random_range(-1.0..1.0),
            1.0 + rng.random_range(-0.6..0.6),
        )
    };
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let (a, b, jitter) = (point(), point(), point());
        let station = |kind: AntennaKind, pos: Vec3, look: Vec3| Station {
            antenna: AntennaSpec::for_kind(kind, JonesVector::lhcp()),
            position_m: pos,
            boresight: (look - pos).normalized(),
        };
        let tx = station(AntennaKind::ALL[trial % 4], a, plate.center_m + jitter * 0.1);
        let rx = station(AntennaKind::ALL[(trial / 4) % 4], b, plate.center_m);
        let scene = Scene {
            tx: tx.clone(),
            rx: rx.clone(),
            target: plate.clone(),
            motion: MotionWaveform::still(),
            statics: vec![],
            max_order: 1,
            front_end: FrontEnd::default(),
        };
        let paths = trace_paths(&scene, &carrier, 1).map_err(|e| e.to_string())?;
        let c = plate.center_m;
        let gt = pattern_gain(&tx.antenna, tx.boresight.angle_to(c - a));
        let gr = pattern_gain(&rx.antenna, rx.boresight.angle_to(c - b));
        let sigma = plate_rcs_bistatic(&plate, (c - a).normalized(), (b - c).normalized(), lambda);
        let rho = polarization_mismatch(&paths[0].polarization_at_rx, &rx.antenna.polarization);
        let want = bistatic_received_power(carrier.tx_power_w(), gt, gr, sigma, lambda, rho, (c - a).norm(), (b - c).norm())
            .map_err(|e| e.to_string())?;
        if want > 0.0 {
            worst = worst.max((paths[0].power_w() / want - 1.0).abs());
        }
    }
    check(worst < 1e-9, format!("100 geometries, worst relative error {worst:.2e}"))
}

fn criterion_8() -> Outcome {
    let mut control = ScenarioConfig::actuator();
    control.noise = Default::default();
    control.statics.clear();
    control.max_order = 1;
    control.trials = 1;
    control.front_end = FrontEndConfig::ideal();
    control.target.roughness_height_m = 0.0;
    control.target.depression_deg = 0.0;
    let sweep = run_sweep(&control).map_err(|e| e.to_string())?;
    let mut asym: f64 = 0.0;
    for a in AntennaKind::ALL {
        for b in AntennaKind::ALL {
            asym = asym.max((sweep.get(a, b).metrics.fund_db - sweep.get(b, a).metrics.fund_db).abs());
        }
    }
    let full = run_sweep(&ScenarioConfig::load(&configs_dir().join("actuator.toml")).map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let fwd = full.get(AntennaKind::LpSingle, AntennaKind::LpArray).metrics.fund_db;
    let rev = full.get(AntennaKind::LpArray, AntennaKind::LpSingle).metrics.fund_db;
    let best = full.best();
    check(
        asym < 1e-9 && fwd > rev,
        format!(
            "control asymmetry {asym:.1e} dB; default scene lp-single->lp-array {fwd:.2} dB vs lp-array->lp-single {rev:.2} dB; best cell {}->{}",
            best.tx_kind, best.rx_kind
        ),
    )
}

fn physio_config() -> Result<ScenarioConfig, String> {
    ScenarioConfig::load(&configs_dir().join("physio.toml")).map_err(|e| e.to_string())
}

fn criterion_9() -> Outcome {
    let cfg = physio_config()?;
    let (tx, rx) = cfg.physio.as_ref().unwrap().recommended;
    let start = Instant::now();
    let s = run_session(&cfg, tx, rx, 0.5, 0).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed().as_secs_f64();
    let resp = s.result.resp_rate_bpm.unwrap_or(f64::NAN);
    let heart = s.result.heart_rate_bpm.unwrap_or(f64::NAN);
    check(
        (resp - 20.0).abs() <= 1.0 && (heart - 70.0).abs() <= 1.6 && elapsed < 30.0,
        format!("0.5 m: {resp:.2} breaths/min, {heart:.2} beats/min, 5-min session in {elapsed:.1} s"),
    )
}

fn constructed(outside: usize, total: usize) -> RateTrack {
    let rates = (0..total).map(|k| Some(if k < outside { 75.6 } else { 70.7 })).collect();
    RateTrack::new((0..total).map(|k| k as f64 * 0.1).collect(), rates, vec![70.0; total], 0.02).unwrap()
}

fn criterion_10() -> Outcome {
    let a75 = detection_accuracy(&constructed(25, 100), 0.02);
    let a88 = detection_accuracy(&constructed(12, 100), 0.02);
    let base = physio_config()?;
    let p = base.physio.clone().unwrap();
    let runs: Vec<(f64, f64)> = (0..20u64)
        .into_par_iter()
        .map(|seed| {
            let cfg = ScenarioConfig {
                seed: 1000 + seed,
                ..base.clone()
            };
            let acc = |(tx, rx)| run_session(&cfg, tx, rx, 1.5, 0).map(|s| s.result.accuracy_pct);
            Ok((acc(p.standard)?, acc(p.recommended)?))
        })
        .collect::<Result<_, vitals_harness::HarnessError>>()
        .map_err(|e| e.to_string())?;
    let wins = runs.iter().filter(|(s, r)| r > s).count();
    let mean = |f: fn(&(f64, f64)) -> f64| runs.iter().map(f).sum::<f64>() / runs.len() as f64;
    let (ms, mr) = (mean(|r| r.0), mean(|r| r.1));
    check(
        a75 == 75.0 && a88 == 88.0 && wins == runs.len() && mr > ms,
        format!(
            "constructed tracks {a75}% / {a88}%; 1.5 m over {} seeds: recommended {mr:.1}% vs standard {ms:.1}%, recommended ahead in {wins}",
            runs.len()
        ),
    )
}

fn criterion_11() -> Outcome {
    let fs = 100.0;
    let bp = butterworth(&FilterSpec::bandpass(0.85, 2.5), fs).map_err(|e| e.to_string())?;
    let lp = butterworth(&FilterSpec::lowpass(0.35), fs).map_err(|e| e.to_string())?;
    // Prewarped analog prototypes; zero-phase doubles the dB.
    let w = |f: f64| (PI * f / fs).tan();
    let bp_oracle = |f: f64| {
        let (wl, wh, x) = (w(0.85), w(2.5), w(f));
        let q = (x * x - wl * wh) / (x * (wh - wl));
        -20.0 * (1.0 + q.powi(10)).log10()
    };
    let lp_oracle = |f: f64| -20.0 * (1.0 + (w(f) / w(0.35)).powi(10)).log10();

    let tone_gain = |filter: &vitals_core::dsp::Butterworth, f: f64| -> Result<f64, String> {
        let n = 6000;
        let x: Vec<f64> = (0..n).map(|k| (2.0 * PI * f * k as f64 / fs).sin()).collect();
        let y = filter.filtfilt(&x).map_err(|e| e.to_string())?;
        let rms = |v: &[f64]| (v[n / 4..3 * n / 4].iter().map(|s| s * s).sum::<f64>()).sqrt();
        Ok(20.0 * (rms(&y) / rms(&x)).log10())
    };
    let stop = tone_gain(&bp, 0.33)?;
    let pass = tone_gain(&lp, 1.0 / 5.8)?;
    let oracle_ok = (bp.zero_phase_gain_db(0.33) - bp_oracle(0.33)).abs() < 0.01
        && (lp.zero_phase_gain_db(1.0 / 5.8) - lp_oracle(1.0 / 5.8)).abs() < 0.01;
    check(
        stop <= -30.0 && pass > -0.5 && oracle_ok,
        format!(
            "band-pass at 0.33 Hz {stop:.1} dB (oracle {:.1}); low-pass at 0.1724 Hz {pass:.3} dB (oracle {:.3})",
            bp_oracle(0.33),
            lp_oracle(1.0 / 5.8)
        ),
    )
}

fn criterion_12() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = configs_dir().join("actuator.toml");
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_vitals"))
            .arg("sweep")
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .output()
            .map_err(|e| e.to_string())?;
        if !status.status.success() {
            return Err(String::from_utf8_lossy(&status.stderr).into_owned());
        }
        outputs.push(out);
    }
    let mut files = vec!["sweep.csv".to_string(), "run.json".to_string()];
    for tx in AntennaKind::ALL {
        for rx in AntennaKind::ALL {
            files.push(format!("spectra/{tx}__{rx}.csv"));
        }
    }
    let read = |base: &Path, f: &str| std::fs::read(base.join(f)).map_err(|e| format!("{f}: {e}"));
    let mut same = 0;
    for f in &files {
        if read(&outputs[0], f)? == read(&outputs[1], f)? {
            same += 1;
        }
    }
    check(
        same == files.len(),
        format!("{same} of {} output files byte-identical across two runs", files.len()),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("Bessel harmonic oracle", criterion_1),
        ("null detection and complex cure", criterion_2),
        ("Rayleigh critical height", criterion_3),
        ("feed network impedances", criterion_4),
        ("microstrip round trip", criterion_5),
        ("polarization mismatch", criterion_6),
        ("link-budget consistency", criterion_7),
        ("reciprocity control and asymmetry", criterion_8),
        ("pipeline end to end", criterion_9),
        ("accuracy metric and ordering", criterion_10),
        ("filter suite", criterion_11),
        ("determinism", criterion_12),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        match outcome {
            Ok(msg) => println!("PASS criterion {:>2} ({name}): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
