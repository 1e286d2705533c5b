//! Prints the receiver operating point of every antenna pair of a config.
//!
//! cargo run --release -p vitals-harness --example budget -- configs/actuator.toml

use vitals_core::antenna::AntennaKind;
use vitals_core::propagation::{link_budget, trace_paths};
use vitals_harness::ScenarioConfig;

fn db10(x: f64) -> f64 {
    10.0 * x.max(1e-300).log10()
}

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1).expect("config path");
    let cfg = ScenarioConfig::load(path.as_ref())?;
    println!(
        "{:>10} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>9}",
        "tx", "rx", "target", "clutter", "leak", "ambient", "gain", "signal", "noise"
    );
    for tx in AntennaKind::ALL {
        for rx in AntennaKind::ALL {
            let scene = cfg.scene(tx, rx)?;
            let paths = trace_paths(&scene, &cfg.carrier, scene.max_order)?;
            let b = link_budget(&scene, &cfg.carrier, &paths);
            let target: f64 = paths.iter().filter(|p| p.includes_target).map(|p| p.complex_amplitude.norm()).sum();
            let clutter = b.static_phasor - scene.front_end.leakage(cfg.carrier.tx_power_w());
            let p_ref = scene.front_end.reference_power_w;
            println!(
                "{:>10} {:>10} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>8.1} {:>9.4}",
                tx.to_string(),
                rx.to_string(),
                db10(target * target),
                db10(clutter.norm_sqr()),
                db10(b.leakage_w),
                db10(b.ambient_w),
                db10(b.gain),
                db10(target * target * b.gain * b.gain / p_ref),
                b.coupled_noise_std,
            );
        }
    }
    Ok(())
}
