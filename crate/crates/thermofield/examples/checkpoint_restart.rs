//! Stop a run halfway, serialize the state, reload it, and finish: the
//! restarted trajectory lands on the direct run to the checkpoint print
//! precision, and re-serializing reproduces the file byte for byte.
//!
//! cargo run --release --example checkpoint_restart

use thermofield::io::{load_checkpoint, save_checkpoint};
use thermofield::model::{InitialData, ModelParams, SourceSpec};
use thermofield::potential::YosidaConfig;
use thermofield::stepper::{integrate, Scheme, StepperConfig};
use thermofield::study::RunSetup;

fn setup(t_end: f64) -> RunSetup {
    RunSetup {
        cutoff: 8,
        params: ModelParams {
            heat_source: SourceSpec::Constant { value: 0.2 },
            yosida: YosidaConfig::with_eps(0.1),
            ..ModelParams::default()
        },
        init_theta: InitialData::Mode { index: 1, amplitude: 0.3 },
        init_phi: InitialData::TanhBump { center: 0.5, width: 0.2, amplitude: 0.6 },
        init_sigma: InitialData::RandomBand { max_mode: 4, amplitude: 0.2, seed: 9 },
        stepper: StepperConfig { scheme: Scheme::Imex1, dt: 1e-3, t_end, monitor_every: 10 },
        ..Default::default()
    }
}

fn main() {
    // First half, then serialize.
    let half = setup(0.05);
    let (basis, first) = half.run().unwrap();
    let text = save_checkpoint(&basis, first.final_state(), half.params.yosida.eps);
    println!("checkpoint at t = {} ({} bytes)", first.final_state().t, text.len());

    // Reload and integrate the second half.
    let ckpt = load_checkpoint(&text, &basis).unwrap();
    let mut state = ckpt.state;
    state.t = 0.0;
    let cfg = StepperConfig { scheme: Scheme::Imex1, dt: 1e-3, t_end: 0.05, monitor_every: 10 };
    let resumed = integrate(&half.params, &basis, state, &cfg).unwrap();

    // Direct run over the full horizon for comparison.
    let (_, direct) = setup(0.1).run().unwrap();

    let a = resumed.final_state();
    let b = direct.final_state();
    let mut worst = 0.0f64;
    for (x, y) in [(&a.theta, &b.theta), (&a.phi, &b.phi), (&a.sigma, &b.sigma)] {
        for (c, d) in x.coeffs.iter().zip(&y.coeffs) {
            worst = worst.max((c - d).abs());
        }
    }
    println!("restart vs direct at t = 0.1: worst coefficient gap {worst:.3e}");

    // The printed precision is lossless for f64, so a reload/save cycle is
    // the identity on the file.
    let again = save_checkpoint(&basis, &load_checkpoint(&text, &basis).unwrap().state, ckpt.eps);
    println!("serialize(deserialize(file)) == file: {}", again == text);
}
