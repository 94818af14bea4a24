//! Refine the spectral cutoff on a fixed coupled problem and compare
//! consecutive runs in the largest common space: the differences must shrink
//! as the cutoff grows.
//!
//! cargo run --release --example mode_refinement

use thermofield::model::{InitialData, ModelParams, SourceSpec};
use thermofield::potential::YosidaConfig;
use thermofield::stepper::{Scheme, StepperConfig};
use thermofield::study::{run_n_study, RunSetup, StudyConfig};

fn main() {
    let cfg = StudyConfig {
        setup: RunSetup {
            cutoff: 16,
            params: ModelParams {
                ell: 1.3,
                big_lambda: 0.9,
                chi: 0.7,
                tau: 0.1,
                lambda_p: 0.4,
                lambda_a: 0.2,
                lambda_e: 0.1,
                lambda_c: 0.3,
                lambda_b: 0.5,
                lambda_d: 0.25,
                heat_source: SourceSpec::Constant { value: 0.1 },
                nutrient_supply: SourceSpec::Constant { value: 0.5 },
                yosida: YosidaConfig::with_eps(0.1),
                ..ModelParams::default()
            },
            init_theta: InitialData::Shifted {
                base: Box::new(InitialData::Mode { index: 2, amplitude: 0.15 }),
                mode: 0,
                amount: 0.5,
            },
            init_phi: InitialData::TanhBump { center: 0.5, width: 0.2, amplitude: 0.6 },
            init_sigma: InitialData::RandomBand { max_mode: 4, amplitude: 0.2, seed: 9 },
            stepper: StepperConfig {
                scheme: Scheme::Imex1,
                dt: 1e-3,
                t_end: 0.5,
                monitor_every: 10,
            },
            ..Default::default()
        },
        n_list: vec![4, 8, 16, 32],
        ..StudyConfig::default()
    };

    let report = run_n_study(&cfg).unwrap();
    println!("cutoff refinement, tanh front data, T = 0.5:");
    println!(
        "  {:>4} {:>4} {:>12} {:>12} {:>12} {:>12} {:>8}",
        "n_a", "n_b", "sup|d theta|", "sup|d phi|", "sup|d sigma|", "max entry", "status"
    );
    for row in &report.rows {
        println!(
            "  {:>4} {:>4} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>8}",
            row.param_a,
            row.param_b,
            row.norms.sup_h_theta,
            row.norms.sup_h_phi,
            row.norms.sup_h_sigma,
            row.norms.max_entry(),
            row.status
        );
    }
    println!();
    println!("each row compares the run at n_a with the run at n_b inside the n_b space;");
    println!("shrinking rows mean the retained modes stop mattering.");
}
