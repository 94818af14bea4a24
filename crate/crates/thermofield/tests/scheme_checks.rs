//! Consistency of the two time steppers against each other and against
//! closed-form single-mode solutions.

use thermofield::basis::{build_basis, BoxDomain};
use thermofield::model::{InitialData, ModelParams, SourceSpec};
use thermofield::potential::{PotentialSpec, YosidaConfig};
use thermofield::stepper::{integrate, Scheme, StepperConfig};
use thermofield::study::RunSetup;

/// Smooth fully coupled configuration with every reaction channel active and
/// pointwise ranges that keep both clamps in their interior regime.  The
/// explicit stepper must resolve the stiffest retained phase mode, whose
/// decay rate is gamma^2/(1 + tau*gamma): tau = 0.5 and low-mode data keep
/// dt * rate within the rk4 stability interval at every step size used here.
fn coupled_setup(n: usize, scheme: Scheme, dt: f64, t_end: f64) -> RunSetup {
    RunSetup {
        cutoff: n,
        params: ModelParams {
            ell: 1.3,
            big_lambda: 0.9,
            chi: 0.7,
            tau: 0.5,
            lambda_p: 0.4,
            lambda_a: 0.2,
            lambda_e: 0.1,
            lambda_c: 0.3,
            lambda_b: 0.5,
            lambda_d: 0.25,
            heat_source: SourceSpec::Sum(vec![
                SourceSpec::Constant { value: 0.1 },
                SourceSpec::CosineMode { index: 2, amplitude: 0.3 },
            ]),
            nutrient_supply: SourceSpec::Constant { value: 0.5 },
            yosida: YosidaConfig::with_eps(0.1),
            ..ModelParams::default()
        },
        init_theta: InitialData::Shifted {
            base: Box::new(InitialData::Mode { index: 1, amplitude: 0.15 }),
            mode: 0,
            amount: 0.5,
        },
        init_phi: InitialData::Mode { index: 1, amplitude: 0.5 },
        init_sigma: InitialData::RandomBand { max_mode: 2, amplitude: 0.2, seed: 9 },
        stepper: StepperConfig { scheme, dt, t_end, monitor_every: 50 },
        ..Default::default()
    }
}

#[test]
fn imex_reproduces_backward_euler_on_the_decoupled_heat_mode() {
    let basis = build_basis(&BoxDomain::interval(1.0).unwrap(), 8, None).unwrap();
    let params = ModelParams {
        big_lambda: 0.0,
        chi: 0.0,
        potential: PotentialSpec::Zero,
        ..ModelParams::default()
    };
    let setup = RunSetup {
        cutoff: 8,
        params,
        init_theta: InitialData::Mode { index: 1, amplitude: 1.0 },
        stepper: StepperConfig {
            scheme: Scheme::Imex1,
            dt: 1e-2,
            t_end: 1.0,
            monitor_every: 100,
        },
        ..Default::default()
    };
    let init = setup.initial_state(&basis).unwrap();
    let traj = integrate(&setup.params, &basis, init, &setup.stepper).unwrap();
    let gamma = basis.eigenvalues()[1];
    let steps = 100;
    let expect = (1.0 + 1e-2 * gamma).powi(-steps);
    let got = traj.final_state().theta.coeffs[1];
    assert!(
        (got - expect).abs() < 1e-14,
        "imex heat mode {got} vs backward Euler {expect}"
    );
    // Nothing leaks into the other fields or modes.
    assert!(traj.final_state().phi.coeffs.iter().all(|&c| c == 0.0));
    assert!(traj.final_state().sigma.coeffs.iter().all(|&c| c == 0.0));
}

#[test]
fn imex_to_rk4_gap_shrinks_first_order_in_dt() {
    let h_distance = |dt: f64| {
        let imex = coupled_setup(8, Scheme::Imex1, dt, 0.25).run().unwrap().1;
        let rk4 = coupled_setup(8, Scheme::Rk4, dt, 0.25).run().unwrap().1;
        assert!(
            imex.completed() && rk4.completed(),
            "a comparison run at dt = {dt} did not reach the final time"
        );
        let a = imex.final_state();
        let b = rk4.final_state();
        let mut sq = 0.0;
        for (x, y) in [(&a.theta, &b.theta), (&a.phi, &b.phi), (&a.sigma, &b.sigma)] {
            for (c, d) in x.coeffs.iter().zip(&y.coeffs) {
                sq += (c - d) * (c - d);
            }
        }
        sq.sqrt()
    };
    let coarse = h_distance(2e-3);
    let fine = h_distance(1e-3);
    let ratio = coarse / fine;
    assert!(
        (1.7..=2.3).contains(&ratio),
        "halving dt changed the imex-rk4 gap by {ratio} ({coarse} to {fine})"
    );
}

#[test]
fn the_two_schemes_agree_at_leading_order_on_short_horizons() {
    let imex = coupled_setup(8, Scheme::Imex1, 1e-4, 0.01).run().unwrap().1;
    let rk4 = coupled_setup(8, Scheme::Rk4, 1e-4, 0.01).run().unwrap().1;
    let a = imex.final_state();
    let b = rk4.final_state();
    for (x, y) in [(&a.theta, &b.theta), (&a.phi, &b.phi), (&a.sigma, &b.sigma)] {
        for (c, d) in x.coeffs.iter().zip(&y.coeffs) {
            assert!((c - d).abs() < 3e-4, "{c} vs {d}");
        }
    }
}
