//! Fixed-step time integrators for the Galerkin system.
//!
//! `Imex1` is a first-order splitting tailored to the mode equations: each
//! update treats its stiffest diagonal part implicitly and everything else
//! explicitly at the left endpoint, sweeping φ → θ → σ Gauss–Seidel style so
//! the θ update sees the fresh phase rate and the σ update the fresh φ:
//!
//! ```text
//! φ_j^{k+1} = [φ_j^k + dt·E_j^k] / [1 + dt·γ_j²/(1+τγ_j)],
//!             E_j^k = (S^φ_j − γ_j w_j + χγ_j σ_j^k + Λγ_j θ_j^k)/(1+τγ_j)
//! ρ_j = (φ_j^{k+1} − φ_j^k)/dt
//! θ_j^{k+1} = [θ_j^k + dt·(u_j(t_k) − ℓρ_j)] / [1 + dt·γ_j]
//! σ_j^{k+1} = [σ_j^k + dt·(χγ_j φ_j^{k+1} + S^σ_j(t_k))] / [1 + dt·(γ_j + λ_B)]
//! ```
//!
//! With sources, nonlinearities, and cross-couplings off, every mode magnitude
//! is non-increasing for any dt > 0.  The explicit Yosida term wants
//! dt ≲ ε/(γ_max·Lip); the runner warns when dt exceeds ε.  `Rk4` is the
//! classical four-stage rule on the full assembled right-hand side and serves
//! as the accuracy cross-check (its stability limit on the stiff modes is
//! much harsher, so keep it to small cutoffs or τ > 0).

use thiserror::Error;

use crate::basis::{BasisDescriptor, SpectralField};
use crate::model::{
    assemble_rhs, nonlinear_projections, ModelError, ModelParams, SimState,
};
use crate::monitor::{make_record, EnergyAccumulator, MonitorRecord};
use crate::potential::PotentialError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    Imex1,
    Rk4,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Imex1 => "imex1",
            Scheme::Rk4 => "rk4",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StepperConfig {
    pub scheme: Scheme,
    pub dt: f64,
    pub t_end: f64,
    /// Record a snapshot every this many steps (the final step is always
    /// recorded).
    pub monitor_every: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig { scheme: Scheme::Imex1, dt: 1e-3, t_end: 1.0, monitor_every: 1 }
    }
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("non-finite {field} coefficient at mode {mode}")]
    NonFinite { field: &'static str, mode: usize },
    #[error("stepper setting {name} = {value} is invalid: {requirement}")]
    BadConfig { name: &'static str, value: f64, requirement: &'static str },
}

impl StepperConfig {
    pub fn validate(&self) -> Result<(), StepError> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(StepError::BadConfig {
                name: "dt",
                value: self.dt,
                requirement: "must be finite and positive",
            });
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(StepError::BadConfig {
                name: "t_end",
                value: self.t_end,
                requirement: "must be finite and nonnegative",
            });
        }
        if self.monitor_every == 0 {
            return Err(StepError::BadConfig {
                name: "monitor_every",
                value: 0.0,
                requirement: "must be at least 1",
            });
        }
        Ok(())
    }
}

/// Why a run stopped before reaching its final time.
#[derive(Clone, Debug)]
pub enum BlowUpReason {
    NonFinite { field: &'static str, mode: usize },
    PotentialSolve(String),
}

impl std::fmt::Display for BlowUpReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlowUpReason::NonFinite { field, mode } => {
                write!(f, "non-finite {field} coefficient at mode {mode}")
            }
            BlowUpReason::PotentialSolve(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlowUpInfo {
    /// Index of the step that failed (the state at `snapshots.last()` is the
    /// last finite one).
    pub step: usize,
    pub t: f64,
    pub reason: BlowUpReason,
}

/// A completed (or truncated) run: snapshots and monitor records on the
/// cadence grid, in lockstep.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    pub monitor_every: usize,
    pub snapshots: Vec<SimState>,
    pub records: Vec<MonitorRecord>,
    pub blow_up: Option<BlowUpInfo>,
    pub warnings: Vec<String>,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.blow_up.is_none()
    }

    pub fn final_state(&self) -> &SimState {
        self.snapshots.last().expect("a trajectory always holds its initial state")
    }
}

fn first_nonfinite(field: &SpectralField) -> Option<usize> {
    field.coeffs.iter().position(|c| !c.is_finite())
}

fn check_finite(state: &SimState) -> Result<(), StepError> {
    // φ is updated first in the sweep, so report it first.
    for (name, f) in
        [("phi", &state.phi), ("theta", &state.theta), ("sigma", &state.sigma)]
    {
        if let Some(mode) = first_nonfinite(f) {
            return Err(StepError::NonFinite { field: name, mode });
        }
    }
    Ok(())
}

/// One semi-implicit step of size `dt` from `state` (time advances by `dt`).
pub fn step_imex(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
    dt: f64,
) -> Result<SimState, StepError> {
    let p = nonlinear_projections(params, basis, state)?;
    let n = basis.num_modes();
    let mut phi = vec![0.0; n];
    let mut theta = vec![0.0; n];
    let mut sigma = vec![0.0; n];
    for j in 0..n {
        let g = basis.eigenvalues()[j];
        let relax = 1.0 + params.tau * g;
        let explicit = (p.s_phi.coeffs[j] - g * p.w.coeffs[j]
            + params.chi * g * state.sigma.coeffs[j]
            + params.big_lambda * g * state.theta.coeffs[j])
            / relax;
        phi[j] = (state.phi.coeffs[j] + dt * explicit) / (1.0 + dt * g * g / relax);
        let rho = (phi[j] - state.phi.coeffs[j]) / dt;
        theta[j] = (state.theta.coeffs[j] + dt * (p.u.coeffs[j] - params.ell * rho))
            / (1.0 + dt * g);
        sigma[j] = (state.sigma.coeffs[j]
            + dt * (params.chi * g * phi[j] + p.s_sigma.coeffs[j]))
            / (1.0 + dt * (g + params.lambda_b));
    }
    let next = SimState {
        t: state.t + dt,
        theta: SpectralField::from_coeffs(theta),
        phi: SpectralField::from_coeffs(phi),
        sigma: SpectralField::from_coeffs(sigma),
    };
    check_finite(&next)?;
    Ok(next)
}

fn axpy(base: &SimState, rate_theta: &[f64], rate_phi: &[f64], rate_sigma: &[f64], a: f64, t: f64) -> SimState {
    let lift = |f: &SpectralField, r: &[f64]| {
        SpectralField::from_coeffs(f.coeffs.iter().zip(r).map(|(x, k)| x + a * k).collect())
    };
    SimState {
        t,
        theta: lift(&base.theta, rate_theta),
        phi: lift(&base.phi, rate_phi),
        sigma: lift(&base.sigma, rate_sigma),
    }
}

/// One classical Runge–Kutta step on the assembled right-hand side.
pub fn step_rk4(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
    dt: f64,
) -> Result<SimState, StepError> {
    let k1 = assemble_rhs(params, basis, state)?;
    let s2 = axpy(
        state,
        &k1.dtheta_dt.coeffs,
        &k1.dphi_dt.coeffs,
        &k1.dsigma_dt.coeffs,
        0.5 * dt,
        state.t + 0.5 * dt,
    );
    let k2 = assemble_rhs(params, basis, &s2)?;
    let s3 = axpy(
        state,
        &k2.dtheta_dt.coeffs,
        &k2.dphi_dt.coeffs,
        &k2.dsigma_dt.coeffs,
        0.5 * dt,
        state.t + 0.5 * dt,
    );
    let k3 = assemble_rhs(params, basis, &s3)?;
    let s4 = axpy(
        state,
        &k3.dtheta_dt.coeffs,
        &k3.dphi_dt.coeffs,
        &k3.dsigma_dt.coeffs,
        dt,
        state.t + dt,
    );
    let k4 = assemble_rhs(params, basis, &s4)?;

    let n = basis.num_modes();
    let mut theta = vec![0.0; n];
    let mut phi = vec![0.0; n];
    let mut sigma = vec![0.0; n];
    let c = dt / 6.0;
    for j in 0..n {
        theta[j] = state.theta.coeffs[j]
            + c * (k1.dtheta_dt.coeffs[j]
                + 2.0 * k2.dtheta_dt.coeffs[j]
                + 2.0 * k3.dtheta_dt.coeffs[j]
                + k4.dtheta_dt.coeffs[j]);
        phi[j] = state.phi.coeffs[j]
            + c * (k1.dphi_dt.coeffs[j]
                + 2.0 * k2.dphi_dt.coeffs[j]
                + 2.0 * k3.dphi_dt.coeffs[j]
                + k4.dphi_dt.coeffs[j]);
        sigma[j] = state.sigma.coeffs[j]
            + c * (k1.dsigma_dt.coeffs[j]
                + 2.0 * k2.dsigma_dt.coeffs[j]
                + 2.0 * k3.dsigma_dt.coeffs[j]
                + k4.dsigma_dt.coeffs[j]);
    }
    let next = SimState {
        t: state.t + dt,
        theta: SpectralField::from_coeffs(theta),
        phi: SpectralField::from_coeffs(phi),
        sigma: SpectralField::from_coeffs(sigma),
    };
    check_finite(&next)?;
    Ok(next)
}

/// Classify a step failure: numerical failures become a blow-up marker on the
/// trajectory, configuration and programming errors propagate.
fn as_blow_up(err: StepError) -> Result<BlowUpReason, StepError> {
    match err {
        StepError::NonFinite { field, mode } => Ok(BlowUpReason::NonFinite { field, mode }),
        StepError::Model(ModelError::Potential(
            e @ (PotentialError::NoConvergence { .. } | PotentialError::NonFiniteInput(..)),
        )) => Ok(BlowUpReason::PotentialSolve(e.to_string())),
        other => Err(other),
    }
}

/// Integrate from `init` to `t_end` with fixed steps, recording snapshots and
/// monitor records every `monitor_every` steps (plus the initial and final
/// states).  Numerical blow-up truncates the trajectory and is reported on
/// the result rather than as an error.
pub fn integrate(
    params: &ModelParams,
    basis: &BasisDescriptor,
    init: SimState,
    cfg: &StepperConfig,
) -> Result<Trajectory, StepError> {
    params.validate()?;
    cfg.validate()?;

    let mut warnings = Vec::new();
    if cfg.dt > params.yosida.eps && !matches!(params.potential, crate::potential::PotentialSpec::Zero)
    {
        warnings.push(format!(
            "dt = {:.3e} exceeds the regularization level eps = {:.3e}; the explicit Yosida \
             term may be unstable",
            cfg.dt, params.yosida.eps
        ));
    }
    let num_steps = (cfg.t_end / cfg.dt).round() as usize;
    if (num_steps as f64 * cfg.dt - cfg.t_end).abs() > 1e-9 * cfg.t_end.max(1.0) {
        warnings.push(format!(
            "t_end = {} is not an integer multiple of dt = {}; running {} steps to t = {:.6e}",
            cfg.t_end,
            cfg.dt,
            num_steps,
            num_steps as f64 * cfg.dt
        ));
    }

    let mut traj = Trajectory {
        dt: cfg.dt,
        monitor_every: cfg.monitor_every,
        snapshots: Vec::new(),
        records: Vec::new(),
        blow_up: None,
        warnings,
    };
    let mut acc = EnergyAccumulator::default();

    let mut state = SimState { t: 0.0, ..init };
    match make_record(params, basis, &state, &mut acc) {
        Ok(rec) => {
            traj.records.push(rec);
            traj.snapshots.push(state.clone());
        }
        Err(err) => {
            traj.snapshots.push(state);
            let reason = as_blow_up(StepError::Model(err))?;
            traj.blow_up = Some(BlowUpInfo { step: 0, t: 0.0, reason });
            return Ok(traj);
        }
    }

    for step in 0..num_steps {
        let stepped = match cfg.scheme {
            Scheme::Imex1 => step_imex(params, basis, &state, cfg.dt),
            Scheme::Rk4 => step_rk4(params, basis, &state, cfg.dt),
        };
        let mut next = match stepped {
            Ok(s) => s,
            Err(err) => {
                let reason = as_blow_up(err)?;
                traj.blow_up = Some(BlowUpInfo {
                    step,
                    t: (step + 1) as f64 * cfg.dt,
                    reason,
                });
                return Ok(traj);
            }
        };
        next.t = (step + 1) as f64 * cfg.dt;
        state = next;
        if (step + 1) % cfg.monitor_every == 0 || step + 1 == num_steps {
            match make_record(params, basis, &state, &mut acc) {
                Ok(rec) => {
                    traj.records.push(rec);
                    traj.snapshots.push(state.clone());
                }
                Err(err) => {
                    let reason = as_blow_up(StepError::Model(err))?;
                    traj.blow_up = Some(BlowUpInfo {
                        step,
                        t: state.t,
                        reason,
                    });
                    return Ok(traj);
                }
            }
        }
    }
    Ok(traj)
}
