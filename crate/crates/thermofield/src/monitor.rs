//! Per-snapshot diagnostics and the estimate checks built on them.
//!
//! The free energy of a state is
//!
//! ```text
//! 𝓕(θ,φ,σ) = ½‖∇φ‖² + ∫ (β̂_ε(φ) + π̂(φ)) + ½‖σ‖² − χ(σ,φ) − Λ(θ,φ)
//! ```
//!
//! where the quadratic terms are exact mode sums and the potential integral
//! uses the basis quadrature (the same nodes the transforms use, so the
//! projected gradient w is literally the gradient of the discrete potential
//! energy and the decoupled dissipation identity holds to roundoff in space).
//!
//! Balance laws: integrating each equation over the box kills the Laplacians,
//! leaving ODEs for the means,
//!
//! ```text
//! d/dt ⟨θ + ℓφ⟩ = ⟨u⟩
//! d/dt ⟨φ⟩      = ⟨S^φ⟩
//! d/dt ⟨σ⟩      = ⟨S^σ⟩ − λ_B⟨σ⟩
//! ```
//!
//! `balance_report` compares snapshot differences against the left-endpoint
//! prediction.  The semi-implicit stepper integrates the combined law exactly
//! (the mean modes have no stiff part, and u does not depend on time), so its
//! defect sits at roundoff; the φ and σ rows carry a genuine O(dt) defect
//! once the recording cadence spans several steps.

use thiserror::Error;

use crate::basis::{BasisDescriptor, SpectralField};
use crate::model::{
    assemble_rhs, nonlinear_projections, recover_mu, ModelError, ModelParams, SimState,
    SourceSpec,
};
use crate::potential::{moreau_envelope, yosida};
use crate::stepper::Trajectory;

#[derive(Debug, Error)]
pub enum MonitorError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("the energy identity requires a decoupled run: {0}")]
    NotDecoupled(&'static str),
    #[error("the energy identity requires per-step records, got monitor_every = {0}")]
    NotPerStep(usize),
    #[error("need at least {need} snapshots, got {got}")]
    TooShort { need: usize, got: usize },
}

/// One row of the time series: instantaneous norms plus two running
/// dissipation integrals.
#[derive(Clone, Copy, Debug)]
pub struct MonitorRecord {
    pub t: f64,
    pub free_energy: f64,
    pub mean_theta_plus_ell_phi: f64,
    pub mean_phi: f64,
    pub mean_sigma: f64,
    pub h_norm_theta: f64,
    pub v_norm_phi: f64,
    pub v_norm_sigma: f64,
    pub w_seminorm_phi: f64,
    pub h_norm_beta_eps_phi: f64,
    pub v_seminorm_mu: f64,
    pub sup_phi: f64,
    pub sup_theta: f64,
    pub cum_grad_mu_sq: f64,
    pub cum_tau_phidot_sq: f64,
}

pub const RECORD_COLUMNS: [&str; 15] = [
    "t",
    "free_energy",
    "mean_theta_plus_ell_phi",
    "mean_phi",
    "mean_sigma",
    "h_norm_theta",
    "v_norm_phi",
    "v_norm_sigma",
    "w_seminorm_phi",
    "h_norm_beta_eps_phi",
    "v_seminorm_mu",
    "sup_phi",
    "sup_theta",
    "cum_grad_mu_sq",
    "cum_tau_phidot_sq",
];

impl MonitorRecord {
    /// Field values in `RECORD_COLUMNS` order.
    pub fn values(&self) -> [f64; 15] {
        [
            self.t,
            self.free_energy,
            self.mean_theta_plus_ell_phi,
            self.mean_phi,
            self.mean_sigma,
            self.h_norm_theta,
            self.v_norm_phi,
            self.v_norm_sigma,
            self.w_seminorm_phi,
            self.h_norm_beta_eps_phi,
            self.v_seminorm_mu,
            self.sup_phi,
            self.sup_theta,
            self.cum_grad_mu_sq,
            self.cum_tau_phidot_sq,
        ]
    }
}

/// Left-endpoint rectangle accumulator for the dissipation integrals
/// ∫‖∇μ‖² and ∫τ‖∂_t φ‖².  Each recorded time contributes its integrand to
/// the interval that follows it, so the value reported at time t covers
/// exactly [0, t].
#[derive(Clone, Copy, Debug, Default)]
pub struct EnergyAccumulator {
    started: bool,
    prev_t: f64,
    prev_grad_mu_sq: f64,
    prev_tau_rate_sq: f64,
    cum_grad_mu_sq: f64,
    cum_tau_rate_sq: f64,
}

impl EnergyAccumulator {
    fn advance(&mut self, t: f64, grad_mu_sq: f64, tau_rate_sq: f64) -> (f64, f64) {
        if self.started {
            let dt = t - self.prev_t;
            self.cum_grad_mu_sq += self.prev_grad_mu_sq * dt;
            self.cum_tau_rate_sq += self.prev_tau_rate_sq * dt;
        }
        self.started = true;
        self.prev_t = t;
        self.prev_grad_mu_sq = grad_mu_sq;
        self.prev_tau_rate_sq = tau_rate_sq;
        (self.cum_grad_mu_sq, self.cum_tau_rate_sq)
    }
}

/// Discrete free energy of a state.
pub fn free_energy(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
) -> Result<f64, ModelError> {
    let mut quadratic = 0.0;
    for j in 0..basis.num_modes() {
        let g = basis.eigenvalues()[j];
        let phi = state.phi.coeffs[j];
        let sigma = state.sigma.coeffs[j];
        let theta = state.theta.coeffs[j];
        quadratic += 0.5 * g * phi * phi + 0.5 * sigma * sigma
            - params.chi * sigma * phi
            - params.big_lambda * theta * phi;
    }
    let phi_nodes = basis.synthesize(&state.phi)?;
    let mut potential = 0.0;
    for &p in &phi_nodes {
        potential += moreau_envelope(&params.potential, &params.yosida, p)?
            + params.potential.pi_hat(p);
    }
    Ok(quadratic + basis.node_weight() * potential)
}

/// Build the monitor row for `state`, advancing the running integrals.
pub fn make_record(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
    acc: &mut EnergyAccumulator,
) -> Result<MonitorRecord, ModelError> {
    let deriv = assemble_rhs(params, basis, state)?;
    let theta_norms = basis.norms(&state.theta)?;
    let phi_norms = basis.norms(&state.phi)?;
    let sigma_norms = basis.norms(&state.sigma)?;
    let mu_norms = basis.norms(&deriv.mu)?;

    let phi_nodes = basis.synthesize(&state.phi)?;
    let theta_nodes = basis.synthesize(&state.theta)?;
    let sup_phi = phi_nodes.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sup_theta = theta_nodes.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut beta_sq = 0.0;
    for &p in &phi_nodes {
        let b = yosida(&params.potential, &params.yosida, p)?;
        beta_sq += b * b;
    }
    let h_norm_beta = (basis.node_weight() * beta_sq).sqrt();

    let mut grad_mu_sq = 0.0;
    let mut rate_sq = 0.0;
    for j in 0..basis.num_modes() {
        let g = basis.eigenvalues()[j];
        grad_mu_sq += g * deriv.mu.coeffs[j] * deriv.mu.coeffs[j];
        rate_sq += deriv.dphi_dt.coeffs[j] * deriv.dphi_dt.coeffs[j];
    }
    let (cum_grad_mu_sq, cum_tau_phidot_sq) =
        acc.advance(state.t, grad_mu_sq, params.tau * rate_sq);

    Ok(MonitorRecord {
        t: state.t,
        free_energy: free_energy(params, basis, state)?,
        mean_theta_plus_ell_phi: theta_norms.mean + params.ell * phi_norms.mean,
        mean_phi: phi_norms.mean,
        mean_sigma: sigma_norms.mean,
        h_norm_theta: theta_norms.h,
        v_norm_phi: phi_norms.v(),
        v_norm_sigma: sigma_norms.v(),
        w_seminorm_phi: phi_norms.w_semi,
        h_norm_beta_eps_phi: h_norm_beta,
        v_seminorm_mu: mu_norms.v_semi,
        sup_phi,
        sup_theta,
        cum_grad_mu_sq,
        cum_tau_phidot_sq,
    })
}

/// Defects of the three mean balance laws on one recorded interval, measured
/// against the left-endpoint prediction.
#[derive(Clone, Copy, Debug)]
pub struct BalanceRow {
    pub t_left: f64,
    pub t_right: f64,
    pub combined: f64,
    pub phi: f64,
    pub sigma: f64,
}

#[derive(Clone, Debug)]
pub struct BalanceReport {
    pub rows: Vec<BalanceRow>,
    pub max_combined: f64,
    pub max_phi: f64,
    pub max_sigma: f64,
}

pub fn balance_report(
    params: &ModelParams,
    basis: &BasisDescriptor,
    traj: &Trajectory,
) -> Result<BalanceReport, MonitorError> {
    if traj.snapshots.len() < 2 {
        return Err(MonitorError::TooShort { need: 2, got: traj.snapshots.len() });
    }
    let e0 = 1.0 / basis.domain().volume().sqrt();
    let mut rows = Vec::with_capacity(traj.snapshots.len() - 1);
    let (mut max_c, mut max_p, mut max_s) = (0.0f64, 0.0f64, 0.0f64);
    for pair in traj.snapshots.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let dt = right.t - left.t;
        let proj = nonlinear_projections(params, basis, left)?;
        let mean = |f: &SpectralField| f.coeffs[0] * e0;
        let d_combined = (mean(&right.theta) + params.ell * mean(&right.phi)
            - mean(&left.theta)
            - params.ell * mean(&left.phi))
            / dt;
        let d_phi = (mean(&right.phi) - mean(&left.phi)) / dt;
        let d_sigma = (mean(&right.sigma) - mean(&left.sigma)) / dt;
        let row = BalanceRow {
            t_left: left.t,
            t_right: right.t,
            combined: (d_combined - mean(&proj.u)).abs(),
            phi: (d_phi - mean(&proj.s_phi)).abs(),
            sigma: (d_sigma - (mean(&proj.s_sigma) - params.lambda_b * mean(&left.sigma)))
                .abs(),
        };
        max_c = max_c.max(row.combined);
        max_p = max_p.max(row.phi);
        max_s = max_s.max(row.sigma);
        rows.push(row);
    }
    Ok(BalanceReport { rows, max_combined: max_c, max_phi: max_p, max_sigma: max_s })
}

/// Per-interval residual of the discrete dissipation identity
///
/// ```text
/// r_k = (𝓕_{k+1} − 𝓕_k)/dt + Σ_j γ_j μ_j² + τ Σ_j ρ_j²,
/// ρ = (φ^{k+1} − φ^k)/dt,  μ = τρ + γφ^k + w(φ^k)
/// ```
///
/// which is O(dt) for a first-order trajectory of the pure phase flow.  The
/// identity only holds when the phase equation is self-contained, so this
/// refuses runs with thermal or nutrient coupling (χ ≠ 0, Λ ≠ 0), phase
/// sources, a heat source, a live σ, or a recording cadence above 1.
pub fn energy_identity_residual(
    params: &ModelParams,
    basis: &BasisDescriptor,
    traj: &Trajectory,
) -> Result<Vec<f64>, MonitorError> {
    if params.chi != 0.0 {
        return Err(MonitorError::NotDecoupled("chi must be 0"));
    }
    if params.big_lambda != 0.0 {
        return Err(MonitorError::NotDecoupled("Lambda must be 0"));
    }
    if params.lambda_p != 0.0 || params.lambda_a != 0.0 || params.lambda_e != 0.0 {
        return Err(MonitorError::NotDecoupled(
            "the phase source rates lambda_p, lambda_a, lambda_e must be 0",
        ));
    }
    if !matches!(params.heat_source, SourceSpec::Off) {
        return Err(MonitorError::NotDecoupled("the heat source must be off"));
    }
    if traj.snapshots.iter().any(|s| s.sigma.coeffs.iter().any(|&c| c != 0.0)) {
        return Err(MonitorError::NotDecoupled("sigma must vanish along the run"));
    }
    if traj.monitor_every != 1 {
        return Err(MonitorError::NotPerStep(traj.monitor_every));
    }
    if traj.snapshots.len() < 2 {
        return Err(MonitorError::TooShort { need: 2, got: traj.snapshots.len() });
    }

    let mut residuals = Vec::with_capacity(traj.snapshots.len() - 1);
    for pair in traj.snapshots.windows(2) {
        let (left, right) = (&pair[0], &pair[1]);
        let dt = right.t - left.t;
        let rho = SpectralField::from_coeffs(
            left.phi
                .coeffs
                .iter()
                .zip(&right.phi.coeffs)
                .map(|(a, b)| (b - a) / dt)
                .collect(),
        );
        let mu = recover_mu(params, basis, left, &rho)?;
        let mut dissipation = 0.0;
        for j in 0..basis.num_modes() {
            let g = basis.eigenvalues()[j];
            dissipation += g * mu.coeffs[j] * mu.coeffs[j]
                + params.tau * rho.coeffs[j] * rho.coeffs[j];
        }
        let df = (free_energy(params, basis, right)? - free_energy(params, basis, left)?) / dt;
        residuals.push(df + dissipation);
    }
    Ok(residuals)
}

/// One monitored quantity against its growth ceiling 10·(|initial| + 1).
#[derive(Clone, Copy, Debug)]
pub struct CeilingRow {
    pub quantity: &'static str,
    pub initial: f64,
    pub ceiling: f64,
    pub sup: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug)]
pub struct AprioriReport {
    pub rows: Vec<CeilingRow>,
}

impl AprioriReport {
    pub fn any_flagged(&self) -> bool {
        self.rows.iter().any(|r| r.flagged)
    }
}

/// Flag any monitored quantity that grew past ten times its initial size
/// (plus one, so quantities starting at zero get a meaningful ceiling).  A
/// flag is a coarse sanity alarm, not a convergence failure: dissipative runs
/// stay far below it.
pub fn apriori_report(traj: &Trajectory) -> Result<AprioriReport, MonitorError> {
    if traj.records.is_empty() {
        return Err(MonitorError::TooShort { need: 1, got: 0 });
    }
    let first = &traj.records[0];
    let picks: [(&'static str, fn(&MonitorRecord) -> f64); 10] = [
        ("free_energy", |r| r.free_energy),
        ("h_norm_theta", |r| r.h_norm_theta),
        ("v_norm_phi", |r| r.v_norm_phi),
        ("v_norm_sigma", |r| r.v_norm_sigma),
        ("w_seminorm_phi", |r| r.w_seminorm_phi),
        ("h_norm_beta_eps_phi", |r| r.h_norm_beta_eps_phi),
        ("sup_phi", |r| r.sup_phi),
        ("sup_theta", |r| r.sup_theta),
        ("cum_grad_mu_sq", |r| r.cum_grad_mu_sq),
        ("cum_tau_phidot_sq", |r| r.cum_tau_phidot_sq),
    ];
    let rows = picks
        .iter()
        .map(|&(name, pick)| {
            let initial = pick(first);
            let ceiling = 10.0 * (initial.abs() + 1.0);
            let sup = traj.records.iter().map(|r| pick(r).abs()).fold(0.0f64, f64::max);
            CeilingRow { quantity: name, initial, ceiling, sup, flagged: sup > ceiling }
        })
        .collect();
    Ok(AprioriReport { rows })
}
