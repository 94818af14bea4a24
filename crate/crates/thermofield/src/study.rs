//! Refinement and stability studies built from pairs of runs.
//!
//! Three studies share one machinery: run the model at a list of settings,
//! difference consecutive (or base-vs-perturbed) trajectories on the recorded
//! snapshot grid, and reduce each difference to a fixed bundle of norms.
//!
//! * mode refinement: increasing cutoffs, identical data projected from the
//!   largest space down (the spaces are nested, so comparison happens in the
//!   smaller one),
//! * regularization refinement: decreasing Yosida levels ε at a fixed cutoff,
//! * continuous dependence: data perturbed by δ times the first nonconstant
//!   mode, reported as the ratio of solution-difference norms to
//!   data-difference norms.
//!
//! All member runs of a study share one dt and one recording cadence so the
//! comparison grids align exactly and no interpolation enters the norms.

use thiserror::Error;

use crate::basis::{build_basis, BasisDescriptor, BasisError, SpectralField};
use crate::model::{eval_sources, InitialData, ModelError, ModelParams, SimState, SourceSpec};
use crate::stepper::{integrate, StepError, StepperConfig, Trajectory};

#[derive(Debug, Error)]
pub enum StudyError {
    #[error(transparent)]
    Step(#[from] StepError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error("trajectories are not comparable: {0}")]
    Misaligned(String),
    #[error("bad study list: {0}")]
    BadList(&'static str),
    #[error("dt = {dt} is too coarse for the smallest regularization level {min_eps}: need dt <= min_eps/10")]
    DtTooLarge { dt: f64, min_eps: f64 },
}

/// Everything needed to build and integrate one run.
#[derive(Clone, Debug)]
pub struct RunSetup {
    pub domain: crate::basis::BoxDomain,
    pub cutoff: usize,
    /// Per-axis quadrature points; `None` picks the basis default.
    pub quad_points: Option<usize>,
    pub params: ModelParams,
    pub init_theta: InitialData,
    pub init_phi: InitialData,
    pub init_sigma: InitialData,
    pub stepper: StepperConfig,
}

impl Default for RunSetup {
    fn default() -> Self {
        RunSetup {
            domain: crate::basis::BoxDomain::interval(1.0).expect("unit interval is valid"),
            cutoff: 16,
            quad_points: None,
            params: ModelParams::default(),
            init_theta: InitialData::Zero,
            init_phi: InitialData::Zero,
            init_sigma: InitialData::Zero,
            stepper: StepperConfig::default(),
        }
    }
}

impl RunSetup {
    pub fn build_basis(&self) -> Result<BasisDescriptor, BasisError> {
        build_basis(&self.domain, self.cutoff, self.quad_points)
    }

    pub fn initial_state(&self, basis: &BasisDescriptor) -> Result<SimState, ModelError> {
        Ok(SimState {
            t: 0.0,
            theta: self.init_theta.build(basis)?,
            phi: self.init_phi.build(basis)?,
            sigma: self.init_sigma.build(basis)?,
        })
    }

    /// Build the basis and integrate from the configured initial data.
    pub fn run(&self) -> Result<(BasisDescriptor, Trajectory), StudyError> {
        let basis = self.build_basis()?;
        let init = self.initial_state(&basis)?;
        let traj = integrate(&self.params, &basis, init, &self.stepper)?;
        Ok((basis, traj))
    }
}

/// Which piece of data a continuous-dependence study perturbs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerturbTarget {
    Theta0,
    Phi0,
    Sigma0,
    HeatSource,
}

impl PerturbTarget {
    pub fn name(&self) -> &'static str {
        match self {
            PerturbTarget::Theta0 => "theta0",
            PerturbTarget::Phi0 => "phi0",
            PerturbTarget::Sigma0 => "sigma0",
            PerturbTarget::HeatSource => "u",
        }
    }
}

/// A base run plus the lists the three studies iterate over.
#[derive(Clone, Debug)]
pub struct StudyConfig {
    pub setup: RunSetup,
    /// Mode-refinement cutoffs, nondecreasing (equal neighbours re-run the
    /// same configuration and give an all-zero row, a useful self-check).
    pub n_list: Vec<usize>,
    /// Regularization levels, nonincreasing.
    pub eps_list: Vec<f64>,
    /// Perturbation sizes, nonnegative; a zero entry exercises the
    /// exact-zero path.
    pub delta_list: Vec<f64>,
    pub perturb: Vec<PerturbTarget>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            setup: RunSetup::default(),
            n_list: Vec::new(),
            eps_list: Vec::new(),
            delta_list: Vec::new(),
            perturb: vec![
                PerturbTarget::Theta0,
                PerturbTarget::Phi0,
                PerturbTarget::Sigma0,
                PerturbTarget::HeatSource,
            ],
        }
    }
}

/// Norms of a trajectory difference, split into the solution side and the
/// data side of the stability inequality the model satisfies.
///
/// Solution side: sup-in-time H-norms of the three field differences, time-L²
/// V-norms of the θ and σ differences, the time-L² W-seminorm of the φ
/// difference, and the τ^{1/2}-weighted sup V-norm of the φ difference.  Data
/// side: H-norms of the initial differences, the τ^{1/2}-weighted V-norm of
/// the initial φ difference, and the time-L² H-norm of the heat-source
/// difference.  Time integrals use the left-endpoint rectangle rule on the
/// snapshot grid.
#[derive(Clone, Copy, Debug, Default)]
pub struct DiffNorms {
    pub sup_h_theta: f64,
    pub sup_h_phi: f64,
    pub sup_h_sigma: f64,
    pub l2_v_theta: f64,
    pub l2_v_sigma: f64,
    pub l2_w_phi: f64,
    pub sup_v_phi_weighted: f64,
    pub data_h_theta0: f64,
    pub data_h_phi0: f64,
    pub data_h_sigma0: f64,
    pub data_v_phi0_weighted: f64,
    pub data_l2_u: f64,
}

pub const DIFF_NORM_COLUMNS: [&str; 12] = [
    "sup_h_theta",
    "sup_h_phi",
    "sup_h_sigma",
    "l2_v_theta",
    "l2_v_sigma",
    "l2_w_phi",
    "sup_v_phi_weighted",
    "data_h_theta0",
    "data_h_phi0",
    "data_h_sigma0",
    "data_v_phi0_weighted",
    "data_l2_u",
];

impl DiffNorms {
    /// Values in `DIFF_NORM_COLUMNS` order.
    pub fn values(&self) -> [f64; 12] {
        [
            self.sup_h_theta,
            self.sup_h_phi,
            self.sup_h_sigma,
            self.l2_v_theta,
            self.l2_v_sigma,
            self.l2_w_phi,
            self.sup_v_phi_weighted,
            self.data_h_theta0,
            self.data_h_phi0,
            self.data_h_sigma0,
            self.data_v_phi0_weighted,
            self.data_l2_u,
        ]
    }

    /// Solution-difference side of the stability inequality.
    pub fn lhs_sum(&self) -> f64 {
        self.sup_h_theta
            + self.sup_h_phi
            + self.sup_h_sigma
            + self.l2_v_theta
            + self.l2_v_sigma
            + self.l2_w_phi
            + self.sup_v_phi_weighted
    }

    /// Data-difference side.
    pub fn rhs_data(&self) -> f64 {
        self.data_h_theta0
            + self.data_h_phi0
            + self.data_h_sigma0
            + self.data_v_phi0_weighted
            + self.data_l2_u
    }

    pub fn max_entry(&self) -> f64 {
        self.values().iter().fold(0.0f64, |m, v| m.max(*v))
    }
}

fn align_check(a: &Trajectory, b: &Trajectory) -> Result<(), StudyError> {
    if a.snapshots.len() != b.snapshots.len() {
        return Err(StudyError::Misaligned(format!(
            "snapshot counts differ: {} vs {}",
            a.snapshots.len(),
            b.snapshots.len()
        )));
    }
    for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
        if (sa.t - sb.t).abs() > 1e-12 * sa.t.abs().max(1.0) {
            return Err(StudyError::Misaligned(format!(
                "snapshot times differ: {} vs {}",
                sa.t, sb.t
            )));
        }
        if sa.theta.len() != sb.theta.len() {
            return Err(StudyError::Misaligned(format!(
                "mode counts differ: {} vs {}",
                sa.theta.len(),
                sb.theta.len()
            )));
        }
    }
    Ok(())
}

/// Compare two runs of equal basis and time grid.  The τ weight and the
/// heat sources are taken from the respective parameter sets (the τ values
/// must agree for the weighted norms to mean one thing).
pub fn difference_norms(
    basis: &BasisDescriptor,
    params_a: &ModelParams,
    traj_a: &Trajectory,
    params_b: &ModelParams,
    traj_b: &Trajectory,
) -> Result<DiffNorms, StudyError> {
    align_check(traj_a, traj_b)?;
    if params_a.tau != params_b.tau {
        return Err(StudyError::Misaligned(format!(
            "tau differs: {} vs {}",
            params_a.tau, params_b.tau
        )));
    }
    if traj_a.snapshots.first().map(|s| s.theta.len()) != Some(basis.num_modes()) {
        return Err(StudyError::Misaligned(format!(
            "trajectory does not live in the comparison basis ({} modes)",
            basis.num_modes()
        )));
    }
    let sqrt_tau = params_a.tau.sqrt();
    let diff = |x: &SpectralField, y: &SpectralField| {
        SpectralField::from_coeffs(x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect())
    };

    let mut norms = DiffNorms::default();
    let mut l2_v_theta_sq = 0.0;
    let mut l2_v_sigma_sq = 0.0;
    let mut l2_w_phi_sq = 0.0;
    let mut l2_u_sq = 0.0;
    let count = traj_a.snapshots.len();
    for (i, (sa, sb)) in traj_a.snapshots.iter().zip(&traj_b.snapshots).enumerate() {
        let d_theta = basis.norms(&diff(&sa.theta, &sb.theta))?;
        let d_phi = basis.norms(&diff(&sa.phi, &sb.phi))?;
        let d_sigma = basis.norms(&diff(&sa.sigma, &sb.sigma))?;
        norms.sup_h_theta = norms.sup_h_theta.max(d_theta.h);
        norms.sup_h_phi = norms.sup_h_phi.max(d_phi.h);
        norms.sup_h_sigma = norms.sup_h_sigma.max(d_sigma.h);
        norms.sup_v_phi_weighted = norms.sup_v_phi_weighted.max(sqrt_tau * d_phi.v());

        if i == 0 {
            norms.data_h_theta0 = d_theta.h;
            norms.data_h_phi0 = d_phi.h;
            norms.data_h_sigma0 = d_sigma.h;
            norms.data_v_phi0_weighted = sqrt_tau * d_phi.v();
        }
        if i + 1 < count {
            let dt = traj_a.snapshots[i + 1].t - sa.t;
            l2_v_theta_sq += d_theta.v() * d_theta.v() * dt;
            l2_v_sigma_sq += d_sigma.v() * d_sigma.v() * dt;
            l2_w_phi_sq += d_phi.w_semi * d_phi.w_semi * dt;
            let ua = eval_sources(params_a, basis, sa.t)?.u;
            let ub = eval_sources(params_b, basis, sa.t)?.u;
            let du = basis.norms(&diff(&ua, &ub))?;
            l2_u_sq += du.h * du.h * dt;
        }
    }
    norms.l2_v_theta = l2_v_theta_sq.sqrt();
    norms.l2_v_sigma = l2_v_sigma_sq.sqrt();
    norms.l2_w_phi = l2_w_phi_sq.sqrt();
    norms.data_l2_u = l2_u_sq.sqrt();
    Ok(norms)
}

/// Map every mode of `small` to its position in `big` (the mode sets are
/// nested but the eigenvalue sort interleaves them differently in 2D).
fn mode_map(small: &BasisDescriptor, big: &BasisDescriptor) -> Result<Vec<usize>, StudyError> {
    small
        .modes()
        .iter()
        .map(|m| {
            big.modes().iter().position(|bm| bm == m).ok_or_else(|| {
                StudyError::Misaligned(format!(
                    "mode [{}, {}] of the small basis is missing from the large one",
                    m[0], m[1]
                ))
            })
        })
        .collect()
}

/// Restrict a trajectory from a larger cutoff down to `small` by keeping the
/// coefficients of the shared modes.  Monitor records are dropped: they
/// describe the original run, not the restriction.
pub fn restrict_trajectory(
    small: &BasisDescriptor,
    big: &BasisDescriptor,
    traj: &Trajectory,
) -> Result<Trajectory, StudyError> {
    let map = mode_map(small, big)?;
    let restrict = |f: &SpectralField| {
        SpectralField::from_coeffs(map.iter().map(|&i| f.coeffs[i]).collect())
    };
    Ok(Trajectory {
        dt: traj.dt,
        monitor_every: traj.monitor_every,
        snapshots: traj
            .snapshots
            .iter()
            .map(|s| SimState {
                t: s.t,
                theta: restrict(&s.theta),
                phi: restrict(&s.phi),
                sigma: restrict(&s.sigma),
            })
            .collect(),
        records: Vec::new(),
        blow_up: traj.blow_up.clone(),
        warnings: traj.warnings.clone(),
    })
}

pub const STATUS_OK: &str = "ok";
pub const STATUS_EXACT_ZERO: &str = "exact-zero";
pub const STATUS_BLOW_UP: &str = "blow-up";

/// One comparison row.  For refinement studies `param_a`/`param_b` are the
/// consecutive list entries; for continuous dependence `param_a` is δ and
/// `param_b` is 0.  Rows touched by a blown-up member run carry NaN norms and
/// the blow-up status.
#[derive(Clone, Copy, Debug)]
pub struct StudyRow {
    pub param_a: f64,
    pub param_b: f64,
    pub norms: DiffNorms,
    pub ratio: Option<f64>,
    pub status: &'static str,
}

#[derive(Clone, Debug)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
}

impl StudyReport {
    pub fn any_blow_up(&self) -> bool {
        self.rows.iter().any(|r| r.status == STATUS_BLOW_UP)
    }
}

fn nan_norms() -> DiffNorms {
    DiffNorms {
        sup_h_theta: f64::NAN,
        sup_h_phi: f64::NAN,
        sup_h_sigma: f64::NAN,
        l2_v_theta: f64::NAN,
        l2_v_sigma: f64::NAN,
        l2_w_phi: f64::NAN,
        sup_v_phi_weighted: f64::NAN,
        data_h_theta0: f64::NAN,
        data_h_phi0: f64::NAN,
        data_h_sigma0: f64::NAN,
        data_v_phi0_weighted: f64::NAN,
        data_l2_u: f64::NAN,
    }
}

/// Mode-refinement study: run every cutoff in `n_list` from shared data and
/// difference consecutive runs in the smaller space.
///
/// The initial data is built once in the largest basis and restricted down,
/// so every member integrates the projection of one common initial state.
pub fn run_n_study(cfg: &StudyConfig) -> Result<StudyReport, StudyError> {
    if cfg.n_list.len() < 2 {
        return Err(StudyError::BadList("n_list needs at least two entries"));
    }
    if cfg.n_list.windows(2).any(|w| w[1] < w[0]) {
        return Err(StudyError::BadList("n_list must be nondecreasing"));
    }
    let bases: Vec<BasisDescriptor> = cfg
        .n_list
        .iter()
        .map(|&n| build_basis(&cfg.setup.domain, n, cfg.setup.quad_points))
        .collect::<Result<_, _>>()?;
    let top = bases.last().expect("n_list is nonempty");
    let top_init = cfg.setup.initial_state(top)?;

    let mut trajectories = Vec::with_capacity(bases.len());
    for basis in &bases {
        let map = mode_map(basis, top)?;
        let restrict = |f: &SpectralField| {
            SpectralField::from_coeffs(map.iter().map(|&i| f.coeffs[i]).collect())
        };
        let init = SimState {
            t: 0.0,
            theta: restrict(&top_init.theta),
            phi: restrict(&top_init.phi),
            sigma: restrict(&top_init.sigma),
        };
        trajectories.push(integrate(&cfg.setup.params, basis, init, &cfg.setup.stepper)?);
    }

    let mut rows = Vec::with_capacity(bases.len() - 1);
    for k in 0..bases.len() - 1 {
        let (small_basis, big_basis) = (&bases[k], &bases[k + 1]);
        let (small_traj, big_traj) = (&trajectories[k], &trajectories[k + 1]);
        let params = (cfg.n_list[k] as f64, cfg.n_list[k + 1] as f64);
        if !small_traj.completed() || !big_traj.completed() {
            rows.push(StudyRow {
                param_a: params.0,
                param_b: params.1,
                norms: nan_norms(),
                ratio: None,
                status: STATUS_BLOW_UP,
            });
            continue;
        }
        let restricted = restrict_trajectory(small_basis, big_basis, big_traj)?;
        let norms = difference_norms(
            small_basis,
            &cfg.setup.params,
            small_traj,
            &cfg.setup.params,
            &restricted,
        )?;
        let status = if norms.max_entry() == 0.0 { STATUS_EXACT_ZERO } else { STATUS_OK };
        rows.push(StudyRow { param_a: params.0, param_b: params.1, norms, ratio: None, status });
    }
    Ok(StudyReport { rows })
}

/// Regularization-refinement study: one basis and data, decreasing ε.
pub fn run_eps_study(cfg: &StudyConfig) -> Result<StudyReport, StudyError> {
    if cfg.eps_list.len() < 2 {
        return Err(StudyError::BadList("eps_list needs at least two entries"));
    }
    if cfg.eps_list.iter().any(|&e| !(e.is_finite() && e > 0.0)) {
        return Err(StudyError::BadList("eps_list entries must be positive"));
    }
    if cfg.eps_list.windows(2).any(|w| w[1] > w[0]) {
        return Err(StudyError::BadList("eps_list must be nonincreasing"));
    }
    let min_eps = *cfg.eps_list.last().expect("eps_list is nonempty");
    if cfg.setup.stepper.dt > min_eps / 10.0 {
        return Err(StudyError::DtTooLarge { dt: cfg.setup.stepper.dt, min_eps });
    }
    let basis = cfg.setup.build_basis()?;
    let init = cfg.setup.initial_state(&basis)?;

    let mut trajectories = Vec::with_capacity(cfg.eps_list.len());
    let mut param_sets = Vec::with_capacity(cfg.eps_list.len());
    for &eps in &cfg.eps_list {
        let params = ModelParams {
            yosida: crate::potential::YosidaConfig { eps, ..cfg.setup.params.yosida },
            ..cfg.setup.params.clone()
        };
        trajectories.push(integrate(&params, &basis, init.clone(), &cfg.setup.stepper)?);
        param_sets.push(params);
    }

    let mut rows = Vec::with_capacity(cfg.eps_list.len() - 1);
    for k in 0..cfg.eps_list.len() - 1 {
        if !trajectories[k].completed() || !trajectories[k + 1].completed() {
            rows.push(StudyRow {
                param_a: cfg.eps_list[k],
                param_b: cfg.eps_list[k + 1],
                norms: nan_norms(),
                ratio: None,
                status: STATUS_BLOW_UP,
            });
            continue;
        }
        let norms = difference_norms(
            &basis,
            &param_sets[k],
            &trajectories[k],
            &param_sets[k + 1],
            &trajectories[k + 1],
        )?;
        let status = if norms.max_entry() == 0.0 { STATUS_EXACT_ZERO } else { STATUS_OK };
        rows.push(StudyRow {
            param_a: cfg.eps_list[k],
            param_b: cfg.eps_list[k + 1],
            norms,
            ratio: None,
            status,
        });
    }
    Ok(StudyReport { rows })
}

fn perturbed_setup(base: &RunSetup, targets: &[PerturbTarget], delta: f64) -> RunSetup {
    let bump_field = |data: &InitialData| InitialData::Shifted {
        base: Box::new(data.clone()),
        mode: 1,
        amount: delta,
    };
    let mut setup = base.clone();
    for t in targets {
        match t {
            PerturbTarget::Theta0 => setup.init_theta = bump_field(&base.init_theta),
            PerturbTarget::Phi0 => setup.init_phi = bump_field(&base.init_phi),
            PerturbTarget::Sigma0 => setup.init_sigma = bump_field(&base.init_sigma),
            PerturbTarget::HeatSource => {
                let bump = SourceSpec::CosineMode { index: 1, amplitude: delta };
                setup.params.heat_source = match &base.params.heat_source {
                    SourceSpec::Off => bump,
                    other => SourceSpec::Sum(vec![other.clone(), bump]),
                };
            }
        }
    }
    setup
}

/// Continuous-dependence study: for each δ, difference the base run against a
/// run whose selected data pieces are shifted by δ times the first
/// nonconstant mode, and report the ratio of solution-difference norms to
/// data-difference norms.
pub fn run_contdep_study(cfg: &StudyConfig) -> Result<StudyReport, StudyError> {
    if cfg.delta_list.is_empty() {
        return Err(StudyError::BadList("delta_list needs at least one entry"));
    }
    if cfg.delta_list.iter().any(|&d| !(d.is_finite() && d >= 0.0)) {
        return Err(StudyError::BadList("delta_list entries must be nonnegative"));
    }
    if cfg.perturb.is_empty() {
        return Err(StudyError::BadList("contdep needs at least one perturbation target"));
    }
    let (basis, base_traj) = cfg.setup.run()?;

    let mut rows = Vec::with_capacity(cfg.delta_list.len());
    for &delta in &cfg.delta_list {
        let setup = perturbed_setup(&cfg.setup, &cfg.perturb, delta);
        let init = setup.initial_state(&basis)?;
        let traj = integrate(&setup.params, &basis, init, &setup.stepper)?;
        if !base_traj.completed() || !traj.completed() {
            rows.push(StudyRow {
                param_a: delta,
                param_b: 0.0,
                norms: nan_norms(),
                ratio: None,
                status: STATUS_BLOW_UP,
            });
            continue;
        }
        let norms =
            difference_norms(&basis, &cfg.setup.params, &base_traj, &setup.params, &traj)?;
        let rhs = norms.rhs_data();
        let (ratio, status) = if rhs == 0.0 {
            (None, STATUS_EXACT_ZERO)
        } else {
            (Some(norms.lhs_sum() / rhs), STATUS_OK)
        };
        rows.push(StudyRow { param_a: delta, param_b: 0.0, norms, ratio, status });
    }
    Ok(StudyReport { rows })
}
