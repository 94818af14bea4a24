//! Galerkin form of the coupled temperature / phase-field / nutrient system.
//!
//! With every field expanded in the sorted cosine basis, tested against e_j,
//! and the chemical potential eliminated, the truncated system reads
//!
//! ```text
//! (1 + τγ_j) φ_j' = S^φ_j − γ_j² φ_j − γ_j w_j + χ γ_j σ_j + Λ γ_j θ_j
//! θ_j' = −γ_j θ_j + u_j − ℓ φ_j'
//! σ_j' = −(γ_j + λ_B) σ_j + χ γ_j φ_j + S^σ_j
//! μ_j  = τ φ_j' + γ_j φ_j + w_j − χ σ_j − Λ θ_j
//! ```
//!
//! where w_j = ⟨β_ε(φ) + π(φ), e_j⟩, S^φ_j = ⟨(λ_P σ − λ_A − λ_E θ) h(φ), e_j⟩
//! and S^σ_j = ⟨−λ_C σ h(φ) + λ_B σ_B − λ_D σ k(θ), e_j⟩.  The nonlinear
//! brackets are evaluated pseudo-spectrally: synthesize to the quadrature
//! nodes, apply the scalar maps, analyze back.  The constant mode (γ_0 = 0)
//! carries the exact mean-value laws of the system, e.g. (θ + ℓφ)-mean grows
//! with the mean of u.

use thiserror::Error;

use crate::basis::{BasisDescriptor, BasisError, SpectralField};
use crate::potential::{
    NonlinearitySpec, PotentialError, PotentialSpec, YosidaConfig, yosida,
};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error(transparent)]
    Basis(#[from] BasisError),
    #[error(transparent)]
    Potential(#[from] PotentialError),
    #[error("{name} = {value} violates (H1): {requirement}")]
    Hypothesis { name: &'static str, value: f64, requirement: &'static str },
    #[error("source exceeds its reported sup bound: |value| = {found:.6e} > M = {bound:.6e}")]
    SourceBound { found: f64, bound: f64 },
    #[error("source mode index {index} is outside the basis ({num_modes} modes)")]
    SourceModeIndex { index: usize, num_modes: usize },
}

/// Space(-time) profile for the heat source u and the nutrient supply σ_B.
///
/// All presets are constant in time; evaluation still takes `t` so
/// time-dependent profiles can be added without touching call sites.
/// `Sum` composes profiles and is how studies superpose perturbations.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum SourceSpec {
    #[default]
    Off,
    Constant {
        value: f64,
    },
    /// amplitude · exp(−|x − center|²/(2 width²)); on intervals only the
    /// first center coordinate is used.
    GaussBump {
        center: [f64; 2],
        width: f64,
        amplitude: f64,
    },
    /// amplitude · e_index with `index` into the sorted mode list.
    CosineMode {
        index: usize,
        amplitude: f64,
    },
    Sum(Vec<SourceSpec>),
}

impl SourceSpec {
    /// Evaluate the profile at the quadrature nodes.
    pub fn node_values(
        &self,
        basis: &BasisDescriptor,
        _t: f64,
    ) -> Result<Vec<f64>, ModelError> {
        let n = basis.num_nodes();
        match self {
            SourceSpec::Off => Ok(vec![0.0; n]),
            SourceSpec::Constant { value } => Ok(vec![*value; n]),
            SourceSpec::GaussBump { center, width, amplitude } => {
                let dim = basis.domain().dim();
                Ok(basis
                    .node_coords()
                    .iter()
                    .map(|x| {
                        let mut d2 = (x[0] - center[0]) * (x[0] - center[0]);
                        if dim == 2 {
                            d2 += (x[1] - center[1]) * (x[1] - center[1]);
                        }
                        amplitude * (-d2 / (2.0 * width * width)).exp()
                    })
                    .collect())
            }
            SourceSpec::CosineMode { index, amplitude } => {
                if *index >= basis.num_modes() {
                    return Err(ModelError::SourceModeIndex {
                        index: *index,
                        num_modes: basis.num_modes(),
                    });
                }
                let mut v = basis.mode_node_values(*index)?;
                for x in &mut v {
                    *x *= amplitude;
                }
                Ok(v)
            }
            SourceSpec::Sum(parts) => {
                let mut acc = vec![0.0; n];
                for p in parts {
                    for (a, b) in acc.iter_mut().zip(p.node_values(basis, _t)?) {
                        *a += b;
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Closed-form sup bound M of the profile over the domain ((H2)).
    pub fn sup_bound(&self, basis: &BasisDescriptor) -> Result<f64, ModelError> {
        match self {
            SourceSpec::Off => Ok(0.0),
            SourceSpec::Constant { value } => Ok(value.abs()),
            SourceSpec::GaussBump { amplitude, .. } => Ok(amplitude.abs()),
            SourceSpec::CosineMode { index, amplitude } => {
                if *index >= basis.num_modes() {
                    return Err(ModelError::SourceModeIndex {
                        index: *index,
                        num_modes: basis.num_modes(),
                    });
                }
                let mode = basis.modes()[*index];
                let mut sup = amplitude.abs();
                for (axis, &l) in basis.domain().lengths().iter().enumerate() {
                    sup *= if mode[axis] == 0 { 1.0 / l.sqrt() } else { (2.0 / l).sqrt() };
                }
                Ok(sup)
            }
            SourceSpec::Sum(parts) => {
                let mut acc = 0.0;
                for p in parts {
                    acc += p.sup_bound(basis)?;
                }
                Ok(acc)
            }
        }
    }
}

/// Physical and regularization parameters of the coupled system.
///
/// `big_lambda` is the two-way θ–φ coupling weight Λ (it multiplies θ in the
/// chemical potential, balanced by the latent-heat term ℓ ∂t φ), `chi` the
/// chemotaxis weight, `tau` the phase-field viscosity and the λ_* the
/// reaction rates: proliferation, apoptosis, thermal damping, consumption,
/// supply relaxation, thermal uptake.
#[derive(Clone, Debug)]
pub struct ModelParams {
    pub ell: f64,
    pub big_lambda: f64,
    pub chi: f64,
    pub tau: f64,
    pub lambda_p: f64,
    pub lambda_a: f64,
    pub lambda_e: f64,
    pub lambda_c: f64,
    pub lambda_b: f64,
    pub lambda_d: f64,
    pub heat_source: SourceSpec,
    pub nutrient_supply: SourceSpec,
    pub potential: PotentialSpec,
    pub yosida: YosidaConfig,
    pub nonlin: NonlinearitySpec,
}

impl Default for ModelParams {
    fn default() -> Self {
        ModelParams {
            ell: 1.0,
            big_lambda: 1.0,
            chi: 1.0,
            tau: 0.1,
            lambda_p: 0.0,
            lambda_a: 0.0,
            lambda_e: 0.0,
            lambda_c: 0.0,
            lambda_b: 0.0,
            lambda_d: 0.0,
            heat_source: SourceSpec::Off,
            nutrient_supply: SourceSpec::Off,
            potential: PotentialSpec::Quartic,
            yosida: YosidaConfig::default(),
            nonlin: NonlinearitySpec::default(),
        }
    }
}

impl ModelParams {
    /// Sign conditions (H1).  Strict positivity is required only of ℓ; the
    /// couplings Λ and χ admit 0 so the decoupled diagnostic configurations
    /// remain expressible, and negatives are always rejected.
    pub fn validate(&self) -> Result<(), ModelError> {
        let nonneg: [(&'static str, f64); 9] = [
            ("Lambda", self.big_lambda),
            ("chi", self.chi),
            ("tau", self.tau),
            ("lambda_p", self.lambda_p),
            ("lambda_a", self.lambda_a),
            ("lambda_e", self.lambda_e),
            ("lambda_c", self.lambda_c),
            ("lambda_b", self.lambda_b),
            ("lambda_d", self.lambda_d),
        ];
        if !(self.ell.is_finite() && self.ell > 0.0) {
            return Err(ModelError::Hypothesis {
                name: "ell",
                value: self.ell,
                requirement: "the latent-heat coefficient must be finite and positive",
            });
        }
        for (name, v) in nonneg {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ModelError::Hypothesis {
                    name,
                    value: v,
                    requirement: "must be finite and nonnegative",
                });
            }
        }
        if !(self.yosida.eps.is_finite() && self.yosida.eps > 0.0) {
            return Err(ModelError::Potential(PotentialError::BadEps(self.yosida.eps)));
        }
        if !(self.yosida.newton_tol.is_finite() && self.yosida.newton_tol > 0.0) {
            return Err(ModelError::Potential(PotentialError::BadTol(self.yosida.newton_tol)));
        }
        Ok(())
    }
}

/// Coefficient triple (θ, φ, σ) at one instant.
#[derive(Clone, Debug, PartialEq)]
pub struct SimState {
    pub t: f64,
    pub theta: SpectralField,
    pub phi: SpectralField,
    pub sigma: SpectralField,
}

impl SimState {
    pub fn zeros(basis: &BasisDescriptor) -> Self {
        let n = basis.num_modes();
        SimState {
            t: 0.0,
            theta: SpectralField::zeros(n),
            phi: SpectralField::zeros(n),
            sigma: SpectralField::zeros(n),
        }
    }
}

/// Projections of the heat source and nutrient supply at one instant,
/// together with the audited sup bound of u.
#[derive(Clone, Debug)]
pub struct SourceProjection {
    pub u: SpectralField,
    pub u_nodes: Vec<f64>,
    pub supply_nodes: Vec<f64>,
    pub u_sup_bound: f64,
}

/// Project u and σ_B at time `t` and verify the (H2) bound of u against the
/// node samples.
pub fn eval_sources(
    params: &ModelParams,
    basis: &BasisDescriptor,
    t: f64,
) -> Result<SourceProjection, ModelError> {
    let u_nodes = params.heat_source.node_values(basis, t)?;
    let supply_nodes = params.nutrient_supply.node_values(basis, t)?;
    let bound = params.heat_source.sup_bound(basis)?;
    let found = u_nodes.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if found > bound * (1.0 + 1e-12) + 1e-300 {
        return Err(ModelError::SourceBound { found, bound });
    }
    let u = basis.analyze(&u_nodes)?;
    Ok(SourceProjection { u, u_nodes, supply_nodes, u_sup_bound: bound })
}

/// The three nonlinear/source brackets of the mode equations at one state.
#[derive(Clone, Debug)]
pub struct NonlinearProjections {
    /// w_j = ⟨β_ε(φ) + π(φ), e_j⟩.
    pub w: SpectralField,
    /// S^φ_j = ⟨(λ_P σ − λ_A − λ_E θ) h(φ), e_j⟩.
    pub s_phi: SpectralField,
    /// S^σ_j = ⟨−λ_C σ h(φ) + λ_B σ_B − λ_D σ k(θ), e_j⟩.
    pub s_sigma: SpectralField,
    /// u_j at the state's time.
    pub u: SpectralField,
}

/// Pseudo-spectral evaluation of all brackets at `state`.
pub fn nonlinear_projections(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
) -> Result<NonlinearProjections, ModelError> {
    let phi_nodes = basis.synthesize(&state.phi)?;
    let theta_nodes = basis.synthesize(&state.theta)?;
    let sigma_nodes = basis.synthesize(&state.sigma)?;
    let sources = eval_sources(params, basis, state.t)?;

    let mut w_nodes = Vec::with_capacity(phi_nodes.len());
    for &p in &phi_nodes {
        w_nodes.push(yosida(&params.potential, &params.yosida, p)? + params.potential.pi(p));
    }

    let mut s_phi_nodes = Vec::with_capacity(phi_nodes.len());
    let mut s_sigma_nodes = Vec::with_capacity(phi_nodes.len());
    for i in 0..phi_nodes.len() {
        let h = params.nonlin.h_at(phi_nodes[i]);
        let k = params.nonlin.k_at(theta_nodes[i]);
        s_phi_nodes.push(
            (params.lambda_p * sigma_nodes[i] - params.lambda_a - params.lambda_e * theta_nodes[i])
                * h,
        );
        s_sigma_nodes.push(
            -params.lambda_c * sigma_nodes[i] * h + params.lambda_b * sources.supply_nodes[i]
                - params.lambda_d * sigma_nodes[i] * k,
        );
    }

    Ok(NonlinearProjections {
        w: basis.analyze(&w_nodes)?,
        s_phi: basis.analyze(&s_phi_nodes)?,
        s_sigma: basis.analyze(&s_sigma_nodes)?,
        u: sources.u,
    })
}

/// Instantaneous rates, the recovered chemical potential, and the brackets
/// they were assembled from.
#[derive(Clone, Debug)]
pub struct DerivedFields {
    pub dtheta_dt: SpectralField,
    pub dphi_dt: SpectralField,
    pub dsigma_dt: SpectralField,
    pub mu: SpectralField,
    pub w: SpectralField,
    pub s_phi: SpectralField,
    pub s_sigma: SpectralField,
    pub u: SpectralField,
}

/// Assemble the full right-hand side at `state` (μ already eliminated).
pub fn assemble_rhs(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
) -> Result<DerivedFields, ModelError> {
    let p = nonlinear_projections(params, basis, state)?;
    let n = basis.num_modes();
    let mut dphi = vec![0.0; n];
    let mut dtheta = vec![0.0; n];
    let mut dsigma = vec![0.0; n];
    let mut mu = vec![0.0; n];
    for j in 0..n {
        let g = basis.eigenvalues()[j];
        let phi = state.phi.coeffs[j];
        let theta = state.theta.coeffs[j];
        let sigma = state.sigma.coeffs[j];
        let rho = (p.s_phi.coeffs[j] - g * g * phi - g * p.w.coeffs[j]
            + params.chi * g * sigma
            + params.big_lambda * g * theta)
            / (1.0 + params.tau * g);
        dphi[j] = rho;
        dtheta[j] = -g * theta + p.u.coeffs[j] - params.ell * rho;
        dsigma[j] = -(g + params.lambda_b) * sigma + params.chi * g * phi + p.s_sigma.coeffs[j];
        mu[j] = params.tau * rho + g * phi + p.w.coeffs[j]
            - params.chi * sigma
            - params.big_lambda * theta;
    }
    Ok(DerivedFields {
        dtheta_dt: SpectralField::from_coeffs(dtheta),
        dphi_dt: SpectralField::from_coeffs(dphi),
        dsigma_dt: SpectralField::from_coeffs(dsigma),
        mu: SpectralField::from_coeffs(mu),
        w: p.w,
        s_phi: p.s_phi,
        s_sigma: p.s_sigma,
        u: p.u,
    })
}

/// Chemical potential for an externally supplied phase rate ρ (for example a
/// discrete difference quotient): μ_j = τρ_j + γ_j φ_j + w_j − χσ_j − Λθ_j.
pub fn recover_mu(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
    rho: &SpectralField,
) -> Result<SpectralField, ModelError> {
    let phi_nodes = basis.synthesize(&state.phi)?;
    let mut w_nodes = Vec::with_capacity(phi_nodes.len());
    for &p in &phi_nodes {
        w_nodes.push(yosida(&params.potential, &params.yosida, p)? + params.potential.pi(p));
    }
    let w = basis.analyze(&w_nodes)?;
    let mut mu = vec![0.0; basis.num_modes()];
    for j in 0..mu.len() {
        let g = basis.eigenvalues()[j];
        mu[j] = params.tau * rho.coeffs[j] + g * state.phi.coeffs[j] + w.coeffs[j]
            - params.chi * state.sigma.coeffs[j]
            - params.big_lambda * state.theta.coeffs[j];
    }
    Ok(SpectralField::from_coeffs(mu))
}

/// Max-abs defect of a (state, derived) pair in each mode equation, with the
/// brackets recomputed from the state.  Near-roundoff values certify that the
/// derived fields belong to the state (used after checkpoint round-trips).
#[derive(Clone, Copy, Debug)]
pub struct ResidualReport {
    pub phi_equation: f64,
    pub theta_equation: f64,
    pub sigma_equation: f64,
    pub mu_relation: f64,
}

impl ResidualReport {
    pub fn max(&self) -> f64 {
        self.phi_equation
            .max(self.theta_equation)
            .max(self.sigma_equation)
            .max(self.mu_relation)
    }
}

pub fn residuals(
    params: &ModelParams,
    basis: &BasisDescriptor,
    state: &SimState,
    deriv: &DerivedFields,
) -> Result<ResidualReport, ModelError> {
    let p = nonlinear_projections(params, basis, state)?;
    let mut r = ResidualReport {
        phi_equation: 0.0,
        theta_equation: 0.0,
        sigma_equation: 0.0,
        mu_relation: 0.0,
    };
    for j in 0..basis.num_modes() {
        let g = basis.eigenvalues()[j];
        let phi = state.phi.coeffs[j];
        let theta = state.theta.coeffs[j];
        let sigma = state.sigma.coeffs[j];
        let rho = deriv.dphi_dt.coeffs[j];
        let e1 = (1.0 + params.tau * g) * rho
            - (p.s_phi.coeffs[j] - g * g * phi - g * p.w.coeffs[j]
                + params.chi * g * sigma
                + params.big_lambda * g * theta);
        let e2 = deriv.dtheta_dt.coeffs[j] + g * theta - p.u.coeffs[j] + params.ell * rho;
        let e3 = deriv.dsigma_dt.coeffs[j] + (g + params.lambda_b) * sigma
            - params.chi * g * phi
            - p.s_sigma.coeffs[j];
        let e4 = deriv.mu.coeffs[j]
            - (params.tau * rho + g * phi + p.w.coeffs[j]
                - params.chi * sigma
                - params.big_lambda * theta);
        r.phi_equation = r.phi_equation.max(e1.abs());
        r.theta_equation = r.theta_equation.max(e2.abs());
        r.sigma_equation = r.sigma_equation.max(e3.abs());
        r.mu_relation = r.mu_relation.max(e4.abs());
    }
    Ok(r)
}

/// Initial-data preset for one field.
///
/// `Mode` sets a single coefficient (by sorted mode index); `TanhBump` is
/// amplitude·tanh((x₁ − center)/width) along the first axis, projected by
/// quadrature; `RandomBand` fills every coefficient in the per-axis band
/// ≤ `max_mode` with amplitude·uniform(−1, 1) draws from the portable LCG
/// seeded as given, in sorted mode order.  `Shifted` adds `amount` to one
/// coefficient of another preset (the shape perturbation studies use).
#[derive(Clone, Debug, PartialEq)]
pub enum InitialData {
    Zero,
    Mode { index: usize, amplitude: f64 },
    TanhBump { center: f64, width: f64, amplitude: f64 },
    RandomBand { max_mode: usize, amplitude: f64, seed: u64 },
    Shifted { base: Box<InitialData>, mode: usize, amount: f64 },
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Zero
    }
}

impl InitialData {
    pub fn build(&self, basis: &BasisDescriptor) -> Result<SpectralField, ModelError> {
        match self {
            InitialData::Zero => Ok(SpectralField::zeros(basis.num_modes())),
            InitialData::Mode { index, amplitude } => {
                if *index >= basis.num_modes() {
                    return Err(ModelError::SourceModeIndex {
                        index: *index,
                        num_modes: basis.num_modes(),
                    });
                }
                let mut f = SpectralField::zeros(basis.num_modes());
                f.coeffs[*index] = *amplitude;
                Ok(f)
            }
            InitialData::TanhBump { center, width, amplitude } => {
                let values: Vec<f64> = basis
                    .node_coords()
                    .iter()
                    .map(|x| amplitude * ((x[0] - center) / width).tanh())
                    .collect();
                Ok(basis.analyze(&values)?)
            }
            InitialData::RandomBand { max_mode, amplitude, seed } => {
                let mut rng = crate::rng::Lcg64::new(*seed);
                let coeffs = basis
                    .modes()
                    .iter()
                    .map(|m| {
                        if m[0] <= *max_mode && m[1] <= *max_mode {
                            amplitude * rng.symmetric()
                        } else {
                            0.0
                        }
                    })
                    .collect();
                Ok(SpectralField::from_coeffs(coeffs))
            }
            InitialData::Shifted { base, mode, amount } => {
                if *mode >= basis.num_modes() {
                    return Err(ModelError::SourceModeIndex {
                        index: *mode,
                        num_modes: basis.num_modes(),
                    });
                }
                let mut f = base.build(basis)?;
                f.coeffs[*mode] += amount;
                Ok(f)
            }
        }
    }
}
