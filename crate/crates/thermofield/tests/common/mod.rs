//! Test-side oracles, implemented independently of the library: integrals by
//! adaptive Simpson instead of fixed-node quadrature, scalar inversions by
//! plain bisection instead of safeguarded Newton, and envelopes by direct
//! minimization.  Agreement between the two stacks is what the oracle tests
//! certify.

#![allow(dead_code)]

use thermofield::model::{ModelParams, SimState, SourceSpec};
use thermofield::potential::PotentialSpec;

/// Adaptive Simpson quadrature with an absolute tolerance.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, fm, whole, tol, 40)
}

/// Eigenfunction e_j on [0, L]: the orthonormal Neumann cosine.
pub fn eigenfunction(j: usize, l: f64, x: f64) -> f64 {
    let norm = if j == 0 { 1.0 / l.sqrt() } else { (2.0 / l).sqrt() };
    norm * (j as f64 * std::f64::consts::PI * x / l).cos()
}

/// Eigenvalue γ_j on [0, L].
pub fn eigenvalue(j: usize, l: f64) -> f64 {
    let k = j as f64 * std::f64::consts::PI / l;
    k * k
}

/// Field value Σ_j c_j e_j(x) on the interval, summed directly.
pub fn field_value(coeffs: &[f64], l: f64, x: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(j, c)| c * eigenfunction(j, l, x))
        .sum()
}

/// Resolvent of the quartic potential by pure bisection: solve
/// s + ε s³ = r on the bracket [min(0, r), max(0, r)].
pub fn quartic_resolvent_bisect(eps: f64, r: f64) -> f64 {
    let g = |s: f64| s + eps * s * s * s - r;
    let (mut lo, mut hi) = (r.min(0.0), r.max(0.0));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// β_ε for a preset, on the oracle stack.
pub fn yosida_oracle(spec: &PotentialSpec, eps: f64, r: f64) -> f64 {
    match spec {
        PotentialSpec::Zero => 0.0,
        PotentialSpec::Linear => r / (1.0 + eps),
        PotentialSpec::Quartic => (r - quartic_resolvent_bisect(eps, r)) / eps,
        PotentialSpec::Custom(_) => panic!("oracle handles presets only"),
    }
}

/// Convex part β̂ of a preset, restated.
pub fn beta_hat_oracle(spec: &PotentialSpec, r: f64) -> f64 {
    match spec {
        PotentialSpec::Zero => 0.0,
        PotentialSpec::Linear => 0.5 * r * r,
        PotentialSpec::Quartic => 0.25 * r * r * r * r,
        PotentialSpec::Custom(_) => panic!("oracle handles presets only"),
    }
}

/// Concave-part derivative π of a preset, restated.
pub fn pi_oracle(spec: &PotentialSpec, r: f64) -> f64 {
    match spec {
        PotentialSpec::Zero | PotentialSpec::Linear => 0.0,
        PotentialSpec::Quartic => -r,
        PotentialSpec::Custom(_) => panic!("oracle handles presets only"),
    }
}

/// Moreau envelope by golden-section minimization of
/// s ↦ (r − s)²/(2ε) + β̂(s) over a bracket that always contains the
/// minimizer (it lies between 0 and r because β̂ is even and increasing
/// away from 0).
pub fn envelope_by_minimization(spec: &PotentialSpec, eps: f64, r: f64) -> f64 {
    let obj = |s: f64| (r - s) * (r - s) / (2.0 * eps) + beta_hat_oracle(spec, s);
    let (mut a, mut b) = (r.min(0.0) - 1.0, r.max(0.0) + 1.0);
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (obj(c), obj(d));
    for _ in 0..200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = obj(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = obj(d);
        }
    }
    obj(0.5 * (a + b))
}

/// Bounded growth shape h, restated from its definition.
pub fn growth_ramp(r: f64) -> f64 {
    (0.5 * (1.0 + r)).clamp(0.0, 1.0)
}

/// Bounded uptake shape k, restated from its definition.
pub fn uptake_clamp(theta: f64) -> f64 {
    theta.clamp(0.0, 1.0)
}

/// Heat-source or supply profile evaluated pointwise on the oracle stack
/// (interval domains, the presets the oracle tests use).
pub fn source_value(spec: &SourceSpec, l: f64, x: f64) -> f64 {
    match spec {
        SourceSpec::Off => 0.0,
        SourceSpec::Constant { value } => *value,
        SourceSpec::GaussBump { center, width, amplitude } => {
            let d = x - center[0];
            amplitude * (-d * d / (2.0 * width * width)).exp()
        }
        SourceSpec::CosineMode { index, amplitude } => amplitude * eigenfunction(*index, l, x),
        SourceSpec::Sum(parts) => parts.iter().map(|p| source_value(p, l, x)).sum(),
    }
}

/// All mode rates of the coupled system at one state, computed densely:
/// pointwise field synthesis, scalar maps, adaptive-quadrature projections,
/// then the mode formulas.  Interval domains only.  Returns
/// (dθ/dt, dφ/dt, dσ/dt, μ) as coefficient vectors.
pub fn dense_rhs_oracle(
    params: &ModelParams,
    l: f64,
    state: &SimState,
    quad_tol: f64,
) -> (Vec<f64>, Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = state.phi.coeffs.len();
    let eps = params.yosida.eps;
    let theta = |x: f64| field_value(&state.theta.coeffs, l, x);
    let phi = |x: f64| field_value(&state.phi.coeffs, l, x);
    let sigma = |x: f64| field_value(&state.sigma.coeffs, l, x);

    let w = |x: f64| {
        let p = phi(x);
        yosida_oracle(&params.potential, eps, p) + pi_oracle(&params.potential, p)
    };
    let s_phi = |x: f64| {
        (params.lambda_p * sigma(x) - params.lambda_a - params.lambda_e * theta(x))
            * growth_ramp(phi(x))
    };
    let s_sigma = |x: f64| {
        -params.lambda_c * sigma(x) * growth_ramp(phi(x))
            + params.lambda_b * source_value(&params.nutrient_supply, l, x)
            - params.lambda_d * sigma(x) * uptake_clamp(theta(x))
    };
    let u = |x: f64| source_value(&params.heat_source, l, x);

    let project = |f: &dyn Fn(f64) -> f64, j: usize| {
        integrate_adaptive(&|x| f(x) * eigenfunction(j, l, x), 0.0, l, quad_tol)
    };

    let mut dtheta = vec![0.0; n];
    let mut dphi = vec![0.0; n];
    let mut dsigma = vec![0.0; n];
    let mut mu = vec![0.0; n];
    for j in 0..n {
        let g = eigenvalue(j, l);
        let w_j = project(&w, j);
        let s_phi_j = project(&s_phi, j);
        let s_sigma_j = project(&s_sigma, j);
        let u_j = project(&u, j);
        let rho = (s_phi_j - g * g * state.phi.coeffs[j] - g * w_j
            + params.chi * g * state.sigma.coeffs[j]
            + params.big_lambda * g * state.theta.coeffs[j])
            / (1.0 + params.tau * g);
        dphi[j] = rho;
        dtheta[j] = -g * state.theta.coeffs[j] + u_j - params.ell * rho;
        dsigma[j] = -(g + params.lambda_b) * state.sigma.coeffs[j]
            + params.chi * g * state.phi.coeffs[j]
            + s_sigma_j;
        mu[j] = params.tau * rho + g * state.phi.coeffs[j] + w_j
            - params.chi * state.sigma.coeffs[j]
            - params.big_lambda * state.theta.coeffs[j];
    }
    (dtheta, dphi, dsigma, mu)
}

/// Per-mode factor of one semi-implicit step when β is the linear preset and
/// the couplings vanish: the whole update is the scalar multiplication
/// φ ↦ a(ε)·φ with
///
/// a(ε) = [1 − dt·γ/((1+ε)(1+τγ))] / [1 + dt·γ²/(1+τγ)].
pub fn linear_imex_factor(eps: f64, tau: f64, gamma: f64, dt: f64) -> f64 {
    let relax = 1.0 + tau * gamma;
    (1.0 - dt * gamma / ((1.0 + eps) * relax)) / (1.0 + dt * gamma * gamma / relax)
}

/// Closed form for the perturbed heat mode under the semi-implicit scheme:
/// θ⁰ = 0 and θ^{k+1} = (θ^k + dt·δ)/(1 + dt·γ) give the discrete Duhamel sum
///
/// θ^k = (δ/γ)·(1 − (1 + dt·γ)^{−k}).
pub fn heat_mode_duhamel(delta: f64, gamma: f64, dt: f64, k: usize) -> f64 {
    delta / gamma * (1.0 - (1.0 + dt * gamma).powi(-(k as i32)))
}

/// Deterministic smooth random state: coefficient j drawn uniform in
/// [−1, 1] scaled by amp/(1+j)², which keeps sup-norms near amp and the
/// nonlinear compositions well inside the band the quadrature resolves.
pub fn smooth_random_field(rng: &mut thermofield::rng::Lcg64, n_modes: usize, amp: f64) -> Vec<f64> {
    (0..n_modes)
        .map(|j| {
            let decay = (1.0 + j as f64) * (1.0 + j as f64);
            amp * rng.symmetric() / decay
        })
        .collect()
}
