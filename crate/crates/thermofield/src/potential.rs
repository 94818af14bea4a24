//! Double-well potentials, their Moreau–Yosida regularization, and the
//! bounded nonlinearities of the reaction terms.
//!
//! The potential is split as F = β̂ + π̂ with β̂ convex (so β = β̂' is maximal
//! monotone with β(0) = 0) and π̂ a smooth concave perturbation.  The Yosida
//! approximation at level ε > 0 is built from the resolvent
//!
//! ```text
//! J_ε(r) = (Id + εβ)⁻¹(r),        β_ε(r) = (r − J_ε(r))/ε,
//! β̂_ε(r) = (ε/2)·β_ε(r)² + β̂(J_ε(r)),
//! ```
//!
//! which realizes the infimal convolution β̂_ε(r) = min_s { |s−r|²/(2ε) + β̂(s) }.
//! β_ε is monotone, 1/ε-Lipschitz, vanishes at 0, and 0 ≤ β̂_ε ≤ β̂ pointwise;
//! `check_potential` audits those properties on a sample grid.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PotentialError {
    #[error("resolvent input is not finite: {0}")]
    NonFiniteInput(f64),
    #[error(
        "resolvent Newton iteration did not reach tolerance {tol:.1e} within {max_iter} \
         steps for r = {r:.6e}, eps = {eps:.3e}"
    )]
    NoConvergence { r: f64, eps: f64, tol: f64, max_iter: usize },
    #[error("regularization level eps must be positive and finite, got {0}")]
    BadEps(f64),
    #[error("solver tolerance must be positive, got {0}")]
    BadTol(f64),
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// User-supplied convex/concave split (β̂, β, π̂, π); an optional β' sharpens
/// the resolvent Newton iteration, otherwise a guarded secant step is used.
#[derive(Clone)]
pub struct CustomPotential {
    pub beta_hat: ScalarFn,
    pub beta: ScalarFn,
    pub beta_prime: Option<ScalarFn>,
    pub pi_hat: ScalarFn,
    pub pi: ScalarFn,
}

/// Potential preset or custom split.
///
/// * `Quartic`: F(r) = (r²−1)²/4 split as β̂ = r⁴/4, π̂ = −r²/2 + 1/4.
/// * `Linear`: β̂ = r²/2, π̂ = 0; the resolvent is r/(1+ε) in closed form,
///   which makes whole trajectories solvable by hand and is the reference
///   case for regularization studies.
/// * `Zero`: no potential at all (pure surface-diffusion dynamics).
#[derive(Clone, Default)]
pub enum PotentialSpec {
    #[default]
    Quartic,
    Linear,
    Zero,
    Custom(CustomPotential),
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialSpec::Quartic => write!(f, "Quartic"),
            PotentialSpec::Linear => write!(f, "Linear"),
            PotentialSpec::Zero => write!(f, "Zero"),
            PotentialSpec::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl PotentialSpec {
    /// Convex part β̂.
    pub fn beta_hat(&self, r: f64) -> f64 {
        match self {
            PotentialSpec::Quartic => 0.25 * r * r * r * r,
            PotentialSpec::Linear => 0.5 * r * r,
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Custom(c) => (c.beta_hat)(r),
        }
    }

    /// Monotone derivative β = β̂'.
    pub fn beta(&self, r: f64) -> f64 {
        match self {
            PotentialSpec::Quartic => r * r * r,
            PotentialSpec::Linear => r,
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Custom(c) => (c.beta)(r),
        }
    }

    fn beta_prime(&self, r: f64) -> Option<f64> {
        match self {
            PotentialSpec::Quartic => Some(3.0 * r * r),
            PotentialSpec::Linear => Some(1.0),
            PotentialSpec::Zero => Some(0.0),
            PotentialSpec::Custom(c) => c.beta_prime.as_ref().map(|f| f(r)),
        }
    }

    /// Concave part π̂.
    pub fn pi_hat(&self, r: f64) -> f64 {
        match self {
            PotentialSpec::Quartic => 0.25 - 0.5 * r * r,
            PotentialSpec::Linear => 0.0,
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Custom(c) => (c.pi_hat)(r),
        }
    }

    /// π = π̂'.
    pub fn pi(&self, r: f64) -> f64 {
        match self {
            PotentialSpec::Quartic => -r,
            PotentialSpec::Linear => 0.0,
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Custom(c) => (c.pi)(r),
        }
    }

    /// Growth constant C with |β(r)| ≤ C·(β̂(r) + 1), fitted by coarse global
    /// sampling on [−10, 10]; the same constant carries over to every
    /// regularization level.
    pub fn growth_constant(&self) -> f64 {
        let mut c: f64 = 0.0;
        let samples = 2001;
        for i in 0..samples {
            let r = -10.0 + 20.0 * i as f64 / (samples - 1) as f64;
            c = c.max(self.beta(r).abs() / (self.beta_hat(r) + 1.0));
        }
        c
    }
}

/// Resolvent solver settings; `eps` is the regularization level.
#[derive(Clone, Copy, Debug)]
pub struct YosidaConfig {
    pub eps: f64,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
}

impl Default for YosidaConfig {
    fn default() -> Self {
        YosidaConfig { eps: 0.1, newton_tol: 1e-12, newton_max_iter: 100 }
    }
}

impl YosidaConfig {
    pub fn with_eps(eps: f64) -> Self {
        YosidaConfig { eps, ..Default::default() }
    }

    fn validate(&self) -> Result<(), PotentialError> {
        if !(self.eps.is_finite() && self.eps > 0.0) {
            return Err(PotentialError::BadEps(self.eps));
        }
        if !(self.newton_tol.is_finite() && self.newton_tol > 0.0) {
            return Err(PotentialError::BadTol(self.newton_tol));
        }
        Ok(())
    }
}

/// J_ε(r) = (Id + εβ)⁻¹(r), solved by Newton steps safeguarded by bisection
/// on the bracket [min(0, r), max(0, r)], which always contains the root
/// because β is monotone with β(0) = 0.  Terminates when
/// |J + εβ(J) − r| ≤ tol·max(1, |r|).
pub fn resolvent(spec: &PotentialSpec, cfg: &YosidaConfig, r: f64) -> Result<f64, PotentialError> {
    cfg.validate()?;
    if !r.is_finite() {
        return Err(PotentialError::NonFiniteInput(r));
    }
    let eps = cfg.eps;
    match spec {
        PotentialSpec::Zero => return Ok(r),
        PotentialSpec::Linear => return Ok(r / (1.0 + eps)),
        _ => {}
    }

    let g = |s: f64| s + eps * spec.beta(s) - r;
    let scale = r.abs().max(1.0);
    let mut lo = r.min(0.0);
    let mut hi = r.max(0.0);
    let mut s = r / (1.0 + eps * spec.beta_prime(r).unwrap_or(0.0).max(0.0));
    if !(lo..=hi).contains(&s) {
        s = 0.5 * (lo + hi);
    }
    let mut gs = g(s);
    for _ in 0..cfg.newton_max_iter {
        if gs.abs() <= cfg.newton_tol * scale {
            return Ok(s);
        }
        if gs > 0.0 {
            hi = s;
        } else {
            lo = s;
        }
        let deriv = match spec.beta_prime(s) {
            Some(bp) => 1.0 + eps * bp,
            // Derivative-free fallback: one-sided difference of g across a
            // small fraction of the bracket.
            None => {
                let h = 1e-6 * (hi - lo).max(1e-12);
                (g(s + h) - gs) / h
            }
        };
        let mut next = if deriv.is_finite() && deriv > 0.0 { s - gs / deriv } else { f64::NAN };
        if !next.is_finite() || next <= lo || next >= hi {
            next = 0.5 * (lo + hi);
        }
        s = next;
        gs = g(s);
    }
    if gs.abs() <= cfg.newton_tol * scale {
        Ok(s)
    } else {
        Err(PotentialError::NoConvergence {
            r,
            eps,
            tol: cfg.newton_tol,
            max_iter: cfg.newton_max_iter,
        })
    }
}

/// Yosida approximation β_ε(r) = (r − J_ε(r))/ε.
pub fn yosida(spec: &PotentialSpec, cfg: &YosidaConfig, r: f64) -> Result<f64, PotentialError> {
    cfg.validate()?;
    if !r.is_finite() {
        return Err(PotentialError::NonFiniteInput(r));
    }
    // The presets with a closed-form resolvent get a closed-form β_ε too:
    // the generic (r − J)/ε loses precision to cancellation when ε is small.
    match spec {
        PotentialSpec::Zero => return Ok(0.0),
        PotentialSpec::Linear => return Ok(r / (1.0 + cfg.eps)),
        _ => {}
    }
    let j = resolvent(spec, cfg, r)?;
    Ok((r - j) / cfg.eps)
}

/// Moreau envelope β̂_ε(r) = (ε/2)·β_ε(r)² + β̂(J_ε(r)).
pub fn moreau_envelope(
    spec: &PotentialSpec,
    cfg: &YosidaConfig,
    r: f64,
) -> Result<f64, PotentialError> {
    let j = resolvent(spec, cfg, r)?;
    let be = yosida(spec, cfg, r)?;
    Ok(0.5 * cfg.eps * be * be + spec.beta_hat(j))
}

/// β_ε evaluated at every node value; stops at the first solver failure.
pub fn yosida_at_nodes(
    spec: &PotentialSpec,
    cfg: &YosidaConfig,
    values: &[f64],
) -> Result<Vec<f64>, PotentialError> {
    values.iter().map(|&v| yosida(spec, cfg, v)).collect()
}

/// Bounded proliferation shape h(φ) interpolating between the phases.
///
/// `Ramp` is clamp((1+r)/2, 0, 1): 0 in the bulk phase φ = −1, 1 in the bulk
/// phase φ = +1, Lipschitz constant 1/2.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GrowthShape {
    #[default]
    Ramp,
    One,
    Zero,
}

/// Bounded thermal uptake shape k(θ).
///
/// `Clamp` is clamp(θ, 0, 1): no uptake below θ = 0, saturated above θ = 1,
/// Lipschitz constant 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UptakeShape {
    #[default]
    Clamp,
    One,
    Zero,
}

/// The two bounded Lipschitz nonlinearities of the reaction terms, with their
/// sup-bounds and Lipschitz constants on record.
#[derive(Clone, Copy, Debug, Default)]
pub struct NonlinearitySpec {
    pub h: GrowthShape,
    pub k: UptakeShape,
}

impl NonlinearitySpec {
    pub fn h_at(&self, r: f64) -> f64 {
        match self.h {
            GrowthShape::Ramp => (0.5 * (1.0 + r)).clamp(0.0, 1.0),
            GrowthShape::One => 1.0,
            GrowthShape::Zero => 0.0,
        }
    }

    pub fn k_at(&self, theta: f64) -> f64 {
        match self.k {
            UptakeShape::Clamp => theta.clamp(0.0, 1.0),
            UptakeShape::One => 1.0,
            UptakeShape::Zero => 0.0,
        }
    }

    pub fn h_sup(&self) -> f64 {
        match self.h {
            GrowthShape::Ramp | GrowthShape::One => 1.0,
            GrowthShape::Zero => 0.0,
        }
    }

    pub fn h_lipschitz(&self) -> f64 {
        match self.h {
            GrowthShape::Ramp => 0.5,
            _ => 0.0,
        }
    }

    pub fn k_sup(&self) -> f64 {
        match self.k {
            UptakeShape::Clamp | UptakeShape::One => 1.0,
            UptakeShape::Zero => 0.0,
        }
    }

    pub fn k_lipschitz(&self) -> f64 {
        match self.k {
            UptakeShape::Clamp => 1.0,
            _ => 0.0,
        }
    }
}

/// One audited property of the regularized potential.  `worst_violation` is
/// the largest observed breach floored at zero (0 means the property held at
/// every sample) and `arg_at_worst` the sample where the breach (or the
/// tightest margin) occurred.
#[derive(Clone, Debug)]
pub struct PropertyCheck {
    pub property: &'static str,
    pub worst_violation: f64,
    pub arg_at_worst: f64,
}

/// Audit the Yosida identities and bounds on a uniform sample grid over
/// `range`.  Rows, in fixed order: envelope nonnegativity, envelope below the
/// potential, β_ε(0) = 0, monotonicity and 1/ε-Lipschitz continuity of β_ε
/// between adjacent samples, the envelope identity residual, and the growth
/// bound |β_ε| ≤ C·(β̂_ε + 1) with C fitted on the unregularized pair.
pub fn check_potential(
    spec: &PotentialSpec,
    cfg: &YosidaConfig,
    range: (f64, f64),
    samples: usize,
) -> Result<Vec<PropertyCheck>, PotentialError> {
    cfg.validate()?;
    let (lo, hi) = range;
    let n = samples.max(2);
    let step = (hi - lo) / (n - 1) as f64;
    let growth_c = spec.growth_constant();

    let mut worst: [(f64, f64); 7] = [(f64::NEG_INFINITY, lo); 7];
    let mut track = |slot: usize, breach: f64, arg: f64| {
        if breach > worst[slot].0 {
            worst[slot] = (breach, arg);
        }
    };

    let mut prev: Option<(f64, f64)> = None; // (r, β_ε(r))
    for i in 0..n {
        let r = lo + step * i as f64;
        let j = resolvent(spec, cfg, r)?;
        let be = (r - j) / cfg.eps;
        let env = 0.5 * cfg.eps * be * be + spec.beta_hat(j);

        track(0, -env, r);
        track(1, env - spec.beta_hat(r), r);
        if let Some((rp, bp)) = prev {
            track(3, bp - be, r);
            track(4, (be - bp).abs() - (r - rp) / cfg.eps, r);
        }
        let ident = 0.5 * (r - j) * (r - j) / cfg.eps + spec.beta_hat(j);
        track(5, (env - ident).abs(), r);
        track(6, be.abs() - growth_c * (env + 1.0), r);
        prev = Some((r, be));
    }
    let zero = yosida(spec, cfg, 0.0)?;
    track(2, zero.abs(), 0.0);

    let names = [
        "envelope_nonnegative",
        "envelope_below_potential",
        "yosida_zero_at_zero",
        "yosida_monotone",
        "yosida_lipschitz",
        "envelope_identity",
        "growth_bound",
    ];
    Ok(names
        .iter()
        .zip(worst)
        .map(|(&property, (breach, arg))| PropertyCheck {
            property,
            worst_violation: breach.max(0.0),
            arg_at_worst: arg,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_resolvent_at_unit_level() {
        // J + J³ = 2 has the exact root J = 1.
        let cfg = YosidaConfig::with_eps(1.0);
        let spec = PotentialSpec::Quartic;
        let j = resolvent(&spec, &cfg, 2.0).unwrap();
        assert!((j - 1.0).abs() < 1e-12);
        assert!((yosida(&spec, &cfg, 2.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((moreau_envelope(&spec, &cfg, 2.0).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn linear_resolvent_matches_the_closed_form() {
        let spec = PotentialSpec::Linear;
        for eps in [1.0, 0.1, 1e-3] {
            let cfg = YosidaConfig::with_eps(eps);
            for r in [-3.0, -0.5, 0.0, 0.7, 10.0] {
                assert!((resolvent(&spec, &cfg, r).unwrap() - r / (1.0 + eps)).abs() < 1e-14);
                assert!((yosida(&spec, &cfg, r).unwrap() - r / (1.0 + eps)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn resolvent_satisfies_its_defining_equation() {
        let spec = PotentialSpec::Quartic;
        for eps in [1.0, 0.1, 0.025, 1e-3] {
            let cfg = YosidaConfig::with_eps(eps);
            let mut r = -5.0;
            while r <= 5.0 {
                let j = resolvent(&spec, &cfg, r).unwrap();
                let resid = (j + eps * spec.beta(j) - r).abs();
                assert!(resid <= 1e-12 * r.abs().max(1.0), "resid {resid} at r={r}, eps={eps}");
                r += 0.037;
            }
        }
    }

    #[test]
    fn custom_potential_without_derivative_converges() {
        // Same quartic but supplied as closures with no β'.
        let spec = PotentialSpec::Custom(CustomPotential {
            beta_hat: Arc::new(|r| 0.25 * r * r * r * r),
            beta: Arc::new(|r| r * r * r),
            beta_prime: None,
            pi_hat: Arc::new(|r| 0.25 - 0.5 * r * r),
            pi: Arc::new(|r| -r),
        });
        let cfg = YosidaConfig::with_eps(0.1);
        for r in [-4.0, -1.0, 0.3, 2.0] {
            let j = resolvent(&spec, &cfg, r).unwrap();
            let reference = resolvent(&PotentialSpec::Quartic, &cfg, r).unwrap();
            assert!((j - reference).abs() < 1e-10);
        }
    }

    #[test]
    fn envelope_is_squeezed_between_zero_and_the_potential() {
        let spec = PotentialSpec::Quartic;
        let cfg = YosidaConfig::with_eps(0.25);
        let mut r = -5.0;
        while r <= 5.0 {
            let env = moreau_envelope(&spec, &cfg, r).unwrap();
            assert!(env >= 0.0);
            assert!(env <= spec.beta_hat(r) + 1e-12);
            r += 0.11;
        }
    }

    #[test]
    fn check_potential_reports_clean_rows_for_the_quartic() {
        let spec = PotentialSpec::Quartic;
        let cfg = YosidaConfig::with_eps(0.1);
        let rows = check_potential(&spec, &cfg, (-5.0, 5.0), 2001).unwrap();
        assert_eq!(rows.len(), 7);
        for row in &rows {
            assert!(
                row.worst_violation <= 1e-9,
                "{} violated by {}",
                row.property,
                row.worst_violation
            );
        }
    }

    #[test]
    fn growth_constant_of_the_quartic_matches_the_calculus_maximum() {
        // max |r|³/(r⁴/4 + 1) is attained at r⁴ = 12 with value 12^(3/4)/4.
        let c = PotentialSpec::Quartic.growth_constant();
        let exact = 12.0_f64.powf(0.75) / 4.0;
        assert!((c - exact).abs() < 1e-3, "c = {c}, exact = {exact}");
    }

    #[test]
    fn nonlinearities_are_clamped_with_recorded_bounds() {
        let nl = NonlinearitySpec::default();
        assert_eq!(nl.h_at(-2.0), 0.0);
        assert_eq!(nl.h_at(1.0), 1.0);
        assert!((nl.h_at(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(nl.k_at(-0.5), 0.0);
        assert_eq!(nl.k_at(0.25), 0.25);
        assert_eq!(nl.k_at(3.0), 1.0);
        assert_eq!(nl.h_sup(), 1.0);
        assert_eq!(nl.h_lipschitz(), 0.5);
        assert_eq!(nl.k_sup(), 1.0);
        assert_eq!(nl.k_lipschitz(), 1.0);
    }
}
