//! Cross-checks the safeguarded-Newton resolvent and the analytic Moreau
//! envelope against the oracle stack in `common`: plain bisection for the
//! scalar inversion and golden-section minimization for the envelope.

mod common;

use common::{envelope_by_minimization, quartic_resolvent_bisect, yosida_oracle};
use thermofield::potential::{moreau_envelope, resolvent, yosida, PotentialSpec, YosidaConfig};
use thermofield::rng::Lcg64;

fn sample_points(count: usize, half_width: f64) -> Vec<f64> {
    let mut rng = Lcg64::new(314);
    (0..count).map(|_| half_width * rng.symmetric()).collect()
}

#[test]
fn newton_resolvent_matches_bisection_on_the_quartic() {
    for eps in [1.0, 0.1, 0.01, 1e-4] {
        let cfg = YosidaConfig::with_eps(eps);
        for r in sample_points(500, 5.0) {
            let newton = resolvent(&PotentialSpec::Quartic, &cfg, r).unwrap();
            let bisect = quartic_resolvent_bisect(eps, r);
            // Newton stops at residual 1e-12·max(1, |r|), and the slope of
            // s + εβ(s) is at least 1, so that residual bounds the root gap.
            assert!(
                (newton - bisect).abs() <= 1e-12 * r.abs().max(1.0),
                "eps = {eps}, r = {r}: {newton} vs {bisect}"
            );
        }
    }
}

#[test]
fn yosida_matches_the_oracle_on_every_preset() {
    for spec in [PotentialSpec::Quartic, PotentialSpec::Linear, PotentialSpec::Zero] {
        for eps in [1.0, 0.1, 0.01] {
            let cfg = YosidaConfig::with_eps(eps);
            for r in sample_points(300, 5.0) {
                let lib = yosida(&spec, &cfg, r).unwrap();
                let oracle = yosida_oracle(&spec, eps, r);
                // The quartic goes through two different root-finders whose
                // roots differ by the Newton residual 1e-12·max(1, |r|),
                // amplified by 1/eps in the (r - J)/eps division.
                let tol = 1e-12 * r.abs().max(1.0) / eps;
                assert!((lib - oracle).abs() <= tol, "{spec:?}, eps = {eps}, r = {r}");
            }
        }
    }
}

#[test]
fn envelope_matches_direct_minimization() {
    for spec in [PotentialSpec::Quartic, PotentialSpec::Linear] {
        for eps in [1.0, 0.1, 0.01] {
            let cfg = YosidaConfig::with_eps(eps);
            for r in sample_points(200, 4.0) {
                let lib = moreau_envelope(&spec, &cfg, r).unwrap();
                let oracle = envelope_by_minimization(&spec, eps, r);
                assert!(
                    (lib - oracle).abs() < 1e-10 * (1.0 + oracle.abs()),
                    "{spec:?}, eps = {eps}, r = {r}: {lib} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn envelope_converges_to_the_potential_as_eps_shrinks() {
    let spec = PotentialSpec::Quartic;
    for r in [-2.0, -0.5, 0.3, 1.7] {
        let mut last_gap = f64::INFINITY;
        for eps in [0.5, 0.1, 0.02, 0.004] {
            let cfg = YosidaConfig::with_eps(eps);
            let gap = spec.beta_hat(r) - moreau_envelope(&spec, &cfg, r).unwrap();
            assert!(gap >= -1e-12, "envelope exceeded the potential at r = {r}");
            assert!(gap < last_gap + 1e-12, "gap grew as eps shrank at r = {r}");
            last_gap = gap;
        }
        // Leading-order gap is eps·β(r)²/2; allow twice that.
        let expected = 0.004 * spec.beta(r) * spec.beta(r);
        assert!(
            last_gap < expected.max(1e-6),
            "gap {last_gap} at eps = 0.004, r = {r} exceeds {expected}"
        );
    }
}
