//! Local quadratic-regime suites: the certificate inequality on random pairs,
//! the inequality chain behind its proof, the ω*-crossing localization, and a
//! finite-difference self-concordance spot check.
//!
//! The chain's intermediate links carry the standard self-concordance
//! constant, which −α·log entropies only meet for α ≥ 1 (scaling a barrier by
//! c < 1 inflates the constant by 1/√c). The full chain is therefore asserted
//! on α ∈ {1, 3}; the ½-scaled entropies (Gaussian variance, full Gaussian)
//! get the endpoint inequality, which holds with a wide margin.

mod common;

use common::{family, random_mean};
use expfam::concordance::{
    omega, omega_star, omega_star_crossing, quadratic_regime_check, LocalMetric,
    QUADRATIC_REGIME_RADIUS,
};
use expfam::family::{bregman_dual, Family};
use expfam::param::MeanParam;
use expfam::rng::stream;
use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A second point at local-norm distance < radius from the anchor.
fn point_within(
    fam: &dyn Family,
    anchor: &MeanParam,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> (MeanParam, f64) {
    let metric = LocalMetric::at(fam, anchor).unwrap();
    loop {
        let dir = DVector::from_fn(fam.dim(), |_, _| rng.gen::<f64>() * 2.0 - 1.0);
        let norm = (&metric.matrix * &dir).dot(&dir).sqrt();
        if norm < 1e-9 {
            continue;
        }
        let t = rng.gen::<f64>() * radius;
        let mu = MeanParam(anchor.coords() + dir * (t / norm));
        if fam.contains_mean(mu.as_slice()) {
            return (mu, t);
        }
    }
}

#[test]
fn certificate_holds_on_random_pairs_within_the_radius() {
    for name in ["full-gaussian-1d", "gaussian-variance", "exponential", "gamma:3"] {
        let fam = family(name);
        let mut rng = stream(301, 0);
        for _ in 0..10_000 {
            let anchor = random_mean(fam.as_ref(), &mut rng);
            let (mu, _) = point_within(fam.as_ref(), &anchor, QUADRATIC_REGIME_RADIUS, &mut rng);
            let check = quadratic_regime_check(fam.as_ref(), &anchor, &mu).unwrap();
            assert!(check.applicable, "{name}: pair generated outside the radius");
            assert!(
                check.holds,
                "{name}: B = {} exceeds ‖·‖² = {}",
                check.lhs, check.rhs
            );
        }
    }
}

#[test]
fn proof_chain_holds_link_by_link_for_standard_barriers() {
    // B ≤ ω*(‖μ*−μ‖_μ) ≤ ω*(t/(1−t)) ≤ t² for t = ‖μ*−μ‖_{μ*} < 0.21.
    // α = 1 attains the first link with equality on one side, hence the
    // rounding allowance.
    for name in ["exponential", "gamma:3"] {
        let fam = family(name);
        let mut rng = stream(302, 0);
        for _ in 0..10_000 {
            let anchor = random_mean(fam.as_ref(), &mut rng);
            let (mu, t) = point_within(fam.as_ref(), &anchor, QUADRATIC_REGIME_RADIUS, &mut rng);
            let b = bregman_dual(fam.as_ref(), &anchor, &mu).unwrap();
            let norm_at_mu = LocalMetric::at(fam.as_ref(), &mu).unwrap().norm_to(&anchor);
            assert!(norm_at_mu < 1.0, "{name}: conversion hypothesis");
            let w_local = omega_star(norm_at_mu).unwrap();
            let converted = t / (1.0 - t);
            let w_conv = omega_star(converted).unwrap();
            let slack = 1e-9 * (1.0 + b.abs());
            assert!(b <= w_local + slack, "{name}: B {b} vs ω*(‖·‖_μ) {w_local}");
            assert!(
                norm_at_mu <= converted + 1e-9,
                "{name}: ‖·‖_μ {norm_at_mu} vs t/(1−t) {converted}"
            );
            assert!(w_local <= w_conv + slack, "{name}: ω* monotone step");
            assert!(w_conv <= t * t + 1e-12, "{name}: ω*(t/(1−t)) {w_conv} vs t² {}", t * t);
        }
    }
}

#[test]
fn crossing_localized_by_bisection() {
    let root = omega_star_crossing();
    assert!((0.20..=0.22).contains(&root), "crossing at {root}");
    // The certificate radius sits strictly inside the crossing.
    assert!(QUADRATIC_REGIME_RADIUS < root);
    // ω and ω* sit on either side: ω(t) ≤ t²/2·… sanity at a point.
    assert!(omega(0.3).unwrap() < omega_star(0.3).unwrap());
}

#[test]
fn one_dimensional_self_concordance_spot_check() {
    // |g′′′| ≤ 2 g′′^{3/2} along the line, via central finite differences at
    // interior points; step scaled by the distance to the boundary. α = 1 is
    // the equality case, α = 3 strictly inside.
    for (name, expected_ratio) in [("exponential", 1.0), ("gamma:3", 1.0 / 3f64.sqrt())] {
        let fam = family(name);
        let mut rng = stream(303, 0);
        for _ in 0..2_000 {
            let mu = 0.2 + rng.gen::<f64>() * 5.0;
            let h = 1e-3 * mu;
            let g = |x: f64| fam.entropy(&MeanParam::new(vec![x]));
            let g2 = (g(mu + h) - 2.0 * g(mu) + g(mu - h)) / (h * h);
            let g3 = (g(mu + 2.0 * h) - 2.0 * g(mu + h) + 2.0 * g(mu - h) - g(mu - 2.0 * h))
                / (2.0 * h * h * h);
            assert!(g2 > 0.0);
            let ratio = g3.abs() / (2.0 * g2.powf(1.5));
            assert!(ratio <= 1.05, "{name}: |g′′′|/2g′′^1.5 = {ratio}");
            assert!(
                (ratio - expected_ratio).abs() < 0.05,
                "{name}: ratio {ratio} vs {expected_ratio}"
            );
        }
    }
}
