//! Estimator invariants: the MAP/SMD equality, dual unbiasedness, the
//! posterior grid check, relative smoothness, and the update-variance bridge
//! to the bias–variance decomposition.

mod common;

use common::{family, random_mean, random_natural, ALL_FAMILIES};
use expfam::assumptions::expected_update_variance;
use expfam::estimator::{
    conjugate_prior_log_density, map, mle, smd_run, smd_run_primal, Dataset, PriorHyper,
};
use expfam::family::bregman_primal;
use expfam::param::{Estimate, MeanParam, NaturalParam};
use expfam::risk::{bias_variance_mc, EstimatorKind};
use expfam::rng::stream;

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

#[test]
fn smd_final_iterate_equals_map_on_every_family() {
    for name in ALL_FAMILIES {
        let fam = family(name);
        let mut rng = stream(201, 0);
        let mut worst: f64 = 0.0;
        for run in 0..100 {
            let theta_star = random_natural(fam.as_ref(), &mut rng);
            let mu0 = random_mean(fam.as_ref(), &mut rng);
            let n0 = 0.25 + 4.0 * ((run % 7) as f64) / 7.0;
            let prior = PriorHyper::new(n0, mu0).unwrap();
            let n = 1 + run % 50;
            let data = Dataset::sample(fam.as_ref(), &theta_star, n, &mut rng);

            let closed = map(fam.as_ref(), &data, &prior).unwrap();
            let traj = smd_run(fam.as_ref(), &data, &prior).unwrap();
            assert_eq!(traj.iterates.len(), n + 1);
            for (k, g) in traj.step_sizes.iter().enumerate() {
                assert_eq!(*g, 1.0 / (prior.n0 + (k + 1) as f64));
            }
            for (a, b) in traj.final_iterate().as_slice().iter().zip(closed.as_slice()) {
                worst = worst.max(rel_gap(*a, *b));
            }
        }
        assert!(worst <= 1e-12, "{name}: worst SMD/MAP gap {worst:.3e}");
    }
}

#[test]
fn primal_and_dual_smd_paths_agree() {
    for name in ALL_FAMILIES {
        let fam = family(name);
        let mut rng = stream(202, 0);
        let mut worst: f64 = 0.0;
        for run in 0..100 {
            let theta_star = random_natural(fam.as_ref(), &mut rng);
            let prior = PriorHyper::new(1.0 + (run % 3) as f64, random_mean(fam.as_ref(), &mut rng))
                .unwrap();
            let data = Dataset::sample(fam.as_ref(), &theta_star, 1 + run % 20, &mut rng);
            let dual = smd_run(fam.as_ref(), &data, &prior).unwrap();
            let primal = smd_run_primal(fam.as_ref(), &data, &prior).unwrap();
            assert_eq!(primal.len(), dual.iterates.len());
            for (th, mu) in primal.iter().zip(&dual.iterates) {
                let image = fam.to_mean(th);
                for (a, b) in image.as_slice().iter().zip(mu.as_slice()) {
                    worst = worst.max(rel_gap(*a, *b));
                }
            }
        }
        assert!(worst <= 1e-10, "{name}: primal/dual path gap {worst:.3e}");
    }
}

#[test]
fn stochastic_gradient_is_centered_at_the_optimum() {
    for name in ["gaussian-variance", "full-gaussian-1d", "quadratic:2"] {
        let fam = family(name);
        let mut rng = stream(203, 0);
        let mu_star = random_mean(fam.as_ref(), &mut rng);
        let theta_star = fam.to_natural(&mu_star);
        let trials = 100_000;
        let mut sums = vec![0.0; fam.dim()];
        let mut sumsq = vec![0.0; fam.dim()];
        for _ in 0..trials {
            // g(θ*) = ∇A(θ*) − T = μ* − T.
            let t = fam.sample_suffstat(&theta_star, &mut rng);
            for ((s, q), (m, v)) in sums
                .iter_mut()
                .zip(sumsq.iter_mut())
                .zip(mu_star.as_slice().iter().zip(&t))
            {
                let g = m - v;
                *s += g;
                *q += g * g;
            }
        }
        for (s, q) in sums.iter().zip(&sumsq) {
            let mean = s / trials as f64;
            let se = ((q / trials as f64 - mean * mean) / trials as f64).sqrt();
            assert!(mean.abs() <= 3.5 * se, "{name}: E[g(θ*)] = {mean} (se {se})");
        }
    }
}

#[test]
fn mle_unbiased_and_map_scaled_in_dual_coordinates() {
    let fam = family("gaussian-variance");
    let mu_star = MeanParam::new(vec![1.0]);
    let theta_star = fam.to_natural(&mu_star);
    let prior = PriorHyper::new(2.0, MeanParam::new(vec![3.0])).unwrap();
    let (n, trials) = (7usize, 100_000);

    let mut rng = stream(204, 0);
    let (mut mle_sum, mut mle_sq) = (0.0, 0.0);
    let (mut map_sum, mut map_sq) = (0.0, 0.0);
    for _ in 0..trials {
        let data = Dataset::sample(fam.as_ref(), &theta_star, n, &mut rng);
        let m = match mle(fam.as_ref(), &data).unwrap() {
            Estimate::Interior(mu) | Estimate::Boundary(mu) => mu.as_slice()[0],
        };
        mle_sum += m;
        mle_sq += m * m;
        let mp = map(fam.as_ref(), &data, &prior).unwrap().as_slice()[0];
        map_sum += mp;
        map_sq += mp * mp;
    }
    let t = trials as f64;
    let mle_mean = mle_sum / t;
    let mle_se = ((mle_sq / t - mle_mean * mle_mean) / t).sqrt();
    assert!(
        (mle_mean - 1.0).abs() <= 3.0 * mle_se,
        "MLE dual bias: {mle_mean} ± {mle_se}"
    );

    // E[μ̂_MAP] = (n₀μ₀ + nμ*)/(n₀ + n).
    let want = (2.0 * 3.0 + 7.0 * 1.0) / 9.0;
    let map_mean = map_sum / t;
    let map_se = ((map_sq / t - map_mean * map_mean) / t).sqrt();
    assert!(
        (map_mean - want).abs() <= 3.0 * map_se,
        "MAP dual mean: {map_mean} vs {want}"
    );
}

#[test]
fn posterior_grid_argmax_matches_closed_form_map() {
    // Σᵢ log p(Tᵢ | θ) + log p(θ) maximized over a fine natural-parameter
    // grid must land on the closed-form MAP.
    let fam = family("gaussian-variance");
    let theta_star = NaturalParam::new(vec![-0.5]);
    let prior = PriorHyper::new(1.5, MeanParam::new(vec![2.0])).unwrap();
    let mut rng = stream(205, 0);
    let data = Dataset::sample(fam.as_ref(), &theta_star, 6, &mut rng);

    let posterior = |theta: &NaturalParam| {
        let log_lik: f64 = data
            .suffstats
            .iter()
            .map(|t| theta.as_slice()[0] * t[0] - fam.log_partition(theta))
            .sum();
        log_lik + conjugate_prior_log_density(fam.as_ref(), theta, &prior).unwrap()
    };

    let mut best = f64::NEG_INFINITY;
    let mut best_theta = 0.0;
    let mut x = -8.0;
    while x < -1e-3 {
        let v = posterior(&NaturalParam::new(vec![x]));
        if v > best {
            best = v;
            best_theta = x;
        }
        x += 1e-3;
    }
    let closed = map(fam.as_ref(), &data, &prior).unwrap();
    let grid_mu = fam.to_mean(&NaturalParam::new(vec![best_theta]));
    assert!(
        (grid_mu.as_slice()[0] - closed.as_slice()[0]).abs() < 5e-3,
        "grid argmax μ {} vs MAP {}",
        grid_mu.as_slice()[0],
        closed.as_slice()[0]
    );
}

#[test]
fn population_objective_is_exactly_relative_smooth() {
    // f(θ) = A(θ) − ⟨μ*, θ⟩ has B_f = B_A identically: 1-smooth and
    // 1-strongly-convex relative to A.
    for name in ALL_FAMILIES {
        let fam = family(name);
        let mut rng = stream(206, 0);
        let mu_star = random_mean(fam.as_ref(), &mut rng);
        let f = |theta: &NaturalParam| fam.log_partition(theta) - mu_star.coords().dot(theta.coords());
        let grad_f = |theta: &NaturalParam| fam.to_mean(theta).0 - mu_star.coords();
        for _ in 0..500 {
            let th1 = random_natural(fam.as_ref(), &mut rng);
            let th2 = random_natural(fam.as_ref(), &mut rng);
            let bf = f(&th1) - f(&th2) - grad_f(&th2).dot(&(th1.coords() - th2.coords()));
            let ba = bregman_primal(fam.as_ref(), &th1, &th2).unwrap();
            assert!(rel_gap(bf, ba) < 1e-10, "{name}: B_f {bf} vs B_A {ba}");
        }
    }
}

#[test]
fn update_variance_times_n_dominates_the_variance_term() {
    // E[B(μ̃ₙ; μ̂ₙ)] ≤ n · E[S(μ̂ₙ, Eₙ[μ̂ₙ])] for the Gaussian-variance MAP.
    let fam = family("gaussian-variance");
    let theta_star = NaturalParam::new(vec![-0.5]);
    let prior = PriorHyper::new(1.0, MeanParam::new(vec![2.0])).unwrap();
    for n in [3usize, 10, 30] {
        let bv = bias_variance_mc(
            fam.as_ref(),
            &theta_star,
            &EstimatorKind::Map(prior.clone()),
            n,
            40_000,
            207,
        )
        .unwrap();
        let update = expected_update_variance(fam.as_ref(), &theta_star, &prior, n, 40_000, 208).unwrap();
        let bound = n as f64 * update;
        assert!(
            bv.variance <= bound + 4.0 * bv.variance_std_err,
            "n={n}: variance {} vs n·E[S] {bound}",
            bv.variance
        );
    }
}

#[test]
fn bias_decays_one_order_faster_than_variance() {
    // Fitted log-log slopes over n ∈ [20, 100] for the full-Gaussian MAP:
    // the variance term tracks 1/n while the bias term falls like 1/n².
    let fam = family("full-gaussian-1d");
    let theta_star = fam.to_natural(&MeanParam::new(vec![0.0, 1.0]));
    let prior = PriorHyper::new(1.0, MeanParam::new(vec![1.0, 2.0])).unwrap();
    let grid = [20usize, 28, 40, 57, 80, 100];
    let mut log_n = Vec::new();
    let mut log_bias = Vec::new();
    let mut log_var = Vec::new();
    for (i, &n) in grid.iter().enumerate() {
        let bv = bias_variance_mc(
            fam.as_ref(),
            &theta_star,
            &EstimatorKind::Map(prior.clone()),
            n,
            30_000,
            900 + i as u64,
        )
        .unwrap();
        assert!(bv.bias < bv.variance, "n={n}: bias {} vs variance {}", bv.bias, bv.variance);
        log_n.push((n as f64).ln());
        log_bias.push(bv.bias.ln());
        log_var.push(bv.variance.ln());
    }
    let slope = |ys: &[f64]| {
        let k = ys.len() as f64;
        let mx = log_n.iter().sum::<f64>() / k;
        let my = ys.iter().sum::<f64>() / k;
        let num: f64 = log_n.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = log_n.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    };
    let bias_slope = slope(&log_bias);
    let var_slope = slope(&log_var);
    assert!((bias_slope + 2.0).abs() < 0.5, "bias slope {bias_slope}");
    assert!((var_slope + 1.0).abs() < 0.3, "variance slope {var_slope}");
}

#[test]
fn categorical_boundary_estimates_flow_through_the_pipeline() {
    let fam = family("categorical:3");
    // A dataset that never shows category 1.
    let data = Dataset::new(vec![vec![0.0, 1.0], vec![0.0, 0.0], vec![0.0, 1.0]]);
    let est = mle(fam.as_ref(), &data).unwrap();
    assert!(est.is_boundary(), "zero category count must mark the boundary");
}
