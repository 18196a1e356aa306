//! Monte Carlo estimation of the expected Bregman risk and its bias–variance
//! decomposition.
//!
//! Trials are embarrassingly parallel. Work is split into fixed blocks of
//! trials; each block accumulates sequentially in trial order and blocks are
//! folded in index order, so the result is bit-identical for any number of
//! worker threads. Trial k always consumes random stream k.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::estimator::{map, mle, Dataset, PriorHyper};
use crate::family::{bregman_dual, Family};
use crate::param::{Estimate, MeanParam, NaturalParam};
use crate::rng::{stream, stream_index};
use crate::{Error, Result};

/// Two-sided 90% normal quantile.
pub const Z90: f64 = 1.644_853_626_951_472_2;

const TRIALS_PER_BLOCK: u64 = 1024;

/// Which estimator the risk is measured for.
#[derive(Debug, Clone)]
pub enum EstimatorKind {
    Mle,
    Map(PriorHyper),
}

impl EstimatorKind {
    /// MAP with n₀ = 0 degenerates to the MLE; the closed-form divergence
    /// certificates then apply to it as well.
    fn is_moment_matching(&self) -> bool {
        match self {
            EstimatorKind::Mle => true,
            EstimatorKind::Map(prior) => prior.n0 == 0.0,
        }
    }

    fn estimate(&self, fam: &dyn Family, data: &Dataset) -> Result<Estimate> {
        match self {
            EstimatorKind::Mle => mle(fam, data),
            EstimatorKind::Map(prior) => {
                let mu = map(fam, data, prior)?;
                if fam.contains_mean(mu.as_slice()) {
                    Ok(Estimate::Interior(mu))
                } else {
                    Ok(Estimate::Boundary(mu))
                }
            }
        }
    }
}

/// Monte Carlo estimate of an expected divergence.
///
/// `infinite_fraction` is the fraction of trials whose divergence is +∞
/// (boundary estimates), or 1 when a closed-form certificate marks the
/// expectation itself as divergent for this estimator and sample size — the
/// sampled values are then finite but their expectation is not, and the mean
/// reports +∞. The finite-trial sub-mean and its standard error are always
/// kept for diagnostics; `ci90` is (+∞, +∞) when the estimate diverges.
#[derive(Debug, Clone, PartialEq)]
pub struct RiskEstimate {
    /// Estimated expectation; +∞ in any divergent regime.
    pub mean: f64,
    /// Mean over the finite trials only (NaN when every trial diverged).
    pub finite_mean: f64,
    /// Standard error over the finite trials.
    pub std_err: f64,
    pub trials: u64,
    pub infinite_fraction: f64,
    /// Normal-approximation 90% confidence interval on the finite sub-mean.
    pub ci90: (f64, f64),
}

impl RiskEstimate {
    pub fn divergent(&self) -> bool {
        self.mean.is_infinite()
    }
}

#[derive(Clone, Default)]
pub(crate) struct MomentAcc {
    pub(crate) finite: u64,
    pub(crate) infinite: u64,
    sum: f64,
    sum_sq: f64,
}

impl MomentAcc {
    pub(crate) fn push(&mut self, value: f64) {
        if value.is_finite() {
            self.finite += 1;
            self.sum += value;
            self.sum_sq += value * value;
        } else {
            self.infinite += 1;
        }
    }

    pub(crate) fn merge(&mut self, other: &MomentAcc) {
        self.finite += other.finite;
        self.infinite += other.infinite;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
    }

    /// Mean over the finite values; +∞ once any value was infinite.
    pub(crate) fn poisoned_mean(&self) -> f64 {
        if self.infinite > 0 {
            f64::INFINITY
        } else {
            self.mean()
        }
    }

    pub(crate) fn mean(&self) -> f64 {
        self.sum / self.finite as f64
    }

    pub(crate) fn std_err(&self) -> f64 {
        if self.finite < 2 {
            return f64::NAN;
        }
        let n = self.finite as f64;
        let var = (self.sum_sq - self.sum * self.sum / n).max(0.0) / (n - 1.0);
        (var / n).sqrt()
    }
}

/// Runs `eval` for every trial index, accumulating per block; blocks are
/// computed in parallel and folded in index order.
pub(crate) fn block_sweep<A, F>(trials: u64, init: impl Fn() -> A + Sync, eval: F) -> Vec<A>
where
    A: Send,
    F: Fn(&mut A, u64) + Sync,
{
    let blocks = trials.div_ceil(TRIALS_PER_BLOCK) as usize;
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b as u64 * TRIALS_PER_BLOCK;
            let hi = (lo + TRIALS_PER_BLOCK).min(trials);
            let mut acc = init();
            for t in lo..hi {
                eval(&mut acc, t);
            }
            acc
        })
        .collect()
}

fn validate_run(fam: &dyn Family, theta_star: &NaturalParam, n: usize, trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("sample size must be positive".into()));
    }
    if !fam.contains_natural(theta_star.as_slice()) {
        return Err(Error::OutsideNaturalDomain);
    }
    Ok(())
}

/// Expected Bregman risk E[B_{A*}(μ*; μ̂ₙ)] over `trials` independent
/// datasets of size `n`, with one random stream per trial derived from
/// `seed`. `stream_hi` keeps streams disjoint across grid points.
fn estimate_risk_stream(
    fam: &dyn Family,
    theta_star: &NaturalParam,
    estimator: &EstimatorKind,
    n: usize,
    trials: u64,
    seed: u64,
    stream_hi: u32,
) -> Result<RiskEstimate> {
    validate_run(fam, theta_star, n, trials)?;
    let mu_star = fam.to_mean(theta_star);
    let blocks = block_sweep(
        trials,
        MomentAcc::default,
        |acc: &mut MomentAcc, t| {
            let mut rng = stream(seed, stream_index(stream_hi, t as u32));
            let data = Dataset::sample(fam, theta_star, n, &mut rng);
            let est = estimator
                .estimate(fam, &data)
                .expect("non-empty dataset and validated prior");
            let value = match est.interior() {
                Some(mu) => bregman_dual(fam, &mu_star, mu).unwrap_or(f64::INFINITY),
                None => f64::INFINITY,
            };
            acc.push(value);
        },
    );
    let mut acc = MomentAcc::default();
    for b in &blocks {
        acc.merge(b);
    }

    let certified_divergent = estimator.is_moment_matching()
        && fam.mle_finite_risk_from().is_some_and(|n_min| n < n_min);
    let observed_fraction = acc.infinite as f64 / trials as f64;
    let divergent = certified_divergent || acc.infinite > 0;
    let finite_mean = if acc.finite > 0 { acc.mean() } else { f64::NAN };
    let std_err = acc.std_err();
    Ok(RiskEstimate {
        mean: if divergent { f64::INFINITY } else { finite_mean },
        finite_mean,
        std_err,
        trials,
        infinite_fraction: if certified_divergent { 1.0 } else { observed_fraction },
        ci90: if divergent {
            (f64::INFINITY, f64::INFINITY)
        } else {
            (finite_mean - Z90 * std_err, finite_mean + Z90 * std_err)
        },
    })
}

/// See [`estimate_risk_stream`]; this is the single-configuration entry point.
pub fn estimate_risk(
    fam: &dyn Family,
    theta_star: &NaturalParam,
    estimator: &EstimatorKind,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<RiskEstimate> {
    estimate_risk_stream(fam, theta_star, estimator, n, trials, seed, 0)
}

/// One [`estimate_risk`] per grid point, sharing the base seed with disjoint
/// per-n streams.
pub fn risk_curve(
    fam: &dyn Family,
    theta_star: &NaturalParam,
    estimator: &EstimatorKind,
    n_grid: &[usize],
    trials: u64,
    seed: u64,
) -> Result<Vec<(usize, RiskEstimate)>> {
    if n_grid.is_empty() {
        return Err(Error::InvalidArgument("empty n grid".into()));
    }
    if n_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n grid must be strictly increasing".into()));
    }
    n_grid
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            estimate_risk_stream(fam, theta_star, estimator, n, trials, seed, i as u32)
                .map(|r| (n, r))
        })
        .collect()
}

/// The expected Bregman risk split at the primal mean θ̃ₙ = E[θ̂ₙ]:
/// total = bias + variance with bias = B_{A*}(μ*; μ̃ₙ) and
/// variance = E[B_{A*}(μ̃ₙ; μ̂ₙ)], μ̃ₙ = ∇A(θ̃ₙ).
///
/// θ̃ₙ is estimated from the same trials, which makes the empirical identity
/// hold to rounding; the standard errors still measure each term's MC noise.
#[derive(Debug, Clone)]
pub struct BiasVariance {
    /// E[B_{A*}(μ*; μ̂ₙ)]; +∞ when the decomposition is divergent.
    pub total: f64,
    pub bias: f64,
    pub variance: f64,
    /// MC estimate of θ̃ₙ; `None` when a boundary trial made the
    /// decomposition divergent.
    pub primal_mean: Option<NaturalParam>,
    pub dual_of_primal_mean: Option<MeanParam>,
    /// Per-coordinate standard error of the θ̃ₙ estimate.
    pub primal_mean_std_err: Vec<f64>,
    pub total_std_err: f64,
    pub variance_std_err: f64,
    pub trials: u64,
}

impl BiasVariance {
    pub fn divergent(&self) -> bool {
        self.primal_mean.is_none()
    }
}

/// Monte Carlo bias–variance decomposition at sample size `n`.
pub fn bias_variance_mc(
    fam: &dyn Family,
    theta_star: &NaturalParam,
    estimator: &EstimatorKind,
    n: usize,
    trials: u64,
    seed: u64,
) -> Result<BiasVariance> {
    validate_run(fam, theta_star, n, trials)?;
    let mu_star = fam.to_mean(theta_star);
    let d = fam.dim();

    struct Block {
        estimates: Vec<Option<MeanParam>>,
        theta_sum: DVector<f64>,
        theta_sum_sq: DVector<f64>,
    }
    let blocks = block_sweep(
        trials,
        || Block {
            estimates: Vec::new(),
            theta_sum: DVector::zeros(d),
            theta_sum_sq: DVector::zeros(d),
        },
        |acc: &mut Block, t| {
            let mut rng = stream(seed, stream_index(0, t as u32));
            let data = Dataset::sample(fam, theta_star, n, &mut rng);
            let est = estimator
                .estimate(fam, &data)
                .expect("non-empty dataset and validated prior");
            match est.interior() {
                Some(mu) => {
                    let theta = fam.to_natural(mu);
                    acc.theta_sum += theta.coords();
                    acc.theta_sum_sq += theta.coords().component_mul(theta.coords());
                    acc.estimates.push(Some(mu.clone()));
                }
                None => acc.estimates.push(None),
            }
        },
    );

    let mut theta_sum = DVector::zeros(d);
    let mut theta_sum_sq = DVector::zeros(d);
    let mut estimates = Vec::with_capacity(trials as usize);
    for b in blocks {
        theta_sum += &b.theta_sum;
        theta_sum_sq += &b.theta_sum_sq;
        estimates.extend(b.estimates);
    }
    if estimates.iter().any(Option::is_none) {
        return Ok(BiasVariance {
            total: f64::INFINITY,
            bias: f64::NAN,
            variance: f64::NAN,
            primal_mean: None,
            dual_of_primal_mean: None,
            primal_mean_std_err: vec![f64::NAN; d],
            total_std_err: f64::NAN,
            variance_std_err: f64::NAN,
            trials,
        });
    }

    let k = trials as f64;
    let theta_tilde = NaturalParam(theta_sum / k);
    let primal_mean_std_err: Vec<f64> = theta_tilde
        .as_slice()
        .iter()
        .zip(theta_sum_sq.iter())
        .map(|(mean, sq)| ((sq / k - mean * mean).max(0.0) / (k - 1.0).max(1.0)).sqrt())
        .collect();
    let mu_tilde = fam.to_mean(&theta_tilde);
    let bias = bregman_dual(fam, &mu_star, &mu_tilde)?;

    let mut total = MomentAcc::default();
    let mut variance = MomentAcc::default();
    for mu in estimates.iter().flatten() {
        total.push(bregman_dual(fam, &mu_star, mu)?);
        variance.push(bregman_dual(fam, &mu_tilde, mu)?);
    }
    Ok(BiasVariance {
        total: total.mean(),
        bias,
        variance: variance.mean(),
        primal_mean: Some(theta_tilde),
        dual_of_primal_mean: Some(mu_tilde),
        primal_mean_std_err,
        total_std_err: total.std_err(),
        variance_std_err: variance.std_err(),
        trials,
    })
}

/// MAP risk landscape over prior hyperparameters for a one-dimensional
/// family: `risks[i][j]` is the MC risk at (n0_grid[i], mu0_grid[j]).
///
/// All cells share the same `trials` datasets (common random numbers), so
/// comparisons across cells — in particular the per-column argmin — are far
/// more stable than with independent draws.
#[derive(Debug, Clone)]
pub struct Landscape {
    pub n: usize,
    pub n0_grid: Vec<f64>,
    pub mu0_grid: Vec<f64>,
    pub risks: Vec<Vec<f64>>,
}

#[allow(clippy::too_many_arguments)]
pub fn map_risk_landscape(
    fam: &dyn Family,
    theta_star: &NaturalParam,
    n0_grid: &[f64],
    mu0_grid: &[f64],
    n: usize,
    trials: u64,
    seed: u64,
    stream_hi: u32,
) -> Result<Landscape> {
    validate_run(fam, theta_star, n, trials)?;
    if fam.dim() != 1 {
        return Err(Error::InvalidArgument(
            "the prior landscape is defined for one-dimensional families".into(),
        ));
    }
    if n0_grid.is_empty() || mu0_grid.is_empty() {
        return Err(Error::InvalidArgument("empty hyperparameter grid".into()));
    }
    let mu_star = fam.to_mean(theta_star);
    let cells = n0_grid.len() * mu0_grid.len();

    let blocks = block_sweep(
        trials,
        || vec![0.0f64; cells],
        |acc: &mut Vec<f64>, t| {
            let mut rng = stream(seed, stream_index(stream_hi, t as u32));
            let data = Dataset::sample(fam, theta_star, n, &mut rng);
            let t_sum: f64 = data.suffstats.iter().map(|t| t[0]).sum();
            let mut cell = 0;
            for &n0 in n0_grid {
                for &mu0 in mu0_grid {
                    let map_mu = MeanParam::new(vec![(n0 * mu0 + t_sum) / (n0 + n as f64)]);
                    acc[cell] += bregman_dual(fam, &mu_star, &map_mu)
                        .expect("MAP of a convex one-dimensional family is interior");
                    cell += 1;
                }
            }
        },
    );
    let mut sums = vec![0.0f64; cells];
    for b in &blocks {
        for (s, v) in sums.iter_mut().zip(b) {
            *s += v;
        }
    }
    let risks = n0_grid
        .iter()
        .enumerate()
        .map(|(i, _)| {
            mu0_grid
                .iter()
                .enumerate()
                .map(|(j, _)| sums[i * mu0_grid.len() + j] / trials as f64)
                .collect()
        })
        .collect();
    Ok(Landscape {
        n,
        n0_grid: n0_grid.to_vec(),
        mu0_grid: mu0_grid.to_vec(),
        risks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{Categorical, GammaKnownShape, GaussianCovariance, Quadratic};

    fn pool(threads: usize) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
    }

    #[test]
    fn identical_for_any_worker_count() {
        let fam = GammaKnownShape::gaussian_variance();
        let theta = NaturalParam::new(vec![-0.5]);
        let run = || {
            estimate_risk(&fam, &theta, &EstimatorKind::Mle, 10, 5_000, 99).unwrap()
        };
        let serial = pool(1).install(run);
        let parallel = pool(8).install(run);
        assert_eq!(serial, parallel);
    }

    #[test]
    fn quadratic_mle_risk_matches_closed_form() {
        let fam = Quadratic::new(1).unwrap();
        let theta = NaturalParam::new(vec![0.3]);
        let est = estimate_risk(&fam, &theta, &EstimatorKind::Mle, 10, 100_000, 7).unwrap();
        assert_eq!(est.infinite_fraction, 0.0);
        assert!((est.mean - 0.05).abs() <= 3.0 * est.std_err, "{est:?}");
    }

    #[test]
    fn certified_divergent_regimes() {
        let fam = GammaKnownShape::gaussian_variance();
        let theta = NaturalParam::new(vec![-0.5]);
        for n in [1, 2] {
            let est = estimate_risk(&fam, &theta, &EstimatorKind::Mle, n, 2_000, 4).unwrap();
            assert_eq!(est.mean, f64::INFINITY);
            assert_eq!(est.infinite_fraction, 1.0);
            assert_eq!(est.ci90, (f64::INFINITY, f64::INFINITY));
            assert!(est.finite_mean.is_finite(), "sub-mean stays diagnostic");
        }
        let est = estimate_risk(&fam, &theta, &EstimatorKind::Mle, 3, 2_000, 4).unwrap();
        assert!(est.mean.is_finite());

        let cov = GaussianCovariance::new(2).unwrap();
        let theta = cov.to_natural(&MeanParam::new(vec![1.0, 0.0, 1.0]));
        for n in [1, 2, 3] {
            let est = estimate_risk(&cov, &theta, &EstimatorKind::Mle, n, 500, 4).unwrap();
            assert_eq!(est.mean, f64::INFINITY);
            assert_eq!(est.infinite_fraction, 1.0);
        }
    }

    #[test]
    fn categorical_zero_counts_poison_the_mean() {
        let fam = Categorical::new(3).unwrap();
        let theta = fam.natural_from_probabilities(&[0.05, 0.475, 0.475]).unwrap();
        let est = estimate_risk(&fam, &theta, &EstimatorKind::Mle, 10, 10_000, 21).unwrap();
        assert_eq!(est.mean, f64::INFINITY);
        assert!(est.infinite_fraction >= 0.3, "{}", est.infinite_fraction);
        assert!(est.infinite_fraction < 1.0);
        assert!(est.finite_mean.is_finite());
    }

    #[test]
    fn quadratic_map_risk_matches_closed_form() {
        // d = 1, n0 = 2, ‖μ* − μ0‖² = 1, n = 5: (5 + 4)/(2·49).
        let fam = Quadratic::new(1).unwrap();
        let theta = NaturalParam::new(vec![0.5]);
        let prior = PriorHyper::new(2.0, MeanParam::new(vec![1.5])).unwrap();
        let est =
            estimate_risk(&fam, &theta, &EstimatorKind::Map(prior), 5, 100_000, 19).unwrap();
        let exact = crate::bounds::quadratic_map_exact(1, 5, 2.0, 1.0).unwrap();
        assert!(
            (est.mean - exact).abs() <= 3.0 * est.std_err,
            "MC {} vs exact {exact}",
            est.mean
        );
    }

    #[test]
    fn map_risk_is_finite_where_mle_diverges() {
        let fam = GammaKnownShape::gaussian_variance();
        let theta = NaturalParam::new(vec![-0.5]);
        let prior = PriorHyper::new(1.0, MeanParam::new(vec![1.0])).unwrap();
        let est =
            estimate_risk(&fam, &theta, &EstimatorKind::Map(prior), 1, 5_000, 11).unwrap();
        assert!(est.mean.is_finite());
        assert_eq!(est.infinite_fraction, 0.0);
    }

    #[test]
    fn doubling_trials_shrinks_std_err() {
        let fam = GammaKnownShape::gaussian_variance();
        let theta = NaturalParam::new(vec![-0.5]);
        let a = estimate_risk(&fam, &theta, &EstimatorKind::Mle, 20, 40_000, 5).unwrap();
        let b = estimate_risk(&fam, &theta, &EstimatorKind::Mle, 20, 80_000, 5).unwrap();
        let shrink = b.std_err / a.std_err;
        assert!(
            (shrink - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.2 * std::f64::consts::FRAC_1_SQRT_2,
            "shrink {shrink}"
        );
    }

    #[test]
    fn bias_variance_identity_and_unbiased_quadratic() {
        let fam = Quadratic::new(2).unwrap();
        let theta = NaturalParam::new(vec![0.5, -1.0]);
        let bv = bias_variance_mc(&fam, &theta, &EstimatorKind::Mle, 8, 50_000, 3).unwrap();
        assert!(!bv.divergent());
        // Quadratic duality makes the MLE primal-unbiased: bias ≈ 0.
        assert!(bv.bias < 2.0 * bv.total_std_err, "bias {}", bv.bias);
        let defect = (bv.total - bv.bias - bv.variance).abs();
        assert!(defect <= 1e-12, "defect {defect}");
    }

    #[test]
    fn bias_variance_divergent_on_boundary_trials() {
        let fam = Categorical::new(3).unwrap();
        let theta = fam.natural_from_probabilities(&[0.05, 0.475, 0.475]).unwrap();
        let bv = bias_variance_mc(&fam, &theta, &EstimatorKind::Mle, 10, 2_000, 3).unwrap();
        assert!(bv.divergent());
        assert_eq!(bv.total, f64::INFINITY);
    }

    #[test]
    fn risk_curve_validates_grid() {
        let fam = GammaKnownShape::gaussian_variance();
        let theta = NaturalParam::new(vec![-0.5]);
        assert!(risk_curve(&fam, &theta, &EstimatorKind::Mle, &[], 10, 0).is_err());
        assert!(risk_curve(&fam, &theta, &EstimatorKind::Mle, &[5, 5], 10, 0).is_err());
        assert!(risk_curve(&fam, &theta, &EstimatorKind::Mle, &[5, 3], 10, 0).is_err());
        let curve = risk_curve(&fam, &theta, &EstimatorKind::Mle, &[3, 10], 2_000, 0).unwrap();
        assert_eq!(curve.len(), 2);
        assert!(curve[0].1.finite_mean > curve[1].1.finite_mean);
    }

    #[test]
    fn landscape_shares_draws_across_cells() {
        let fam = GammaKnownShape::gaussian_variance();
        let theta = NaturalParam::new(vec![-0.5]);
        let l = map_risk_landscape(
            &fam,
            &theta,
            &[0.5, 1.0],
            &[0.5, 1.0, 2.0],
            5,
            2_000,
            13,
            0,
        )
        .unwrap();
        assert_eq!(l.risks.len(), 2);
        assert_eq!(l.risks[0].len(), 3);
        assert!(l.risks.iter().flatten().all(|r| r.is_finite()));
        let serial = pool(1).install(|| {
            map_risk_landscape(&fam, &theta, &[0.5, 1.0], &[0.5, 1.0, 2.0], 5, 2_000, 13, 0)
                .unwrap()
                .risks
        });
        assert_eq!(serial, l.risks);
    }
}
