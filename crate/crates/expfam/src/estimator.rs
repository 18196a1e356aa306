//! MLE, conjugate MAP, the conjugate prior, and the stochastic-mirror-descent
//! recursion whose final iterate reproduces the MAP exactly.
//!
//! MAP and SMD are implemented independently — the closed weighted average on
//! one side, the step-by-step recursion on the other — precisely so their
//! equality is a test of the identity rather than a tautology.

use nalgebra::DVector;

use crate::family::{bregman_primal, Family};
use crate::param::{Estimate, MeanParam, NaturalParam};
use crate::{Error, Result};

/// Conjugate-prior hyperparameters: the pseudo-count n₀ and the prior mean μ₀.
/// With n₀ = 0 the MAP reduces to the MLE.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorHyper {
    pub n0: f64,
    pub mu0: MeanParam,
}

impl PriorHyper {
    pub fn new(n0: f64, mu0: MeanParam) -> Result<Self> {
        if !(n0 >= 0.0 && n0.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "pseudo-count n0 must be nonnegative, got {n0}"
            )));
        }
        Ok(Self { n0, mu0 })
    }
}

/// A dataset reduced to its sufficient statistics T₁, …, Tₙ.
#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub suffstats: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(suffstats: Vec<Vec<f64>>) -> Self {
        Self { suffstats }
    }

    pub fn len(&self) -> usize {
        self.suffstats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.suffstats.is_empty()
    }

    /// Draws n observations of T(X) under θ*.
    pub fn sample(
        fam: &dyn Family,
        theta_star: &NaturalParam,
        n: usize,
        rng: &mut rand_chacha::ChaCha8Rng,
    ) -> Self {
        Self::new((0..n).map(|_| fam.sample_suffstat(theta_star, rng)).collect())
    }

    fn sum(&self, dim: usize) -> DVector<f64> {
        let mut acc = DVector::zeros(dim);
        for t in &self.suffstats {
            for (a, v) in acc.iter_mut().zip(t) {
                *a += *v;
            }
        }
        acc
    }
}

/// Maximum-likelihood estimate: the arithmetic mean of sufficient statistics
/// (moment matching). A mean that violates the M-membership predicate — a
/// zero category count, a rank-deficient covariance — comes back as a
/// boundary estimate, which divergence evaluation maps to +∞.
pub fn mle(fam: &dyn Family, data: &Dataset) -> Result<Estimate> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mean = data.sum(fam.dim()) / data.len() as f64;
    let mu = MeanParam(mean);
    if fam.contains_mean(mu.as_slice()) {
        Ok(Estimate::Interior(mu))
    } else {
        Ok(Estimate::Boundary(mu))
    }
}

/// Conjugate maximum a posteriori: (n₀ μ₀ + Σᵢ Tᵢ) / (n₀ + n).
///
/// Always interior when n₀ > 0 and μ₀ ∈ M, since M is convex and the data
/// terms lie in its closure.
pub fn map(fam: &dyn Family, data: &Dataset, prior: &PriorHyper) -> Result<MeanParam> {
    if prior.n0 == 0.0 {
        return match mle(fam, data)? {
            Estimate::Interior(mu) | Estimate::Boundary(mu) => Ok(mu),
        };
    }
    if prior.mu0.dim() != fam.dim() {
        return Err(Error::DimensionMismatch {
            expected: fam.dim(),
            got: prior.mu0.dim(),
        });
    }
    let num = prior.n0 * prior.mu0.coords() + data.sum(fam.dim());
    Ok(MeanParam(num / (prior.n0 + data.len() as f64)))
}

/// Log density of the conjugate prior, up to its normalizing constant:
/// log p(θ) = −n₀ B_A(θ; θ₀) with θ₀ = ∇A*(μ₀). Maximized exactly at θ₀.
pub fn conjugate_prior_log_density(
    fam: &dyn Family,
    theta: &NaturalParam,
    prior: &PriorHyper,
) -> Result<f64> {
    if prior.n0 <= 0.0 {
        return Err(Error::InvalidArgument(
            "conjugate prior density needs n0 > 0".into(),
        ));
    }
    if !fam.contains_mean(prior.mu0.as_slice()) {
        return Err(Error::OutsideMeanDomain);
    }
    let theta0 = fam.to_natural(&prior.mu0);
    Ok(-prior.n0 * bregman_primal(fam, theta, &theta0)?)
}

/// A stochastic-mirror-descent path in mean coordinates.
#[derive(Debug, Clone)]
pub struct SmdTrajectory {
    /// μ₀, …, μₙ with μ₀ = prior mean.
    pub iterates: Vec<MeanParam>,
    /// γₖ = 1/(n₀ + k) for k = 1, …, n.
    pub step_sizes: Vec<f64>,
}

impl SmdTrajectory {
    pub fn final_iterate(&self) -> &MeanParam {
        self.iterates.last().expect("trajectory holds at least μ0")
    }
}

fn check_smd_inputs(fam: &dyn Family, prior: &PriorHyper) -> Result<()> {
    if !(prior.n0 > 0.0) {
        return Err(Error::InvalidArgument(
            "stochastic mirror descent needs n0 > 0 so that γ₁ < 1".into(),
        ));
    }
    if !fam.contains_mean(prior.mu0.as_slice()) {
        return Err(Error::OutsideMeanDomain);
    }
    Ok(())
}

/// Runs SMD on the negative log-likelihood in dual coordinates:
/// μₖ = μₖ₋₁ − γₖ (μₖ₋₁ − Tₖ), γₖ = 1/(n₀ + k), started at μ₀.
///
/// The final iterate equals the closed-form MAP; step sizes are evaluated
/// directly as 1/(n₀ + k), never accumulated, so the equality holds to
/// floating-point rounding.
pub fn smd_run(fam: &dyn Family, data: &Dataset, prior: &PriorHyper) -> Result<SmdTrajectory> {
    check_smd_inputs(fam, prior)?;
    let mut iterates = Vec::with_capacity(data.len() + 1);
    let mut step_sizes = Vec::with_capacity(data.len());
    let mut current = prior.mu0.coords().clone();
    iterates.push(MeanParam(current.clone()));
    for (k, t) in data.suffstats.iter().enumerate() {
        let gamma = 1.0 / (prior.n0 + (k + 1) as f64);
        let t = DVector::from_column_slice(t);
        current = &current - gamma * (&current - t);
        if !fam.contains_mean(current.as_slice()) {
            return Err(Error::IterateLeftDomain { step: k + 1 });
        }
        step_sizes.push(gamma);
        iterates.push(MeanParam(current.clone()));
    }
    Ok(SmdTrajectory { iterates, step_sizes })
}

/// The same recursion expressed through the mirror map: keeps the natural
/// parameter θₖ, forms the stochastic gradient gₖ(θₖ₋₁) = ∇A(θₖ₋₁) − Tₖ
/// explicitly, steps in dual space and maps back with ∇A*.
///
/// Returns θ₀, …, θₙ; the images ∇A(θₖ) match [`smd_run`] up to the rounding
/// of the two mirror-map applications per step.
pub fn smd_run_primal(
    fam: &dyn Family,
    data: &Dataset,
    prior: &PriorHyper,
) -> Result<Vec<NaturalParam>> {
    check_smd_inputs(fam, prior)?;
    let mut path = Vec::with_capacity(data.len() + 1);
    let mut theta = fam.to_natural(&prior.mu0);
    path.push(theta.clone());
    for (k, t) in data.suffstats.iter().enumerate() {
        let gamma = 1.0 / (prior.n0 + (k + 1) as f64);
        let t = DVector::from_column_slice(t);
        let grad = fam.to_mean(&theta).0 - t;
        let next = fam.to_mean(&theta).0 - gamma * grad;
        if !fam.contains_mean(next.as_slice()) {
            return Err(Error::IterateLeftDomain { step: k + 1 });
        }
        theta = fam.to_natural(&MeanParam(next));
        path.push(theta.clone());
    }
    Ok(path)
}
