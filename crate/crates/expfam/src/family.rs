//! The family contract and family-agnostic divergence operations.

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;

use crate::param::{MeanParam, NaturalParam};
use crate::{Error, Result};

/// Strict-interior margin for domain membership, in family-native coordinates.
/// Evaluating at or past the boundary is a rejected-input error, not a NaN.
pub const DOMAIN_MARGIN: f64 = 1e-12;

/// An exponential family in minimal representation, described by its convex
/// log-partition function A on the open set Θ, its entropy A* (the convex
/// conjugate) on the open set M, the mirror maps ∇A and ∇A* between the two,
/// and an exact sampler for the sufficient statistic T(X).
///
/// Constants in A and A* are dropped throughout; Bregman divergences are
/// invariant to affine additions, which the test suite checks explicitly.
pub trait Family: Send + Sync {
    /// Stable identifier, also used by the command-line interface.
    fn name(&self) -> String;

    /// Dimension d of the parameter vectors.
    fn dim(&self) -> usize;

    /// Log-partition A(θ), up to an additive constant.
    fn log_partition(&self, theta: &NaturalParam) -> f64;

    /// Entropy A*(μ) (convex conjugate of A), up to an additive constant.
    fn entropy(&self, mu: &MeanParam) -> f64;

    /// Mirror map ∇A: Θ → M.
    fn to_mean(&self, theta: &NaturalParam) -> MeanParam;

    /// Inverse mirror map ∇A*: M → Θ.
    fn to_natural(&self, mu: &MeanParam) -> NaturalParam;

    /// Hessian of the entropy ∇²A*(μ), the inverse Fisher information at
    /// ∇A*(μ); symmetric positive definite on M.
    fn fisher_inverse_at(&self, mu: &MeanParam) -> DMatrix<f64>;

    /// One independent draw of T(X) with X ~ p_θ, so that E[T(X)] = ∇A(θ).
    fn sample_suffstat(&self, theta: &NaturalParam, rng: &mut ChaCha8Rng) -> Vec<f64>;

    /// Strict-interior membership test for Θ (with [`DOMAIN_MARGIN`]).
    fn contains_natural(&self, coords: &[f64]) -> bool;

    /// Strict-interior membership test for M (with [`DOMAIN_MARGIN`]).
    fn contains_mean(&self, coords: &[f64]) -> bool;

    /// A*(t) extended to the closure of M: +∞ where the conjugate diverges.
    ///
    /// Used by the optimality-gap probe, where a batch average of sufficient
    /// statistics may land exactly on the boundary. Families whose conjugate
    /// stays finite there (categorical) override this.
    fn entropy_on_closure(&self, t: &[f64]) -> f64 {
        if self.contains_mean(t) {
            self.entropy(&MeanParam::from_slice(t))
        } else {
            f64::INFINITY
        }
    }

    /// Smallest sample size for which the expected Bregman risk of the MLE is
    /// finite, when a closed-form analysis certifies one. `None` means no
    /// certificate; risk estimation then relies on per-trial outcomes alone.
    fn mle_finite_risk_from(&self) -> Option<usize> {
        None
    }

    /// A random point well inside M, for randomized sweeps and property
    /// checks.
    fn random_interior_mean(&self, rng: &mut ChaCha8Rng) -> MeanParam;

    /// The conventional unit/reference point of the family, used as the
    /// default μ* by the command-line interface.
    fn default_mean_star(&self) -> MeanParam;
}

fn check_dim(fam: &dyn Family, len: usize) -> Result<()> {
    if len != fam.dim() {
        return Err(Error::DimensionMismatch {
            expected: fam.dim(),
            got: len,
        });
    }
    Ok(())
}

fn check_natural(fam: &dyn Family, theta: &NaturalParam) -> Result<()> {
    check_dim(fam, theta.dim())?;
    if !fam.contains_natural(theta.as_slice()) {
        return Err(Error::OutsideNaturalDomain);
    }
    Ok(())
}

fn check_mean(fam: &dyn Family, mu: &MeanParam) -> Result<()> {
    check_dim(fam, mu.dim())?;
    if !fam.contains_mean(mu.as_slice()) {
        return Err(Error::OutsideMeanDomain);
    }
    Ok(())
}

/// Bregman divergence of the log-partition function,
/// B_A(θ; θ₀) = A(θ) − A(θ₀) − ⟨∇A(θ₀), θ − θ₀⟩.
///
/// Nonnegative, zero iff θ = θ₀.
pub fn bregman_primal(fam: &dyn Family, theta: &NaturalParam, theta0: &NaturalParam) -> Result<f64> {
    check_natural(fam, theta)?;
    check_natural(fam, theta0)?;
    let grad = fam.to_mean(theta0);
    let lin = grad.coords().dot(&(theta.coords() - theta0.coords()));
    Ok(fam.log_partition(theta) - fam.log_partition(theta0) - lin)
}

/// Bregman divergence of the entropy,
/// B_{A*}(μ*; μ) = A*(μ*) − A*(μ) − ⟨∇A*(μ), μ* − μ⟩.
pub fn bregman_dual(fam: &dyn Family, mu_star: &MeanParam, mu: &MeanParam) -> Result<f64> {
    check_mean(fam, mu_star)?;
    check_mean(fam, mu)?;
    let grad = fam.to_natural(mu);
    let lin = grad.coords().dot(&(mu_star.coords() - mu.coords()));
    Ok(fam.entropy(mu_star) - fam.entropy(mu) - lin)
}

/// KL divergence KL(p_{θ*} ‖ p_θ), equal to B_A(θ; θ*) and to
/// B_{A*}(∇A(θ*); ∇A(θ)); the argument swap is deliberate.
pub fn kl(fam: &dyn Family, theta_star: &NaturalParam, theta: &NaturalParam) -> Result<f64> {
    bregman_primal(fam, theta, theta_star)
}

/// Symmetrized Bregman divergence
/// S_{A*}(μ₁, μ₂) = B_{A*}(μ₁; μ₂) + B_{A*}(μ₂; μ₁) = ⟨∇A*(μ₁) − ∇A*(μ₂), μ₁ − μ₂⟩.
///
/// Evaluated through the inner-product form, which is exact and cheaper than
/// two entropy evaluations.
pub fn symmetrized_bregman(fam: &dyn Family, mu1: &MeanParam, mu2: &MeanParam) -> Result<f64> {
    check_mean(fam, mu1)?;
    check_mean(fam, mu2)?;
    let dtheta = fam.to_natural(mu1).coords() - fam.to_natural(mu2).coords();
    Ok(dtheta.dot(&(mu1.coords() - mu2.coords())))
}
