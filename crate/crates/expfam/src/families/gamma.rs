//! Gamma sufficient statistic with known shape: the family behind the
//! Gaussian-variance (α = 1/2) and exponential (α = 1) examples.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::family::{Family, DOMAIN_MARGIN};
use crate::param::{MeanParam, NaturalParam};
use crate::rng::gamma;
use crate::{Error, Result};

/// T(X) ~ Γ(α, β) with known shape α and unknown rate β = −θ.
///
/// Θ = (−∞, 0), M = (0, ∞), A(θ) = −α log(−θ), A*(μ) = −α log μ (constants
/// dropped), μ = α/(−θ). Both Bregman divergences reduce to
/// α·φ(ratio) with φ(z) = z − 1 − log z.
#[derive(Debug, Clone)]
pub struct GammaKnownShape {
    alpha: f64,
    name: String,
}

impl GammaKnownShape {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma shape must be positive, got {alpha}"
            )));
        }
        Ok(Self {
            alpha,
            name: format!("gamma:{alpha}"),
        })
    }

    /// The variance of N(0, σ²): T(X) = X² ~ Γ(1/2, 1/(2σ²)).
    pub fn gaussian_variance() -> Self {
        Self {
            alpha: 0.5,
            name: "gaussian-variance".into(),
        }
    }

    /// Exponential observations: α = 1.
    pub fn exponential() -> Self {
        Self {
            alpha: 1.0,
            name: "exponential".into(),
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Family for GammaKnownShape {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn dim(&self) -> usize {
        1
    }

    fn log_partition(&self, theta: &NaturalParam) -> f64 {
        -self.alpha * (-theta.as_slice()[0]).ln()
    }

    fn entropy(&self, mu: &MeanParam) -> f64 {
        -self.alpha * mu.as_slice()[0].ln()
    }

    fn to_mean(&self, theta: &NaturalParam) -> MeanParam {
        MeanParam::new(vec![-self.alpha / theta.as_slice()[0]])
    }

    fn to_natural(&self, mu: &MeanParam) -> NaturalParam {
        NaturalParam::new(vec![-self.alpha / mu.as_slice()[0]])
    }

    fn fisher_inverse_at(&self, mu: &MeanParam) -> DMatrix<f64> {
        let m = mu.as_slice()[0];
        DMatrix::from_element(1, 1, self.alpha / (m * m))
    }

    fn sample_suffstat(&self, theta: &NaturalParam, rng: &mut ChaCha8Rng) -> Vec<f64> {
        vec![gamma(rng, self.alpha, -theta.as_slice()[0])]
    }

    fn contains_natural(&self, coords: &[f64]) -> bool {
        coords.len() == 1 && coords[0].is_finite() && coords[0] <= -DOMAIN_MARGIN
    }

    fn contains_mean(&self, coords: &[f64]) -> bool {
        coords.len() == 1 && coords[0].is_finite() && coords[0] >= DOMAIN_MARGIN
    }

    fn mle_finite_risk_from(&self) -> Option<usize> {
        // Expected Bregman risk of the MLE is infinite iff nα ≤ 1.
        Some((1.0 / self.alpha).floor() as usize + 1)
    }

    fn random_interior_mean(&self, rng: &mut ChaCha8Rng) -> MeanParam {
        MeanParam::new(vec![0.1 + rng.gen::<f64>() * 5.0])
    }

    fn default_mean_star(&self) -> MeanParam {
        MeanParam::new(vec![1.0])
    }
}
