//! The quadratic reference family A(θ) = ½‖θ‖².

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::family::Family;
use crate::param::{MeanParam, NaturalParam};
use crate::rng::standard_normal;
use crate::{Error, Result};

/// Gaussian with known identity covariance: A(θ) = A*(μ) = ½‖·‖², both mirror
/// maps are the identity, and both Bregman divergences are ½‖·‖₂².
#[derive(Debug, Clone)]
pub struct Quadratic {
    dim: usize,
}

impl Quadratic {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Self { dim })
    }
}

impl Family for Quadratic {
    fn name(&self) -> String {
        if self.dim == 1 {
            "quadratic".into()
        } else {
            format!("quadratic:{}", self.dim)
        }
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn log_partition(&self, theta: &NaturalParam) -> f64 {
        0.5 * theta.coords().norm_squared()
    }

    fn entropy(&self, mu: &MeanParam) -> f64 {
        0.5 * mu.coords().norm_squared()
    }

    fn to_mean(&self, theta: &NaturalParam) -> MeanParam {
        MeanParam(theta.coords().clone())
    }

    fn to_natural(&self, mu: &MeanParam) -> NaturalParam {
        NaturalParam(mu.coords().clone())
    }

    fn fisher_inverse_at(&self, _mu: &MeanParam) -> DMatrix<f64> {
        DMatrix::identity(self.dim, self.dim)
    }

    fn sample_suffstat(&self, theta: &NaturalParam, rng: &mut ChaCha8Rng) -> Vec<f64> {
        // T = X ~ N(θ, I).
        theta
            .as_slice()
            .iter()
            .map(|t| t + standard_normal(rng))
            .collect()
    }

    fn contains_natural(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim && coords.iter().all(|x| x.is_finite())
    }

    fn contains_mean(&self, coords: &[f64]) -> bool {
        self.contains_natural(coords)
    }

    fn mle_finite_risk_from(&self) -> Option<usize> {
        // E[B] = d/(2n), finite for every n ≥ 1.
        Some(1)
    }

    fn random_interior_mean(&self, rng: &mut ChaCha8Rng) -> MeanParam {
        MeanParam::new((0..self.dim).map(|_| rng.gen::<f64>() * 6.0 - 3.0).collect())
    }

    fn default_mean_star(&self) -> MeanParam {
        MeanParam(nalgebra::DVector::zeros(self.dim))
    }
}
