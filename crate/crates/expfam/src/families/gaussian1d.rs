//! Full 1-d Gaussian N(m, σ²) with both parameters unknown.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::family::{Family, DOMAIN_MARGIN};
use crate::param::{MeanParam, NaturalParam};
use crate::rng::standard_normal;

/// T(x) = (x, x²); Θ = ℝ × (−∞, 0) and M = {(u, v) : u² < v}.
///
/// A(θ) = θ₁²/(−4θ₂) − ½ log(−θ₂) and A*(μ) = −½ log(μ₂ − μ₁²), up to
/// constants. The mean map is ∇A(θ) = (m, m² + σ²) with m = −θ₁/(2θ₂) and
/// σ² = −1/(2θ₂).
#[derive(Debug, Clone)]
pub struct FullGaussian1d;

impl FullGaussian1d {
    /// (m, σ²) for a natural parameter.
    fn moments(theta: &NaturalParam) -> (f64, f64) {
        let t = theta.as_slice();
        let var = -1.0 / (2.0 * t[1]);
        let mean = t[0] * var;
        (mean, var)
    }
}

impl Family for FullGaussian1d {
    fn name(&self) -> String {
        "full-gaussian-1d".into()
    }

    fn dim(&self) -> usize {
        2
    }

    fn log_partition(&self, theta: &NaturalParam) -> f64 {
        let t = theta.as_slice();
        t[0] * t[0] / (-4.0 * t[1]) - 0.5 * (-t[1]).ln()
    }

    fn entropy(&self, mu: &MeanParam) -> f64 {
        let m = mu.as_slice();
        -0.5 * (m[1] - m[0] * m[0]).ln()
    }

    fn to_mean(&self, theta: &NaturalParam) -> MeanParam {
        let (mean, var) = Self::moments(theta);
        MeanParam::new(vec![mean, mean * mean + var])
    }

    fn to_natural(&self, mu: &MeanParam) -> NaturalParam {
        let m = mu.as_slice();
        let var = m[1] - m[0] * m[0];
        NaturalParam::new(vec![m[0] / var, -1.0 / (2.0 * var)])
    }

    fn fisher_inverse_at(&self, mu: &MeanParam) -> DMatrix<f64> {
        let m = mu.as_slice();
        let v = m[1] - m[0] * m[0];
        let v2 = v * v;
        DMatrix::from_row_slice(
            2,
            2,
            &[
                1.0 / v + 2.0 * m[0] * m[0] / v2,
                -m[0] / v2,
                -m[0] / v2,
                0.5 / v2,
            ],
        )
    }

    fn sample_suffstat(&self, theta: &NaturalParam, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let (mean, var) = Self::moments(theta);
        let x = mean + var.sqrt() * standard_normal(rng);
        vec![x, x * x]
    }

    fn contains_natural(&self, coords: &[f64]) -> bool {
        coords.len() == 2
            && coords.iter().all(|x| x.is_finite())
            && coords[1] <= -DOMAIN_MARGIN
    }

    fn contains_mean(&self, coords: &[f64]) -> bool {
        coords.len() == 2
            && coords.iter().all(|x| x.is_finite())
            && coords[1] - coords[0] * coords[0] >= DOMAIN_MARGIN
    }

    fn random_interior_mean(&self, rng: &mut ChaCha8Rng) -> MeanParam {
        let m = rng.gen::<f64>() * 4.0 - 2.0;
        let v = 0.1 + rng.gen::<f64>() * 4.0;
        MeanParam::new(vec![m, m * m + v])
    }

    fn default_mean_star(&self) -> MeanParam {
        // The standard normal: m = 0, σ² = 1.
        MeanParam::new(vec![0.0, 1.0])
    }
}
