//! Categorical distribution in minimal representation.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::family::{Family, DOMAIN_MARGIN};
use crate::param::{MeanParam, NaturalParam};
use crate::{Error, Result};

/// k categories with category k pinned as reference (θ_k ≡ 0), so the
/// statistic T (the one-hot encoding of the first d = k − 1 categories) is
/// minimal. A(θ) = log(1 + Σⱼ exp θⱼ); M is the open simplex interior.
#[derive(Debug, Clone)]
pub struct Categorical {
    categories: usize,
}

impl Categorical {
    pub fn new(categories: usize) -> Result<Self> {
        if categories < 2 {
            return Err(Error::InvalidArgument(
                "categorical needs at least 2 categories".into(),
            ));
        }
        Ok(Self { categories })
    }

    /// Natural parameter for a full probability vector (length k).
    pub fn natural_from_probabilities(&self, probs: &[f64]) -> Result<NaturalParam> {
        if probs.len() != self.categories {
            return Err(Error::DimensionMismatch {
                expected: self.categories,
                got: probs.len(),
            });
        }
        let p_ref = probs[self.categories - 1];
        if probs.iter().any(|p| *p <= 0.0) {
            return Err(Error::InvalidArgument(
                "probabilities must be strictly positive".into(),
            ));
        }
        Ok(NaturalParam::new(
            probs[..self.categories - 1]
                .iter()
                .map(|p| (p / p_ref).ln())
                .collect(),
        ))
    }

    /// Probabilities of the first d categories; the reference probability is
    /// 1 minus their sum.
    fn probabilities(&self, theta: &NaturalParam) -> Vec<f64> {
        let t = theta.as_slice();
        let m = t.iter().cloned().fold(0.0f64, f64::max);
        let z = (-m).exp() + t.iter().map(|x| (x - m).exp()).sum::<f64>();
        t.iter().map(|x| (x - m).exp() / z).collect()
    }
}

impl Family for Categorical {
    fn name(&self) -> String {
        format!("categorical:{}", self.categories)
    }

    fn dim(&self) -> usize {
        self.categories - 1
    }

    fn log_partition(&self, theta: &NaturalParam) -> f64 {
        let t = theta.as_slice();
        let m = t.iter().cloned().fold(0.0f64, f64::max);
        m + ((-m).exp() + t.iter().map(|x| (x - m).exp()).sum::<f64>()).ln()
    }

    fn entropy(&self, mu: &MeanParam) -> f64 {
        let m = mu.as_slice();
        let p_ref = 1.0 - m.iter().sum::<f64>();
        m.iter().map(|p| p * p.ln()).sum::<f64>() + p_ref * p_ref.ln()
    }

    fn to_mean(&self, theta: &NaturalParam) -> MeanParam {
        MeanParam::new(self.probabilities(theta))
    }

    fn to_natural(&self, mu: &MeanParam) -> NaturalParam {
        let m = mu.as_slice();
        let p_ref = 1.0 - m.iter().sum::<f64>();
        NaturalParam::new(m.iter().map(|p| (p / p_ref).ln()).collect())
    }

    fn fisher_inverse_at(&self, mu: &MeanParam) -> DMatrix<f64> {
        let m = mu.as_slice();
        let d = self.dim();
        let inv_ref = 1.0 / (1.0 - m.iter().sum::<f64>());
        let mut h = DMatrix::from_element(d, d, inv_ref);
        for i in 0..d {
            h[(i, i)] += 1.0 / m[i];
        }
        h
    }

    fn sample_suffstat(&self, theta: &NaturalParam, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let probs = self.probabilities(theta);
        let mut u: f64 = rng.gen();
        let mut one_hot = vec![0.0; self.dim()];
        for (j, p) in probs.iter().enumerate() {
            if u < *p {
                one_hot[j] = 1.0;
                break;
            }
            u -= p;
        }
        // Falling through leaves the all-zero vector: the reference category.
        one_hot
    }

    fn contains_natural(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim() && coords.iter().all(|x| x.is_finite())
    }

    fn contains_mean(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && coords.iter().all(|p| p.is_finite() && *p >= DOMAIN_MARGIN)
            && 1.0 - coords.iter().sum::<f64>() >= DOMAIN_MARGIN
    }

    fn entropy_on_closure(&self, t: &[f64]) -> f64 {
        // The conjugate stays finite on the closed simplex: 0·log 0 = 0.
        let xlogx = |p: f64| if p > 0.0 { p * p.ln() } else { 0.0 };
        let p_ref = 1.0 - t.iter().sum::<f64>();
        t.iter().map(|p| xlogx(*p)).sum::<f64>() + xlogx(p_ref)
    }

    fn random_interior_mean(&self, rng: &mut ChaCha8Rng) -> MeanParam {
        let k = self.categories;
        let raw: Vec<f64> = (0..k).map(|_| 0.05 + rng.gen::<f64>()).collect();
        let total: f64 = raw.iter().sum();
        MeanParam::new(raw[..k - 1].iter().map(|x| x / total).collect())
    }

    fn default_mean_star(&self) -> MeanParam {
        MeanParam::new(vec![1.0 / self.categories as f64; self.dim()])
    }
}
