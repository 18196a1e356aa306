//! Local quadratic-regime certificate for self-concordant entropies.
//!
//! Inside a Fisher-metric ball of radius 0.21 around μ*, the Bregman
//! divergence is bounded by the squared local norm; the radius is where
//! ω*(t/(1−t)) crosses t².

use nalgebra::DMatrix;

use crate::family::{bregman_dual, Family};
use crate::param::MeanParam;
use crate::{Error, Result};

/// Radius of the certified local quadratic regime.
pub const QUADRATIC_REGIME_RADIUS: f64 = 0.21;

/// Distance function ω(t) = t − log(1 + t) for t ≥ 0.
pub fn omega(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("omega requires t ≥ 0, got {t}")));
    }
    Ok(t - t.ln_1p())
}

/// Dual distance function ω*(t) = −t − log(1 − t) for t ∈ [0, 1).
pub fn omega_star(t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "omega_star requires t ∈ [0, 1), got {t}"
        )));
    }
    Ok(-t - (-t).ln_1p())
}

/// The root of ω*(t/(1−t)) = t², located by bisection; ≈ 0.2134.
pub fn omega_star_crossing() -> f64 {
    let g = |t: f64| omega_star(t / (1.0 - t)).unwrap() - t * t;
    let (mut lo, mut hi) = (0.1, 0.4);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The local norm ‖·‖_F at an anchor point, induced by the inverse Fisher
/// information F = ∇²A*(μ*).
#[derive(Debug, Clone)]
pub struct LocalMetric {
    pub anchor: MeanParam,
    pub matrix: DMatrix<f64>,
}

impl LocalMetric {
    pub fn at(fam: &dyn Family, anchor: &MeanParam) -> Result<Self> {
        if !fam.contains_mean(anchor.as_slice()) {
            return Err(Error::OutsideMeanDomain);
        }
        Ok(Self {
            anchor: anchor.clone(),
            matrix: fam.fisher_inverse_at(anchor),
        })
    }

    /// ‖μ − anchor‖_F.
    pub fn norm_to(&self, mu: &MeanParam) -> f64 {
        let delta = mu.coords() - self.anchor.coords();
        (&self.matrix * &delta).dot(&delta).sqrt()
    }
}

/// Outcome of the local quadratic-regime test at a pair (μ*, μ).
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeCheck {
    /// Whether the hypothesis ‖μ* − μ‖_F < 0.21 holds; nothing is claimed
    /// outside it.
    pub applicable: bool,
    /// Whether B_{A*}(μ*; μ) ≤ ‖μ* − μ‖²_F.
    pub holds: bool,
    pub lhs: f64,
    pub rhs: f64,
}

/// Tests B_{A*}(μ*; μ) ≤ ‖μ* − μ‖²_F under the hypothesis
/// ‖μ* − μ‖_F < 0.21, with F = ∇²A*(μ*).
///
/// Meaningful for families whose entropy is self-concordant (the full
/// Gaussian, gamma with known shape); the categorical entropy carries an
/// uncertified constant and is excluded from the certified suite.
pub fn quadratic_regime_check(
    fam: &dyn Family,
    mu_star: &MeanParam,
    mu: &MeanParam,
) -> Result<RegimeCheck> {
    let metric = LocalMetric::at(fam, mu_star)?;
    if !fam.contains_mean(mu.as_slice()) {
        return Err(Error::OutsideMeanDomain);
    }
    let norm = metric.norm_to(mu);
    let lhs = bregman_dual(fam, mu_star, mu)?;
    let rhs = norm * norm;
    Ok(RegimeCheck {
        applicable: norm < QUADRATIC_REGIME_RADIUS,
        holds: lhs <= rhs,
        lhs,
        rhs,
    })
}

/// Estimator whose quadratic-regime sample threshold is requested.
#[derive(Debug, Clone, Copy)]
pub enum ThresholdKind {
    Mle,
    Map { n0: f64, bias_norm: f64 },
}

/// Expectation-level sufficient sample size for the quadratic regime:
/// 25·d for the MLE and 25·d + 5·‖μ* − μ₀‖ − n₀ (floored at zero) for the
/// MAP. A heuristic on E‖μ* − μ̂‖_F, not a bound on the expected Bregman.
pub fn quadratic_regime_threshold(d: usize, kind: ThresholdKind) -> f64 {
    let base = 25.0 * d as f64;
    match kind {
        ThresholdKind::Mle => base,
        ThresholdKind::Map { n0, bias_norm } => (base + 5.0 * bias_norm - n0).max(0.0),
    }
}
