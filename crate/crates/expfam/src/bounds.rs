//! Closed-form risk bounds, exact risks, and asymptotes, as pure scalar
//! functions for curve overlays and sandwich tests.
//!
//! +∞ is an explicit return value, not an error: infinite expected risk is a
//! result in its own right and the plots need it. The MAP bounds are derived
//! through the symmetrized Bregman divergence, so they carry roughly a factor
//! 2 of slack over the plain divergence; this is documented rather than
//! silently halved.

use crate::special::{digamma, gen_exp_integral_scaled, multivariate_digamma, QuadratureConfig};
use crate::{Error, Result};

/// Parameter bundle for the gamma-known-shape risk formulas. `ratio` is
/// μ₀/μ*; the prior weight a = n₀·ratio is recomputed on demand.
#[derive(Debug, Clone, Copy)]
pub struct GammaRiskParams {
    pub alpha: f64,
    pub n: usize,
    pub n0: f64,
    pub ratio: f64,
}

impl GammaRiskParams {
    /// a = n₀ μ₀ / μ*, the prior mass relative to the true parameter.
    pub fn a(&self) -> f64 {
        self.n0 * self.ratio
    }
}

fn positive(x: f64, what: &str) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::InvalidArgument(format!("{what} must be positive, got {x}")));
    }
    Ok(())
}

/// Upper bound on the expected Bregman risk of the gamma MLE:
/// +∞ when nα ≤ 1, else 1/(2n) + 1/(n(nα − 1)).
pub fn gamma_mle_bound(alpha: f64, n: usize) -> Result<f64> {
    positive(alpha, "alpha")?;
    let nf = n as f64;
    if nf * alpha <= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (2.0 * nf) + 1.0 / (nf * (nf * alpha - 1.0)))
}

/// Exact expected Bregman risk of the gamma MLE:
/// +∞ when nα ≤ 1, else α(1/(nα − 1) + ψ(nα) − log(nα)).
pub fn gamma_mle_exact(alpha: f64, n: usize) -> Result<f64> {
    positive(alpha, "alpha")?;
    let na = n as f64 * alpha;
    if na <= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(alpha * (1.0 / (na - 1.0) + digamma(na)? - na.ln()))
}

/// Lower bound 1/(n(nα − 1)) on the exact gamma MLE risk (finite regime).
pub fn gamma_mle_lower_bound(alpha: f64, n: usize) -> Result<f64> {
    positive(alpha, "alpha")?;
    let nf = n as f64;
    if nf * alpha <= 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(1.0 / (nf * (nf * alpha - 1.0)))
}

/// Upper bound on the expected symmetrized Bregman risk of the
/// Gaussian-variance MAP (α = 1/2), with prior weight n₀ and ratio μ₀/μ*:
///
/// - n = 0: the symmetrized divergence of (μ*, μ₀) itself,
/// - n = 1: 1/(2(n₀+1)) + b₁,
/// - n ≥ 2: 1/(n₀·ratio + n − 2) + bₙ,
///
/// with bₙ = (1 + 1/n₀ − ratio)² / (2(ratio + (n−2)₊/n₀)(1 + n/n₀)). The
/// bias term bₙ vanishes at ratio = 1 + 1/n₀.
pub fn gaussian_variance_map_bound(n: usize, n0: f64, ratio: f64) -> Result<f64> {
    positive(n0, "n0")?;
    positive(ratio, "ratio")?;
    let a = n0 * ratio;
    if n == 0 {
        // S(μ*, μ₀) = α(1/ratio + ratio − 2) at α = 1/2.
        return Ok(0.5 * (ratio + 1.0 / ratio - 2.0));
    }
    let nf = n as f64;
    let b_n = {
        let num = (1.0 + 1.0 / n0 - ratio).powi(2);
        let den = 2.0 * (ratio + (nf - 2.0).max(0.0) / n0) * (1.0 + nf / n0);
        num / den
    };
    if n == 1 {
        Ok(1.0 / (2.0 * (n0 + 1.0)) + b_n)
    } else {
        Ok(1.0 / (a + nf - 2.0) + b_n)
    }
}

/// Upper bound on the expected symmetrized Bregman risk of the gamma MAP.
///
/// For nα ≥ 1: 1/(n₀+n) + α(ratio − 1/(αn₀) − 1)² / ((1 + n/n₀)(ratio + (n − 1/α)/n₀));
/// the second term vanishes at ratio = 1 + 1/(αn₀). For nα < 1 the looser
/// expression (n₀+n)/(a + n + 1/α)·(1 + 1/(aα)) − 1 + (a − n₀)/(n₀+n) is
/// returned instead.
pub fn gamma_map_bound(alpha: f64, n: usize, n0: f64, ratio: f64) -> Result<f64> {
    positive(alpha, "alpha")?;
    positive(n0, "n0")?;
    positive(ratio, "ratio")?;
    let nf = n as f64;
    let a = n0 * ratio;
    if nf * alpha >= 1.0 {
        let num = alpha * (ratio - 1.0 / (alpha * n0) - 1.0).powi(2);
        let den = (1.0 + nf / n0) * (ratio + (nf - 1.0 / alpha) / n0);
        Ok(1.0 / (n0 + nf) + num / den)
    } else {
        Ok((n0 + nf) / (a + nf + 1.0 / alpha) * (1.0 + 1.0 / (a * alpha)) - 1.0
            + (a - n0) / (n0 + nf))
    }
}

/// Closed-form sandwich for the expected natural-parameter ratio of the MAP:
/// (n₀+n)/(a+n) ≤ E[μ*/μ̂ₙ] ≤ (n₀+n)/(a + (n − 1/α)₊) with a = n₀·ratio.
pub fn expected_inverse_sandwich(alpha: f64, n: usize, n0: f64, ratio: f64) -> Result<(f64, f64)> {
    positive(alpha, "alpha")?;
    positive(n0, "n0")?;
    positive(ratio, "ratio")?;
    let nf = n as f64;
    let a = n0 * ratio;
    let lo = (n0 + nf) / (a + nf);
    let hi = (n0 + nf) / (a + (nf - 1.0 / alpha).max(0.0));
    Ok((lo, hi))
}

/// Exact expectation E[μ*/μ̂ₙ] = (n₀+n)·α·e^{aα}·E_{nα}(aα) for the gamma
/// MAP, evaluated through the generalized exponential integral. Lies inside
/// [`expected_inverse_sandwich`].
pub fn expected_inverse_exact(
    alpha: f64,
    n: usize,
    n0: f64,
    ratio: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    positive(alpha, "alpha")?;
    positive(n0, "n0")?;
    positive(ratio, "ratio")?;
    let a = n0 * ratio;
    let scaled = gen_exp_integral_scaled(n as f64 * alpha, a * alpha, cfg)?;
    Ok((n0 + n as f64) * alpha * scaled)
}

/// Upper bound on the expected Bregman risk of the covariance MLE in
/// dimension d: +∞ when n ≤ d + 1, else p/(2n) + p(d+2)/(n(n−d−1)) with
/// p = d(d+1)/2.
pub fn covariance_mle_bound(d: usize, n: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if n <= d + 1 {
        return Ok(f64::INFINITY);
    }
    let (df, nf) = (d as f64, n as f64);
    let p = df * (df + 1.0) / 2.0;
    Ok(p / (2.0 * nf) + p * (df + 2.0) / (nf * (nf - df - 1.0)))
}

/// Exact expected Bregman risk of the covariance MLE:
/// +∞ when n ≤ d + 1, else p/(n−d−1) + ½(ψ_d(n/2) − d·log(n/2)).
pub fn covariance_mle_exact(d: usize, n: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if n <= d + 1 {
        return Ok(f64::INFINITY);
    }
    let (df, nf) = (d as f64, n as f64);
    let p = df * (df + 1.0) / 2.0;
    Ok(p / (nf - df - 1.0)
        + 0.5 * (multivariate_digamma(d, nf / 2.0)? - df * (nf / 2.0).ln()))
}

/// Exact expected risk of the quadratic-family MAP with identity covariance:
/// (n·d + n₀²·‖μ* − μ₀‖²) / (2(n + n₀)²). Reduces to the d/(2n) MLE risk at
/// n₀ = 0.
pub fn quadratic_map_exact(d: usize, n: usize, n0: f64, bias_sq: f64) -> Result<f64> {
    if !(n0 >= 0.0) || !(bias_sq >= 0.0) {
        return Err(Error::InvalidArgument(
            "n0 and bias_sq must be nonnegative".into(),
        ));
    }
    let total = n as f64 + n0;
    if total <= 0.0 {
        return Err(Error::InvalidArgument("n + n0 must be positive".into()));
    }
    Ok((n as f64 * d as f64 + n0 * n0 * bias_sq) / (2.0 * total * total))
}

/// First-order asymptote d/(2n) of the expected risk, shared by MLE and MAP.
pub fn asymptote(d: usize, n: usize) -> f64 {
    d as f64 / (2.0 * n as f64)
}
