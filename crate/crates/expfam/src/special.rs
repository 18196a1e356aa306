//! Scalar special functions backing the closed-form risk expressions.
//!
//! Deterministic and table-free, so results are bit-reproducible across runs.

use crate::{Error, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// B_{2k}/(2k) for k = 1..8, the coefficients of the digamma asymptotic
/// series ψ(x) ≈ ln x − 1/(2x) − Σ B_{2k}/(2k x^{2k}).
const DIGAMMA_ASYMPTOTIC: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
    -3617.0 / 8160.0,
];

/// Digamma function ψ(x) for x > 0.
///
/// Shifts upward via ψ(x+1) = ψ(x) + 1/x until x ≥ 6, then applies the
/// 8-term asymptotic Bernoulli series; absolute error below 1e−12 on the
/// whole positive axis.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "digamma requires x > 0, got {x}"
        )));
    }
    let mut shift = 0.0;
    let mut y = x;
    while y < 6.0 {
        shift -= 1.0 / y;
        y += 1.0;
    }
    let mut acc = y.ln() - 0.5 / y;
    let inv2 = 1.0 / (y * y);
    let mut pow = inv2;
    for c in DIGAMMA_ASYMPTOTIC {
        acc -= c * pow;
        pow *= inv2;
    }
    Ok(acc + shift)
}

/// Multivariate digamma ψ_d(x) = Σ_{i=0}^{d−1} ψ(x − i/2), defined for
/// x > (d − 1)/2.
pub fn multivariate_digamma(d: usize, x: f64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if !(x > (d as f64 - 1.0) / 2.0) {
        return Err(Error::InvalidArgument(format!(
            "multivariate digamma requires x > (d-1)/2 = {}, got {x}",
            (d as f64 - 1.0) / 2.0
        )));
    }
    let mut acc = 0.0;
    for i in 0..d {
        acc += digamma(x - i as f64 / 2.0)?;
    }
    Ok(acc)
}

/// Controls the adaptive quadrature behind [`gen_exp_integral`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    /// Relative tolerance on the integral value; must lie in (0, 1e−4].
    pub rel_tol: f64,
    /// Maximum interval-bisection depth before giving up.
    pub max_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_depth: 48,
        }
    }
}

impl QuadratureConfig {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol <= 1e-4) {
            return Err(Error::InvalidArgument(format!(
                "quadrature tolerance must lie in (0, 1e-4], got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// Generalized exponential integral E_k(z) = ∫₁^∞ e^{−zt} t^{−k} dt for
/// k ≥ 0, z > 0, evaluated to the configured relative tolerance.
pub fn gen_exp_integral(k: f64, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gen_exp_integral requires k > 0, got {k}"
        )));
    }
    Ok((-z).exp() / z * scaled_integral(k, z, cfg)?)
}

/// e^z E_k(z), computed without the e^{−z} underflow; accepts k = 0
/// (E_0(z) = e^{−z}/z exactly).
pub fn gen_exp_integral_scaled(k: f64, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gen_exp_integral requires k >= 0, got {k}"
        )));
    }
    Ok(scaled_integral(k, z, cfg)? / z)
}

/// I(k, z) = ∫₀^∞ e^{−u} (1 + u/z)^{−k} du = z e^z E_k(z), the substitution
/// t = 1 + u/z applied to the defining integral. The integrand is smooth,
/// bounded by e^{−u}, and I ∈ (z/(z+k), 1].
fn scaled_integral(k: f64, z: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "gen_exp_integral requires z > 0, got {z}"
        )));
    }
    cfg.validate()?;
    if k == 0.0 {
        return Ok(1.0);
    }
    let f = |u: f64| (-u).exp() * (1.0 + u / z).powf(-k);
    // The value is at least z/(z+k); budget the absolute error against that
    // lower bound so the relative target holds however small the integral is.
    let scale = z / (z + k);
    // Truncation point: the tail beyond U is below e^{−U}.
    let upper = (scale * 0.1 * cfg.rel_tol).recip().ln() + 3.0;
    let mut quad = AdaptiveSimpson {
        f,
        max_depth: cfg.max_depth,
        value: 0.0,
        err: 0.0,
    };
    // A handful of coarse panels keeps the recursion shallow on [0, U].
    let panels = 8;
    let budget = 0.25 * cfg.rel_tol * scale / panels as f64;
    for i in 0..panels {
        let a = upper * i as f64 / panels as f64;
        let b = upper * (i + 1) as f64 / panels as f64;
        quad.integrate(a, b, budget);
    }
    let achieved = quad.err / quad.value.abs().max(f64::MIN_POSITIVE);
    if achieved > cfg.rel_tol {
        return Err(Error::QuadratureFailure {
            achieved,
            requested: cfg.rel_tol,
        });
    }
    Ok(quad.value)
}

struct AdaptiveSimpson<F: Fn(f64) -> f64> {
    f: F,
    max_depth: u32,
    value: f64,
    err: f64,
}

impl<F: Fn(f64) -> f64> AdaptiveSimpson<F> {
    fn integrate(&mut self, a: f64, b: f64, tol: f64) {
        let fa = (self.f)(a);
        let m = 0.5 * (a + b);
        let fm = (self.f)(m);
        let fb = (self.f)(b);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        self.refine(a, b, fa, fm, fb, whole, tol, self.max_depth);
    }

    #[allow(clippy::too_many_arguments)]
    fn refine(&mut self, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            // Richardson extrapolation; the residual feeds the error budget.
            self.value += left + right + delta / 15.0;
            self.err += delta.abs() / 15.0;
        } else {
            self.refine(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
            self.refine(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        }
    }
}
