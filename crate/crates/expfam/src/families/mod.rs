//! Concrete exponential families used throughout the laboratory.

mod categorical;
mod covariance;
mod gamma;
mod gaussian1d;
mod quadratic;

pub use categorical::Categorical;
pub use covariance::{pack_index, GaussianCovariance};
pub use gamma::GammaKnownShape;
pub use gaussian1d::FullGaussian1d;
pub use quadratic::Quadratic;

use crate::family::Family;
use crate::{Error, Result};

/// Families addressable by a stable name:
/// `quadratic[:<d>]`, `gaussian-variance`, `exponential`, `gamma:<alpha>`,
/// `full-gaussian-1d`, `categorical:<k>`, `gaussian-cov:<d>`.
pub fn from_name(name: &str) -> Result<Box<dyn Family>> {
    let (head, arg) = match name.split_once(':') {
        Some((h, a)) => (h, Some(a)),
        None => (name, None),
    };
    let unknown = || Error::UnknownFamily(name.to_string());
    let parse_usize = |a: Option<&str>| -> Result<usize> {
        a.ok_or_else(unknown)?.parse().map_err(|_| unknown())
    };
    match head {
        "quadratic" => {
            let d = match arg {
                None => 1,
                Some(a) => a.parse().map_err(|_| unknown())?,
            };
            Ok(Box::new(Quadratic::new(d)?))
        }
        "gaussian-variance" if arg.is_none() => Ok(Box::new(GammaKnownShape::gaussian_variance())),
        "exponential" if arg.is_none() => Ok(Box::new(GammaKnownShape::exponential())),
        "gamma" => {
            let alpha: f64 = arg.ok_or_else(unknown)?.parse().map_err(|_| unknown())?;
            Ok(Box::new(GammaKnownShape::new(alpha)?))
        }
        "full-gaussian-1d" if arg.is_none() => Ok(Box::new(FullGaussian1d)),
        "categorical" => Ok(Box::new(Categorical::new(parse_usize(arg)?)?)),
        "gaussian-cov" => Ok(Box::new(GaussianCovariance::new(parse_usize(arg)?)?)),
        _ => Err(unknown()),
    }
}

/// The named constructors of the catalog, with one-line summaries.
pub fn catalog() -> Vec<(&'static str, &'static str)> {
    vec![
        ("quadratic[:<d>]", "A(θ) = ½‖θ‖²; Gaussian with known identity covariance"),
        ("gaussian-variance", "gamma sufficient statistic with shape α = 1/2 (variance of N(0, σ²))"),
        ("exponential", "gamma sufficient statistic with shape α = 1"),
        ("gamma:<alpha>", "gamma sufficient statistic with known shape α"),
        ("full-gaussian-1d", "N(m, σ²) with both parameters unknown, T = (x, x²)"),
        ("categorical:<k>", "k categories, minimal one-hot statistic (d = k−1)"),
        ("gaussian-cov:<d>", "zero-mean Gaussian covariance, T = XXᵀ, p = d(d+1)/2"),
    ]
}

/// The five base families at reference parameters, used by whole-catalog
/// checks such as the SMD-vs-MAP gap sweep.
pub fn standard_five() -> Vec<Box<dyn Family>> {
    vec![
        Box::new(Quadratic::new(2).unwrap()),
        Box::new(GammaKnownShape::gaussian_variance()),
        Box::new(FullGaussian1d),
        Box::new(Categorical::new(3).unwrap()),
        Box::new(GaussianCovariance::new(2).unwrap()),
    ]
}
