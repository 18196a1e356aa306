//! Shared helpers for the integration suites.

use expfam::families;
use expfam::family::Family;
use expfam::param::{MeanParam, NaturalParam};
use rand_chacha::ChaCha8Rng;

/// Family names exercised by the cross-family suites.
#[allow(dead_code)]
pub const ALL_FAMILIES: [&str; 6] = [
    "quadratic:2",
    "gaussian-variance",
    "exponential",
    "full-gaussian-1d",
    "categorical:3",
    "gaussian-cov:2",
];

pub fn family(name: &str) -> Box<dyn Family> {
    families::from_name(name).expect("test family name")
}

pub fn random_mean(fam: &dyn Family, rng: &mut ChaCha8Rng) -> MeanParam {
    let mu = fam.random_interior_mean(rng);
    assert!(fam.contains_mean(mu.as_slice()), "generated point outside M");
    mu
}

#[allow(dead_code)]
pub fn random_natural(fam: &dyn Family, rng: &mut ChaCha8Rng) -> NaturalParam {
    fam.to_natural(&random_mean(fam, rng))
}
