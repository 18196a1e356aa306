//! Seeded, splittable random streams and exact samplers.
//!
//! Every Monte Carlo entry point derives one counter-based stream per trial
//! via [`stream`], so trial-level parallelism cannot change results: trial k
//! always consumes the same stream no matter which worker runs it.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent stream `index` of the generator seeded with `seed`.
pub fn stream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Packs a coarse index (grid point, curve position) and a trial index into
/// one stream id, keeping streams disjoint across grid points.
pub fn stream_index(hi: u32, trial: u32) -> u64 {
    ((hi as u64) << 32) | trial as u64
}

/// One standard normal draw via the Box–Muller transform.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen();
    let u2: f64 = rng.gen();
    // 1 - u1 ∈ (0, 1] keeps the log finite.
    (-2.0 * (1.0 - u1).ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// One Γ(shape, 1) draw by Marsaglia–Tsang squeeze/rejection, valid for all
/// shape > 0 (shapes below 1 are boosted through shape + 1).
pub fn standard_gamma(rng: &mut ChaCha8Rng, shape: f64) -> f64 {
    assert!(shape > 0.0, "gamma shape must be positive");
    if shape < 1.0 {
        let u: f64 = rng.gen();
        return standard_gamma(rng, shape + 1.0) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let x = standard_normal(rng);
        let t = 1.0 + c * x;
        if t <= 0.0 {
            continue;
        }
        let v = t * t * t;
        let u: f64 = rng.gen();
        // Squeeze step accepts the bulk without a log.
        if u < 1.0 - 0.0331 * (x * x) * (x * x) {
            return d * v;
        }
        if u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}

/// One Γ(shape, rate) draw.
pub fn gamma(rng: &mut ChaCha8Rng, shape: f64, rate: f64) -> f64 {
    assert!(rate > 0.0, "gamma rate must be positive");
    standard_gamma(rng, shape) / rate
}
