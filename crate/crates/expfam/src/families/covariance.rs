//! Zero-mean Gaussian covariance estimation: T(X) = XXᵀ.

use nalgebra::{Cholesky, DMatrix, DVector};
use rand_chacha::ChaCha8Rng;

use crate::family::{Family, DOMAIN_MARGIN};
use crate::param::{MeanParam, NaturalParam};
use crate::rng::standard_normal;
use crate::{Error, Result};

/// X ~ N(0, Σ) in ℝᵈ with Σ unknown; the mean parameter is the covariance
/// matrix itself, stored as its p = d(d+1)/2 upper-triangle entries
/// (row-major, off-diagonals unscaled). The entropy is A*(μ) = −½ log det μ.
///
/// Natural coordinates use the pairing ⟨θ, T⟩ = Tr(Θ XXᵀ) with Θ = −½ Σ⁻¹,
/// which in packed form means the off-diagonal θ entries carry a factor 2.
/// det and inverses go through Cholesky; a failed factorization marks a
/// boundary point (rank-deficient estimate), not an error.
#[derive(Debug, Clone)]
pub struct GaussianCovariance {
    data_dim: usize,
}

/// Packed index of entry (i, j), i ≤ j, in row-major upper-triangle storage.
pub fn pack_index(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i <= j && j < d);
    // Row i starts after i rows of lengths d, d−1, …, d−i+1.
    i * (2 * d - i + 1) / 2 + (j - i)
}

fn pack(m: &DMatrix<f64>) -> Vec<f64> {
    let d = m.nrows();
    let mut out = Vec::with_capacity(d * (d + 1) / 2);
    for i in 0..d {
        for j in i..d {
            out.push(m[(i, j)]);
        }
    }
    out
}

fn unpack_symmetric(d: usize, coords: &[f64]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(d, d);
    let mut idx = 0;
    for i in 0..d {
        for j in i..d {
            m[(i, j)] = coords[idx];
            m[(j, i)] = coords[idx];
            idx += 1;
        }
    }
    m
}

/// Cholesky with a strict positive-pivot margin in native scale.
fn cholesky_interior(m: &DMatrix<f64>) -> Option<Cholesky<f64, nalgebra::Dyn>> {
    if m.iter().any(|x| !x.is_finite()) {
        return None;
    }
    let chol = Cholesky::new(m.clone())?;
    let min_pivot = (0..m.nrows())
        .map(|i| chol.l()[(i, i)])
        .fold(f64::INFINITY, f64::min);
    (min_pivot * min_pivot >= DOMAIN_MARGIN).then_some(chol)
}

impl GaussianCovariance {
    pub fn new(data_dim: usize) -> Result<Self> {
        if data_dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Self { data_dim })
    }

    pub fn data_dim(&self) -> usize {
        self.data_dim
    }

    /// Symmetric matrix −2Θ (= Σ⁻¹) from packed natural coordinates.
    fn precision_matrix(&self, theta: &NaturalParam) -> DMatrix<f64> {
        let d = self.data_dim;
        let t = theta.as_slice();
        let mut m = DMatrix::zeros(d, d);
        let mut idx = 0;
        for i in 0..d {
            for j in i..d {
                if i == j {
                    m[(i, i)] = -2.0 * t[idx];
                } else {
                    // Packed off-diagonals are 2Θ_ij.
                    m[(i, j)] = -t[idx];
                    m[(j, i)] = -t[idx];
                }
                idx += 1;
            }
        }
        m
    }

    /// Packed natural coordinates from a precision matrix Σ⁻¹.
    fn natural_from_precision(&self, k: &DMatrix<f64>) -> NaturalParam {
        let d = self.data_dim;
        let mut out = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in i..d {
                out.push(if i == j { -0.5 * k[(i, i)] } else { -k[(i, j)] });
            }
        }
        NaturalParam::new(out)
    }
}

impl Family for GaussianCovariance {
    fn name(&self) -> String {
        format!("gaussian-cov:{}", self.data_dim)
    }

    fn dim(&self) -> usize {
        self.data_dim * (self.data_dim + 1) / 2
    }

    fn log_partition(&self, theta: &NaturalParam) -> f64 {
        // A(θ) = −½ log det(Σ⁻¹) = ½ log det Σ.
        let prec = self.precision_matrix(theta);
        match cholesky_interior(&prec) {
            Some(chol) => {
                let log_det: f64 = (0..self.data_dim).map(|i| chol.l()[(i, i)].ln()).sum();
                -log_det
            }
            None => f64::INFINITY,
        }
    }

    fn entropy(&self, mu: &MeanParam) -> f64 {
        let m = unpack_symmetric(self.data_dim, mu.as_slice());
        match cholesky_interior(&m) {
            Some(chol) => {
                let log_det: f64 = (0..self.data_dim).map(|i| chol.l()[(i, i)].ln()).sum();
                -log_det
            }
            None => f64::INFINITY,
        }
    }

    fn to_mean(&self, theta: &NaturalParam) -> MeanParam {
        let prec = self.precision_matrix(theta);
        let sigma = cholesky_interior(&prec)
            .expect("natural parameter outside Θ")
            .inverse();
        MeanParam::new(pack(&sigma))
    }

    fn to_natural(&self, mu: &MeanParam) -> NaturalParam {
        let m = unpack_symmetric(self.data_dim, mu.as_slice());
        let k = cholesky_interior(&m)
            .expect("mean parameter outside M")
            .inverse();
        self.natural_from_precision(&k)
    }

    fn fisher_inverse_at(&self, mu: &MeanParam) -> DMatrix<f64> {
        // ∂θ/∂μ in packed coordinates, from dΘ = ½ K dΣ K with K = Σ⁻¹.
        let d = self.data_dim;
        let p = self.dim();
        let m = unpack_symmetric(d, mu.as_slice());
        let k = cholesky_interior(&m).expect("mean parameter outside M").inverse();
        let mut h = DMatrix::zeros(p, p);
        let mut row = 0;
        for i in 0..d {
            for j in i..d {
                let scale = if i == j { 0.5 } else { 1.0 };
                let mut col = 0;
                for a in 0..d {
                    for b in a..d {
                        let s = if a == b {
                            k[(i, a)] * k[(a, j)]
                        } else {
                            k[(i, a)] * k[(b, j)] + k[(i, b)] * k[(a, j)]
                        };
                        h[(row, col)] = scale * s;
                        col += 1;
                    }
                }
                row += 1;
            }
        }
        h
    }

    fn sample_suffstat(&self, theta: &NaturalParam, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let d = self.data_dim;
        let prec = self.precision_matrix(theta);
        let chol = cholesky_interior(&prec).expect("natural parameter outside Θ");
        // X = L⁻ᵀ z has covariance (L Lᵀ)⁻¹ = Σ.
        let z = DVector::from_fn(d, |_, _| standard_normal(rng));
        let x = chol
            .l()
            .transpose()
            .solve_upper_triangular(&z)
            .expect("Cholesky factor is invertible");
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..d {
            for j in i..d {
                out.push(x[i] * x[j]);
            }
        }
        out
    }

    fn contains_natural(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && cholesky_interior(&self.precision_matrix(&NaturalParam::from_slice(coords))).is_some()
    }

    fn contains_mean(&self, coords: &[f64]) -> bool {
        coords.len() == self.dim()
            && cholesky_interior(&unpack_symmetric(self.data_dim, coords)).is_some()
    }

    fn mle_finite_risk_from(&self) -> Option<usize> {
        // The inverse-Wishart expectation is infinite iff n ≤ d + 1.
        Some(self.data_dim + 2)
    }

    fn random_interior_mean(&self, rng: &mut ChaCha8Rng) -> MeanParam {
        let d = self.data_dim;
        let a = DMatrix::from_fn(d, d, |_, _| rand::Rng::gen::<f64>(rng) * 2.0 - 1.0);
        let spd = &a * a.transpose() + DMatrix::identity(d, d) * 0.3;
        MeanParam::new(pack(&spd))
    }

    fn default_mean_star(&self) -> MeanParam {
        MeanParam::new(pack(&DMatrix::identity(self.data_dim, self.data_dim)))
    }
}
