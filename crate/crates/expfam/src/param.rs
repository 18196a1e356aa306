//! Parameter vectors for the two coordinate systems of an exponential family.

use nalgebra::DVector;

/// Natural (primal) parameter θ. Valid points lie in the open set Θ where the
/// log-partition function is finite; membership is checked by the family.
#[derive(Debug, Clone, PartialEq)]
pub struct NaturalParam(pub DVector<f64>);

/// Mean (dual) parameter μ = E[T(X)]. Valid points lie in the open set M,
/// the relative interior of the convex hull of T(X); membership is checked by
/// the family.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanParam(pub DVector<f64>);

macro_rules! param_impl {
    ($ty:ident) => {
        impl $ty {
            pub fn new(coords: Vec<f64>) -> Self {
                Self(DVector::from_vec(coords))
            }

            pub fn from_slice(coords: &[f64]) -> Self {
                Self(DVector::from_column_slice(coords))
            }

            pub fn dim(&self) -> usize {
                self.0.len()
            }

            pub fn coords(&self) -> &DVector<f64> {
                &self.0
            }

            pub fn as_slice(&self) -> &[f64] {
                self.0.as_slice()
            }
        }

        impl From<Vec<f64>> for $ty {
            fn from(coords: Vec<f64>) -> Self {
                Self::new(coords)
            }
        }

        impl From<DVector<f64>> for $ty {
            fn from(coords: DVector<f64>) -> Self {
                Self(coords)
            }
        }
    };
}

param_impl!(NaturalParam);
param_impl!(MeanParam);

/// Outcome of a moment-matching estimator.
///
/// The arithmetic mean of sufficient statistics can land on the boundary of M
/// (a zero category count, a singular covariance). Such estimates are kept as
/// values rather than errors; divergence evaluation maps them to +∞.
#[derive(Debug, Clone, PartialEq)]
pub enum Estimate {
    /// Estimate in the interior of M; divergences are finite.
    Interior(MeanParam),
    /// Estimate on (or numerically at) the boundary of M; carries the raw
    /// average for diagnostics.
    Boundary(MeanParam),
}

impl Estimate {
    /// The raw averaged coordinates, interior or not.
    pub fn raw(&self) -> &MeanParam {
        match self {
            Estimate::Interior(m) | Estimate::Boundary(m) => m,
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Estimate::Boundary(_))
    }

    /// The mean parameter, if interior.
    pub fn interior(&self) -> Option<&MeanParam> {
        match self {
            Estimate::Interior(m) => Some(m),
            Estimate::Boundary(_) => None,
        }
    }
}
