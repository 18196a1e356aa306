use thiserror::Error;

/// Errors for domain violations and numerical failures.
///
/// Boundary *estimates* are not errors: they are first-class
/// [`Estimate::Boundary`](crate::Estimate) values so that risk estimation can
/// count infinite-divergence events instead of aborting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter outside the natural domain Θ")]
    OutsideNaturalDomain,
    #[error("parameter outside the mean domain M")]
    OutsideMeanDomain,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("empty dataset")]
    EmptyDataset,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("quadrature did not converge: achieved {achieved:.3e}, requested {requested:.3e}")]
    QuadratureFailure { achieved: f64, requested: f64 },
    #[error("unknown family '{0}'")]
    UnknownFamily(String),
    #[error("mirror-descent iterate left the mean domain at step {step}")]
    IterateLeftDomain { step: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
