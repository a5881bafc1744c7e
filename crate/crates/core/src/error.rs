use thiserror::Error;

/// Errors raised by the physics and numerics layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("evaluation at a pole: {0}")]
    Pole(String),

    #[error("series did not converge (ratio {ratio:.6e})")]
    NonConvergence { ratio: f64 },

    #[error("quadrature did not reach tolerance: estimate {estimate:.6e}, error bound {error_bound:.6e}")]
    Quadrature { estimate: f64, error_bound: f64 },

    #[error("damping kernel has sigma == 0, the spectral series is undefined")]
    DegenerateKernel,

    #[error("normalizing integral of the damped distribution vanishes")]
    DegenerateSuppression,

    #[error("finite-difference step straddles the barrier top (|kappa^2| = {kappa_sq:.3e})")]
    StepUnderflow { kappa_sq: f64 },

    #[error("spectral window too narrow: normalization residual {residual:.3e}")]
    WindowTooNarrow { residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
