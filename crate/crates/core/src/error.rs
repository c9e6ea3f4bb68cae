use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("layout mismatch: {0}")]
    LayoutMismatch(&'static str),

    #[error("invalid qutrit level `{0}` (expected g, e or f)")]
    InvalidLevel(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("cavity index {index} out of range for {n_cavities} cavities")]
    CavityIndex { index: usize, n_cavities: usize },

    #[error("instance too large for the brute-force propagator: total_dim {got} > {max}")]
    OracleTooLarge { got: usize, max: usize },

    #[error("trace drift {drift:.3e} exceeded {limit:.3e} at t = {t_ns:.4} ns; reduce the step size")]
    TraceDrift { drift: f64, limit: f64, t_ns: f64 },

    #[error("non-finite value encountered at t = {t_ns:.4} ns")]
    NonFinite { t_ns: f64 },

    #[error("density matrix is not positive within tolerance: <psi|rho|psi> = {value:.3e}")]
    BrokenDensity { value: f64 },
}
