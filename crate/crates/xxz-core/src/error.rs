use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument came within `tol` of a pole of the named function.
    #[error("{context}: argument within {tol:e} of a pole")]
    Pole { context: &'static str, tol: f64 },

    /// Chain length exceeds the dense-operator cap.
    #[error("chain length M={m} exceeds the cap of {cap} sites")]
    Size { m: usize, cap: usize },

    /// An iterative solver did not reach its tolerance.
    #[error("{context}: no convergence after {iters} iterations (residual {residual:e})")]
    NonConvergence {
        context: &'static str,
        iters: usize,
        residual: f64,
    },

    /// A series evaluation left its convergence band.
    #[error("{context}: series does not converge for this argument")]
    Convergence { context: &'static str },

    /// Massive regime below the critical field: the dressed-energy equation
    /// has no root with a Fermi boundary inside the Brillouin zone.
    #[error("no Fermi boundary: h={h} <= h_c={h_c} in the massive regime")]
    NoFermiBoundary { h: f64, h_c: f64 },

    /// Tensor-product integration in more dimensions than allowed.
    #[error("{m}-fold integral exceeds the dimension cap {cap}")]
    DimensionCap { m: usize, cap: usize },

    /// Malformed quadrature descriptor.
    #[error("bad quadrature descriptor: {reason}")]
    BadDescriptor { reason: String },

    /// Model parameters outside the supported domain.
    #[error("invalid model parameters: {reason}")]
    InvalidParams { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
