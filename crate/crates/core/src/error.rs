use thiserror::Error;

/// Failures raised by the scattering and pumping routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no propagating lead mode: 2E = {two_e} must exceed q^2 = {q_sq}")]
    NoPropagatingMode { two_e: f64, q_sq: f64 },

    #[error("in-barrier wavevector sits on the band edge (|k2| = {k2_abs:e})")]
    BandEdge { k2_abs: f64 },

    #[error("closed form is only defined for q = 0 (got q = {q})")]
    NonzeroTransverse { q: f64 },

    #[error("closed form requires 2E > B^2 (E = {energy}, B = {field})")]
    BelowBarrierTop { energy: f64, field: f64 },

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("scattering matrix is not unitary (max deviation {deviation:e})")]
    NonUnitary { deviation: f64 },

    #[error("finite-difference step underflow at x = {x}")]
    StepUnderflow { x: f64 },

    #[error(
        "time quadrature did not converge after {nodes} nodes \
         (change {change:e} exceeds tolerance {tolerance:e})"
    )]
    QuadratureNotConverged { nodes: usize, change: f64, tolerance: f64 },

    #[error("singular internal system while connecting scattering matrices")]
    SingularConnection,

    #[error("dephasing segments need a propagating in-barrier mode (k2^2 = {k2_sq})")]
    EvanescentSegment { k2_sq: f64 },

    #[error("non-finite scattering amplitude")]
    NonFinite,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
