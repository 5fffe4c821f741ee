use thiserror::Error;

/// Errors reported by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid hierarchy exponents (n = {n}, m = {m}): {reason}")]
    InvalidParams { n: u32, m: u32, reason: &'static str },

    #[error("argument `{name}` = {value} is outside its domain: {reason}")]
    Domain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("state has {got} samples but the grid has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("derivative order {0} is not supported (expected 1 or 2)")]
    UnsupportedOrder(u32),

    #[error("the Fourier collocation scheme needs the `std` feature")]
    SchemeUnavailable,

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("state is flat; no peak to track")]
    DegenerateState,

    #[error("quadrature did not reach tolerance (estimated error {estimate:e})")]
    QuadratureFailed { estimate: f64 },
}
