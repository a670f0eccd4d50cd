use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the region where an evaluator is valid; the caller
    /// has to rescale the problem.
    #[error("{op}: argument {arg} outside the supported domain ({reason})")]
    Domain {
        op: &'static str,
        arg: String,
        reason: &'static str,
    },

    #[error("{op}: size mismatch, expected {expected}, got {actual}")]
    Size {
        op: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Source and target grids do not satisfy the discrete reciprocity
    /// relation `dq * dxi * n = 2 pi`.
    #[error("{op}: grids are not conjugate (dq*dxi*n = {product}, expected 2*pi)")]
    NotConjugate { op: &'static str, product: f64 },

    #[error("invalid parameter `{name}` = {value}: {constraint}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("{op}: singular configuration ({reason})")]
    Singular {
        op: &'static str,
        reason: &'static str,
    },

    #[error("{op}: requested setup mode {expected}, got {actual}")]
    WrongMode {
        op: &'static str,
        expected: &'static str,
        actual: &'static str,
    },

    #[error("conditional slice requires a grid node at 0 (nearest node at {nearest})")]
    GridWithoutZero { nearest: f64 },

    #[error("{op}: input is identically zero")]
    ZeroInput { op: &'static str },

    #[error("{op}: input contains negative or non-finite entries")]
    InvalidEntries { op: &'static str },

    #[error("{op}: quadrature did not converge after {iterations} refinements")]
    NoConvergence { op: &'static str, iterations: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_param(
    name: &'static str,
    value: f64,
    ok: bool,
    constraint: &'static str,
) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}
