//! Special functions and grid transforms shared by the physics modules.

mod airy;
pub(crate) mod dd;
mod fourier;

pub use airy::{
    airy_ai, airy_ai_asymptotic, airy_ai_real, airy_ai_real_scaled, airy_ai_scaled,
    airy_ai_series, AIRY_ENVELOPE, SERIES_RADIUS,
};
pub use fourier::{grid_fourier, grid_fourier_inverse, FourierPlan};

/// Unnormalized sinc, `sin(x)/x` with `sinc(0) = 1`.
#[inline]
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // Taylor: 1 - x^2/6 + x^4/120; truncation error below 1e-18
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}
