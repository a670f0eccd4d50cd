//! Finite-energy (exponentially truncated) Airy pump beam.
//!
//! Coordinates are dimensionless: `xi = x / l`, `q = kappa l`, and the pump
//! propagation distance is `zeta = z / (K_p l^2)`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_param, Result};
use crate::grid::{Grid1D, RealMap2D};
use crate::specfun::{airy_ai_real_scaled, airy_ai_scaled};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpParams {
    truncation: f64,
    scale_um: f64,
    wavelength_um: f64,
    refractive_index: f64,
}

impl PumpParams {
    /// Vacuum-wavelength pump (`refractive_index = 1`).
    pub fn new(truncation: f64, scale_um: f64, wavelength_um: f64) -> Result<Self> {
        Self::with_index(truncation, scale_um, wavelength_um, 1.0)
    }

    /// `K_p = 2 pi n / lambda`.
    pub fn with_index(
        truncation: f64,
        scale_um: f64,
        wavelength_um: f64,
        refractive_index: f64,
    ) -> Result<Self> {
        check_param(
            "truncation",
            truncation,
            (0.0..1.0).contains(&truncation),
            "truncation parameter must satisfy 0 <= w < 1",
        )?;
        check_param("scale_um", scale_um, scale_um > 0.0, "must be positive")?;
        check_param(
            "wavelength_um",
            wavelength_um,
            wavelength_um > 0.0,
            "must be positive",
        )?;
        check_param(
            "refractive_index",
            refractive_index,
            refractive_index > 0.0,
            "must be positive",
        )?;
        Ok(Self {
            truncation,
            scale_um,
            wavelength_um,
            refractive_index,
        })
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn scale_um(&self) -> f64 {
        self.scale_um
    }

    pub fn wavelength_um(&self) -> f64 {
        self.wavelength_um
    }

    pub fn refractive_index(&self) -> f64 {
        self.refractive_index
    }

    /// Pump wavenumber in rad/um.
    pub fn wavenumber_per_um(&self) -> f64 {
        2.0 * PI * self.refractive_index / self.wavelength_um
    }

    /// `K_p l^2` in micrometres.
    pub fn diffraction_length_um(&self) -> f64 {
        self.wavenumber_per_um() * self.scale_um * self.scale_um
    }

    /// Pump normalization `zeta = z / (K_p l^2)`.
    pub fn zeta(&self, z_um: f64) -> f64 {
        z_um / self.diffraction_length_um()
    }
}

/// `Ai(xi) e^{w xi}`.
pub fn truncated_airy(xi: f64, w: f64) -> f64 {
    airy_ai_real_scaled(xi, w * xi)
}

/// Angular spectrum `e^{i (q + i w)^3 / 3}`, with
/// `|.|^2 = e^{-2 w q^2 + 2 w^3 / 3}`.
pub fn truncated_airy_spectrum(q: f64, w: f64) -> Complex64 {
    let s = Complex64::new(q, w);
    (Complex64::i() * s * s * s / 3.0).exp()
}

/// Closed-form free propagation of the truncated Airy beam,
/// `Ai[xi - (zeta/2)^2 + i w zeta] e^{w xi - w zeta^2/2 - i zeta^3/12 + i w^2 zeta/2 + i xi zeta/2}`.
pub fn propagate_truncated_airy(xi: f64, zeta: f64, w: f64) -> Result<Complex64> {
    let arg = Complex64::new(xi - 0.25 * zeta * zeta, w * zeta);
    let exponent = Complex64::new(
        w * xi - 0.5 * w * zeta * zeta,
        -zeta * zeta * zeta / 12.0 + 0.5 * w * w * zeta + 0.5 * xi * zeta,
    );
    airy_ai_scaled(arg, exponent)
}

/// `|Ai_Tr(xi, zeta)|^2` along one grid.
pub fn pump_intensity_1d(grid: &Grid1D, zeta: f64, w: f64) -> Result<Vec<f64>> {
    grid.nodes()
        .into_par_iter()
        .map(|xi| propagate_truncated_airy(xi, zeta, w).map(|v| v.norm_sqr()))
        .collect()
}

/// Propagation map `|Ai_Tr(xi, zeta)|^2`, rows along `zetas`, columns along
/// `grid`.
pub fn pump_propagation_map(grid: &Grid1D, zetas: &Grid1D, w: f64) -> Result<RealMap2D> {
    let rows: Vec<Vec<f64>> = zetas
        .nodes()
        .into_par_iter()
        .map(|zeta| pump_intensity_1d(grid, zeta, w))
        .collect::<Result<_>>()?;
    let mut values = Array2::zeros((zetas.len(), grid.len()));
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            values[[i, j]] = v;
        }
    }
    RealMap2D::new(*zetas, *grid, values)
}

/// Separable 2D intensity `|Ai_Tr(xi_x, zeta)|^2 |Ai_Tr(xi_y, zeta)|^2` at
/// physical distance `z_um`. Rows run along `grid_x`, columns along `grid_y`.
pub fn pump_intensity_2d(
    grid_x: &Grid1D,
    grid_y: &Grid1D,
    z_um: f64,
    params: &PumpParams,
) -> Result<RealMap2D> {
    let zeta = params.zeta(z_um);
    let w = params.truncation();
    let ix = pump_intensity_1d(grid_x, zeta, w)?;
    let iy = pump_intensity_1d(grid_y, zeta, w)?;
    let values = Array2::from_shape_fn((ix.len(), iy.len()), |(i, j)| ix[i] * iy[j]);
    RealMap2D::new(*grid_x, *grid_y, values)
}

/// Position of the main (rightmost significant) lobe of `|Ai_Tr(xi, zeta)|^2`
/// near `guess`, refined by golden-section search on `[guess - 1, guess + 1]`.
pub fn main_lobe_peak(zeta: f64, w: f64, guess: f64) -> Result<f64> {
    let f = |x: f64| propagate_truncated_airy(x, zeta, w).map(|v| -v.norm_sqr());
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (guess - 1.0, guess + 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while (b - a).abs() > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}
