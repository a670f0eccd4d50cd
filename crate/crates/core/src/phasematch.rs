//! Collinear degenerate phase mismatch and the per-axis spectral function.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_param, Result};
use crate::grid::{ComplexMap2D, Grid1D, RealMap2D};
use crate::pump::{truncated_airy_spectrum, PumpParams};
use crate::specfun::sinc;

/// Transverse direction relative to the crystal optic axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Perpendicular to the optic-axis plane; no walk-off.
    Ordinary,
    /// In the optic-axis plane; the pump walks off along it.
    Extraordinary,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Ordinary => "ordinary",
            Axis::Extraordinary => "extraordinary",
        }
    }
}

impl std::str::FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "ordinary" | "x" => Ok(Axis::Ordinary),
            "extraordinary" | "y" => Ok(Axis::Extraordinary),
            other => Err(format!(
                "unknown axis `{other}` (expected `ordinary` or `extraordinary`)"
            )),
        }
    }
}

/// Crystal in dimensionless form: `D = L / (K_p l^2)` and `D_e = N L / l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrystalParams {
    length_mm: Option<f64>,
    walkoff: f64,
    d: f64,
    d_e: f64,
}

impl CrystalParams {
    /// Physical crystal of length `length_mm` with pump walk-off `walkoff`
    /// (the `N` of `M_p = N y`). Negative `walkoff` mirrors the walk-off.
    pub fn new(length_mm: f64, walkoff: f64, pump: &PumpParams) -> Result<Self> {
        check_param("length_mm", length_mm, length_mm > 0.0, "must be positive")?;
        check_param("walkoff", walkoff, true, "must be finite")?;
        let length_um = length_mm * 1.0e3;
        Ok(Self {
            length_mm: Some(length_mm),
            walkoff,
            d: length_um / pump.diffraction_length_um(),
            d_e: walkoff * length_um / pump.scale_um(),
        })
    }

    /// Crystal given directly by `D >= 0` and `D_e`. `D = 0` is the
    /// infinitely thin limit.
    pub fn from_dimensionless(d: f64, d_e: f64) -> Result<Self> {
        check_param("D", d, d >= 0.0, "diffraction parameter must be >= 0")?;
        check_param("D_e", d_e, true, "must be finite")?;
        Ok(Self {
            length_mm: None,
            walkoff: f64::NAN,
            d,
            d_e,
        })
    }

    pub fn length_mm(&self) -> Option<f64> {
        self.length_mm
    }

    pub fn walkoff(&self) -> f64 {
        self.walkoff
    }

    /// Diffraction parameter `D`.
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Walk-off parameter `D_e` of the extraordinary axis.
    pub fn d_e(&self) -> f64 {
        self.d_e
    }

    /// Walk-off parameter seen by `axis` (zero on the ordinary axis).
    pub fn d_e_on(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Ordinary => 0.0,
            Axis::Extraordinary => self.d_e,
        }
    }
}

/// `L Delta / 2` in dimensionless momenta:
/// `D_e (q1 + q2) / 2 + D (q1 - q2)^2 / 4`, without the walk-off term on the
/// ordinary axis. Valid in the paraxial regime `|q| << K_p l`.
#[inline]
pub fn half_mismatch(q1: f64, q2: f64, crystal: &CrystalParams, axis: Axis) -> f64 {
    let qm = q1 - q2;
    0.5 * crystal.d_e_on(axis) * (q1 + q2) + 0.25 * crystal.d * qm * qm
}

/// `Phi(q1, q2) = A~(q1 + q2) sinc(h) e^{-i h}` with `h` the half mismatch.
#[inline]
pub fn spectral_function(
    q1: f64,
    q2: f64,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
) -> Complex64 {
    let h = half_mismatch(q1, q2, crystal, axis);
    let pm = Complex64::from_polar(sinc(h), -h);
    truncated_airy_spectrum(q1 + q2, pump.truncation()) * pm
}

/// `Phi` sampled on `rows x cols`.
pub fn spectral_matrix(
    rows: &Grid1D,
    cols: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
) -> ComplexMap2D {
    let qc = cols.nodes();
    let data: Vec<Complex64> = rows
        .nodes()
        .into_par_iter()
        .flat_map_iter(|q1| {
            qc.iter()
                .map(move |&q2| spectral_function(q1, q2, pump, crystal, axis))
                .collect::<Vec<_>>()
        })
        .collect();
    let values = Array2::from_shape_vec((rows.len(), cols.len()), data)
        .expect("row-major buffer has rows * cols entries");
    ComplexMap2D {
        rows: *rows,
        cols: *cols,
        values,
    }
}

/// `|Phi(q1, q2)|^2` on `grid x grid`, maximum scaled to one.
pub fn momentum_probability_map(
    grid: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
) -> RealMap2D {
    spectral_matrix(grid, grid, pump, crystal, axis)
        .intensity()
        .normalize_max()
}
