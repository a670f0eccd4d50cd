//! Single-count and coincidence maps in the far-field (f-f) and near-field
//! (2f-2f) detection geometries.
//!
//! Detector coordinates are in millimetres. The far field images momentum,
//! `q = K_p l x / (2 f)`; the near field images position with inversion,
//! `xi = -x / l`. Maps are reported in raw detector coordinates.

use std::f64::consts::PI;

use ndarray::{Array1, Array2, Axis as NdAxis};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_param, Error, Result};
use crate::grid::{AxisKind, ComplexMap2D, Grid1D, Normalization, Profile1D, RealMap2D};
use crate::phasematch::{spectral_function, spectral_matrix, Axis, CrystalParams};
use crate::pump::PumpParams;
use crate::specfun::FourierPlan;

/// Window of the default momentum grid used for the idler integrals.
pub const DEFAULT_Q_HALF_WIDTH: f64 = 24.0;
pub const DEFAULT_Q_SAMPLES: usize = 1024;

/// `q in [-24, 24]` with 1024 nodes.
pub fn default_momentum_grid() -> Grid1D {
    Grid1D::new(
        -DEFAULT_Q_HALF_WIDTH,
        DEFAULT_Q_HALF_WIDTH,
        DEFAULT_Q_SAMPLES,
        AxisKind::Momentum,
    )
    .expect("static grid is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetectionMode {
    FarField,
    NearField,
}

impl DetectionMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            DetectionMode::FarField => "far_field",
            DetectionMode::NearField => "near_field",
        }
    }
}

impl std::str::FromStr for DetectionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "far_field" | "far" | "farfield" => Ok(DetectionMode::FarField),
            "near_field" | "near" | "nearfield" => Ok(DetectionMode::NearField),
            other => Err(format!(
                "unknown detection mode `{other}` (expected `far_field` or `near_field`)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticalSetup {
    mode: DetectionMode,
    focal_length_mm: f64,
}

impl OpticalSetup {
    pub fn new(mode: DetectionMode, focal_length_mm: f64) -> Result<Self> {
        check_param(
            "focal_length_mm",
            focal_length_mm,
            focal_length_mm > 0.0,
            "must be positive",
        )?;
        Ok(Self {
            mode,
            focal_length_mm,
        })
    }

    pub fn far_field(focal_length_mm: f64) -> Result<Self> {
        Self::new(DetectionMode::FarField, focal_length_mm)
    }

    pub fn near_field(focal_length_mm: f64) -> Result<Self> {
        Self::new(DetectionMode::NearField, focal_length_mm)
    }

    pub fn mode(&self) -> DetectionMode {
        self.mode
    }

    pub fn focal_length_mm(&self) -> f64 {
        self.focal_length_mm
    }

    /// Far-field momentum `K_p l x / (2 f)` seen at detector position `x_mm`.
    pub fn momentum_of(&self, x_mm: f64, pump: &PumpParams) -> f64 {
        pump.wavenumber_per_um() * pump.scale_um() * x_mm / (2.0 * self.focal_length_mm)
    }

    /// Near-field image coordinate `-x / l`.
    pub fn image_of(&self, x_mm: f64, pump: &PumpParams) -> f64 {
        -x_mm * 1.0e3 / pump.scale_um()
    }

    fn require(&self, mode: DetectionMode, op: &'static str) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(Error::WrongMode {
                op,
                expected: mode.as_str(),
                actual: self.mode.as_str(),
            })
        }
    }
}

/// Coincidence distribution over a detector grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMap {
    pub map: RealMap2D,
    pub mode: DetectionMode,
}

impl CorrelationMap {
    pub fn normalization(&self) -> Normalization {
        self.map.normalization
    }
}

fn symmetrize(values: &mut Array2<f64>) {
    let n = values.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (values[[i, j]] + values[[j, i]]);
            values[[i, j]] = v;
            values[[j, i]] = v;
        }
    }
}

fn make_hermitian(values: &mut Array2<Complex64>) {
    let n = values.nrows();
    for i in 0..n {
        values[[i, i]].im = 0.0;
        for j in (i + 1)..n {
            let v = 0.5 * (values[[i, j]] + values[[j, i]].conj());
            values[[i, j]] = v;
            values[[j, i]] = v.conj();
        }
    }
}

fn momentum_grid_for(grid: &Grid1D, setup: &OpticalSetup, pump: &PumpParams) -> Result<Grid1D> {
    grid.map_affine(AxisKind::Momentum, |x| setup.momentum_of(x, pump))
}

/// `G11(x1, x1') = int dkappa Phi*(q(x1), kappa) Phi(q(x1'), kappa)`, trapezoid
/// over the default momentum grid.
pub fn far_g11(
    x1_mm: f64,
    x1p_mm: f64,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<Complex64> {
    setup.require(DetectionMode::FarField, "far_g11")?;
    let q1 = setup.momentum_of(x1_mm, pump);
    let q1p = setup.momentum_of(x1p_mm, pump);
    let kg = default_momentum_grid();
    Ok(kg
        .nodes()
        .iter()
        .zip(kg.trapezoid_weights())
        .map(|(&k, w)| {
            spectral_function(q1, k, pump, crystal, axis).conj()
                * spectral_function(q1p, k, pump, crystal, axis)
                * w
        })
        .sum())
}

/// Full far-field `G11` kernel on `grid x grid`; Hermitian by construction.
pub fn far_g11_map(
    grid: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<ComplexMap2D> {
    setup.require(DetectionMode::FarField, "far_g11_map")?;
    let qg = momentum_grid_for(grid, setup, pump)?;
    let kg = default_momentum_grid();
    let phi = spectral_matrix(&qg, &kg, pump, crystal, axis).values;
    let w = Array1::from(kg.trapezoid_weights());
    let weighted = phi.mapv(|v| v.conj()) * &w.mapv(|x| Complex64::new(x, 0.0));
    let mut values = weighted.dot(&phi.t());
    make_hermitian(&mut values);
    Ok(ComplexMap2D {
        rows: *grid,
        cols: *grid,
        values,
    })
}

/// `G12(x1, x2) = |Phi(q(x1), q(x2))|^2`, max-normalized.
pub fn far_g12_map(
    grid: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<CorrelationMap> {
    setup.require(DetectionMode::FarField, "far_g12_map")?;
    let qg = momentum_grid_for(grid, setup, pump)?;
    let mut intensity = spectral_matrix(&qg, &qg, pump, crystal, axis).intensity();
    symmetrize(&mut intensity.values);
    intensity.rows = *grid;
    intensity.cols = *grid;
    Ok(CorrelationMap {
        map: intensity.normalize_max(),
        mode: DetectionMode::FarField,
    })
}

/// Ascending image grid for a detector grid, with node `k` belonging to
/// detector node `n - 1 - k`, plus its conjugate momentum grid.
fn image_grids(grid: &Grid1D, setup: &OpticalSetup, pump: &PumpParams) -> Result<(Grid1D, Grid1D)> {
    let xi = Grid1D::new(
        setup.image_of(grid.max(), pump),
        setup.image_of(grid.min(), pump),
        grid.len(),
        AxisKind::Position,
    )?;
    Ok((xi, xi.conjugate(AxisKind::Momentum)))
}

fn transform_rows(values: &mut Array2<Complex64>, plan: &FourierPlan) {
    values
        .axis_iter_mut(NdAxis(0))
        .into_par_iter()
        .for_each(|mut row| {
            let mut buf: Vec<Complex64> = row.to_vec();
            plan.to_position_in_place(&mut buf);
            for (dst, src) in row.iter_mut().zip(buf) {
                *dst = src;
            }
        });
}

fn reverse_both(values: &Array2<Complex64>) -> Array2<Complex64> {
    let (r, c) = values.dim();
    Array2::from_shape_fn((r, c), |(i, j)| values[[r - 1 - i, c - 1 - j]])
}

/// Near-field two-photon amplitude
/// `A(xi1, xi2) = int dq1 dq2 / (2 pi)^2 e^{i q1 xi1 + i q2 xi2} Phi(q1, q2)`
/// at `xi = -x / l`, on the momentum grid conjugate to the detector grid.
pub fn near_amplitude_map(
    grid: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<ComplexMap2D> {
    setup.require(DetectionMode::NearField, "near_amplitude_map")?;
    let (xi, q) = image_grids(grid, setup, pump)?;
    let plan = FourierPlan::new(q, xi)?;
    let mut values = spectral_matrix(&q, &q, pump, crystal, axis).values;
    transform_rows(&mut values, &plan);
    let mut t = values.t().to_owned();
    transform_rows(&mut t, &plan);
    Ok(ComplexMap2D {
        rows: *grid,
        cols: *grid,
        values: reverse_both(&t.t().to_owned()),
    })
}

/// `G12 = |A|^2` in the near field, max-normalized.
pub fn near_g12_map(
    grid: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<CorrelationMap> {
    let mut intensity = near_amplitude_map(grid, pump, crystal, axis, setup)?.intensity();
    symmetrize(&mut intensity.values);
    Ok(CorrelationMap {
        map: intensity.normalize_max(),
        mode: DetectionMode::NearField,
    })
}

fn lens_phase(x_mm: f64, xp_mm: f64, pump: &PumpParams, setup: &OpticalSetup) -> Complex64 {
    let f_um = setup.focal_length_mm() * 1.0e3;
    let (x, xp) = (x_mm * 1.0e3, xp_mm * 1.0e3);
    Complex64::from_polar(1.0, pump.wavenumber_per_um() * (x * x - xp * xp) / (2.0 * f_um))
}

/// Near-field `G11(x1, x1') = e^{i K_p (x1^2 - x1'^2) / 2f}
/// int dkappa/(2 pi) psi(xi1, kappa) psi*(xi1', kappa)`, with
/// `psi(xi, kappa) = int dq/(2 pi) e^{i q xi} Phi(q, kappa)`, both integrals by
/// trapezoid on the default momentum grid.
pub fn near_g11(
    x1_mm: f64,
    x1p_mm: f64,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<Complex64> {
    setup.require(DetectionMode::NearField, "near_g11")?;
    let xi1 = setup.image_of(x1_mm, pump);
    let xi1p = setup.image_of(x1p_mm, pump);
    let kg = default_momentum_grid();
    let nodes = kg.nodes();
    let w = kg.trapezoid_weights();
    let e1: Vec<Complex64> = nodes
        .iter()
        .zip(&w)
        .map(|(&q, &w)| Complex64::from_polar(w / (2.0 * PI), q * xi1))
        .collect();
    let e1p: Vec<Complex64> = nodes
        .iter()
        .zip(&w)
        .map(|(&q, &w)| Complex64::from_polar(w / (2.0 * PI), q * xi1p))
        .collect();
    let parts: Vec<Complex64> = nodes
        .par_iter()
        .zip(w.par_iter())
        .map(|(&k, &wk)| {
            let mut a = Complex64::new(0.0, 0.0);
            let mut b = Complex64::new(0.0, 0.0);
            for (i, &q) in nodes.iter().enumerate() {
                let phi = spectral_function(q, k, pump, crystal, axis);
                a += e1[i] * phi;
                b += e1p[i] * phi;
            }
            a * b.conj() * (wk / (2.0 * PI))
        })
        .collect();
    let sum: Complex64 = parts.into_iter().sum();
    Ok(lens_phase(x1_mm, x1p_mm, pump, setup) * sum)
}

/// Near-field `G11` kernel on `grid x grid`, with the idler momentum on the
/// grid conjugate to the image coordinates. Its diagonal equals the
/// `x2`-marginal of the unnormalized `|A|^2` exactly.
pub fn near_g11_map(
    grid: &Grid1D,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
) -> Result<ComplexMap2D> {
    setup.require(DetectionMode::NearField, "near_g11_map")?;
    let (xi, q) = image_grids(grid, setup, pump)?;
    let plan = FourierPlan::new(q, xi)?;
    // rows: kappa, columns: q1 -> xi1
    let mut psi = spectral_matrix(&q, &q, pump, crystal, axis).values;
    transform_rows(&mut psi, &plan);
    let n = grid.len();
    // reorder columns to detector order
    let psi = Array2::from_shape_fn((n, n), |(k, i)| psi[[k, n - 1 - i]]);
    let scale = Complex64::new(q.step() / (2.0 * PI), 0.0);
    let mut values = psi.t().dot(&psi.mapv(|v| v.conj())) * scale;
    let x = grid.nodes();
    for i in 0..n {
        for j in 0..n {
            values[[i, j]] *= lens_phase(x[i], x[j], pump, setup);
        }
    }
    make_hermitian(&mut values);
    Ok(ComplexMap2D {
        rows: *grid,
        cols: *grid,
        values,
    })
}

/// Real diagonal of a `G11` kernel.
pub fn g11_diagonal(kernel: &ComplexMap2D) -> Profile1D {
    Profile1D {
        grid: kernel.rows,
        values: kernel.values.diag().iter().map(|v| v.re.max(0.0)).collect(),
        normalization: Normalization::Raw,
    }
}

/// `G12(x1, 0) / int int G12`, the slice at the detector node `x2 = 0`.
pub fn conditional_coincidence(map: &CorrelationMap) -> Result<Profile1D> {
    let cols = map.map.cols;
    let j = cols.index_of(0.0).ok_or_else(|| {
        let nearest = cols
            .nodes()
            .into_iter()
            .fold(f64::INFINITY, |a, x| if x.abs() < a.abs() { x } else { a });
        Error::GridWithoutZero { nearest }
    })?;
    let total = map.map.integral();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::ZeroInput {
            op: "conditional_coincidence",
        });
    }
    Ok(Profile1D {
        grid: map.map.rows,
        values: map.map.values.column(j).iter().map(|v| v / total).collect(),
        normalization: Normalization::Conditional,
    })
}

/// Unit-integral (trapezoid) normalization of a singles profile.
pub fn singles_probability(g11_diag: &Profile1D) -> Result<Profile1D> {
    if g11_diag.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidEntries {
            op: "singles_probability",
        });
    }
    let total = g11_diag.integral();
    if total <= 0.0 {
        return Err(Error::ZeroInput {
            op: "singles_probability",
        });
    }
    Ok(Profile1D {
        grid: g11_diag.grid,
        values: g11_diag.values.iter().map(|v| v / total).collect(),
        normalization: Normalization::Sum1,
    })
}

/// Closed forms of the infinitely thin crystal (`D = D_e = 0`), where the
/// spectral function reduces to the pump spectrum of `q1 + q2`.
pub mod thin_crystal {
    use super::{DetectionMode, OpticalSetup};
    use crate::pump::{truncated_airy, PumpParams};
    use crate::specfun::airy_ai_real;

    /// Far field: `|A~(q1 + q2)|^2 = e^{-2 w Q^2 + 2 w^3 / 3}`.
    pub fn far_g12(x1_mm: f64, x2_mm: f64, pump: &PumpParams, setup: &OpticalSetup) -> f64 {
        let w = pump.truncation();
        let q = setup.momentum_of(x1_mm, pump) + setup.momentum_of(x2_mm, pump);
        (-2.0 * w * q * q + 2.0 * w * w * w / 3.0).exp()
    }

    /// Weight `Ai^2[-2 (x1 + x2) / l]` multiplying `delta(x1 - x2)` in the
    /// near-field coincidences, as the closed form is usually quoted.
    pub fn near_g12_weight(x1_mm: f64, x2_mm: f64, pump: &PumpParams) -> f64 {
        let a = airy_ai_real(-2.0 * (x1_mm + x2_mm) * 1.0e3 / pump.scale_um());
        a * a
    }

    /// Near-field diagonal of the thin-crystal coincidences and the singles
    /// profile, `Ai_Tr^2(-x / l)`, as obtained by transforming `A~(q1 + q2)`.
    pub fn near_diagonal(x_mm: f64, pump: &PumpParams) -> f64 {
        let a = truncated_airy(-x_mm * 1.0e3 / pump.scale_um(), pump.truncation());
        a * a
    }

    /// Thin-crystal coincidence oracle for either geometry; the near-field
    /// value is the weight of `delta(x1 - x2)`.
    pub fn oracle(x1_mm: f64, x2_mm: f64, pump: &PumpParams, setup: &OpticalSetup) -> f64 {
        match setup.mode() {
            DetectionMode::FarField => far_g12(x1_mm, x2_mm, pump, setup),
            DetectionMode::NearField => near_g12_weight(x1_mm, x2_mm, pump),
        }
    }
}
