//! Schmidt-mode analysis of coincidence distributions.
//!
//! The decomposition is the SVD of the elementwise square root of a
//! nonnegative map `P`; weights are `lambda_n = s_n^2 / sum s_m^2`. Taking
//! `sqrt(P)` discards the biphoton phase. [`schmidt_decompose_amplitude`]
//! keeps it by decomposing a complex amplitude instead.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::detection::{far_g12_map, near_g12_map, DetectionMode, OpticalSetup};
use crate::error::{Error, Result};
use crate::grid::{ComplexMap2D, Grid1D, RealMap2D};
use crate::phasematch::{Axis, CrystalParams};
use crate::pump::PumpParams;

/// Weights below this fraction of the leading weight are dropped from the
/// entropy sum.
pub const ENTROPY_CUTOFF: f64 = 1e-14;

/// Left and right singular vectors, one column per mode.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtModes {
    pub left: DMatrix<f64>,
    pub right: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtResult {
    /// Descending, summing to one.
    pub weights: Vec<f64>,
    /// `1 / sum lambda^2`.
    pub k: f64,
    /// `-sum lambda ln lambda`, in nats.
    pub entropy: f64,
    /// `sum lambda^2`.
    pub purity: f64,
    pub cumulative: Vec<f64>,
    pub modes: Option<SchmidtModes>,
}

impl SchmidtResult {
    fn from_singular_values(mut s: Vec<f64>) -> Result<Self> {
        s.sort_by(|a, b| b.total_cmp(a));
        let total: f64 = s.iter().map(|v| v * v).sum();
        if !(total > 0.0) {
            return Err(Error::ZeroInput {
                op: "schmidt_decompose",
            });
        }
        let weights: Vec<f64> = s.iter().map(|v| v * v / total).collect();
        let purity: f64 = weights.iter().map(|l| l * l).sum();
        let cut = ENTROPY_CUTOFF * weights[0];
        let entropy = -weights
            .iter()
            .filter(|&&l| l >= cut && l > 0.0)
            .map(|l| l * l.ln())
            .sum::<f64>();
        let cumulative = weights
            .iter()
            .scan(0.0, |acc, l| {
                *acc += l;
                Some(*acc)
            })
            .collect();
        Ok(Self {
            weights,
            k: 1.0 / purity,
            entropy,
            purity,
            cumulative,
            modes: None,
        })
    }
}

fn sqrt_matrix(p: &RealMap2D) -> Result<DMatrix<f64>> {
    if p.values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidEntries {
            op: "schmidt_decompose",
        });
    }
    if p.values.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroInput {
            op: "schmidt_decompose",
        });
    }
    let (r, c) = p.values.dim();
    Ok(DMatrix::from_fn(r, c, |i, j| p.values[[i, j]].sqrt()))
}

/// Schmidt weights and metrics of `sqrt(P)`.
pub fn schmidt_decompose(p: &RealMap2D) -> Result<SchmidtResult> {
    let m = sqrt_matrix(p)?;
    SchmidtResult::from_singular_values(m.singular_values().iter().copied().collect())
}

/// As [`schmidt_decompose`], also keeping the first `count` mode pairs.
pub fn schmidt_decompose_with_modes(p: &RealMap2D, count: usize) -> Result<SchmidtResult> {
    let m = sqrt_matrix(p)?;
    let svd = m.svd(true, true);
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let count = count.min(s.len());
    let left = DMatrix::from_fn(u.nrows(), count, |i, k| u[(i, order[k])]);
    let right = DMatrix::from_fn(vt.ncols(), count, |j, k| vt[(order[k], j)]);
    let mut result = SchmidtResult::from_singular_values(s)?;
    result.modes = Some(SchmidtModes { left, right });
    Ok(result)
}

/// Phase-aware alternative: Schmidt weights of a complex amplitude map.
pub fn schmidt_decompose_amplitude(a: &ComplexMap2D) -> Result<SchmidtResult> {
    if a.values.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::InvalidEntries {
            op: "schmidt_decompose_amplitude",
        });
    }
    let (r, c) = a.values.dim();
    let m: DMatrix<Complex64> = DMatrix::from_fn(r, c, |i, j| a.values[[i, j]]);
    SchmidtResult::from_singular_values(m.singular_values().iter().copied().collect())
}

/// Smallest number of modes whose cumulative weight reaches `fraction`.
pub fn modes_for_fraction(result: &SchmidtResult, fraction: f64) -> usize {
    // slack for the rounding in the running sum
    let target = fraction - 1e-12;
    result
        .cumulative
        .iter()
        .position(|&c| c >= target)
        .map_or(result.cumulative.len(), |i| i + 1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtReport {
    pub mode: DetectionMode,
    pub result: SchmidtResult,
    pub fraction: f64,
    pub modes_for_fraction: usize,
}

/// Coincidence map for `setup` on `grid`, then its Schmidt analysis.
pub fn schmidt_scenario(
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
    setup: &OpticalSetup,
    grid: &Grid1D,
    fraction: f64,
) -> Result<SchmidtReport> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "fraction",
            value: fraction,
            constraint: "must lie in (0, 1]",
        });
    }
    let map = match setup.mode() {
        DetectionMode::FarField => far_g12_map(grid, pump, crystal, axis, setup)?,
        DetectionMode::NearField => near_g12_map(grid, pump, crystal, axis, setup)?,
    };
    let result = schmidt_decompose(&map.map)?;
    let n = modes_for_fraction(&result, fraction);
    Ok(SchmidtReport {
        mode: setup.mode(),
        result,
        fraction,
        modes_for_fraction: n,
    })
}
