//! Fourier transforms between conjugate uniform grids.
//!
//! Convention: momentum to position is
//! `f(xi) = int dq/(2 pi) e^{+i q xi} F(q)`, position to momentum is
//! `F(q) = int dxi e^{-i q xi} f(xi)`. On grids with `dq * dxi = 2 pi / n`
//! the Riemann sums of both integrals are exact inverses of each other.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{ComplexField1D, Grid1D};

const RECIPROCITY_TOL: f64 = 1e-9;

/// Precomputed transform between a momentum grid and a conjugate position
/// grid. Cheap to share across threads.
#[derive(Clone)]
pub struct FourierPlan {
    momentum: Grid1D,
    position: Grid1D,
    to_position: Arc<dyn Fft<f64>>,
    to_momentum: Arc<dyn Fft<f64>>,
    /// `e^{i k dq xi_0}`, applied before the position-side FFT.
    pre_pos: Vec<Complex64>,
    /// `(dq/2pi) e^{i q_0 xi_j}`, applied after it.
    post_pos: Vec<Complex64>,
    /// `e^{-i j dxi q_0}`
    pre_mom: Vec<Complex64>,
    /// `dxi e^{-i q_k xi_0}`
    post_mom: Vec<Complex64>,
}

impl std::fmt::Debug for FourierPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierPlan")
            .field("momentum", &self.momentum)
            .field("position", &self.position)
            .finish()
    }
}

impl FourierPlan {
    pub fn new(momentum: Grid1D, position: Grid1D) -> Result<Self> {
        let n = momentum.len();
        if position.len() != n {
            return Err(Error::Size {
                op: "FourierPlan::new",
                expected: n,
                actual: position.len(),
            });
        }
        if momentum.reciprocity_defect(&position) > RECIPROCITY_TOL {
            return Err(Error::NotConjugate {
                op: "FourierPlan::new",
                product: momentum.step() * position.step() * n as f64,
            });
        }
        let mut planner = FftPlanner::new();
        let dq = momentum.step();
        let dxi = position.step();
        let q0 = momentum.min();
        let xi0 = position.min();
        let pre_pos = (0..n)
            .map(|k| Complex64::from_polar(1.0, k as f64 * dq * xi0))
            .collect();
        let post_pos = (0..n)
            .map(|j| Complex64::from_polar(dq / (2.0 * PI), q0 * position.node(j)))
            .collect();
        let pre_mom = (0..n)
            .map(|j| Complex64::from_polar(1.0, -(j as f64) * dxi * q0))
            .collect();
        let post_mom = (0..n)
            .map(|k| Complex64::from_polar(dxi, -momentum.node(k) * xi0))
            .collect();
        Ok(Self {
            momentum,
            position,
            to_position: planner.plan_fft_inverse(n),
            to_momentum: planner.plan_fft_forward(n),
            pre_pos,
            post_pos,
            pre_mom,
            post_mom,
        })
    }

    /// Plan onto the centred conjugate of `momentum`.
    pub fn centered(momentum: Grid1D) -> Result<Self> {
        let position = momentum.conjugate(crate::grid::AxisKind::Position);
        Self::new(momentum, position)
    }

    pub fn momentum_grid(&self) -> &Grid1D {
        &self.momentum
    }

    pub fn position_grid(&self) -> &Grid1D {
        &self.position
    }

    pub fn len(&self) -> usize {
        self.momentum.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// In place: momentum samples in, position samples out.
    pub fn to_position_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len());
        for (v, p) in buf.iter_mut().zip(&self.pre_pos) {
            *v *= p;
        }
        self.to_position.process(buf);
        for (v, p) in buf.iter_mut().zip(&self.post_pos) {
            *v *= p;
        }
    }

    /// In place: position samples in, momentum samples out.
    pub fn to_momentum_in_place(&self, buf: &mut [Complex64]) {
        debug_assert_eq!(buf.len(), self.len());
        for (v, p) in buf.iter_mut().zip(&self.pre_mom) {
            *v *= p;
        }
        self.to_momentum.process(buf);
        for (v, p) in buf.iter_mut().zip(&self.post_mom) {
            *v *= p;
        }
    }
}

/// Momentum-space field to position space on a conjugate `target` grid.
pub fn grid_fourier(field: &ComplexField1D, target: &Grid1D) -> Result<ComplexField1D> {
    if field.values.len() != field.grid.len() {
        return Err(Error::Size {
            op: "grid_fourier",
            expected: field.grid.len(),
            actual: field.values.len(),
        });
    }
    let plan = FourierPlan::new(field.grid, *target)?;
    let mut buf = field.values.clone();
    plan.to_position_in_place(&mut buf);
    ComplexField1D::new(*target, buf)
}

/// Position-space field back to momentum space on a conjugate `target`.
pub fn grid_fourier_inverse(field: &ComplexField1D, target: &Grid1D) -> Result<ComplexField1D> {
    if field.values.len() != field.grid.len() {
        return Err(Error::Size {
            op: "grid_fourier_inverse",
            expected: field.grid.len(),
            actual: field.values.len(),
        });
    }
    let plan = FourierPlan::new(*target, field.grid)?;
    let mut buf = field.values.clone();
    plan.to_momentum_in_place(&mut buf);
    ComplexField1D::new(*target, buf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::AxisKind;

    #[test]
    fn rejects_non_conjugate_grids() {
        let q = Grid1D::new(-10.0, 10.0, 64, AxisKind::Momentum).unwrap();
        let xi = Grid1D::new(-10.0, 10.0, 64, AxisKind::Position).unwrap();
        let f = ComplexField1D::from_fn(q, |_| Complex64::new(1.0, 0.0));
        assert!(matches!(
            grid_fourier(&f, &xi),
            Err(Error::NotConjugate { .. })
        ));
    }

    #[test]
    fn rejects_length_mismatch() {
        let q = Grid1D::new(-10.0, 10.0, 64, AxisKind::Momentum).unwrap();
        let f = ComplexField1D {
            grid: q,
            values: vec![Complex64::new(0.0, 0.0); 63],
        };
        assert!(matches!(
            grid_fourier(&f, &q.conjugate(AxisKind::Position)),
            Err(Error::Size { .. })
        ));
    }

    #[test]
    fn gaussian_is_self_reciprocal() {
        let q = Grid1D::new(-20.0, 20.0, 2048, AxisKind::Momentum).unwrap();
        let xi = q.conjugate(AxisKind::Position);
        let f = ComplexField1D::from_fn(q, |q| Complex64::new((-q * q / 2.0).exp(), 0.0));
        let g = grid_fourier(&f, &xi).unwrap();
        let norm = 1.0 / (2.0 * PI).sqrt();
        let err = g
            .grid
            .nodes()
            .iter()
            .zip(&g.values)
            .map(|(x, v)| (v - Complex64::new(norm * (-x * x / 2.0).exp(), 0.0)).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-8, "max error {err}");
    }

    #[test]
    fn off_centre_position_grid() {
        // a shifted target grid exercises the e^{i q0 xi} bookkeeping
        let q = Grid1D::new(-16.0, 16.0, 512, AxisKind::Momentum).unwrap();
        let c = q.conjugate(AxisKind::Position);
        let xi = Grid1D::from_step(-37.3, c.step(), 512, AxisKind::Position).unwrap();
        let f = ComplexField1D::from_fn(q, |q| Complex64::new((-q * q / 2.0).exp(), 0.0));
        let g = grid_fourier(&f, &xi).unwrap();
        for (x, v) in xi.nodes().iter().zip(&g.values) {
            let want = (-x * x / 2.0).exp() / (2.0 * PI).sqrt();
            assert!((v.re - want).abs() < 1e-10 && v.im.abs() < 1e-10);
        }
    }
}
