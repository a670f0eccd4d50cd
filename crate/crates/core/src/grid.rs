//! Uniform sampling axes and the sampled fields that live on them.
//!
//! Grids are endpoint-inclusive: `n` nodes at `min + i * (max - min) / (n - 1)`.
//! Fields are sampled at the nodes, never at cell centres.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// What a grid coordinate measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxisKind {
    /// Dimensionless transverse position `xi = x / l`.
    Position,
    /// Dimensionless transverse momentum `q = kappa * l`.
    Momentum,
    /// Physical detector-plane coordinate in millimetres.
    DetectorMm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    min: f64,
    max: f64,
    n: usize,
    kind: AxisKind,
}

impl Grid1D {
    pub fn new(min: f64, max: f64, n: usize, kind: AxisKind) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "grid samples",
                value: n as f64,
                constraint: "a grid needs at least two nodes",
            });
        }
        if !(min.is_finite() && max.is_finite() && max > min) {
            return Err(Error::InvalidParameter {
                name: "grid max",
                value: max,
                constraint: "grid bounds must be finite with max > min",
            });
        }
        Ok(Self { min, max, n, kind })
    }

    /// FFT-style layout `[-h, h - 2h/n]` with spacing `2h/n`. For even `n`
    /// the node with index `n/2` is exactly zero.
    pub fn centered(half_width: f64, n: usize, kind: AxisKind) -> Result<Self> {
        let step = 2.0 * half_width / n as f64;
        Self::new(-half_width, -half_width + step * (n - 1) as f64, n, kind)
    }

    /// Grid with spacing `step` starting at `min`.
    pub fn from_step(min: f64, step: f64, n: usize, kind: AxisKind) -> Result<Self> {
        Self::new(min, min + step * (n.max(2) - 1) as f64, n, kind)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        self.min + self.step() * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n).map(|i| self.min + h * i as f64).collect()
    }

    /// Reciprocal grid with the same node count and `dq * dxi = 2 pi / n`,
    /// laid out so that its node `n/2` sits at zero.
    pub fn conjugate(&self, kind: AxisKind) -> Self {
        let step = 2.0 * PI / (self.n as f64 * self.step());
        let min = -step * (self.n / 2) as f64;
        Self {
            min,
            max: min + step * (self.n - 1) as f64,
            n: self.n,
            kind,
        }
    }

    /// `dq * dxi * n` relative to `2 pi`; zero for exactly conjugate grids.
    pub fn reciprocity_defect(&self, other: &Grid1D) -> f64 {
        let product = self.step() * other.step() * self.n as f64;
        (product - 2.0 * PI).abs() / (2.0 * PI)
    }

    /// Maps every node through `f`, which must be affine; used for unit
    /// changes such as detector millimetres to dimensionless momentum.
    pub fn map_affine(&self, kind: AxisKind, f: impl Fn(f64) -> f64) -> Result<Self> {
        let a = f(self.min);
        let b = f(self.max);
        if a <= b {
            Self::new(a, b, self.n, kind)
        } else {
            Self::new(b, a, self.n, kind)
        }
    }

    /// Index of the node equal to `x` up to `1e-9` of the spacing.
    pub fn index_of(&self, x: f64) -> Option<usize> {
        let h = self.step();
        let t = (x - self.min) / h;
        let i = t.round();
        if i < 0.0 || i as usize >= self.n {
            return None;
        }
        if (t - i).abs() <= 1e-9 {
            Some(i as usize)
        } else {
            None
        }
    }

    /// Composite trapezoid weights including the spacing.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let h = self.step();
        let mut w = vec![h; self.n];
        w[0] = 0.5 * h;
        w[self.n - 1] = 0.5 * h;
        w
    }
}

/// How a sampled quantity has been scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// No rescaling; only meaningful up to the dropped physical constants.
    Raw,
    /// Largest value equals one.
    Max1,
    /// Trapezoid integral (or sum, for weight lists) equals one.
    Sum1,
    /// A slice divided by the full two-dimensional integral.
    Conditional,
}

impl Normalization {
    pub fn as_str(&self) -> &'static str {
        match self {
            Normalization::Raw => "raw",
            Normalization::Max1 => "max1",
            Normalization::Sum1 => "sum1",
            Normalization::Conditional => "conditional",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField1D {
    pub grid: Grid1D,
    pub values: Vec<Complex64>,
}

impl ComplexField1D {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Size {
                op: "ComplexField1D::new",
                expected: grid.len(),
                actual: values.len(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.nodes().into_iter().map(f).collect();
        Self { grid, values }
    }

    pub fn norm_sqr(&self) -> f64 {
        let w = self.grid.trapezoid_weights();
        self.values
            .iter()
            .zip(&w)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum()
    }
}

/// Real 1D profile with its normalization tag.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile1D {
    pub grid: Grid1D,
    pub values: Vec<f64>,
    pub normalization: Normalization,
}

impl Profile1D {
    pub fn integral(&self) -> f64 {
        self.grid
            .trapezoid_weights()
            .iter()
            .zip(&self.values)
            .map(|(w, v)| w * v)
            .sum()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Real map sampled on `rows x cols`; `values[[i, j]]` belongs to
/// `(rows.node(i), cols.node(j))`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMap2D {
    pub rows: Grid1D,
    pub cols: Grid1D,
    pub values: Array2<f64>,
    pub normalization: Normalization,
}

impl RealMap2D {
    pub fn new(rows: Grid1D, cols: Grid1D, values: Array2<f64>) -> Result<Self> {
        let (r, c) = values.dim();
        if r != rows.len() {
            return Err(Error::Size {
                op: "RealMap2D::new",
                expected: rows.len(),
                actual: r,
            });
        }
        if c != cols.len() {
            return Err(Error::Size {
                op: "RealMap2D::new",
                expected: cols.len(),
                actual: c,
            });
        }
        Ok(Self {
            rows,
            cols,
            values,
            normalization: Normalization::Raw,
        })
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Rescales so the largest entry is one. An all-zero map is left as is.
    pub fn normalize_max(mut self) -> Self {
        let m = self.max();
        if m > 0.0 && m.is_finite() {
            self.values.mapv_inplace(|v| v / m);
        }
        self.normalization = Normalization::Max1;
        self
    }

    /// Double trapezoid integral over both axes.
    pub fn integral(&self) -> f64 {
        let wr = self.rows.trapezoid_weights();
        let wc = self.cols.trapezoid_weights();
        let mut total = 0.0;
        for (i, row) in self.values.outer_iter().enumerate() {
            let s: f64 = row.iter().zip(&wc).map(|(v, w)| v * w).sum();
            total += wr[i] * s;
        }
        total
    }

    pub fn normalize_sum(mut self) -> Self {
        let s = self.integral();
        if s > 0.0 && s.is_finite() {
            self.values.mapv_inplace(|v| v / s);
        }
        self.normalization = Normalization::Sum1;
        self
    }
}

/// Complex map on `rows x cols`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMap2D {
    pub rows: Grid1D,
    pub cols: Grid1D,
    pub values: Array2<Complex64>,
}

impl ComplexMap2D {
    pub fn intensity(&self) -> RealMap2D {
        RealMap2D {
            rows: self.rows,
            cols: self.cols,
            values: self.values.mapv(|v| v.norm_sqr()),
            normalization: Normalization::Raw,
        }
    }

    pub fn modulus(&self) -> RealMap2D {
        RealMap2D {
            rows: self.rows,
            cols: self.cols,
            values: self.values.mapv(|v| v.norm()),
            normalization: Normalization::Raw,
        }
    }
}
