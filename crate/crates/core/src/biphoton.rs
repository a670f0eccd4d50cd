//! Propagated biphoton amplitude as a single quadrature over the crystal
//! depth,
//!
//! `A(xi+, xi-; zeta) = int_{-1}^{0} ds sqrt(2 pi / (zeta - s D))
//!     e^{i xi-^2 / (2 (zeta - s D))} Ai_Tr[xi+ + s D_e, zeta]`,
//!
//! with `zeta = 2 z / (K_p l^2)` and `Ai_Tr` the closed-form propagated pump.
//!
//! The substitution `u = sqrt(zeta - s D)` turns the measure into the
//! constant `2 sqrt(2 pi) / D` and removes the `1/sqrt` endpoint singularity
//! at `zeta = 0`. The remaining factor `e^{i a / u^2}`, `a = xi-^2 / 2`,
//! oscillates without bound as `u -> 0`; that stretch is summed by
//! integration by parts in `t = 1 / u^2`, where the phase is linear. The
//! rest uses composite Gauss-Legendre panels sized to the local phase and to
//! the Airy oscillation swept by `s D_e`.

use std::f64::consts::{FRAC_PI_2, PI};

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_param, Error, Result};
use crate::grid::{ComplexMap2D, Grid1D, RealMap2D};
use crate::phasematch::{Axis, CrystalParams};
use crate::pump::{propagate_truncated_airy, PumpParams};
use crate::quadrature::GaussLegendre;

const PANEL_ORDER: usize = 8;
/// Eight panels of eight nodes: the 64-node starting rule.
const MIN_PANELS: usize = 8;
/// Phase `a / u^2` beyond which the integration-by-parts tail takes over.
const TAIL_PHASE: f64 = 100.0;
const MAX_DOUBLINGS: u32 = 6;
const DEFAULT_TOL: f64 = 1e-6;

/// `zeta = 2 z / (K_p l^2)` for a physical distance in micrometres.
pub fn biphoton_zeta(z_um: f64, pump: &PumpParams) -> f64 {
    2.0 * pump.zeta(z_um)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiphotonPoint {
    pub xi_plus: f64,
    pub xi_minus: f64,
    pub zeta: f64,
}

impl BiphotonPoint {
    pub fn new(xi_plus: f64, xi_minus: f64, zeta: f64) -> Result<Self> {
        check_param("xi_plus", xi_plus, true, "must be finite")?;
        check_param("xi_minus", xi_minus, true, "must be finite")?;
        check_param("zeta", zeta, zeta >= 0.0, "propagation distance must be >= 0")?;
        Ok(Self {
            xi_plus,
            xi_minus,
            zeta,
        })
    }

    /// From detector positions `x1`, `x2` and distance `z`, all in
    /// micrometres: `xi+- = (x1 +- x2) / (2 l)`.
    pub fn from_positions_um(x1_um: f64, x2_um: f64, z_um: f64, pump: &PumpParams) -> Result<Self> {
        let l2 = 2.0 * pump.scale_um();
        Self::new(
            (x1_um + x2_um) / l2,
            (x1_um - x2_um) / l2,
            biphoton_zeta(z_um, pump),
        )
    }
}

/// Quadrature nodes in `s` with the oscillating phase factor split off:
/// the integral is `sum_k w_k e^{i a inv_u2_k} Ai_Tr(xi+ + s_k D_e)`.
#[derive(Debug, Clone, Default)]
struct Rule {
    s: Vec<f64>,
    inv_u2: Vec<f64>,
    w: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BiphotonSolver {
    pump: PumpParams,
    crystal: CrystalParams,
    axis: Axis,
    tol: f64,
    gl: GaussLegendre,
}

impl BiphotonSolver {
    pub fn new(pump: PumpParams, crystal: CrystalParams, axis: Axis) -> Self {
        Self {
            pump,
            crystal,
            axis,
            tol: DEFAULT_TOL,
            gl: GaussLegendre::new(PANEL_ORDER),
        }
    }

    /// Refinement stops once doubling the node count changes the result by
    /// less than `tol` relative to the integrand's absolute mass.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    fn d_e(&self) -> f64 {
        self.crystal.d_e_on(self.axis)
    }

    fn airy(&self, xi_plus: f64, s: f64, zeta: f64) -> Result<Complex64> {
        propagate_truncated_airy(xi_plus + s * self.d_e(), zeta, self.pump.truncation())
    }

    /// Upper bound on the local angular frequency of `Ai_Tr(xi+ + s D_e)` in
    /// its first argument.
    fn airy_frequency(&self, xi_plus_abs: f64, zeta: f64) -> f64 {
        let shift = 0.25 * zeta * zeta;
        let r = (xi_plus_abs + shift).max((xi_plus_abs + self.d_e().abs() + shift).abs());
        r.sqrt() + 0.5 * zeta + 1.0
    }

    fn check(&self, zeta: f64) -> Result<()> {
        check_param("zeta", zeta, zeta >= 0.0, "propagation distance must be >= 0")?;
        if zeta == 0.0 && self.crystal.d() == 0.0 {
            return Err(Error::Singular {
                op: "biphoton_amplitude",
                reason: "zeta = 0 requires D > 0",
            });
        }
        Ok(())
    }

    /// Start of the panel region in `u`; below it the tail expansion is used.
    fn tail_cut(&self, a: f64, freq: f64) -> f64 {
        if a <= 0.0 {
            return 0.0;
        }
        let d = self.crystal.d();
        // keep both the t^{-3/2} and the Airy drift small against a per unit t
        let p = TAIL_PHASE.max((100.0 * self.d_e().abs() * freq * a / d).sqrt());
        (a / p).sqrt()
    }

    fn rule(&self, zeta: f64, u_start: f64, a: f64, freq: f64, refine: u32) -> Rule {
        let d = self.crystal.d();
        let de_k = self.d_e().abs() * freq;
        let split = f64::from(1u32 << refine);
        let mut rule = Rule::default();
        if d == 0.0 {
            let h = (1.0 / MIN_PANELS as f64).min(if de_k > 0.0 { FRAC_PI_2 / de_k } else { 1.0 });
            let panels = ((1.0 / h).ceil() * split) as usize;
            let pref = (2.0 * PI / zeta).sqrt();
            for p in 0..panels {
                let lo = -1.0 + p as f64 / panels as f64;
                let hi = -1.0 + (p + 1) as f64 / panels as f64;
                for (s, w) in self.gl.mapped(lo, hi) {
                    rule.s.push(s);
                    rule.inv_u2.push(1.0 / zeta);
                    rule.w.push(w * pref);
                }
            }
            return rule;
        }
        let u_lo = zeta.sqrt();
        let u_hi = (zeta + d).sqrt();
        if u_start >= u_hi {
            return rule;
        }
        let jac = 2.0 * (2.0 * PI).sqrt() / d;
        let span = u_hi - u_lo;
        // s measured from u_start, where it is exactly 0 when u_start = sqrt(zeta)
        let s_start = if u_start == u_lo {
            0.0
        } else {
            (zeta - u_start * u_start) / d
        };
        let s_of = |u: f64| s_start - (u - u_start) * (u + u_start) / d;
        let width = |u: f64| {
            let mut h = span / MIN_PANELS as f64;
            if a > 0.0 {
                h = h.min(FRAC_PI_2 * u * u * u / (2.0 * a));
            }
            if de_k > 0.0 {
                // ds/du = 2u/D grows with u; bound it at the far end
                h = h.min(FRAC_PI_2 * d / (2.0 * (u + h) * de_k));
                h = h.min(FRAC_PI_2 * d / (2.0 * (u + h) * de_k));
            }
            h / split
        };
        let mut lo = u_start;
        while lo < u_hi {
            let hi = (lo + width(lo)).min(u_hi);
            let hi = if u_hi - hi < 1e-3 * (hi - lo) { u_hi } else { hi };
            for (u, w) in self.gl.mapped(lo, hi) {
                rule.s.push(s_of(u));
                rule.inv_u2.push(1.0 / (u * u));
                rule.w.push(w * jac);
            }
            lo = hi;
        }
        rule
    }

    /// `int_{u_lo}^{u_cut} du J e^{i a / u^2} g`, as
    /// `int_{T_a}^{T_b} dt (J/2) t^{-3/2} G(t) e^{i a t}` summed by three
    /// rounds of integration by parts.
    fn tail(
        &self,
        airy: &impl Fn(f64) -> Result<Complex64>,
        a: f64,
        zeta: f64,
        u_cut: f64,
    ) -> Result<Complex64> {
        let d = self.crystal.d();
        let jac = 2.0 * (2.0 * PI).sqrt() / d;
        let f = |t: f64| -> Result<Complex64> {
            let s = (zeta - 1.0 / t) / d;
            Ok(airy(s)? * (0.5 * jac * t.powf(-1.5)))
        };
        let boundary = |t: f64| -> Result<Complex64> {
            let h = 1e-3 * t;
            let f0 = f(t)?;
            let fp = f(t + h)?;
            let fm = f(t - h)?;
            let d1 = (fp - fm) / (2.0 * h);
            let d2 = (fp - 2.0 * f0 + fm) / (h * h);
            let i = Complex64::i();
            let series = -i * f0 / a + d1 / (a * a) + i * d2 / (a * a * a);
            Ok(Complex64::from_polar(1.0, a * t) * series)
        };
        let t_a = 1.0 / (u_cut * u_cut);
        let upper = if zeta > 0.0 {
            boundary(1.0 / zeta)?
        } else {
            Complex64::new(0.0, 0.0)
        };
        Ok(upper - boundary(t_a)?)
    }

    /// One pass of the rule at refinement `refine`. `airy(s)` is the
    /// `Ai_Tr` factor; `freq` bounds its angular frequency in `D_e s`.
    fn point_once(
        &self,
        airy: &impl Fn(f64) -> Result<Complex64>,
        a: f64,
        zeta: f64,
        freq: f64,
        refine: u32,
    ) -> Result<(Complex64, f64)> {
        let d = self.crystal.d();
        let mut total = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        let mut u_start = zeta.sqrt();
        if d > 0.0 {
            let u_hi = (zeta + d).sqrt();
            let cut = self.tail_cut(a, freq).min(u_hi);
            if cut > u_start {
                let t = self.tail(airy, a, zeta, cut)?;
                total += t;
                mass += t.norm();
                u_start = cut;
            }
        }
        let rule = self.rule(zeta, u_start, a, freq, refine);
        for k in 0..rule.s.len() {
            let g = airy(rule.s[k])? * rule.w[k];
            total += g * Complex64::from_polar(1.0, a * rule.inv_u2[k]);
            mass += g.norm();
        }
        Ok((total, mass))
    }

    pub fn amplitude(&self, pt: &BiphotonPoint) -> Result<Complex64> {
        self.check(pt.zeta)?;
        let a = 0.5 * pt.xi_minus * pt.xi_minus;
        if self.d_e() == 0.0 {
            // Ai_Tr does not depend on s: A = Ai_Tr(xi+, zeta) S(xi-)
            let ai = propagate_truncated_airy(pt.xi_plus, pt.zeta, self.pump.truncation())?;
            return Ok(ai * self.converge(&|_| Ok(Complex64::new(1.0, 0.0)), a, pt.zeta, 1.0)?);
        }
        let freq = self.airy_frequency(pt.xi_plus.abs(), pt.zeta);
        self.converge(&|s| self.airy(pt.xi_plus, s, pt.zeta), a, pt.zeta, freq)
    }

    fn converge(
        &self,
        airy: &impl Fn(f64) -> Result<Complex64>,
        a: f64,
        zeta: f64,
        freq: f64,
    ) -> Result<Complex64> {
        let (mut prev, _) = self.point_once(airy, a, zeta, freq, 0)?;
        for r in 1..=MAX_DOUBLINGS {
            let (next, mass) = self.point_once(airy, a, zeta, freq, r)?;
            if (next - prev).norm() <= self.tol * mass {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::NoConvergence {
            op: "biphoton_amplitude",
            iterations: MAX_DOUBLINGS as usize,
        })
    }

    /// `A` on `grid_plus x grid_minus` (rows along `xi+`).
    pub fn amplitude_map(
        &self,
        grid_plus: &Grid1D,
        grid_minus: &Grid1D,
        zeta: f64,
    ) -> Result<ComplexMap2D> {
        self.check(zeta)?;
        let xp = grid_plus.nodes();
        let xm = grid_minus.nodes();
        let a_max = xm.iter().map(|x| 0.5 * x * x).fold(0.0, f64::max);
        let xp_abs = xp.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let freq = self.airy_frequency(xp_abs, zeta);
        let needs_tail = self.crystal.d() > 0.0 && self.tail_cut(a_max, freq) > zeta.sqrt();
        let values = if self.d_e() == 0.0 {
            self.map_separable(&xp, &xm, zeta)?
        } else if needs_tail {
            self.map_pointwise(&xp, &xm, zeta)?
        } else {
            self.map_shared(&xp, &xm, zeta, a_max, freq)?
        };
        Ok(ComplexMap2D {
            rows: *grid_plus,
            cols: *grid_minus,
            values,
        })
    }

    fn map_separable(&self, xp: &[f64], xm: &[f64], zeta: f64) -> Result<Array2<Complex64>> {
        let w = self.pump.truncation();
        let rows: Vec<Complex64> = xp
            .par_iter()
            .map(|&p| propagate_truncated_airy(p, zeta, w))
            .collect::<Result<_>>()?;
        let cols: Vec<Complex64> = xm
            .par_iter()
            .map(|&m| self.converge(&|_| Ok(Complex64::new(1.0, 0.0)), 0.5 * m * m, zeta, 1.0))
            .collect::<Result<_>>()?;
        Ok(Array2::from_shape_fn((xp.len(), xm.len()), |(i, j)| rows[i] * cols[j]))
    }

    fn map_pointwise(&self, xp: &[f64], xm: &[f64], zeta: f64) -> Result<Array2<Complex64>> {
        let data: Vec<Complex64> = xp
            .par_iter()
            .map(|&p| {
                xm.iter()
                    .map(|&m| {
                        self.amplitude(&BiphotonPoint {
                            xi_plus: p,
                            xi_minus: m,
                            zeta,
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(Array2::from_shape_vec((xp.len(), xm.len()), data).expect("rows * cols entries"))
    }

    /// One rule for the whole map: `A = G E` with `G[i,k] = w_k Ai_Tr(xi+_i,
    /// s_k)` and `E[k,j] = e^{i a_j / u_k^2}`.
    fn map_shared(
        &self,
        xp: &[f64],
        xm: &[f64],
        zeta: f64,
        a_max: f64,
        freq: f64,
    ) -> Result<Array2<Complex64>> {
        let once = |refine: u32| -> Result<Array2<Complex64>> {
            let rule = self.rule(zeta, zeta.sqrt(), a_max, freq, refine);
            let k = rule.s.len();
            let rows: Vec<Vec<Complex64>> = xp
                .par_iter()
                .map(|&p| {
                    (0..k)
                        .map(|i| self.airy(p, rule.s[i], zeta).map(|g| g * rule.w[i]))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            let g = Array2::from_shape_fn((xp.len(), k), |(i, j)| rows[i][j]);
            let e = Array2::from_shape_fn((k, xm.len()), |(i, j)| {
                Complex64::from_polar(1.0, 0.5 * xm[j] * xm[j] * rule.inv_u2[i])
            });
            Ok(g.dot(&e))
        };
        let mut prev = once(0)?;
        for r in 1..=MAX_DOUBLINGS {
            let next = once(r)?;
            let scale = next.iter().map(|v| v.norm()).fold(0.0, f64::max);
            let diff = next
                .iter()
                .zip(prev.iter())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if diff <= self.tol * scale {
                return Ok(next);
            }
            prev = next;
        }
        Err(Error::NoConvergence {
            op: "biphoton_map",
            iterations: MAX_DOUBLINGS as usize,
        })
    }
}

/// `A(xi+, xi-; zeta)` with the default solver.
pub fn biphoton_amplitude(
    pt: &BiphotonPoint,
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
) -> Result<Complex64> {
    BiphotonSolver::new(*pump, *crystal, axis).amplitude(pt)
}

/// `|A|^2` on `grid_plus x grid_minus` for each physical distance in
/// `z_list_um`, each map max-normalized.
pub fn biphoton_map(
    grid_plus: &Grid1D,
    grid_minus: &Grid1D,
    z_list_um: &[f64],
    pump: &PumpParams,
    crystal: &CrystalParams,
    axis: Axis,
) -> Result<Vec<RealMap2D>> {
    let solver = BiphotonSolver::new(*pump, *crystal, axis);
    z_list_um
        .iter()
        .map(|&z| {
            let zeta = biphoton_zeta(z, pump);
            Ok(solver
                .amplitude_map(grid_plus, grid_minus, zeta)?
                .intensity()
                .normalize_max())
        })
        .collect()
}
