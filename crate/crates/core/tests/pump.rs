mod common;

use std::f64::consts::PI;

use airyspdc::pump::main_lobe_peak;
use airyspdc::{
    propagate_truncated_airy, pump_intensity_1d, pump_intensity_2d, pump_propagation_map,
    truncated_airy, AxisKind, Grid1D, PumpParams,
};
use common::{angular_spectrum_field, maclaurin_airy};
use proptest::prelude::*;

fn analytic_norm(w: f64) -> f64 {
    (2.0 * w.powi(3) / 3.0).exp() / (8.0 * PI * w).sqrt()
}

#[test]
fn initial_profile_matches_series() {
    for &x in &[-4.8, -2.0, -0.5, 0.0, 1.0, 1.9] {
        let want = maclaurin_airy(x) * (0.1 * x).exp();
        assert!((truncated_airy(x, 0.1) - want).abs() < 1e-14, "x = {x}");
    }
}

#[test]
fn zero_distance_reproduces_initial_profile() {
    for w in [0.0, 0.02, 0.1, 0.5] {
        for k in 0..200 {
            let xi = -30.0 + 0.2 * k as f64;
            let v = propagate_truncated_airy(xi, 0.0, w).unwrap();
            assert_eq!(v.im, 0.0);
            assert!((v.re - truncated_airy(xi, w)).abs() <= 1e-15 * v.re.abs().max(1e-300));
        }
    }
}

#[test]
fn norm_is_conserved() {
    let w = 0.1;
    let g = Grid1D::new(-250.0, 25.0, 1 << 16, AxisKind::Position).unwrap();
    let weights = g.trapezoid_weights();
    let exact = analytic_norm(w);
    for zeta in [0.0, 0.5, 1.0, 2.0, 3.5, 5.0] {
        let i = pump_intensity_1d(&g, zeta, w).unwrap();
        let n: f64 = i.iter().zip(&weights).map(|(a, b)| a * b).sum();
        assert!(((n - exact) / exact).abs() < 1e-6, "zeta = {zeta}: {n} vs {exact}");
    }
}

#[test]
fn closed_form_matches_angular_spectrum() {
    let w = 0.1;
    for zeta in [0.7, 2.0, 3.979] {
        for &x in &[-12.0, -6.5, -2.0, -0.3, 0.8, 3.0] {
            let got = propagate_truncated_airy(x, zeta, w).unwrap();
            let want = angular_spectrum_field(x, zeta, w, 20.0, 40001);
            assert!((got - want).norm() < 1e-8, "zeta = {zeta}, x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn main_lobe_follows_parabola() {
    let w = 0.02;
    let x0 = main_lobe_peak(0.0, w, -1.0188).unwrap();
    for k in 0..=16 {
        let zeta = 0.25 * k as f64;
        let drift = zeta * zeta / 4.0;
        let peak = main_lobe_peak(zeta, w, x0 + drift).unwrap();
        assert!((peak - x0 - drift).abs() < 0.05, "zeta = {zeta}: peak {peak}");
    }
}

#[test]
fn propagation_map_rows_are_profiles() {
    let g = Grid1D::new(-20.0, 5.0, 64, AxisKind::Position).unwrap();
    let z = Grid1D::new(0.0, 4.0, 8, AxisKind::Position).unwrap();
    let m = pump_propagation_map(&g, &z, 0.1).unwrap();
    assert_eq!(m.values.dim(), (8, 64));
    let row = pump_intensity_1d(&g, z.node(5), 0.1).unwrap();
    for (j, v) in row.iter().enumerate() {
        assert_eq!(m.values[[5, j]], *v);
    }
}

#[test]
fn transverse_pump_peak_moves_diagonally() {
    let p = PumpParams::new(0.1, 100.0, 0.5).unwrap();
    let g = Grid1D::new(-15.0, 8.0, 461, AxisKind::Position).unwrap();
    let argmax = |m: &airyspdc::RealMap2D| {
        let (mut best, mut at) = (0.0, (0, 0));
        for ((i, j), &v) in m.values.indexed_iter() {
            if v > best {
                best = v;
                at = (i, j);
            }
        }
        (g.node(at.0), g.node(at.1))
    };
    let (x0, y0) = argmax(&pump_intensity_2d(&g, &g, 0.0, &p).unwrap());
    let (x1, y1) = argmax(&pump_intensity_2d(&g, &g, 25.0e4, &p).unwrap());
    let zeta = p.zeta(25.0e4);
    assert!((x0 - y0).abs() < 1e-12 && (x1 - y1).abs() < 1e-12);
    assert!((x1 - x0 - zeta * zeta / 4.0).abs() < 0.1, "{x0} -> {x1}");
}

proptest! {
    #[test]
    fn propagated_field_is_finite(xi in -40.0f64..15.0, zeta in 0.0f64..6.0, w in 0.0f64..0.9) {
        let v = propagate_truncated_airy(xi, zeta, w).unwrap();
        prop_assert!(v.re.is_finite() && v.im.is_finite());
    }
}
