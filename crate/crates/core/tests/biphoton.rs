mod common;

use airyspdc::biphoton::biphoton_zeta;
use airyspdc::{
    biphoton_amplitude, biphoton_map, propagate_truncated_airy, Axis, AxisKind, BiphotonPoint,
    BiphotonSolver, ComplexMap2D, CrystalParams, Error, Grid1D, Normalization,
};
use common::{brute_force_biphoton, crystal, map_pump};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;

const Z_UM: f64 = 25.0e4;

fn plus_grid(n: usize) -> Grid1D {
    Grid1D::new(-8.0, 2.0, n, AxisKind::Position).unwrap()
}

fn minus_grid(n: usize) -> Grid1D {
    Grid1D::new(-3.0, 3.0, n, AxisKind::Position).unwrap()
}

fn max_rel_deviation(a: &ComplexMap2D, oracle: &[Vec<Complex64>]) -> f64 {
    let scale = oracle.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for (i, row) in oracle.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            worst = worst.max((a.values[[i, j]] - v).norm());
        }
    }
    worst / scale
}

fn singular_ratio(a: &ComplexMap2D) -> f64 {
    let (r, c) = a.values.dim();
    let m = DMatrix::from_fn(r, c, |i, j| a.values[[i, j]]);
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s[1] / s[0]
}

#[test]
fn closed_form_matches_double_integral() {
    let pump = map_pump();
    let c = crystal(1.0, &pump);
    let zeta = biphoton_zeta(Z_UM, &pump);
    let (gp, gm) = (plus_grid(32), minus_grid(32));
    for axis in [Axis::Ordinary, Axis::Extraordinary] {
        let oracle = brute_force_biphoton(
            &gp.nodes(),
            &gm.nodes(),
            zeta,
            pump.truncation(),
            c.d(),
            c.d_e_on(axis),
        );
        let map = BiphotonSolver::new(pump, c, axis)
            .amplitude_map(&gp, &gm, zeta)
            .unwrap();
        let dev = max_rel_deviation(&map, &oracle);
        assert!(dev < 1e-4, "{}: deviation {dev:e}", axis.as_str());
        // pointwise solver on a few nodes as well
        for (i, j) in [(0, 0), (20, 7), (31, 31), (26, 16)] {
            let pt = BiphotonPoint::new(gp.node(i), gm.node(j), zeta).unwrap();
            let v = biphoton_amplitude(&pt, &pump, &c, axis).unwrap();
            let scale = oracle.iter().flatten().map(|v| v.norm()).fold(0.0, f64::max);
            assert!((v - oracle[i][j]).norm() < 1e-4 * scale);
        }
    }
}

#[test]
fn parity_in_difference_coordinate_is_exact() {
    let pump = map_pump();
    let c = crystal(1.0, &pump);
    let zeta = biphoton_zeta(Z_UM, &pump);
    for axis in [Axis::Ordinary, Axis::Extraordinary] {
        let solver = BiphotonSolver::new(pump, c, axis);
        for &(p, m) in &[(-3.1, 0.4), (0.7, 2.25), (-7.0, 1.0e-3), (1.5, 5.5)] {
            let a = solver.amplitude(&BiphotonPoint::new(p, m, zeta).unwrap()).unwrap();
            let b = solver.amplitude(&BiphotonPoint::new(p, -m, zeta).unwrap()).unwrap();
            assert_eq!(a, b);
        }
        let g = Grid1D::new(-3.0, 3.0, 33, AxisKind::Position).unwrap();
        let map = solver.amplitude_map(&plus_grid(16), &g, zeta).unwrap();
        for i in 0..16 {
            for j in 0..33 {
                assert_eq!(map.values[[i, j]].norm(), map.values[[i, 32 - j]].norm());
            }
        }
    }
}

#[test]
fn refinement_converges() {
    let pump = map_pump();
    let c = crystal(1.0, &pump);
    let zeta = biphoton_zeta(Z_UM, &pump);
    for axis in [Axis::Ordinary, Axis::Extraordinary] {
        let coarse = BiphotonSolver::new(pump, c, axis).with_tolerance(1e-7);
        let fine = BiphotonSolver::new(pump, c, axis).with_tolerance(1e-11);
        for &(p, m) in &[(-2.0, 0.5), (0.3, -2.9), (-6.4, 1.7)] {
            let pt = BiphotonPoint::new(p, m, zeta).unwrap();
            let a = coarse.amplitude(&pt).unwrap();
            let b = fine.amplitude(&pt).unwrap();
            assert!((a - b).norm() < 1e-6 * b.norm().max(1e-3));
        }
    }
}

#[test]
fn thin_limit_is_propagated_pump() {
    let pump = map_pump();
    let zeta = 2.0;
    let c = CrystalParams::from_dimensionless(1e-9, 0.0).unwrap();
    let solver = BiphotonSolver::new(pump, c, Axis::Ordinary);
    let m = 0.8;
    let reference = solver.amplitude(&BiphotonPoint::new(0.0, m, zeta).unwrap()).unwrap()
        / propagate_truncated_airy(0.0, zeta, 0.1).unwrap();
    for &p in &[-9.0, -4.5, -1.0, 0.5, 2.0] {
        let a = solver.amplitude(&BiphotonPoint::new(p, m, zeta).unwrap()).unwrap();
        let want = reference * propagate_truncated_airy(p, zeta, 0.1).unwrap();
        assert!((a - want).norm() < 1e-9 * reference.norm());
    }
    // the difference-coordinate factor has constant modulus
    let r0 = solver.amplitude(&BiphotonPoint::new(-1.0, 0.0, zeta).unwrap()).unwrap();
    let r1 = solver.amplitude(&BiphotonPoint::new(-1.0, 2.5, zeta).unwrap()).unwrap();
    assert!((r0.norm() - r1.norm()).abs() < 1e-8 * r0.norm());
}

#[test]
fn ordinary_axis_map_is_separable() {
    let pump = map_pump();
    let zeta = biphoton_zeta(Z_UM, &pump);
    let (gp, gm) = (plus_grid(40), minus_grid(40));
    for d in [1e-6, 7.958e-3, 1.0] {
        let c = CrystalParams::from_dimensionless(d, 0.0).unwrap();
        let map = BiphotonSolver::new(pump, c, Axis::Ordinary)
            .amplitude_map(&gp, &gm, zeta)
            .unwrap();
        let r = singular_ratio(&map);
        assert!(r < 1e-6, "D = {d}: s2/s1 = {r:e}");
    }
    let c = crystal(1.0, &pump);
    let map = BiphotonSolver::new(pump, c, Axis::Extraordinary)
        .amplitude_map(&gp, &gm, zeta)
        .unwrap();
    // walk-off couples the coordinates well above the rank-one tolerance
    assert!(singular_ratio(&map) > 1e-5);
}

/// Shift of the `xi+` centroid of `|A|^2` (summed over `xi-`) between the
/// extraordinary and ordinary axes at `zeta = 0`.
fn centroid_shift(d: f64, d_e: f64) -> f64 {
    let pump = map_pump();
    let c = CrystalParams::from_dimensionless(d, d_e).unwrap();
    let gp = Grid1D::new(-30.0, 10.0, 81, AxisKind::Position).unwrap();
    let gm = Grid1D::new(-1.0, 1.0, 201, AxisKind::Position).unwrap();
    let x = gp.nodes();
    let centroid = |axis: Axis| {
        let m = BiphotonSolver::new(pump, c, axis)
            .amplitude_map(&gp, &gm, 0.0)
            .unwrap()
            .intensity();
        let (mut num, mut den) = (0.0, 0.0);
        for ((i, _), v) in m.values.indexed_iter() {
            num += x[i] * v;
            den += v;
        }
        num / den
    };
    centroid(Axis::Extraordinary) - centroid(Axis::Ordinary)
}

#[test]
fn walkoff_shifts_the_sum_profile() {
    // the s-average of xi+ + s D_e moves the profile by D_e / 2, up to a
    // correction quadratic in D_e; extrapolate it away
    let d = crystal(1.0, &map_pump()).d();
    let r1 = centroid_shift(d, 0.05) / 0.05;
    let r2 = centroid_shift(d, 0.1) / 0.1;
    let limit = 2.0 * r1 - r2;
    assert!(r1 > 0.5 && r2 > r1, "ratios {r1} {r2}");
    assert!((limit - 0.5).abs() < 0.025, "extrapolated ratio {limit}");
}

#[test]
fn zero_distance_needs_a_crystal() {
    let pump = map_pump();
    let thin = CrystalParams::from_dimensionless(0.0, 0.0).unwrap();
    let pt = BiphotonPoint::new(0.0, 0.0, 0.0).unwrap();
    assert!(matches!(
        biphoton_amplitude(&pt, &pump, &thin, Axis::Ordinary),
        Err(Error::Singular { .. })
    ));
    assert!(BiphotonPoint::new(0.0, 0.0, -1.0).is_err());
    let maps = biphoton_map(
        &plus_grid(24),
        &minus_grid(24),
        &[0.0, Z_UM],
        &pump,
        &crystal(1.0, &pump),
        Axis::Extraordinary,
    )
    .unwrap();
    for m in &maps {
        assert_eq!(m.normalization, Normalization::Max1);
        assert!(m.values.iter().all(|v| v.is_finite() && *v >= 0.0));
        assert!((m.max() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn parity_holds_everywhere(p in -10.0f64..4.0, m in 0.0f64..6.0, zeta in 0.05f64..6.0, ord in any::<bool>()) {
        let pump = map_pump();
        let c = crystal(1.0, &pump);
        let axis = if ord { Axis::Ordinary } else { Axis::Extraordinary };
        let a = biphoton_amplitude(&BiphotonPoint::new(p, m, zeta).unwrap(), &pump, &c, axis).unwrap();
        let b = biphoton_amplitude(&BiphotonPoint::new(p, -m, zeta).unwrap(), &pump, &c, axis).unwrap();
        prop_assert_eq!(a, b);
    }
}
