//! Independent oracles and shared scenario parameters for the integration
//! tests. Nothing here calls the library's Airy or propagation code.

#![allow(dead_code)]

use std::f64::consts::PI;

use airyspdc::{AxisKind, CrystalParams, Grid1D, PumpParams};
use num_complex::Complex64;

/// `(Re z, Im z, Re Ai, Im Ai)` from mpmath at 50 digits.
pub const MPMATH_AIRY: &[(f64, f64, f64, f64)] = &[
    (0.22372187369216567, -0.4471560390195649, 0.2902535295332629, 0.1157496525162419),
    (-0.2917301911521892, -0.4060708011791874, 0.4387062988197082, 0.10372573885484024),
    (0.9968288775459907, -1.1208622524157017, 0.039538506097436886, 0.16753885738050467),
    (-2.7156403715831936, -1.2748715120464076, -0.8314489746391583, -1.5794542033653738),
    (-0.7530900754693423, -4.436536412363769, -40.70374546395774, -23.377052440123006),
    (3.9821861042911673, 2.0957561477400795, -0.0005967481152223605, 0.0015402830264346378),
    (-5.933347605336813, 0.891844265689869, -1.3019072808168346, 0.9173523491106255),
    (-3.7798798592775498, 4.659668255297573, -404.9719053571238, 2451.9913141974707),
    (5.925648244832083, 3.3356697795972616, -1.6804781236740078e-05, -3.137379595770919e-05),
    (6.878449689378164, 2.1276583068466226, 1.2922361085881223e-06, 9.00010864949423e-07),
    (-6.646918882277612, -2.7673939676925916, -191.3991469212865, 123.59433320115298),
    (-2.458813416708251, -8.657611482494204, 2440142.4853161685, 2020702.3334570318),
    (8.084543200445431, -3.954764372264365, 6.284528181672629e-08, -1.243247473046599e-07),
    (11.484582797216506, -3.4791317844943297, 1.5656002253254247e-12, -1.2129051793263141e-12),
    (-3.3029396491347756, 11.53648948658878, -14402453744.798319, 21656652951.402496),
    (16.067601895135148, 8.1137025666122, 2.980637103684318e-20, -1.7588800252906854e-18),
    (-12.738913091577441, 12.716921531771629, 3.5592222965404668e+19, 3.738095260679141e+18),
    (-24.80629483937204, 3.1060805434090266, 567132.8481720781, -350523.25898872764),
    (21.76409347843798, -12.301391590458916, -1.7325018042782123e-28, 1.4377506884914765e-27),
    (29.927894046616213, -2.0787395061704728, 2.23726488053508e-49, -5.350978453675367e-49),
    (-29.094295587894436, -7.315870709917335, 1.1477698660161956e+16, -1.4315793178591e+16),
    (14.746400627018742, 26.12553671309857, -0.5890929266073858, -0.09464971891740481),
    (26.89706582363677, 13.287130995024883, 1.813817949921228e-38, -1.190289630635663e-38),
    (-30.0, 0.0, -0.08796818845684216, 0.0),
    (-25.0, 0.0, 0.16352657883042948, 0.0),
    (-17.5, 0.0, -0.17266059066222628, 0.0),
    (-10.0, 0.0, 0.04024123848644319, 0.0),
    (-5.5, 0.0, 0.017781541276574976, 0.0),
    (-1.0, 0.0, 0.5355608832923521, 0.0),
    (2.0, 0.0, 0.03492413042327438, 0.0),
    (5.0, 0.0, 0.00010834442813607442, 0.0),
    (8.0, 0.0, 4.6922076160992316e-08, 0.0),
    (15.0, 0.0, 2.1649625207379925e-18, 0.0),
    (25.0, 0.0, 8.116026824691387e-38, 0.0),
    (30.0, 0.0, 3.2082175915504954e-49, 0.0),
];

/// First zero of `Ai` from mpmath.
pub const AIRY_FIRST_ZERO: f64 = -2.338_107_410_459_767;

/// Plain `f64` Maclaurin series of `Ai` on the real axis; accurate to a few
/// ulps for `-5 < x < 2`.
pub fn maclaurin_airy(x: f64) -> f64 {
    let c1 = 0.355_028_053_887_817_2;
    let c2 = 0.258_819_403_792_806_8;
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut tf, mut tg) = (1.0, x);
    for k in 1..200 {
        let k3 = 3.0 * k as f64;
        tf *= x3 / ((k3 - 1.0) * k3);
        tg *= x3 / (k3 * (k3 + 1.0));
        f += tf;
        g += tg;
        if tf.abs() < 1e-18 * f.abs().max(1e-300) && tg.abs() < 1e-18 * g.abs().max(1e-300) {
            break;
        }
    }
    c1 * f - c2 * g
}

/// Bisection on `f` over a bracketing interval.
pub fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 || (b - a).abs() < 1e-15 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// `e^{i (Q + i w)^3 / 3}`, written out independently of the library.
pub fn pump_spectrum(q: f64, w: f64) -> Complex64 {
    // (Q + i w)^3 = Q^3 - 3 Q w^2 + i (3 Q^2 w - w^3)
    let re = q * q * q - 3.0 * q * w * w;
    let im = 3.0 * q * q * w - w * w * w;
    Complex64::new(0.0, 1.0) * Complex64::new(re, im) / 3.0
}

/// Direct trapezoid sum of `int dQ/(2 pi) e^{i Q x} e^{-i zeta Q^2 / 2} A~(Q)`.
pub fn angular_spectrum_field(x: f64, zeta: f64, w: f64, q_max: f64, n: usize) -> Complex64 {
    let h = 2.0 * q_max / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let q = -q_max + h * k as f64;
        let wt = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        let e = pump_spectrum(q, w) + Complex64::new(0.0, q * x - 0.5 * zeta * q * q);
        sum += e.exp() * wt;
    }
    sum * h / (2.0 * PI)
}

/// `int dq e^{i q xi} e^{-i tau q^2 / 2}` by rotating the contour to
/// `q = e^{-i pi/4} t`, where the Gaussian decays, then trapezoid in `t`.
pub fn fresnel_by_rotation(xi: f64, tau: f64) -> Complex64 {
    let rot = Complex64::from_polar(1.0, -PI / 4.0);
    let centre = xi / (2.0f64.sqrt() * tau);
    let half = 12.0 / tau.sqrt() + centre.abs();
    let n = 4001;
    let h = 2.0 * half / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let t = centre - half + h * k as f64;
        let q = rot * t;
        let e = Complex64::new(0.0, 1.0) * q * xi - Complex64::new(0.0, 0.5 * tau) * q * q;
        let wt = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        sum += e.exp() * wt;
    }
    sum * rot * h
}

/// The double-integral form of the biphoton amplitude,
/// `int ds int dq e^{i q xi-} e^{-i (zeta - s D) q^2 / 2}
///  int dQ e^{i Q (xi+ + s D_e)} e^{-i zeta Q^2 / 2} A~(Q)`,
/// on `xi_plus x xi_minus`, divided by the constant `2 pi e^{-i pi/4}` that
/// separates it from the single-integral form. Simpson in `s`, trapezoid in
/// `Q` and in the rotated `q` contour.
pub fn brute_force_biphoton(
    xi_plus: &[f64],
    xi_minus: &[f64],
    zeta: f64,
    w: f64,
    d: f64,
    d_e: f64,
) -> Vec<Vec<Complex64>> {
    let ns = 129;
    let hs = 1.0 / (ns - 1) as f64;
    let s_nodes: Vec<(f64, f64)> = (0..ns)
        .map(|j| {
            let simpson = if j == 0 || j == ns - 1 {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            (-1.0 + hs * j as f64, simpson * hs / 3.0)
        })
        .collect();
    let q_max = 18.0;
    let nq = 9001;
    let hq = 2.0 * q_max / (nq - 1) as f64;
    let spectrum: Vec<(f64, Complex64)> = (0..nq)
        .map(|k| {
            let q = -q_max + hq * k as f64;
            let wt = if k == 0 || k == nq - 1 { 0.5 } else { 1.0 };
            let e = pump_spectrum(q, w) - Complex64::new(0.0, 0.5 * zeta * q * q);
            (q, e.exp() * wt * hq)
        })
        .collect();
    // Q-integral for every (xi+, s); it does not depend on xi-
    let q_part: Vec<Vec<Complex64>> = xi_plus
        .iter()
        .map(|&xp| {
            s_nodes
                .iter()
                .map(|&(s, _)| {
                    let x = xp + s * d_e;
                    spectrum
                        .iter()
                        .map(|(q, a)| a * Complex64::from_polar(1.0, q * x))
                        .sum()
                })
                .collect()
        })
        .collect();
    let fresnel: Vec<Vec<Complex64>> = xi_minus
        .iter()
        .map(|&xm| {
            s_nodes
                .iter()
                .map(|&(s, _)| fresnel_by_rotation(xm, zeta - s * d))
                .collect()
        })
        .collect();
    let norm = Complex64::from_polar(2.0 * PI, -PI / 4.0);
    q_part
        .iter()
        .map(|qp| {
            fresnel
                .iter()
                .map(|fr| {
                    let mut total = Complex64::new(0.0, 0.0);
                    for (j, &(_, wt)) in s_nodes.iter().enumerate() {
                        total += qp[j] * fr[j] * wt;
                    }
                    total / norm
                })
                .collect()
        })
        .collect()
}

/// Parameters shared by the entanglement scenarios: `w = 0.05`,
/// `l = 100 um`, `lambda = 0.5 um`.
pub fn schmidt_pump() -> PumpParams {
    PumpParams::new(0.05, 100.0, 0.5).unwrap()
}

/// Pump of the propagation and correlation-map scenarios, `w = 0.1`.
pub fn map_pump() -> PumpParams {
    PumpParams::new(0.1, 100.0, 0.5).unwrap()
}

pub const WALKOFF: f64 = 0.2;
pub const FOCAL_MM: f64 = 100.0;

pub fn crystal(length_mm: f64, pump: &PumpParams) -> CrystalParams {
    CrystalParams::new(length_mm, WALKOFF, pump).unwrap()
}

/// Detector window of the far-field Schmidt analysis.
pub fn schmidt_far_grid(n: usize) -> Grid1D {
    Grid1D::new(-5.0, 5.0, n, AxisKind::DetectorMm).unwrap()
}

/// Detector window of the near-field Schmidt analysis.
pub fn schmidt_near_grid(n: usize) -> Grid1D {
    Grid1D::new(-3.0, 3.0, n, AxisKind::DetectorMm).unwrap()
}

/// Largest absolute difference between two max-normalized sample vectors.
pub fn normalized_max_deviation(a: &[f64], b: &[f64]) -> f64 {
    let ma = a.iter().copied().fold(0.0, f64::max);
    let mb = b.iter().copied().fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / ma - y / mb).abs())
        .fold(0.0, f64::max)
}
