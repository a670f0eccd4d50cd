//! Airy function `Ai(z)` for complex arguments.
//!
//! Two evaluation branches:
//!
//! * `|z| <= SERIES_RADIUS`: Maclaurin series summed in double-double. In the
//!   sector `|arg z| < pi/3` the two power series cancel catastrophically
//!   (terms of size `e^{+zeta}` produce a result of size `e^{-zeta}`), so
//!   plain `f64` summation loses about `(4/3)|z|^{3/2} / ln 10` digits. The
//!   extra 53 bits keep the series accurate out to the switchover radius.
//! * `|z| > SERIES_RADIUS`: the Poincare expansion
//!   `Ai(z) ~ e^{-zeta} / (2 sqrt(pi) z^{1/4}) sum_k (-1)^k u_k zeta^{-k}`,
//!   `zeta = (2/3) z^{3/2}`, valid for `|arg z| <= 2pi/3`. Beyond that sector
//!   (across the Stokes line towards the negative real axis) the connection
//!   formula `Ai(z) = -w^2 Ai(w^2 z) - w Ai(w z)`, `w = e^{2 pi i / 3}`,
//!   rotates both evaluations back into the valid sector.
//!
//! At the switchover the asymptotic truncation error is about `e^{-2 zeta}`,
//! i.e. `2e-11` relative at `|z| = 7`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::{CDd, Dd};
use crate::error::{Error, Result};

/// Radius below which the Maclaurin series is used.
pub const SERIES_RADIUS: f64 = 7.0;

/// Componentwise bound on `Re z` and `Im z` accepted by [`airy_ai`].
pub const AIRY_ENVELOPE: f64 = 1.0e3;

/// `Ai(0) = 3^{-2/3} / Gamma(2/3)` as a double-double.
const AI0: Dd = Dd::new(0.355_028_053_887_817_2, 2.052_336_324_362_12e-17);
/// `-Ai'(0) = 3^{-1/3} / Gamma(1/3)` as a double-double.
const DAI0: Dd = Dd::new(0.258_819_403_792_806_8, -2.522_243_111_610_832e-17);

/// `Ai(z)` for `|Re z|, |Im z| <= 1e3`.
///
/// Returns a domain error outside that envelope and when the result itself
/// overflows (deep inside the sectors `|arg z| ~ 2pi/3`, where `|Ai|` grows
/// like `e^{(2/3)|z|^{3/2}}`).
pub fn airy_ai(z: Complex64) -> Result<Complex64> {
    airy_ai_scaled(z, Complex64::new(0.0, 0.0))
}

/// `Ai(z) * exp(log_scale)`, with the exponential folded into the asymptotic
/// prefactor so that huge/tiny factors do not overflow separately.
pub fn airy_ai_scaled(z: Complex64, log_scale: Complex64) -> Result<Complex64> {
    if !(z.re.abs() <= AIRY_ENVELOPE && z.im.abs() <= AIRY_ENVELOPE) {
        return Err(Error::Domain {
            op: "airy_ai",
            arg: format!("{z}"),
            reason: "|Re z| and |Im z| must not exceed 1e3",
        });
    }
    let v = eval_scaled(z, log_scale);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Domain {
            op: "airy_ai",
            arg: format!("{z}"),
            reason: "result overflows f64",
        })
    }
}

/// `Ai(x)` on the real axis. Always finite; underflows to zero for large
/// positive `x`.
pub fn airy_ai_real(x: f64) -> f64 {
    eval_scaled(Complex64::new(x, 0.0), Complex64::new(0.0, 0.0)).re
}

/// `Ai(x) * e^{s}` on the real axis with the exponent merged.
pub fn airy_ai_real_scaled(x: f64, s: f64) -> f64 {
    eval_scaled(Complex64::new(x, 0.0), Complex64::new(s, 0.0)).re
}

fn eval_scaled(z: Complex64, log_scale: Complex64) -> Complex64 {
    // Schwarz reflection: evaluate in the closed upper half plane only, so
    // conjugate symmetry holds exactly.
    if z.im < 0.0 {
        return eval_scaled(z.conj(), log_scale.conj()).conj();
    }
    let v = if z.norm() <= SERIES_RADIUS {
        airy_ai_series(z) * log_scale.exp()
    } else {
        asymptotic_scaled(z, log_scale)
    };
    if z.im == 0.0 && log_scale.im == 0.0 {
        Complex64::new(v.re, 0.0)
    } else {
        v
    }
}

/// Maclaurin series `Ai(z) = Ai(0) f(z) + Ai'(0) g(z)` in double-double.
///
/// Exposed for branch-agreement checks; accurate to ~1e-14 relative only for
/// `|z| <= 8` or so.
pub fn airy_ai_series(z: Complex64) -> Complex64 {
    let zd = CDd::from_c64(z);
    let z3 = zd * zd * zd;
    let mut f_term = CDd::from_c64(Complex64::new(1.0, 0.0));
    let mut g_term = zd;
    let mut f = f_term;
    let mut g = g_term;
    for k in 1..400usize {
        let k3 = 3.0 * k as f64;
        f_term = (f_term * z3).div_f64((k3 - 1.0) * k3);
        g_term = (g_term * z3).div_f64(k3 * (k3 + 1.0));
        f = f + f_term;
        g = g + g_term;
        let fs = f.abs_approx().max(f64::MIN_POSITIVE);
        let gs = g.abs_approx().max(f64::MIN_POSITIVE);
        if f_term.abs_approx() <= 1e-34 * fs && g_term.abs_approx() <= 1e-34 * gs {
            break;
        }
    }
    (f.scale(AI0) - g.scale(DAI0)).to_c64()
}

/// Asymptotic evaluation for any `|z|` large enough (exposed for
/// branch-agreement checks). Uses the connection formula outside
/// `|arg z| <= 2pi/3`.
pub fn airy_ai_asymptotic(z: Complex64) -> Complex64 {
    if z.im < 0.0 {
        return airy_ai_asymptotic(z.conj()).conj();
    }
    asymptotic_scaled(z, Complex64::new(0.0, 0.0))
}

fn asymptotic_scaled(z: Complex64, s: Complex64) -> Complex64 {
    debug_assert!(z.im >= 0.0);
    let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    if z.arg() <= 2.0 * PI / 3.0 {
        poincare_scaled(z, s)
    } else {
        // Ai(z) = -conj(w) Ai(conj(w) z) - w Ai(w z)
        let wc = w.conj();
        -wc * poincare_scaled(wc * z, s) - w * poincare_scaled(w * z, s)
    }
}

/// `Ai(z) e^{s}` from the Poincare expansion, `|arg z| <= 2pi/3`.
fn poincare_scaled(z: Complex64, s: Complex64) -> Complex64 {
    let sqrt_z = z.sqrt();
    let zeta = 2.0 / 3.0 * z * sqrt_z;
    let inv_zeta = zeta.inv();
    let mut u = 1.0f64;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..60usize {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0) / ((2.0 * kf - 1.0) * 216.0 * kf);
        term = -term * inv_zeta;
        let t = term * u;
        let mag = t.norm();
        if mag >= last {
            break;
        }
        sum += t;
        last = mag;
        if mag <= 1e-17 * sum.norm() {
            break;
        }
    }
    let pre = (s - zeta).exp() / (2.0 * PI.sqrt() * sqrt_z.sqrt());
    pre * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn value_at_origin() {
        let v = airy_ai(c(0.0, 0.0)).unwrap();
        assert!((v.re - 0.355_028_053_887_817_23).abs() < 1e-16);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn schwarz_reflection() {
        let a = airy_ai(c(1.0, 1.0)).unwrap();
        let b = airy_ai(c(1.0, -1.0)).unwrap();
        assert_eq!(a, b.conj());
        // mpmath: Ai(1+i)
        assert!((a - c(0.060_458_308_371_838_15, -0.151_889_565_877_181_4)).norm() < 1e-15);
    }

    #[test]
    fn real_axis_is_real() {
        for x in [-30.0, -7.5, -1.0, 0.3, 6.9, 7.1, 40.0] {
            assert_eq!(airy_ai(c(x, 0.0)).unwrap().im, 0.0);
        }
    }

    #[test]
    fn envelope_is_enforced() {
        assert!(airy_ai(c(1.5e3, 0.0)).is_err());
        assert!(airy_ai(c(0.0, -1.0e3 - 1.0)).is_err());
        assert!(airy_ai(c(f64::NAN, 0.0)).is_err());
        // grows like exp(2/3 r^{3/2}) along arg = 2pi/3
        let z = Complex64::from_polar(900.0, 2.0 * PI / 3.0);
        assert!(airy_ai(z).is_err());
    }

    #[test]
    fn far_real_axis_stays_finite() {
        assert_eq!(airy_ai_real(5.0e3), 0.0);
        assert!(airy_ai_real(-5.0e3).abs() < 0.1);
        // e^{w x} against the super-exponential decay
        let v = airy_ai_real_scaled(2.0e3, 0.1 * 2.0e3);
        assert!(v.is_finite() && v >= 0.0);
    }
}
