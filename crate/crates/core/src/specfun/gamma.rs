//! Gamma function utilities: real Gamma with sign, and `log |Γ(a + ib)|`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(a: f64, b: f64) -> bool {
    b == 0.0 && a <= 0.0 && a == a.floor()
}

/// Principal log-Gamma for `Re z >= 1/2` via the Lanczos approximation.
fn lanczos_ln_gamma(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `log |sin(pi (a + ib))|`, stable for large `|b|`.
fn ln_abs_sin_pi(a: f64, b: f64) -> f64 {
    let bb = PI * b.abs();
    let e = (-2.0 * bb).exp();
    let s = (PI * a).sin();
    let half = 0.5 * (1.0 - e);
    bb + 0.5 * (s * s * e + half * half).ln()
}

/// Returns `log |Γ(a + ib)|`.
pub fn log_gamma_complex_abs(a: f64, b: f64) -> Result<f64> {
    if is_pole(a, b) {
        return Err(Error::Pole(a));
    }
    if a >= 0.5 {
        return Ok(lanczos_ln_gamma(Complex64::new(a, b)).re);
    }
    // reflection: |Γ(z)| |Γ(1 - z)| = π / |sin(π z)|
    let refl = lanczos_ln_gamma(Complex64::new(1.0 - a, -b)).re;
    Ok(PI.ln() - ln_abs_sin_pi(a, b) - refl)
}

/// `log |Γ(x)|` for real `x` away from the poles.
pub fn ln_gamma_abs(x: f64) -> Result<f64> {
    log_gamma_complex_abs(x, 0.0)
}

/// Real Gamma function, including negative non-integer arguments.
pub fn gamma(x: f64) -> Result<f64> {
    let mag = ln_gamma_abs(x)?.exp();
    if x > 0.0 {
        return Ok(mag);
    }
    // sign flips once per pole crossed
    let poles = (-x).ceil() as i64;
    Ok(if poles % 2 == 1 { -mag } else { mag })
}
