//! Modified Bessel functions `I_ν` and `K_ν` of real order.
//!
//! `K` is evaluated on the fractional part `μ ∈ [-1/2, 1/2]` of the order and
//! raised by forward recurrence, which is stable for `K`. The base pair
//! `(K_μ, K_{μ+1})` comes from Temme's series for `x < 2`, Steed's continued
//! fraction for `2 <= x <= 30` and the Hankel expansion beyond. `I` follows from
//! a continued fraction for `I_{ν+1}/I_ν` and the Wronskian.
//!
//! Internally everything is computed as `e^x K(x)` so large arguments never
//! underflow before the caller decides to.

use std::f64::consts::PI;

use super::jet::Jet;
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 100_000;

/// Largest supported order magnitude for the public entry points.
pub const MAX_ORDER: f64 = 5.0;
/// Largest derivative order of [`bessel_k_jet`].
pub const MAX_JET_ORDER: usize = 12;

/// A validated real Bessel order `ν` with `|ν| <= 5`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselOrder(f64);

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu.abs() > MAX_ORDER {
            return Err(Error::Domain {
                what: "Bessel order",
                value: nu,
            });
        }
        Ok(Self(nu))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Taylor coefficients of `1/Γ(1+z)` about 0.
const RGAM: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// `1/Γ(1+z)` for `|z| <= 1/2`.
pub(crate) fn rgamma1p(z: f64) -> f64 {
    RGAM.iter().rev().fold(0.0, |acc, &c| acc * z + c)
}

/// Temme's auxiliary values `(Γ1(μ), Γ2(μ))`, free of cancellation at small `μ`.
fn temme_gammas(mu: f64) -> (f64, f64) {
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    let mu2 = mu * mu;
    // odd coefficients feed Γ1, even ones Γ2
    let mut pw = 1.0;
    for j in (0..RGAM.len()).step_by(2) {
        g2 += RGAM[j] * pw;
        if j + 1 < RGAM.len() {
            g1 -= RGAM[j + 1] * pw;
        }
        pw *= mu2;
    }
    (g1, g2)
}

/// `(e^x K_μ(x), e^x K_{μ+1}(x))` for `|μ| <= 1/2`, `x > 0`.
fn k_pair_scaled(mu: f64, x: f64) -> (f64, f64) {
    debug_assert!(mu.abs() <= 0.5 + 1e-12 && x > 0.0);
    if x < 2.0 {
        let (k0, k1) = k_pair_temme(mu, x);
        let ex = x.exp();
        (k0 * ex, k1 * ex)
    } else if x <= 30.0 {
        k_pair_steed(mu, x)
    } else {
        (k_hankel_scaled(mu, x), k_hankel_scaled(mu + 1.0, x))
    }
}

fn k_pair_temme(mu: f64, x: f64) -> (f64, f64) {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2) = temme_gammas(mu);
    let gampl = rgamma1p(mu);
    let gammi = rgamma1p(-mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

fn k_pair_steed(mu: f64, x: f64) -> (f64, f64) {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            break;
        }
    }
    h *= a1;
    let kmu = (PI / (2.0 * x)).sqrt() / s;
    let k1 = kmu * (mu + x + 0.5 - h) / x;
    (kmu, k1)
}

/// Hankel expansion of `e^x K_ν(x)`, for large `x`.
fn k_hankel_scaled(nu: f64, x: f64) -> f64 {
    let four_nu2 = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (four_nu2 - odd * odd) / (k as f64 * 8.0 * x);
        if term.abs() > prev {
            break; // asymptotic series started diverging
        }
        sum += term;
        prev = term.abs();
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    (PI / (2.0 * x)).sqrt() * sum
}

/// `e^x K_{μ+k}(x)` for `k = 0..=kmax`, `|μ| <= 1/2`.
fn k_ladder_scaled(mu: f64, kmax: usize, x: f64) -> Vec<f64> {
    let (k0, k1) = k_pair_scaled(mu, x);
    let mut out = Vec::with_capacity(kmax + 1);
    out.push(k0);
    if kmax >= 1 {
        out.push(k1);
    }
    for k in 1..kmax {
        let next = 2.0 * (mu + k as f64) / x * out[k] + out[k - 1];
        out.push(next);
    }
    out
}

fn split_order(nu: f64) -> (f64, usize) {
    let a = nu.abs();
    let nl = (a + 0.5).floor();
    (a - nl, nl as usize)
}

/// `e^x K_ν(x)` for any real `ν` and `x > 0`, no validation.
pub(crate) fn k_scaled(nu: f64, x: f64) -> f64 {
    let (mu, nl) = split_order(nu);
    k_ladder_scaled(mu, nl, x)[nl]
}

/// `e^x K_{ν+j}(x)` for `j = -span..=span`, indexed by `j + span`.
pub(crate) fn k_scaled_window(nu: f64, span: usize, x: f64) -> Vec<f64> {
    let orders: Vec<f64> = (0..=2 * span).map(|i| nu + i as f64 - span as f64).collect();
    // orders reduce to at most two ladders: those sharing ν's fractional part
    // and those sharing -ν's
    let (mu_a, _) = split_order(nu);
    let (mu_b, _) = split_order(-nu);
    let max_index = orders.iter().map(|o| split_order(*o).1).max().unwrap_or(0);
    let ladder_a = k_ladder_scaled(mu_a, max_index, x);
    let ladder_b = if (mu_a - mu_b).abs() < 1e-15 {
        None
    } else {
        Some(k_ladder_scaled(mu_b, max_index, x))
    };
    orders
        .iter()
        .map(|&o| {
            let (mu, idx) = split_order(o);
            if (mu - mu_a).abs() < 1e-12 {
                ladder_a[idx]
            } else {
                match &ladder_b {
                    Some(l) => l[idx],
                    None => k_scaled(o, x),
                }
            }
        })
        .collect()
}

/// Derivatives `e^x d^k/dx^k K_ν(x)` for `k = 0..=m`, via
/// `K_ν' = -(K_{ν-1} + K_{ν+1})/2` applied repeatedly.
pub(crate) fn k_derivatives_scaled(nu: f64, x: f64, m: usize) -> Vec<f64> {
    let window = k_scaled_window(nu, m, x);
    (0..=m)
        .map(|k| {
            let mut binom = 1.0;
            let mut acc = 0.0;
            for j in 0..=k {
                // order ν - k + 2j sits at index (m - k + 2j)
                acc += binom * window[m - k + 2 * j];
                binom = binom * (k - j) as f64 / (j + 1) as f64;
            }
            acc * (-0.5f64).powi(k as i32)
        })
        .collect()
}

fn check_arg(z: f64) -> Result<()> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(Error::Domain {
            what: "Bessel argument",
            value: z,
        });
    }
    Ok(())
}

/// Modified Bessel function of the second kind. Underflows to 0 for very large `z`.
pub fn bessel_k(nu: BesselOrder, z: f64) -> Result<f64> {
    check_arg(z)?;
    Ok(k_scaled(nu.get(), z) * (-z).exp())
}

/// `e^z K_ν(z)`.
pub fn bessel_k_scaled(nu: BesselOrder, z: f64) -> Result<f64> {
    check_arg(z)?;
    Ok(k_scaled(nu.get(), z))
}

/// Derivative jet of `K_ν` at `z`: entry k is `d^k/dz^k K_ν(z)`.
pub fn bessel_k_jet(nu: BesselOrder, z: f64, m: usize) -> Result<Jet> {
    check_arg(z)?;
    if m > MAX_JET_ORDER {
        return Err(Error::UnsupportedOrder {
            order: m,
            max: MAX_JET_ORDER,
        });
    }
    let scale = (-z).exp();
    let coeffs = k_derivatives_scaled(nu.get(), z, m)
        .into_iter()
        .map(|d| d * scale)
        .collect();
    Ok(Jet::from_raw(z, coeffs))
}

/// `I_μ'/I_μ`-style continued fraction result and the `I` ladder for `ν >= 0`:
/// returns `(e^{-x} I_ν(x), e^{-x} I_ν'(x))`.
fn i_scaled_nonneg(nu: f64, x: f64) -> (f64, f64) {
    const FPMIN: f64 = 1e-300;
    let (mu, nl) = split_order(nu);
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    // continued fraction for I_ν'/I_ν (modified Lentz)
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAX_ITER {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    // downward recurrence to order μ with arbitrary normalization
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let rip1 = ripl;
    let mut fact = nu * xi;
    for _ in (1..=nl).rev() {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;
    let (kmu, k1) = k_pair_scaled(mu, x);
    let kmup = mu * xi * kmu - k1;
    // Wronskian I_μ K_μ' - I_μ' K_μ = -1/x, with K scaled by e^x so I is scaled by e^-x
    let imu = xi / (f * kmu - kmup);
    (imu * ril1 / ril, imu * rip1 / ril)
}

/// Modified Bessel function of the first kind.
pub fn bessel_i(nu: BesselOrder, z: f64) -> Result<f64> {
    check_arg(z)?;
    let v = nu.get();
    let ez = z.exp();
    let (i_abs, _) = i_scaled_nonneg(v.abs(), z);
    if v >= 0.0 {
        return Ok(i_abs * ez);
    }
    // I_{-ν} = I_ν + (2/π) sin(νπ) K_ν
    let a = v.abs();
    let k = k_scaled(a, z) * (-z).exp();
    Ok(i_abs * ez + 2.0 / PI * (a * PI).sin() * k)
}

/// Derivative of `I_ν` at `z` (for Wronskian and ODE checks).
pub fn bessel_i_derivative(nu: BesselOrder, z: f64) -> Result<f64> {
    check_arg(z)?;
    // I_ν' = (I_{ν-1} + I_{ν+1}) / 2 holds for every real order
    let v = nu.get();
    let lo = bessel_i(BesselOrder(v - 1.0), z)?;
    let hi = bessel_i(BesselOrder(v + 1.0), z)?;
    Ok(0.5 * (lo + hi))
}
