//! The iterated operator `(σ ∂_ρ / sinh ρ)^m`, carried out on Taylor
//! coefficients about the evaluation point.
//!
//! The `_scaled` helpers multiply by `e^ρ` at every step (using the series of
//! `e^ρ csch(ρ + t)`) so that deep tails stay representable.

use crate::error::{Error, Result};
use crate::specfun::jet::{cauchy_product, series_recip, Jet};

/// Taylor coefficients of `t -> e^ρ csch(ρ + t)` up to `order`.
///
/// Uses `e^ρ csch(ρ + t) = 2 e^{-t} / (1 - q e^{-2t})`, `q = e^{-2ρ}`.
pub(crate) fn csch_series_scaled(rho: f64, order: usize) -> Vec<f64> {
    let q = (-2.0 * rho).exp();
    let mut num = Vec::with_capacity(order + 1);
    let mut den = Vec::with_capacity(order + 1);
    let mut fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            fact *= k as f64;
        }
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        num.push(2.0 * sgn / fact);
        if k == 0 {
            den.push(-(-2.0 * rho).exp_m1());
        } else {
            den.push(-q * sgn * 2f64.powi(k as i32) / fact);
        }
    }
    cauchy_product(&num, &series_recip(&den), order)
}

/// Applies `(σ ∂/sinh)` `m` times to the Taylor series `taylor` about `rho`,
/// each step scaled by `e^rho`. Returns the surviving coefficients.
pub(crate) fn apply_scaled(taylor: &[f64], rho: f64, m: usize, sign: f64) -> Vec<f64> {
    debug_assert!(taylor.len() > m);
    let mut g = taylor.to_vec();
    if m == 0 {
        return g;
    }
    let csch = csch_series_scaled(rho, g.len() - 2);
    for _ in 0..m {
        let deriv: Vec<f64> = (1..g.len()).map(|k| sign * k as f64 * g[k]).collect();
        let order = deriv.len() - 1;
        g = cauchy_product(&deriv, &csch, order);
    }
    g
}

/// Applies `(sign · ∂_ρ / sinh ρ)^m` to the function whose derivative jet at
/// `rho` (of order at least `m`) is produced by `source`.
pub fn iterated_operator<F>(source: F, m: usize, rho: f64, sign: f64) -> Result<f64>
where
    F: FnOnce(f64, usize) -> Result<Jet>,
{
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "radius",
            value: rho,
        });
    }
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::InvalidParams(format!(
            "operator sign must be +1 or -1, got {sign}"
        )));
    }
    let jet = source(rho, m)?;
    if jet.order() < m {
        return Err(Error::UnsupportedOrder {
            order: m,
            max: jet.order(),
        });
    }
    let out = apply_scaled(&jet.taylor(), rho, m, sign);
    Ok(out[0] * (-(m as f64) * rho).exp())
}

/// Taylor coefficients (about `rho`) of `e^{ρ0 ρ} (ρ + t)^a K_ν(ρ0 (ρ + t))`.
pub(crate) fn bessel_source_scaled(a: f64, nu: f64, rho0: f64, rho: f64, order: usize) -> Vec<f64> {
    let kd = crate::specfun::bessel::k_derivatives_scaled(nu, rho0 * rho, order);
    let mut kt = Vec::with_capacity(order + 1);
    let mut pw = Vec::with_capacity(order + 1);
    let mut fact = 1.0;
    let mut r0k = 1.0;
    let mut binom = 1.0;
    for (k, &dk) in kd.iter().enumerate().take(order + 1) {
        if k > 0 {
            fact *= k as f64;
            binom *= (a - (k - 1) as f64) / k as f64;
        }
        kt.push(dk * r0k / fact);
        pw.push(binom * rho.powf(a - k as f64));
        r0k *= rho0;
    }
    cauchy_product(&pw, &kt, order)
}
