//! Green's function from its spectral representation
//! `G(ρ) = C ∫ (λ² + ρ0²)^{-s} L_λ(ρ) density(λ) dλ`.
//!
//! The `λ`-integral is only conditionally convergent, so the symbol is
//! subordinated to the heat semigroup,
//! `(λ² + ρ0²)^{-s} = Γ(s)^{-1} ∫_0^∞ t^{s-1} e^{-t(λ² + ρ0²)} dt`,
//! and the damped cosine transform `∫_0^∞ e^{-tλ²} cos(λr) dλ = ½ sqrt(π/t) e^{-r²/4t}`
//! is then taken through the same `D^m` / Abel machinery as the spherical
//! functions. Only the `t`-integral is numerical.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::{
    abel_scaled, apply_scaled, inversion_constant, spectral_kappa, AbelOptions, ProblemParams,
};
use crate::quadrature::{composite, uniform_breaks};
use crate::specfun::gamma::gamma;

/// Neglected tails of the `t`-integral are below `e^{-TAIL_EXPONENT}` relative.
const TAIL_EXPONENT: f64 = 38.0;
const T_ORDER: usize = 16;

/// Taylor coefficients about `r` of `τ -> e^{ρ0 r - tρ0²} h_t(r + τ)`, where
/// `h_t(x) = ½ sqrt(π/t) e^{-x²/4t}`.
fn heat_taylor(t: f64, rho0: f64, r: f64, order: usize) -> Vec<f64> {
    // the exponent is -(r/(2√t) - ρ0√t)², never positive
    let gap = r / (2.0 * t.sqrt()) - rho0 * t.sqrt();
    let mut c = Vec::with_capacity(order + 1);
    c.push(0.5 * (PI / t).sqrt() * (-gap * gap).exp());
    // h' = -(x / 2t) h
    for k in 0..order {
        let prev = if k > 0 { c[k - 1] } else { 0.0 };
        c.push(-(r * c[k] + prev) / (2.0 * t * (k + 1) as f64));
    }
    c
}

/// `e^{(ρ0 + m) r} ∫_0^∞ t^{s-1} e^{-tρ0²} D^m h_t(r) dt`.
fn subordinated_scaled(m: usize, s: f64, rho0: f64, r: f64) -> f64 {
    // the integrand in x = ln t is a bump of width ~ 1/sqrt(ρ0 r) around
    // t = r / (2ρ0); beyond the limits it is below e^{-TAIL_EXPONENT}
    let lo = (r * r / (4.0 * (TAIL_EXPONENT + rho0 * r))).ln();
    let hi = ((TAIL_EXPONENT + rho0 * r) / (rho0 * rho0)).ln();
    let width = (1.5 / (rho0 * r).sqrt()).min(0.5);
    let breaks = uniform_breaks(lo, hi, width);
    composite(&breaks, T_ORDER, |x| {
        let t = x.exp();
        let taylor = heat_taylor(t, rho0, r, m);
        t.powf(s) * apply_scaled(&taylor, r, m, -1.0)[0]
    })
}

/// `e^{(n-1)ρ} G(ρ)` from the spectral representation.
pub fn green_spectral_scaled(params: ProblemParams, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain {
            what: "radius",
            value: rho,
        });
    }
    let (n, s) = (params.n, params.s);
    let rho0 = params.rho0();
    let m = params.operator_order();
    let pref = inversion_constant(n) * spectral_kappa(n) / gamma(s)?;
    if params.is_odd() {
        // ρ0 + m = n - 1
        return Ok(pref * subordinated_scaled(m, s, rho0, rho));
    }
    let c = rho0 + m as f64;
    // c - 1/2 = n - 1
    let abel = abel_scaled(
        rho,
        c,
        |r| subordinated_scaled(m, s, rho0, r),
        AbelOptions::default(),
    )?;
    Ok(pref * abel)
}

/// `G(ρ)` from the spectral representation; 0 once `e^{-(n-1)ρ}` underflows.
pub fn green_spectral(params: ProblemParams, rho: f64) -> Result<f64> {
    let scaled = green_spectral_scaled(params, rho)?;
    let e = (params.n as f64 - 1.0) * rho;
    Ok(if e > 700.0 { 0.0 } else { scaled * (-e).exp() })
}
