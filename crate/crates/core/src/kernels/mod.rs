//! Green's function of `(-Δ)^s` and the singular kernel of its principal-value
//! form, both built from `K_ν` by the operator `(-∂_ρ / sinh ρ)^m`
//! (odd `n = 2m + 1`) or by the Abel-type integral of it (even `n = 2m`).

mod abel;
mod green;
mod operator;

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::gamma::gamma;

pub use abel::abel_integral;
pub(crate) use abel::{abel_scaled, AbelOptions};
pub use green::{
    calibrate_normalization, green, singular_kernel, singular_kernel_scaled, GreenFunction,
    CALIBRATION_CHECK_POINTS, CALIBRATION_DRIFT_TOL, CALIBRATION_POINT,
};
pub(crate) use operator::apply_scaled;
pub use operator::iterated_operator;

/// Largest dimension covered by the jet window of the Bessel routines.
pub const MAX_DIMENSION: usize = 25;

/// Relative distance to `p*` below which `p` counts as critical.
const CRITICAL_TOL: f64 = 1e-12;

/// Dimension `n`, fractional order `s` and nonlinearity exponent `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub n: usize,
    pub s: f64,
    pub p: f64,
}

/// Position of `p` relative to the critical exponent `(n + 2s)/(n - 2s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Subcritical,
    Critical,
    Supercritical,
}

impl ProblemParams {
    pub fn new(n: usize, s: f64, p: f64) -> Result<Self> {
        if !(2..=MAX_DIMENSION).contains(&n) {
            return Err(Error::InvalidParams(format!(
                "dimension n = {n} outside 2..={MAX_DIMENSION}"
            )));
        }
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::InvalidParams(format!(
                "fractional order s = {s} outside (0, 1)"
            )));
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(Error::InvalidParams(format!("exponent p = {p} must exceed 1")));
        }
        Ok(Self { n, s, p })
    }

    /// Parameters for kernel-only work, where `p` plays no role.
    pub fn linear(n: usize, s: f64) -> Result<Self> {
        Self::new(n, s, 2.0)
    }

    /// `ρ0 = (n - 1)/2`; the spectrum of `-Δ` starts at `ρ0²`.
    pub fn rho0(&self) -> f64 {
        0.5 * (self.n as f64 - 1.0)
    }

    pub fn critical_exponent(&self) -> f64 {
        let n = self.n as f64;
        (n + 2.0 * self.s) / (n - 2.0 * self.s)
    }

    pub fn regime(&self) -> Regime {
        let pc = self.critical_exponent();
        if (self.p - pc).abs() <= CRITICAL_TOL * pc {
            Regime::Critical
        } else if self.p < pc {
            Regime::Subcritical
        } else {
            Regime::Supercritical
        }
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// Number of operator applications: `(n - 1)/2` for odd `n`, `n/2` for even.
    pub fn operator_order(&self) -> usize {
        if self.is_odd() {
            (self.n - 1) / 2
        } else {
            self.n / 2
        }
    }
}

/// Normalization constants attached to a `(n, s)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConstants {
    /// Constant in front of the principal-value integral against `𝒦_{n,s}`.
    pub c_ns: f64,
    /// Prefactor of `𝒦_{n,s}`.
    pub c1: f64,
    /// Prefactor of the Green's function, fixed by spectral matching.
    pub alpha: f64,
    /// `(2^{3-n} π |S^{n-1}|)^{-1}`.
    pub dn: f64,
}

/// Surface area of the unit sphere `S^k ⊂ R^{k+1}`.
pub fn sphere_area(k: usize) -> f64 {
    let h = 0.5 * (k as f64 + 1.0);
    2.0 * PI.powf(h) / gamma(h).expect("Gamma has no poles at positive half-integers")
}

/// Constant of the inversion formula with our normalizations:
/// `f = C ∫_0^∞ f̂(λ) L_λ ρ(λ) dλ`, `C = |S^{n-1}| / (2π)^n`.
pub fn inversion_constant(n: usize) -> f64 {
    sphere_area(n - 1) / (2.0 * PI).powi(n as i32)
}

/// `κ_n` with `L_λ(ρ) · density(λ) = κ_n · (-∂/sinh)^m cos(λρ)` for odd `n`,
/// and the same identity under the Abel integral for even `n`.
pub(crate) fn spectral_kappa(n: usize) -> f64 {
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        (1..=m).map(|j| (2 * j - 1) as f64).product()
    } else {
        let m = n / 2;
        let fact: f64 = (1..m).map(|j| j as f64).product();
        2f64.powi(m as i32 - 1) * fact * 2f64.sqrt() / PI
    }
}

/// `C_1 = 1 / (2^{n-2+2s} Γ((n-1)/2) Γ((1+2s)/2))`.
pub fn c1_constant(n: usize, s: f64) -> f64 {
    let g1 = gamma(0.5 * (n as f64 - 1.0)).expect("n >= 2");
    let g2 = gamma(0.5 + s).expect("s > 0");
    1.0 / (2f64.powf(n as f64 - 2.0 + 2.0 * s) * g1 * g2)
}

pub fn dn_constant(n: usize) -> f64 {
    1.0 / (2f64.powi(3 - n as i32) * PI * sphere_area(n - 1))
}

/// `α` predicted by the Fourier-cosine integral of `(λ² + ρ0²)^{-s}`; the
/// calibrated value is checked against it in tests.
#[cfg(test)]
pub(crate) fn analytic_alpha(n: usize, s: f64) -> f64 {
    let rho0 = 0.5 * (n as f64 - 1.0);
    inversion_constant(n) * spectral_kappa(n) * PI.sqrt() / gamma(s).expect("s > 0")
        * (2.0 * rho0).powf(0.5 - s)
}

/// Constant `C` with `(-Δ)^s u(x) = C · PV ∫ (u(x) - u(ξ)) S(d(x, ξ)) dξ`,
/// `S` being the unnormalized kernel shape. Positive for `0 < s < 1`.
pub(crate) fn pv_shape_constant(n: usize, s: f64) -> f64 {
    let rho0 = 0.5 * (n as f64 - 1.0);
    let g = gamma(-s).expect("s is not an integer");
    inversion_constant(n) * spectral_kappa(n) * (-PI.sqrt() / g) * (2.0 * rho0).powf(s + 0.5)
}

/// `c_{n,s}` such that `c_{n,s} · PV ∫ (u(x) - u(ξ)) 𝒦_{n,s} dξ = (-Δ)^s u(x)`.
pub(crate) fn c_ns_constant(n: usize, s: f64) -> f64 {
    let c1 = c1_constant(n, s);
    let shape_prefactor = if n % 2 == 1 { c1 } else { c1 / PI.sqrt() };
    pv_shape_constant(n, s) / shape_prefactor
}
