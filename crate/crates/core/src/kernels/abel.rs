//! The Abel-type integral `∫_ρ^∞ sinh r (cosh r - cosh ρ)^{-1/2} F(r) dr`.
//!
//! With `r = ρ + v²` the endpoint singularity disappears:
//! `cosh r - cosh ρ = 2 sinh((r + ρ)/2) sinh(v²/2)`, so the `v`-integrand is
//! bounded and smooth. Callers may factor `F(r) = e^{-c r} F_s(r)`; the routine
//! then returns `e^{(c - 1/2) ρ}` times the integral, which keeps large-`ρ`
//! tails inside floating-point range.

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

const ORDER: usize = 20;
const GEOMETRIC_LEVELS: i32 = 10;

#[derive(Debug, Clone, Copy)]
pub(crate) struct AbelOptions {
    /// Largest angular frequency of `F` in `r`; bounds the panel width.
    pub frequency: f64,
    /// Upper limit of `τ = r - ρ`; reaching it unconverged is an error
    /// unless `truncate` is set.
    pub tau_max: f64,
    pub truncate: bool,
    pub rel_tol: f64,
}

impl Default for AbelOptions {
    fn default() -> Self {
        Self {
            frequency: 0.0,
            tau_max: 1500.0,
            truncate: false,
            rel_tol: 1e-16,
        }
    }
}

/// Returns `e^{(c - 1/2) ρ} ∫_ρ^∞ sinh r (cosh r - cosh ρ)^{-1/2} e^{-c r} F_s(r) dr`.
pub(crate) fn abel_scaled<F: FnMut(f64) -> f64>(
    rho: f64,
    c: f64,
    mut fs: F,
    opts: AbelOptions,
) -> Result<f64> {
    let rule = GaussLegendre::cached(ORDER);
    let mut integrand = |v: f64| {
        let tau = v * v;
        let r = rho + tau;
        let a = -(-(r + rho)).exp_m1();
        let b = if tau > 1e-12 {
            -(-tau).exp_m1() / tau
        } else {
            1.0 - 0.5 * tau
        };
        let weight = ((0.5 - c) * tau).exp() * -(-2.0 * r).exp_m1() / (0.5 * a * b).sqrt();
        if weight == 0.0 {
            return 0.0;
        }
        weight * fs(r)
    };

    let v_max = opts.tau_max.sqrt();
    let v0 = if rho > 0.0 { rho.sqrt().min(1.0) } else { 1.0 };
    let mut sum = 0.0;
    // geometric panels resolve the near-endpoint scale sqrt(rho)
    let mut lo = 0.0;
    for k in (0..=GEOMETRIC_LEVELS).rev() {
        let hi = v0 * 0.5f64.powi(k);
        sum += rule.integrate(lo, hi, &mut integrand);
        lo = hi;
    }
    while lo < 1.0 {
        let hi = (2.0 * lo).min(1.0);
        sum += rule.integrate(lo, hi, &mut integrand);
        lo = hi;
    }
    let mut quiet = 0;
    loop {
        if lo >= v_max {
            if opts.truncate {
                return Ok(sum);
            }
            return Err(Error::Convergence(format!(
                "Abel integral tail at rho = {rho} not settled by tau = {}",
                opts.tau_max
            )));
        }
        let width = if opts.frequency > 0.0 {
            (4.0 / (2.0 * opts.frequency * lo)).min(0.5)
        } else {
            0.5
        };
        let hi = (lo + width).min(v_max);
        let part = rule.integrate(lo, hi, &mut integrand);
        sum += part;
        lo = hi;
        if !sum.is_finite() {
            return Err(Error::Convergence(format!(
                "Abel integrand at rho = {rho} is not integrable (non-finite partial sum)"
            )));
        }
        if part.abs() <= opts.rel_tol * sum.abs() || part == 0.0 {
            quiet += 1;
            // oscillatory integrands can have a tiny panel by accident
            let needed = if opts.frequency > 0.0 { 4 } else { 2 };
            if quiet >= needed {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
}

/// `∫_ρ^∞ sinh r (cosh r - cosh ρ)^{-1/2} F(r) dr` for `F` decaying faster
/// than `e^{-r/2}`.
pub fn abel_integral<F: FnMut(f64) -> f64>(f: F, rho: f64) -> Result<f64> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain {
            what: "radius",
            value: rho,
        });
    }
    let val = abel_scaled(rho, 0.0, f, AbelOptions::default())?;
    Ok(val * (0.5 * rho).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn gaussian_substitution_gives_sqrt_pi() {
        for &rho in &[1e-4, 0.1, 1.0, 5.0, 8.0] {
            let gap = |r: f64| 2.0 * (0.5 * (r + rho)).sinh() * (0.5 * (r - rho)).sinh();
            let val = abel_integral(|r| (-gap(r)).exp(), rho).unwrap();
            assert_relative_eq!(val, PI.sqrt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn zero_function() {
        assert_eq!(abel_integral(|_| 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn matches_independent_substitution() {
        // F = sinh r e^{-2 cosh r}; with t = u² = cosh r - cosh ρ the integral
        // is 2 ∫ e^{-2(u² + C)} sqrt((u² + C)² - 1) du
        let rho: f64 = 1.0;
        let c = rho.cosh();
        let val = abel_integral(|r| r.sinh() * (-2.0 * r.cosh()).exp(), rho).unwrap();
        let rule = GaussLegendre::new(60);
        let oracle: f64 = (0..16)
            .map(|k| {
                rule.integrate(0.5 * k as f64, 0.5 * (k + 1) as f64, |u| {
                    let w = u * u + c;
                    2.0 * (-2.0 * w).exp() * (w * w - 1.0).sqrt()
                })
            })
            .sum();
        assert_relative_eq!(val, oracle, max_relative = 1e-10);
    }

    #[test]
    fn slowly_decaying_input_is_a_convergence_error() {
        assert!(matches!(abel_integral(|_| 1.0, 1.0), Err(Error::Convergence(_))));
    }
}
