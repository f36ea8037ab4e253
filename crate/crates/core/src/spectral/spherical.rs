//! Spherical functions `L_λ(ρ)` of `H^n` (normalized by `L_λ(0) = 1`) and the
//! Plancherel density.
//!
//! With `D = -(1/sinh ρ) ∂_ρ`:
//! * odd `n = 2m + 1`: `L_λ · density = (2m-1)!! · D^m cos(λρ)`;
//! * even `n = 2m`: `L_λ · density = κ_n · Abel[D^m cos(λ ·)](ρ)`.
//!
//! Near the origin both are replaced by the hypergeometric series
//! `L_λ(ρ) = ₂F₁((ρ0 + iλ)/2, (ρ0 - iλ)/2; n/2; -sinh²ρ)`, whose coefficients
//! are real.

use crate::error::{Error, Result};
use crate::kernels::{abel_scaled, apply_scaled, spectral_kappa, AbelOptions};
use crate::specfun::gamma::log_gamma_complex_abs;

/// Smallest `|λ|` used where `λ = 0` would give `0/0`.
pub(crate) const LAMBDA_FLOOR: f64 = 1e-6;

/// `|Γ(ρ0 + iλ) / Γ(iλ)|²`, proportional to `|c(λ)|^{-2}`.
///
/// Grows like `λ^{n-1}` and vanishes like `λ²` at the origin.
pub fn plancherel_density(n: usize, lambda: f64) -> f64 {
    let l = lambda.abs();
    if l == 0.0 {
        return 0.0;
    }
    let rho0 = 0.5 * (n as f64 - 1.0);
    let num = log_gamma_complex_abs(rho0, l).expect("Re > 0 has no poles");
    let den = log_gamma_complex_abs(1.0, l).expect("Re > 0 has no poles");
    (2.0 * (l.ln() + num - den)).exp()
}

/// Plancherel density of `H^n` as a reusable evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlancherelDensity {
    pub n: usize,
}

impl PlancherelDensity {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams(format!("dimension {n} < 2")));
        }
        Ok(Self { n })
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        plancherel_density(self.n, lambda)
    }
}

/// `Π_{j<m} (λ² + j²)`: the odd-dimensional density in dimension `2m + 1`.
pub(crate) fn odd_density(m: usize, lambda: f64) -> f64 {
    (0..m).map(|j| lambda * lambda + (j * j) as f64).product()
}

fn in_series_region(lambda: f64, rho: f64) -> bool {
    rho < 0.5 && lambda.abs() * rho < 2.0
}

/// `₂F₁((ρ0 + iλ)/2, (ρ0 - iλ)/2; n/2; -sinh²ρ)`.
fn hypergeometric_series(n: usize, lambda: f64, rho: f64) -> f64 {
    let half_rho0 = 0.25 * (n as f64 - 1.0);
    let c = 0.5 * n as f64;
    let l2 = 0.25 * lambda * lambda;
    let z = -rho.sinh().powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..10_000 {
        let kf = k as f64;
        let ab = (half_rho0 + kf).powi(2) + l2;
        term *= ab / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && kf > l2.sqrt() {
            break;
        }
    }
    sum
}

/// `e^{mρ} D^m cos(λρ)`.
pub(crate) fn phi_scaled(m: usize, lambda: f64, rho: f64) -> f64 {
    if m == 0 {
        return (lambda * rho).cos();
    }
    if in_series_region(lambda, rho) {
        // D^m cos(λρ) is the (2m+1)-dimensional spherical function times its
        // normalization density / (2m-1)!!
        let norm = odd_density(m, lambda) / spectral_kappa(2 * m + 1);
        return norm * hypergeometric_series(2 * m + 1, lambda, rho) * (m as f64 * rho).exp();
    }
    // closed forms for the orders used by n <= 5; there is no cancellation
    // outside the series region
    let (sn, cs) = (lambda * rho).sin_cos();
    let q = -(-2.0 * rho).exp_m1();
    match m {
        1 => 2.0 * lambda * sn / q,
        2 => {
            let c2 = 4.0 / (q * q);
            c2 * (lambda * sn * (1.0 + (-2.0 * rho).exp()) / q - lambda * lambda * cs)
        }
        _ => {
            let taylor = cos_taylor(lambda, rho, m);
            apply_scaled(&taylor, rho, m, -1.0)[0]
        }
    }
}

/// Taylor coefficients of `t -> cos(λ(ρ + t))`.
pub(crate) fn cos_taylor(lambda: f64, rho: f64, order: usize) -> Vec<f64> {
    let (s, c) = (lambda * rho).sin_cos();
    let mut out = Vec::with_capacity(order + 1);
    let mut pw = 1.0;
    let mut fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            pw *= lambda;
            fact *= k as f64;
        }
        // d^k/dx^k cos = cos(x + kπ/2)
        let v = match k % 4 {
            0 => c,
            1 => -s,
            2 => -c,
            _ => s,
        };
        out.push(v * pw / fact);
    }
    out
}

/// `e^{(m - 1/2)ρ} Abel[D^{m+j} cos(λ ·)](ρ)` for even `n = 2m`.
fn abel_phi_scaled(m: usize, j: usize, lambda: f64, rho: f64) -> Result<f64> {
    let k = m + j;
    let fs = |r: f64| phi_scaled(k, lambda, r);
    let opts = AbelOptions {
        frequency: lambda.abs(),
        rel_tol: 1e-15,
        ..AbelOptions::default()
    };
    // e^{-k r} is factored out of D^k cos; rescale to the D^m convention
    let v = abel_scaled(rho, k as f64, fs, opts)?;
    Ok(v * (-(j as f64) * rho).exp())
}

/// `L_λ(ρ) · density(λ)` with `λ` clamped away from 0.
pub(crate) fn spherical_times_density(n: usize, lambda: f64, rho: f64) -> Result<f64> {
    let lambda = lambda.abs().max(LAMBDA_FLOOR);
    if in_series_region(lambda, rho) {
        return Ok(hypergeometric_series(n, lambda, rho) * plancherel_density(n, lambda));
    }
    let kappa = spectral_kappa(n);
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        return Ok(kappa * phi_scaled(m, lambda, rho) * (-(m as f64) * rho).exp());
    }
    let m = n / 2;
    Ok(kappa * abel_phi_scaled(m, 0, lambda, rho)? * (-(m as f64 - 0.5) * rho).exp())
}

/// The spherical function `L_λ(ρ)`, normalized by `L_λ(0) = 1`.
pub fn spherical_function(n: usize, lambda: f64, rho: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParams(format!("dimension {n} < 2")));
    }
    if !(rho >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain {
            what: "radius",
            value: rho,
        });
    }
    let l = lambda.abs().max(LAMBDA_FLOOR);
    if in_series_region(l, rho) {
        return Ok(hypergeometric_series(n, l, rho));
    }
    Ok(spherical_times_density(n, l, rho)? / plancherel_density(n, l))
}

/// `(L, L', L'')` at `ρ > 0`, from `D`-powers of `cos(λ ·)`: `L' = -sinh ρ · D L`
/// and `L'' = -cosh ρ · D L + sinh²ρ · D² L`, with `D` commuting with the
/// Abel integral in even dimensions.
pub fn spherical_derivatives(n: usize, lambda: f64, rho: f64) -> Result<[f64; 3]> {
    if !(rho > 0.0) {
        return Err(Error::Domain {
            what: "radius",
            value: rho,
        });
    }
    let l = lambda.abs().max(LAMBDA_FLOOR);
    let scale = spectral_kappa(n) / plancherel_density(n, l);
    let mut e = [0.0; 3];
    for (j, slot) in e.iter_mut().enumerate() {
        *slot = if n % 2 == 1 {
            let m = (n - 1) / 2;
            let taylor = cos_taylor(l, rho, m + j);
            apply_scaled(&taylor, rho, m + j, -1.0)[0] * (-((m + j) as f64) * rho).exp()
        } else {
            let m = n / 2;
            abel_phi_scaled(m, j, l, rho)? * (-(m as f64 - 0.5) * rho).exp()
        } * scale;
    }
    let (sh, ch) = (rho.sinh(), rho.cosh());
    Ok([e[0], -sh * e[1], -ch * e[1] + sh * sh * e[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn three_dimensional_density_is_lambda_squared() {
        for &l in &[0.1, 1.0, 3.3, 10.0] {
            assert_relative_eq!(plancherel_density(3, l) / (l * l), 1.0, max_relative = 1e-10);
        }
        assert_eq!(plancherel_density(3, 0.0), 0.0);
        assert_eq!(plancherel_density(4, -2.5), plancherel_density(4, 2.5));
    }

    #[test]
    fn closed_form_densities() {
        for &l in &[0.05, 0.7, 4.0, 25.0] {
            assert_relative_eq!(
                plancherel_density(2, l),
                l * (PI * l).tanh(),
                max_relative = 1e-10
            );
            assert_relative_eq!(
                plancherel_density(5, l),
                l * l * (l * l + 1.0),
                max_relative = 1e-10
            );
            assert_relative_eq!(
                plancherel_density(4, l),
                l * (PI * l).tanh() * (l * l + 0.25),
                max_relative = 1e-10
            );
        }
    }

    #[test]
    fn three_dimensional_spherical_function() {
        for &(l, r) in &[(0.5f64, 0.2f64), (2.0, 1.5), (7.0, 0.3), (0.1, 4.0)] {
            let want = (l * r).sin() / (l * r.sinh());
            assert_relative_eq!(spherical_function(3, l, r).unwrap(), want, max_relative = 1e-11);
        }
        assert_eq!(spherical_function(3, 2.0, 0.0).unwrap(), 1.0);
        assert_eq!(spherical_function(2, 2.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn series_and_closed_forms_meet() {
        // at ρ = 0.45 both branches are usable; compare them
        for n in 2..=6 {
            for &l in &[0.3, 1.0, 4.0] {
                let rho = 0.45;
                let series = hypergeometric_series(n, l, rho);
                let closed = if n % 2 == 1 {
                    let m = (n - 1) / 2;
                    spectral_kappa(n) * phi_scaled_jets(m, l, rho) * (-(m as f64) * rho).exp()
                        / plancherel_density(n, l)
                } else {
                    let m = n / 2;
                    spectral_kappa(n)
                        * abel_phi_scaled(m, 0, l, rho).unwrap()
                        * (-(m as f64 - 0.5) * rho).exp()
                        / plancherel_density(n, l)
                };
                assert_relative_eq!(series, closed, max_relative = 1e-9);
            }
        }
    }

    fn phi_scaled_jets(m: usize, l: f64, rho: f64) -> f64 {
        apply_scaled(&cos_taylor(l, rho, m), rho, m, -1.0)[0]
    }

    #[test]
    fn low_order_closed_forms_match_jets() {
        for m in 1..=2 {
            for &(l, r) in &[(0.3f64, 0.7f64), (5.0, 0.45), (2.0, 3.0), (11.0, 9.0)] {
                assert_relative_eq!(
                    phi_scaled(m, l, r),
                    phi_scaled_jets(m, l, r),
                    max_relative = 1e-11,
                    epsilon = 1e-13
                );
            }
        }
    }

    #[test]
    fn eigen_equation_holds() {
        for n in 2..=5 {
            let rho0 = 0.5 * (n as f64 - 1.0);
            for &(l, r) in &[(0.7f64, 0.6f64), (2.5, 1.2), (5.0, 2.0)] {
                let [v, d, dd] = spherical_derivatives(n, l, r).unwrap();
                let res = dd + (n as f64 - 1.0) * d / r.tanh() + (l * l + rho0 * rho0) * v;
                let scale = dd.abs() + d.abs() / r.tanh() + (l * l + rho0 * rho0) * v.abs();
                assert!(res.abs() < 1e-9 * scale, "n={n} l={l} r={r} res={res:e}");
                assert_relative_eq!(v, spherical_function(n, l, r).unwrap(), max_relative = 1e-9);
            }
        }
    }
}
