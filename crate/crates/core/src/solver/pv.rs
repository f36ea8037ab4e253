//! Principal-value evaluation of `(-Δ)^s u(x) = c_{n,s} PV ∫ (u(x) - u(ξ)) 𝒦(d(x, ξ)) dξ`
//! for radial `u`, in geodesic polar coordinates about `x`. Beyond its grid,
//! `u` is continued by its last value, so constants map to 0.

use crate::error::{Error, Result};
use crate::geometry::{dist, radial_distance, HPoint};
use crate::kernels::{singular_kernel_scaled, sphere_area, GreenFunction, ProblemParams};
use crate::quadrature::{composite, tanh_sinh, uniform_breaks, GaussLegendre};
use crate::spectral::RadialFunction;

const THETA_PANELS: usize = 12;
const THETA_ORDER: usize = 8;
const RHO_ORDER: usize = 8;
const RHO_PANEL: f64 = 0.05;
/// Geometric levels between `δ` and the first uniform panel.
const GRADING_LEVELS: usize = 12;
const TANH_SINH_LEVEL: usize = 5;
/// The far tail is integrated in `ln ρ` up to here, then in closed form.
const FAR_RADIUS: f64 = 1e10;
/// Allowed relative change of the result when `δ` is halved.
pub const DELTA_REFINEMENT_TOL: f64 = 1e-3;

/// `𝒦(ρ) sinh^{n-1} ρ`, without overflow.
fn kernel_volume(params: ProblemParams, rho: f64) -> Result<f64> {
    let half = -0.5 * (-2.0 * rho).exp_m1();
    Ok(singular_kernel_scaled(params, rho)? * half.powi(params.n as i32 - 1))
}

fn extended(u: &RadialFunction, r: f64) -> f64 {
    if r > u.rho_max() {
        u.values()[u.values().len() - 1]
    } else {
        u.eval(r)
    }
}

/// Mean of `u` over the geodesic sphere of radius `ρ` about a point at
/// radius `r0`.
fn spherical_mean(u: &RadialFunction, n: usize, r0: f64, rho: f64) -> f64 {
    if r0 == 0.0 {
        return extended(u, rho);
    }
    let rule = GaussLegendre::cached(THETA_ORDER);
    let pi = std::f64::consts::PI;
    let breaks = uniform_breaks(0.0, pi, pi / THETA_PANELS as f64);
    let total: f64 = breaks
        .windows(2)
        .map(|w| {
            rule.integrate(w[0], w[1], |theta| {
                extended(u, radial_distance(r0, rho, theta)) * theta.sin().powi(n as i32 - 2)
            })
        })
        .sum();
    // |S^{n-2}| / |S^{n-1}|
    let low = if n == 2 { 2.0 } else { sphere_area(n - 2) };
    low * total / sphere_area(n - 1)
}

/// `∫_R^∞ 𝒦 sinh^{n-1}`; beyond [`FAR_RADIUS`] the `ρ^{-1-s}` law is integrated exactly.
fn kernel_tail(params: ProblemParams, start: f64) -> Result<f64> {
    let (lo, hi) = (start.ln(), FAR_RADIUS.ln());
    let mut err = None;
    let body = composite(&uniform_breaks(lo, hi, 0.5), 16, |x| {
        let rho = x.exp();
        kernel_volume(params, rho).unwrap_or_else(|e| {
            err.get_or_insert(e);
            0.0
        }) * rho
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(body + kernel_volume(params, FAR_RADIUS)? * FAR_RADIUS / params.s)
}

fn pv_at_radius(
    u: &RadialFunction,
    params: ProblemParams,
    r0: f64,
    delta: f64,
    tail: f64,
    reach: f64,
) -> Result<f64> {
    let n = params.n;
    let u0 = u.eval(r0);
    // |x - ξ| < δ: u(x) - M(ρ) = -Δu ρ²/(2n) + O(ρ⁴)
    let lap = u.laplacian(n, r0);
    let mut err = None;
    let mut guard = |v: Result<f64>| {
        v.unwrap_or_else(|e| {
            err.get_or_insert(e);
            0.0
        })
    };
    let core = tanh_sinh(0.0, delta, TANH_SINH_LEVEL, |rho, _, _| {
        rho * rho * guard(kernel_volume(params, rho))
    });
    let core = -lap / (2.0 * n as f64) * core;
    let mut breaks = vec![delta];
    let first = RHO_PANEL.min(reach);
    if first > delta {
        let ratio = (first / delta).powf(1.0 / GRADING_LEVELS as f64);
        for k in 1..=GRADING_LEVELS {
            breaks.push(delta * ratio.powi(k as i32));
        }
    }
    let mut rest = uniform_breaks(*breaks.last().expect("non-empty"), reach, RHO_PANEL);
    rest.remove(0);
    breaks.extend(rest);
    // M(ρ) has kinks where the sphere meets the edge of the support
    for kink in [(u.rho_max() - r0).abs(), u.rho_max() + r0] {
        if kink > breaks[0] && kink < reach {
            let pos = breaks.partition_point(|&b| b < kink);
            if (breaks[pos] - kink).abs() > 1e-12 {
                breaks.insert(pos, kink);
            }
        }
    }
    let mut guard2 = |v: Result<f64>| {
        v.unwrap_or_else(|e| {
            err.get_or_insert(e);
            0.0
        })
    };
    let body = composite(&breaks, RHO_ORDER, |rho| {
        (u0 - spherical_mean(u, n, r0, rho)) * guard2(kernel_volume(params, rho))
    });
    if let Some(e) = err {
        return Err(e);
    }
    let c_ns = GreenFunction::new(params)?.constants().c_ns;
    let u_end = u.values()[u.values().len() - 1];
    Ok(c_ns * sphere_area(n - 1) * (core + body + (u0 - u_end) * tail))
}

/// `(-Δ)^s u` at a point at geodesic radius `r0` from the centre of `u`.
///
/// The cutoff `δ` is twice the local grid spacing; the result is recomputed
/// with `δ/2` and an accuracy error is raised if the two differ by more than
/// [`DELTA_REFINEMENT_TOL`] relative.
pub fn direct_fractional_laplacian_radial(u: &RadialFunction, params: ProblemParams, r0: f64) -> Result<f64> {
    if !(r0 >= 0.0) || !r0.is_finite() {
        return Err(Error::Domain {
            what: "radius",
            value: r0,
        });
    }
    let grid = u.grid();
    let i = grid.partition_point(|&g| g <= r0).clamp(1, grid.len() - 1) - 1;
    let delta = 2.0 * (grid[i + 1] - grid[i]);
    // beyond `reach` the sphere about x misses the support of u
    let reach = u.rho_max() + r0;
    let tail = kernel_tail(params, reach)?;
    let coarse = pv_at_radius(u, params, r0, delta, tail, reach)?;
    let fine = pv_at_radius(u, params, r0, 0.5 * delta, tail, reach)?;
    let scale = fine.abs().max(1e-8 * u.max_abs());
    if (coarse - fine).abs() > DELTA_REFINEMENT_TOL * scale {
        return Err(Error::Accuracy(format!(
            "principal value at r = {r0} changes from {coarse:.6e} to {fine:.6e} when δ = {delta:.3e} is halved"
        )));
    }
    Ok(fine)
}

/// `(-Δ)^s u(x)` for `u` radial about the origin of the hyperboloid.
pub fn direct_fractional_laplacian(u: &RadialFunction, params: ProblemParams, x: &HPoint) -> Result<f64> {
    if x.dim() != params.n {
        return Err(Error::Shape {
            expected: params.n,
            found: x.dim(),
        });
    }
    let r0 = dist(&HPoint::origin(params.n), x)?;
    direct_fractional_laplacian_radial(u, params, r0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{radial_grid, Spacing};
    use approx::assert_relative_eq;

    #[test]
    fn spherical_mean_of_constant_is_constant() {
        let grid = radial_grid(Spacing::Uniform, 0.0, 10.0, 101).unwrap();
        let u = RadialFunction::from_fn(grid, |_| 3.0).unwrap();
        for n in 2..=4 {
            assert_relative_eq!(spherical_mean(&u, n, 1.0, 2.0), 3.0, max_relative = 1e-12);
        }
    }

    #[test]
    fn spherical_mean_small_radius_expansion() {
        // M(ρ) = u + Δu ρ²/(2n) + O(ρ⁴)
        let grid = radial_grid(Spacing::Uniform, 0.0, 8.0, 801).unwrap();
        let u = RadialFunction::from_fn(grid, |r| (-r * r).exp()).unwrap();
        let (n, r0, rho) = (3, 0.8, 0.01);
        let want = u.eval(r0) + u.laplacian(n, r0) * rho * rho / (2.0 * n as f64);
        assert_relative_eq!(spherical_mean(&u, n, r0, rho), want, max_relative = 1e-7);
    }

    #[test]
    fn constant_profile_has_zero_laplacian() {
        let p = ProblemParams::linear(3, 0.5).unwrap();
        let grid = radial_grid(Spacing::Uniform, 0.0, 10.0, 101).unwrap();
        let u = RadialFunction::from_fn(grid, |_| 1.0).unwrap();
        for r0 in [0.0, 2.5] {
            assert!(direct_fractional_laplacian_radial(&u, p, r0).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn point_and_radius_forms_agree() {
        let p = ProblemParams::linear(3, 0.5).unwrap();
        let grid = radial_grid(Spacing::Uniform, 0.0, 8.0, 161).unwrap();
        let u = RadialFunction::from_fn(grid, |r| (-r * r).exp()).unwrap();
        let x = crate::geometry::polar_point(0.7, &[0.0, 0.6, 0.8]);
        let a = direct_fractional_laplacian(&u, p, &x).unwrap();
        let b = direct_fractional_laplacian_radial(&u, p, 0.7).unwrap();
        assert_relative_eq!(a, b, max_relative = 1e-10);
        assert!(direct_fractional_laplacian(&u, p, &HPoint::origin(2)).is_err());
    }
}
