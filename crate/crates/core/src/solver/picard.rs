//! Normalized fixed-point iteration for `u = ∫ G_s u^p`.

use serde::Serialize;

use super::matrix::{radial_green_matrix, RadialOperatorMatrix};
use crate::error::{Error, Result};
use crate::kernels::{ProblemParams, Regime};
use crate::spectral::RadialFunction;

const DAMPING: f64 = 0.5;

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub profile: RadialFunction,
    /// `μ^{-1/(p-1)}`; `profile = amplitude · v` with `‖v‖_∞ = 1`.
    pub amplitude: f64,
    /// Converged normalization factor `‖T(v^p)‖_∞`.
    pub mu: f64,
    pub iterations: usize,
    /// Relative sup norm of `u - T(u^p)` over the grid interior.
    pub residual: f64,
    /// Relative sup-norm change of the last iterate.
    pub change: f64,
    pub converged: bool,
    pub monotone_flag: bool,
    pub regime: Regime,
    pub warnings: Vec<String>,
}

/// `T(φ)` at the grid nodes.
fn apply_power(matrix: &RadialOperatorMatrix, v: &[f64], p: f64) -> Result<Vec<f64>> {
    let vp: Vec<f64> = v.iter().map(|x| x.max(0.0).powf(p)).collect();
    matrix.apply(&vp)
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// True when `values` never increases by more than rounding.
pub fn is_nonincreasing(values: &[f64]) -> bool {
    let scale = sup(values);
    values.windows(2).all(|w| w[1] <= w[0] + 1e-12 * scale)
}

/// Relative sup norm of `u - T(u^p)`, skipping the truncation node.
pub fn residual(u: &RadialFunction, matrix: &RadialOperatorMatrix) -> Result<f64> {
    if u.grid().len() != matrix.len() {
        return Err(Error::Shape {
            expected: matrix.len(),
            found: u.grid().len(),
        });
    }
    let scale = sup(u.values());
    if scale == 0.0 {
        return Ok(0.0);
    }
    let tu = apply_power(matrix, u.values(), matrix.params().p)?;
    let last = u.values().len() - 1;
    let diff = u.values()[..last]
        .iter()
        .zip(&tu[..last])
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    Ok(diff / scale)
}

fn check_regime(params: ProblemParams) -> Result<Option<String>> {
    match params.regime() {
        Regime::Supercritical => Err(Error::InvalidParams(format!(
            "p = {} exceeds the critical exponent (n+2s)/(n-2s) = {}",
            params.p,
            params.critical_exponent()
        ))),
        Regime::Critical => Ok(Some("critical exponent: convergence not guaranteed".into())),
        Regime::Subcritical => Ok(None),
    }
}

/// Solves on `grid` starting from `e^{-ρ}`-like positive data.
pub fn picard_solve(params: ProblemParams, grid: &[f64], tol: f64, max_iter: usize) -> Result<SolveReport> {
    check_regime(params)?;
    let matrix = radial_green_matrix(params, grid)?;
    let rho0 = params.rho0();
    let initial = RadialFunction::from_fn(grid.to_vec(), |r| (-rho0 * r).exp() / (1.0 + r))?;
    picard_solve_from(&matrix, &initial, tol, max_iter)
}

/// Iterates `v <- T(v^p)/μ` from `initial`; halves the step when `μ` oscillates.
pub fn picard_solve_from(
    matrix: &RadialOperatorMatrix,
    initial: &RadialFunction,
    tol: f64,
    max_iter: usize,
) -> Result<SolveReport> {
    let params = matrix.params();
    let mut warnings: Vec<String> = check_regime(params)?.into_iter().collect();
    if initial.grid().len() != matrix.len() {
        return Err(Error::Shape {
            expected: matrix.len(),
            found: initial.grid().len(),
        });
    }
    let start = sup(initial.values());
    if start == 0.0 {
        return Err(Error::TrivialFixedPoint);
    }
    if initial.values().iter().any(|&x| x < 0.0) {
        return Err(Error::InvalidParams("initial profile must be nonnegative".into()));
    }
    let p = params.p;
    let mut v: Vec<f64> = initial.values().iter().map(|x| x / start).collect();
    let mut mu = f64::NAN;
    let mut last_dmu = 0.0;
    let mut change = f64::INFINITY;
    let mut residual_v = f64::INFINITY;
    let mut iterations = 0;
    let mut damped = false;
    let mut converged = false;
    while iterations < max_iter {
        iterations += 1;
        let tv = apply_power(matrix, &v, p)?;
        let m = sup(&tv);
        if !(m > 0.0) || !m.is_finite() {
            warnings.push(format!(
                "normalization factor degenerated to {m} at iteration {iterations}"
            ));
            break;
        }
        // T(v^p)/μ - v is the residual of the rescaled iterate
        residual_v = sup(&tv[..tv.len() - 1]
            .iter()
            .zip(&v)
            .map(|(t, x)| t / m - x)
            .collect::<Vec<_>>());
        let dmu = m - mu;
        if mu.is_finite() && dmu * last_dmu < 0.0 {
            damped = true;
        }
        last_dmu = if mu.is_finite() { dmu } else { 0.0 };
        mu = m;
        let mut next: Vec<f64> = tv.iter().map(|t| t / m).collect();
        if damped {
            for (nx, x) in next.iter_mut().zip(&v) {
                *nx = DAMPING * *nx + (1.0 - DAMPING) * x;
            }
            let s = sup(&next);
            next.iter_mut().for_each(|x| *x /= s);
        }
        change = sup(&next.iter().zip(&v).map(|(a, b)| a - b).collect::<Vec<_>>());
        v = next;
        if change < tol && residual_v < tol {
            converged = true;
            break;
        }
    }
    if damped {
        warnings.push("normalization factor oscillated; damping was applied".into());
    }
    if !converged {
        warnings.push(format!(
            "no convergence after {iterations} iterations (change {change:.3e}, residual {residual_v:.3e})"
        ));
    }
    let amplitude = mu.powf(-1.0 / (p - 1.0));
    let profile = RadialFunction::new(matrix.grid().to_vec(), v.iter().map(|x| amplitude * x).collect())?;
    let residual_u = residual(&profile, matrix)?;
    let monotone_flag = is_nonincreasing(profile.values());
    Ok(SolveReport {
        amplitude,
        mu,
        iterations,
        residual: residual_u,
        change,
        converged,
        monotone_flag,
        regime: params.regime(),
        warnings,
        profile,
    })
}

/// Tail diagnostic for a computed profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    /// Tail below `1e-6` of the peak with a negative fitted rate.
    pub decays: bool,
    /// Slope of `ln|u|` against `ρ` on the tail.
    pub rate: f64,
    /// The grid was too short or the tail too small to fit.
    pub inconclusive: bool,
}

const DECAY_LEVEL: f64 = 1e-6;

/// Least-squares slope of `ln|u|` over `ρ ≥ ρ_max/2`.
pub fn decay_check(u: &RadialFunction) -> DecayReport {
    let peak = u.max_abs();
    let rho_max = u.rho_max();
    let tail: Vec<(f64, f64)> = u
        .grid()
        .iter()
        .zip(u.values())
        .filter(|(r, v)| **r >= 0.5 * rho_max && v.abs() > 0.0)
        .map(|(r, v)| (*r, v.abs().ln()))
        .collect();
    if peak == 0.0 || tail.len() < 3 {
        return DecayReport {
            decays: false,
            rate: f64::NAN,
            inconclusive: true,
        };
    }
    let k = tail.len() as f64;
    let mx = tail.iter().map(|t| t.0).sum::<f64>() / k;
    let my = tail.iter().map(|t| t.1).sum::<f64>() / k;
    let sxy: f64 = tail.iter().map(|t| (t.0 - mx) * (t.1 - my)).sum();
    let sxx: f64 = tail.iter().map(|t| (t.0 - mx) * (t.0 - mx)).sum();
    let rate = sxy / sxx;
    let end = u.values().last().copied().unwrap_or(0.0).abs();
    DecayReport {
        decays: rate < 0.0 && end <= DECAY_LEVEL * peak,
        rate,
        inconclusive: false,
    }
}
