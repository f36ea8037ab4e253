//! Spherical transform of radial functions and its inverse:
//!
//! `f̂(λ) = |S^{n-1}| ∫_0^∞ f(ρ) L_λ(ρ) sinh^{n-1}ρ dρ`,
//! `f(ρ) = C ∫_0^∞ f̂(λ) L_λ(ρ) density(λ) dλ`, `C = |S^{n-1}| / (2π)^n`.
//!
//! In even dimensions `L_λ` is an Abel integral, so both directions move the
//! Abel integral onto the `λ`-independent side: the forward map uses
//! `W(r) = sinh r ∫_0^r f(ρ) sinh^{n-1}ρ (cosh r - cosh ρ)^{-1/2} dρ` and the
//! inverse applies one Abel integral to `∫ f̂ D^m cos(λ ·) dλ`.

use rayon::prelude::*;
use serde::Serialize;

use super::radial::RadialFunction;
use super::spherical::{phi_scaled, plancherel_density, spherical_function, spherical_times_density};
use crate::error::{Error, Result};
use crate::kernels::{
    abel_scaled, inversion_constant, spectral_kappa, sphere_area, AbelOptions, ProblemParams,
};
use crate::quadrature::{uniform_breaks, GaussLegendre};

const LAMBDA_ORDER: usize = 16;
const RHO_ORDER: usize = 8;
const PANEL_ORDER: usize = 16;

/// Multiplier-weighted tail, relative to the peak, at which [`choose_lambda_max`] stops.
pub const LAMBDA_TAIL_TOL: f64 = 1e-10;
/// Tail of the inversion integral beyond the last node that the inverse accepts.
pub const INVERSE_TAIL_TOL: f64 = 1e-4;
/// Cutoffs beyond this are treated as a failure to decay.
pub const MAX_LAMBDA: f64 = 200.0;
/// Spectral samples below this fraction of the largest one are quadrature noise.
const SPECTRUM_FLOOR: f64 = 1e-11;

/// Radius beyond the sampled range over which even-dimensional inverses
/// follow their exponentially small tails (`g ~ e^{-(n - 1/2) r}`).
fn inverse_tail(n: usize) -> f64 {
    if n % 2 == 1 {
        0.0
    } else {
        30.0 / (n as f64 - 1.0)
    }
}

/// Forward even-dimensional integrand decays like `e^{-(m - 1/2) r}`.
fn forward_tail(n: usize) -> f64 {
    36.0 / (0.5 * n as f64 - 0.5)
}

fn check_dimension(n: usize) -> Result<()> {
    if !(2..=crate::kernels::MAX_DIMENSION).contains(&n) {
        return Err(Error::InvalidParams(format!("dimension {n} outside 2..=25")));
    }
    Ok(())
}

/// Composite Gauss–Legendre nodes on `[0, Λ]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    lambda_max: f64,
}

impl LambdaGrid {
    pub fn new(lambda_max: f64, max_panel: f64) -> Result<Self> {
        if !(lambda_max > 0.0 && lambda_max.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "lambda_max = {lambda_max} must be positive"
            )));
        }
        if !(max_panel > 0.0) {
            return Err(Error::InvalidParams(format!(
                "panel width {max_panel} must be positive"
            )));
        }
        let rule = GaussLegendre::cached(LAMBDA_ORDER);
        let mut pairs = Vec::new();
        for w in uniform_breaks(0.0, lambda_max, max_panel).windows(2) {
            rule.push_mapped(w[0], w[1], &mut pairs);
        }
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self {
            nodes,
            weights,
            lambda_max,
        })
    }

    /// Grid fine enough for transforms of profiles sampled on `[0, rho_max]`.
    pub fn for_support(n: usize, lambda_max: f64, rho_max: f64) -> Result<Self> {
        let reach = rho_max + inverse_tail(n);
        Self::new(lambda_max, (3.0 / reach).min(0.25))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Samples of `f̂` on a [`LambdaGrid`], with its weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralDensity {
    lambda: Vec<f64>,
    values: Vec<f64>,
    weights: Vec<f64>,
    lambda_max: f64,
}

impl SpectralDensity {
    pub fn new(grid: &LambdaGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "spectral sample",
                value: *bad,
            });
        }
        Ok(Self {
            lambda: grid.nodes.clone(),
            values,
            weights: grid.weights.clone(),
            lambda_max: grid.lambda_max,
        })
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    fn with_values(&self, values: Vec<f64>) -> Self {
        Self {
            values,
            ..self.clone()
        }
    }
}

/// `(ρ, weight)` nodes covering `[0, ρ_max]` of `f`, panels aligned with the knots.
fn rho_nodes(f: &RadialFunction, max_width: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::cached(RHO_ORDER);
    let mut out = Vec::new();
    for w in f.grid().windows(2) {
        for b in uniform_breaks(w[0], w[1], max_width).windows(2) {
            rule.push_mapped(b[0], b[1], &mut out);
        }
    }
    out
}

/// Precomputed forward transform of one profile, valid up to `lambda_max`.
enum ForwardPlan {
    /// `(ρ, w f(ρ) sinh^{n-1}ρ)`
    Odd { n: usize, nodes: Vec<(f64, f64)> },
    /// `(r, w e^{-m r} W(r))`
    Even { n: usize, nodes: Vec<(f64, f64)> },
}

impl ForwardPlan {
    fn new(f: &RadialFunction, n: usize, lambda_max: f64) -> Self {
        let width = (2.0 / lambda_max).min(0.5);
        let weighted: Vec<(f64, f64)> = rho_nodes(f, width)
            .into_iter()
            .map(|(rho, w)| (rho, w * f.eval(rho) * rho.sinh().powi(n as i32 - 1)))
            .filter(|&(_, w)| w != 0.0)
            .collect();
        if n % 2 == 1 {
            return ForwardPlan::Odd { n, nodes: weighted };
        }
        let m = n / 2;
        let big_r = f.rho_max();
        let rule = GaussLegendre::cached(PANEL_ORDER);
        let mut r_nodes = Vec::new();
        for b in uniform_breaks(0.0, big_r + forward_tail(n), (2.0 / lambda_max).min(0.2)).windows(2) {
            rule.push_mapped(b[0], b[1], &mut r_nodes);
        }
        let nodes = r_nodes
            .par_iter()
            .map(|&(r, w)| (r, w * (-(m as f64) * r).exp() * abel_dual(f, n, &weighted, r)))
            .collect();
        ForwardPlan::Even { n, nodes }
    }

    fn eval(&self, lambda: f64) -> Result<f64> {
        match self {
            ForwardPlan::Odd { n, nodes } => {
                let mut acc = 0.0;
                for &(rho, w) in nodes {
                    acc += w * spherical_function(*n, lambda, rho)?;
                }
                Ok(sphere_area(n - 1) * acc)
            }
            ForwardPlan::Even { n, nodes } => {
                let m = n / 2;
                let l = lambda.abs().max(super::spherical::LAMBDA_FLOOR);
                let acc: f64 = nodes.iter().map(|&(r, w)| w * phi_scaled(m, l, r)).sum();
                Ok(sphere_area(n - 1) * spectral_kappa(*n) * acc / plancherel_density(*n, l))
            }
        }
    }
}

/// `W(r) = sinh r ∫_0^{min(r, R)} f(ρ) sinh^{n-1}ρ (cosh r - cosh ρ)^{-1/2} dρ`.
/// `weighted` holds `(ρ, w f(ρ) sinh^{n-1}ρ)` for the regular case.
fn abel_dual(f: &RadialFunction, n: usize, weighted: &[(f64, f64)], r: f64) -> f64 {
    let big_r = f.rho_max();
    if r > big_r + 1.0 {
        let s: f64 = weighted
            .iter()
            .map(|&(rho, w)| w / (2.0 * (0.5 * (r + rho)).sinh() * (0.5 * (r - rho)).sinh()).sqrt())
            .sum();
        return r.sinh() * s;
    }
    // ρ = r - u² removes the inverse square root at ρ = r
    let u_lo = if r > big_r { (r - big_r).sqrt() } else { 0.0 };
    let u_hi = r.sqrt();
    let rule = GaussLegendre::cached(RHO_ORDER);
    let mut s = 0.0;
    for b in uniform_breaks(u_lo, u_hi, 0.02).windows(2) {
        s += rule.integrate(b[0], b[1], |u| {
            let u2 = u * u;
            let rho = (r - u2).max(0.0);
            let shalf = if u2 > 1e-8 {
                (0.5 * u2).sinh() / u2
            } else {
                0.5 + u2 * u2 / 48.0
            };
            let weight = 2.0 / (2.0 * (0.5 * (r + rho)).sinh() * shalf).sqrt();
            weight * f.eval(rho) * rho.sinh().powi(n as i32 - 1)
        });
    }
    r.sinh() * s
}

/// `f̂` on the nodes of `grid`.
pub fn spherical_transform(f: &RadialFunction, n: usize, grid: &LambdaGrid) -> Result<SpectralDensity> {
    check_dimension(n)?;
    f.check_decay()?;
    let plan = ForwardPlan::new(f, n, grid.lambda_max());
    let values = grid
        .nodes()
        .par_iter()
        .map(|&l| plan.eval(l))
        .collect::<Result<Vec<_>>>()?;
    SpectralDensity::new(grid, values)
}

/// Piecewise polynomial interpolant on equal panels, sampled at Gauss nodes.
struct PanelInterpolant {
    start: f64,
    width: f64,
    panels: usize,
    reference: Vec<f64>,
    bary: Vec<f64>,
    values: Vec<f64>,
}

impl PanelInterpolant {
    fn build<F: Fn(f64) -> f64 + Sync>(start: f64, end: f64, max_width: f64, f: F) -> Self {
        let panels = (((end - start) / max_width).ceil() as usize).max(1);
        let width = (end - start) / panels as f64;
        let mut reference = Vec::new();
        GaussLegendre::cached(PANEL_ORDER).push_mapped(-1.0, 1.0, &mut reference);
        let reference: Vec<f64> = reference.into_iter().map(|(x, _)| x).collect();
        let bary = reference
            .iter()
            .enumerate()
            .map(|(j, &xj)| {
                let prod: f64 = reference
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &xk)| xj - xk)
                    .product();
                1.0 / prod
            })
            .collect();
        let points: Vec<f64> = (0..panels)
            .flat_map(|p| {
                let mid = start + (p as f64 + 0.5) * width;
                reference
                    .iter()
                    .map(move |&x| mid + 0.5 * width * x)
                    .collect::<Vec<_>>()
            })
            .collect();
        let values = points.par_iter().map(|&x| f(x)).collect();
        Self {
            start,
            width,
            panels,
            reference,
            bary,
            values,
        }
    }

    fn eval(&self, x: f64) -> f64 {
        let end = self.start + self.width * self.panels as f64;
        if x < self.start || x > end {
            return 0.0;
        }
        let p = (((x - self.start) / self.width) as usize).min(self.panels - 1);
        let mid = self.start + (p as f64 + 0.5) * self.width;
        let t = 2.0 * (x - mid) / self.width;
        let ys = &self.values[p * PANEL_ORDER..(p + 1) * PANEL_ORDER];
        let (mut num, mut den) = (0.0, 0.0);
        for ((&xj, &wj), &yj) in self.reference.iter().zip(&self.bary).zip(ys) {
            let d = t - xj;
            if d == 0.0 {
                return yj;
            }
            let c = wj / d;
            num += c * yj;
            den += c;
        }
        num / den
    }
}

/// Errors when the inversion integrand is still significant at `Λ`.
fn check_lambda_tail(spec: &SpectralDensity, n: usize) -> Result<()> {
    let bulk: f64 = spec
        .lambda
        .iter()
        .zip(&spec.values)
        .zip(&spec.weights)
        .map(|((&l, &v), &w)| w * (v * plancherel_density(n, l)).abs())
        .sum();
    let last = spec.lambda.len().saturating_sub(LAMBDA_ORDER);
    let edge = spec.lambda[last..]
        .iter()
        .zip(&spec.values[last..])
        .map(|(&l, &v)| (v * plancherel_density(n, l)).abs() * l)
        .fold(0.0, f64::max);
    if bulk > 0.0 && edge > INVERSE_TAIL_TOL * bulk {
        return Err(Error::Accuracy(format!(
            "spectrum not resolved at lambda_max = {}: tail estimate {:.3e} of the bulk",
            spec.lambda_max,
            edge / bulk
        )));
    }
    Ok(())
}

/// `f(ρ) = C ∫ f̂(λ) L_λ(ρ) density(λ) dλ` on `grid`.
pub fn inverse_spherical_transform(
    spec: &SpectralDensity,
    n: usize,
    grid: Vec<f64>,
) -> Result<RadialFunction> {
    check_dimension(n)?;
    if spec.lambda.is_empty() {
        return Err(Error::InvalidParams("empty spectral grid".into()));
    }
    check_lambda_tail(spec, n)?;
    inverse_unchecked(spec, n, grid)
}

/// Whether the last panel of `spec` sits at the quadrature noise floor.
fn at_noise_floor(spec: &SpectralDensity) -> bool {
    let largest = spec.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let last = spec.values.len().saturating_sub(LAMBDA_ORDER);
    spec.values[last..]
        .iter()
        .all(|v| v.abs() <= SPECTRUM_FLOOR * largest)
}

fn inverse_unchecked(spec: &SpectralDensity, n: usize, grid: Vec<f64>) -> Result<RadialFunction> {
    let cinv = inversion_constant(n);
    let active: Vec<(f64, f64)> = spec
        .lambda
        .iter()
        .zip(&spec.values)
        .zip(&spec.weights)
        .filter(|((_, &v), _)| v != 0.0)
        .map(|((&l, &v), &w)| (l, w * v))
        .collect();
    if active.is_empty() {
        return RadialFunction::zeros(grid);
    }
    let values: Vec<f64> = if n % 2 == 1 {
        grid.par_iter()
            .map(|&rho| {
                let mut acc = 0.0;
                for &(l, wv) in &active {
                    acc += wv * spherical_times_density(n, l, rho)?;
                }
                Ok(cinv * acc)
            })
            .collect::<Result<_>>()?
    } else {
        let m = n / 2;
        let reach = grid.last().copied().unwrap_or(0.0) + inverse_tail(n);
        let g = PanelInterpolant::build(0.0, reach, (2.0 / spec.lambda_max).min(0.25), |r| {
            let e = (-(m as f64) * r).exp();
            active
                .iter()
                .map(|&(l, wv)| wv * phi_scaled(m, l, r))
                .sum::<f64>()
                * e
        });
        let pref = cinv * spectral_kappa(n);
        grid.par_iter()
            .map(|&rho| {
                let opts = AbelOptions {
                    frequency: spec.lambda_max,
                    tau_max: reach - rho,
                    truncate: true,
                    rel_tol: 1e-16,
                };
                Ok(pref * abel_scaled(rho, 0.0, |r| g.eval(r), opts)? * (0.5 * rho).exp())
            })
            .collect::<Result<_>>()?
    };
    RadialFunction::new(grid, values)
}

/// Multiplies by `(λ² + ρ0²)^exponent`.
pub fn apply_multiplier(spec: &SpectralDensity, n: usize, exponent: f64) -> SpectralDensity {
    let rho0 = 0.5 * (n as f64 - 1.0);
    let values = spec
        .lambda
        .iter()
        .zip(&spec.values)
        .map(|(&l, &v)| v * (l * l + rho0 * rho0).powf(exponent))
        .collect();
    spec.with_values(values)
}

/// Smallest probed `Λ` beyond which `|f̂| · density · (λ² + ρ0²)^exponent · λ`
/// stays below [`LAMBDA_TAIL_TOL`] of its largest probed value, or `|f̂|`
/// itself has dropped to the quadrature noise floor.
pub fn choose_lambda_max(f: &RadialFunction, n: usize, exponent: f64) -> Result<f64> {
    check_dimension(n)?;
    f.check_decay()?;
    let rho0 = 0.5 * (n as f64 - 1.0);
    let mut peak = 0.0f64;
    let mut largest = 0.0f64;
    let mut quiet = 0;
    let mut l: f64 = 1.0;
    while l <= MAX_LAMBDA {
        let value = ForwardPlan::new(f, n, l).eval(l)?.abs();
        let env = value * plancherel_density(n, l) * (l * l + rho0 * rho0).powf(exponent) * l;
        peak = peak.max(env);
        largest = largest.max(value);
        if env <= LAMBDA_TAIL_TOL * peak || value <= SPECTRUM_FLOOR * largest {
            quiet += 1;
            // a single small probe may sit on a zero of an oscillating spectrum
            if quiet == 2 {
                return Ok(l);
            }
        } else {
            quiet = 0;
        }
        l *= 1.25;
    }
    if peak == 0.0 {
        return Ok(1.0);
    }
    Err(Error::Accuracy(format!(
        "spectrum still significant at lambda = {MAX_LAMBDA}; profile is not smooth enough"
    )))
}

/// `inverse ∘ multiplier(exponent) ∘ transform` on the grid of `f`.
/// `lambda_max = None` selects the cutoff with [`choose_lambda_max`].
pub fn spectral_multiplier_radial(
    f: &RadialFunction,
    n: usize,
    exponent: f64,
    lambda_max: Option<f64>,
) -> Result<RadialFunction> {
    let lmax = match lambda_max {
        Some(l) => l,
        None => choose_lambda_max(f, n, exponent)?,
    };
    let grid = LambdaGrid::for_support(n, lmax, f.rho_max())?;
    let spec = spherical_transform(f, n, &grid)?;
    let scaled = apply_multiplier(&spec, n, exponent);
    // past the noise floor a growing multiplier only amplifies rounding, so
    // a tail there is accepted rather than judged after scaling
    if !at_noise_floor(&spec) {
        check_lambda_tail(&scaled, n)?;
    }
    inverse_unchecked(&scaled, n, f.grid().to_vec())
}

/// `(-Δ)^s f` through the spectral multiplier.
pub fn fractional_laplacian_radial(f: &RadialFunction, params: ProblemParams) -> Result<RadialFunction> {
    spectral_multiplier_radial(f, params.n, params.s, None)
}

/// `∫ |f|² dV` for a radial `f`.
pub fn l2_norm_squared(f: &RadialFunction, n: usize) -> f64 {
    let s: f64 = rho_nodes(f, 0.5)
        .into_iter()
        .map(|(rho, w)| w * f.eval(rho).powi(2) * rho.sinh().powi(n as i32 - 1))
        .sum();
    sphere_area(n - 1) * s
}

/// `C ∫ |f̂|² density dλ`, equal to [`l2_norm_squared`] by Plancherel.
pub fn spectral_l2_norm_squared(spec: &SpectralDensity, n: usize) -> f64 {
    let s: f64 = spec
        .lambda
        .iter()
        .zip(&spec.values)
        .zip(&spec.weights)
        .map(|((&l, &v), &w)| w * v * v * plancherel_density(n, l))
        .sum();
    inversion_constant(n) * s
}
