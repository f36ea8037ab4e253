//! Verification suites behind `hyperfrac check`.

use std::io::Write;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use hyperfrac_core::geometry::polar_point;
use hyperfrac_core::kernels::{singular_kernel_scaled, GreenFunction};
use hyperfrac_core::solver::{direct_fractional_laplacian, green_convolution, hls_constant, hls_ratio};
use hyperfrac_core::spectral::{
    choose_lambda_max, fractional_laplacian_radial, inverse_spherical_transform, l2_norm_squared,
    radial_grid, spectral_l2_norm_squared, spectral_multiplier_radial, spherical_transform,
};
use hyperfrac_core::{LambdaGrid, ProblemParams, RadialFunction, Spacing};

use crate::config::{Format, RunConfig, Suite};
use crate::output::{fmt_f64, sink, write_json};
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Claim {
    pub claim: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct CheckReport {
    pub suite: &'static str,
    pub n: usize,
    pub s: f64,
    pub claims: Vec<Claim>,
    pub pass: bool,
}

fn claim(text: impl Into<String>, measured: f64, tolerance: f64, pass: bool) -> Claim {
    Claim {
        claim: text.into(),
        measured,
        tolerance,
        pass,
    }
}

/// Runs `suite`, writes the report and returns whether every claim passed.
pub fn run(suite: Suite, lambda_exp: f64, seed: u64, config: &RunConfig) -> Result<bool, CliError> {
    let params = ProblemParams::linear(config.n, config.s)?;
    let (name, claims) = match suite {
        Suite::Asymptotics => ("asymptotics", asymptotics(params)?),
        Suite::Inversion => ("inversion", inversion(params, config.tol.unwrap_or(1e-3))?),
        Suite::Plancherel => ("plancherel", plancherel(params.n, config.tol.unwrap_or(1e-4))?),
        Suite::Maxprinciple => ("maxprinciple", max_principle(params, seed)?),
        Suite::Hls => ("hls", hls(params.n, lambda_exp)?),
    };
    let pass = claims.iter().all(|c| c.pass);
    let report = CheckReport {
        suite: name,
        n: params.n,
        s: params.s,
        claims,
        pass,
    };
    let mut out = sink(config.out.as_deref())?;
    match config.format {
        Format::Json => write_json(&mut out, &report)?,
        Format::Csv => {
            writeln!(out, "claim,measured,tolerance,pass")?;
            for c in &report.claims {
                writeln!(
                    out,
                    "\"{}\",{},{},{}",
                    c.claim,
                    fmt_f64(c.measured),
                    fmt_f64(c.tolerance),
                    c.pass
                )?;
            }
            out.flush()?;
        }
    }
    Ok(pass)
}

/// Least-squares slope of `y` against `x`.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn log_points(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| (a.ln() + (b.ln() - a.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

fn asymptotics(params: ProblemParams) -> Result<Vec<Claim>, CliError> {
    let (n, s) = (params.n as f64, params.s);
    let green = GreenFunction::new(params)?;
    let near = log_points(1e-4, 1e-2, 21);
    let g_near: Vec<(f64, f64)> = near
        .iter()
        .map(|&r| Ok((r.ln(), green.eval(r)?.ln())))
        .collect::<Result<_, CliError>>()?;
    let k_near: Vec<(f64, f64)> = near
        .iter()
        .map(|&r| {
            Ok((
                r.ln(),
                (singular_kernel_scaled(params, r)? * (-(n - 1.0) * r).exp()).ln(),
            ))
        })
        .collect::<Result<_, CliError>>()?;
    let far: Vec<f64> = (0..=20).map(|i| 10.0 + 0.5 * i as f64).collect();
    // Q = ln G + (n-1)ρ - (s-1) ln ρ, from the scaled value to avoid underflow
    let q: Vec<f64> = far
        .iter()
        .map(|&r| Ok(green.eval_scaled(r)?.ln() - (s - 1.0) * r.ln()))
        .collect::<Result<_, CliError>>()?;
    let q_mean = q.iter().sum::<f64>() / q.len() as f64;
    let q_spread =
        q.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - q.iter().cloned().fold(f64::INFINITY, f64::min);
    // ln(𝒦 ρ^{1+s}) against ρ: slope -(n-1)
    let k_far: Vec<(f64, f64)> = far
        .iter()
        .map(|&r| {
            Ok((
                r,
                singular_kernel_scaled(params, r)?.ln() - (n - 1.0) * r + (1.0 + s) * r.ln(),
            ))
        })
        .collect::<Result<_, CliError>>()?;
    let g_slope = slope(&g_near);
    let k_slope = slope(&k_near);
    let variation = q_spread / q_mean.abs();
    let rate = -slope(&k_far);
    Ok(vec![
        claim(
            format!(
                "green log-log slope on [1e-4, 1e-2] equals -(n-2s) = {}",
                -(n - 2.0 * s)
            ),
            g_slope,
            0.05,
            (g_slope + n - 2.0 * s).abs() <= 0.05,
        ),
        claim(
            format!(
                "kernel log-log slope on [1e-4, 1e-2] equals -(n+2s) = {}",
                -(n + 2.0 * s)
            ),
            k_slope,
            0.05,
            (k_slope + n + 2.0 * s).abs() <= 0.05,
        ),
        claim(
            "ln G + (n-1)ρ - (s-1) ln ρ varies by less than 2% relative on [10, 20]",
            variation,
            0.02,
            variation < 0.02,
        ),
        claim(
            format!("kernel tail rate on [10, 20] equals n-1 = {}", n - 1.0),
            rate,
            0.01,
            (rate / (n - 1.0) - 1.0).abs() < 0.01,
        ),
    ])
}

/// Compact bump `exp(-a/(1 - t²))` on `|t| < 1`.
pub fn compact_bump(a: f64, t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-a / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

fn inversion(params: ProblemParams, tol: f64) -> Result<Vec<Claim>, CliError> {
    let width = 4.0;
    let g = RadialFunction::from_fn(radial_grid(Spacing::Uniform, 0.0, width, 321)?, |r| {
        compact_bump(3.0, r / width)
    })?;
    let out = radial_grid(Spacing::Uniform, 0.0, 18.0, 451)?;
    let v = green_convolution(params, &g, &out)?;
    let back = fractional_laplacian_radial(&v, params)?;
    let err = out
        .iter()
        .filter(|&&r| r <= width + 1.0)
        .map(|&r| (back.eval(r) - g.eval(r)).abs())
        .fold(0.0, f64::max)
        / g.max_abs();
    Ok(vec![claim(
        "(-Δ)^s (G_s ⋆ g) = g on a compact bump (relative sup error)",
        err,
        tol,
        err < tol,
    )])
}

fn plancherel(n: usize, tol: f64) -> Result<Vec<Claim>, CliError> {
    let f = RadialFunction::from_fn(radial_grid(Spacing::Uniform, 0.0, 6.0, 241)?, |r| (-r * r).exp())?;
    let lmax = choose_lambda_max(&f, n, 0.0)?;
    let grid = LambdaGrid::for_support(n, lmax, f.rho_max())?;
    let spec = spherical_transform(&f, n, &grid)?;
    let back = inverse_spherical_transform(&spec, n, f.grid().to_vec())?;
    let round_trip = f
        .values()
        .iter()
        .zip(back.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / f.max_abs();
    let identity = (l2_norm_squared(&f, n) / spectral_l2_norm_squared(&spec, n) - 1.0).abs();
    // the identity multiplier must not disturb the round trip either
    let through = spectral_multiplier_radial(&f, n, 0.0, Some(lmax))?;
    let multiplier = f
        .values()
        .iter()
        .zip(through.values())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
        / f.max_abs();
    Ok(vec![
        claim(
            "inverse(transform(f)) = f (relative sup error)",
            round_trip,
            tol,
            round_trip < tol,
        ),
        claim(
            "Plancherel identity (relative error)",
            identity,
            tol,
            identity < tol,
        ),
        claim(
            "multiplier with exponent 0 is the identity",
            multiplier,
            tol,
            multiplier < tol,
        ),
    ])
}

/// Radial profile with a strict negative minimum on the sphere of radius
/// `center`, nonnegative outside the well.
pub struct WellProfile {
    pub profile: RadialFunction,
    pub center: f64,
}

pub fn random_well(rng: &mut StdRng) -> Result<WellProfile, CliError> {
    let depth = rng.random_range(0.2..2.0);
    let width = rng.random_range(0.4..1.2);
    let center = if rng.random_bool(0.5) {
        0.0
    } else {
        width * rng.random_range(1.2..2.5)
    };
    let height = rng.random_range(0.0..1.5);
    let spread = rng.random_range(0.3..1.0);
    let hill = center + width + spread + rng.random_range(0.0..1.0);
    let rho_max = hill + spread + 1.0;
    let grid = radial_grid(
        Spacing::Uniform,
        0.0,
        rho_max,
        (rho_max / 0.02).ceil() as usize + 1,
    )?;
    let profile = RadialFunction::from_fn(grid, |r| {
        -depth * compact_bump(1.0, (r - center) / width) + height * compact_bump(1.0, (r - hill) / spread)
    })?;
    Ok(WellProfile { profile, center })
}

fn max_principle(params: ProblemParams, seed: u64) -> Result<Vec<Claim>, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    let mut violations = 0;
    let n = params.n;
    for _ in 0..20 {
        let well = random_well(&mut rng)?;
        let mut direction = vec![0.0; n];
        direction[0] = 1.0;
        let x = polar_point(well.center, &direction);
        let value = direct_fractional_laplacian(&well.profile, params, &x)?;
        worst = worst.max(value);
        if !(value < 0.0) {
            violations += 1;
        }
    }
    Ok(vec![claim(
        "(-Δ)^s u < 0 at the negative minimum of 20 random profiles (largest value reported)",
        worst,
        0.0,
        violations == 0,
    )])
}

fn hls(n: usize, lambda: f64) -> Result<Vec<Claim>, CliError> {
    if !(lambda > 0.0 && lambda < n as f64) {
        return Err(CliError::Usage(format!(
            "--lambda-exp must lie in (0, {n}), got {lambda}"
        )));
    }
    let constant = hls_constant(n, lambda)?;
    let mut worst = 0.0f64;
    for k in 0..10 {
        let width = 0.05 * (80f64).powf(k as f64 / 9.0);
        let grid = radial_grid(Spacing::Uniform, 0.0, 6.0 * width, 61)?;
        let f = RadialFunction::from_fn(grid, |r| (-(r / width).powi(2)).exp())?;
        worst = worst.max(hls_ratio(&f, &f, n, lambda)? / constant);
    }
    Ok(vec![claim(
        format!("HLS quotient below C = {constant:.10} for 10 Gaussian bumps (largest ratio / C)"),
        worst,
        1.0,
        worst < 1.0,
    )])
}
