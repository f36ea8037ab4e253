//! Radial profiles sampled on a geodesic-radius grid, with cubic-spline
//! interpolation (zero slope at the origin, zero beyond the last node).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decay required of transform inputs: `|f(ρ_max)| <= DECAY_TOL · max |f|`.
pub const DECAY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction {
    grid: Vec<f64>,
    values: Vec<f64>,
    #[serde(skip)]
    second: Vec<f64>,
}

/// Grid spacing rules accepted by [`radial_grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Log,
    Uniform,
    Mixed,
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 4 {
        return Err(Error::InvalidParams(format!(
            "radial grid needs at least 4 nodes, got {}",
            grid.len()
        )));
    }
    if grid[0] != 0.0 {
        return Err(Error::InvalidParams("radial grid must start at 0".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParams(
            "radial grid must be finite and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Grid of `nodes` radii starting at 0 and ending at `rho_max`.
///
/// `Log` places `nodes - 1` geometric radii on `[rho_min, rho_max]`; `Mixed`
/// follows `ρ = ln(1 + e^x)` for uniform `x`, which is geometric below
/// `ρ ≈ 1` and uniform above it; `Uniform` ignores `rho_min`.
pub fn radial_grid(spacing: Spacing, rho_min: f64, rho_max: f64, nodes: usize) -> Result<Vec<f64>> {
    if nodes < 4 {
        return Err(Error::InvalidParams(format!(
            "grid needs at least 4 nodes, got {nodes}"
        )));
    }
    if !(rho_max > 0.0) || !rho_max.is_finite() {
        return Err(Error::InvalidParams(format!(
            "rho_max = {rho_max} must be positive"
        )));
    }
    if spacing != Spacing::Uniform && !(rho_min > 0.0 && rho_min < rho_max) {
        return Err(Error::InvalidParams(format!(
            "rho_min = {rho_min} must lie in (0, rho_max)"
        )));
    }
    let k = nodes - 1;
    let mut grid = Vec::with_capacity(nodes);
    grid.push(0.0);
    match spacing {
        Spacing::Uniform => grid.extend((1..nodes).map(|i| rho_max * i as f64 / k as f64)),
        Spacing::Log => {
            let (a, b) = (rho_min.ln(), rho_max.ln());
            grid.extend((0..k).map(|i| {
                if k == 1 {
                    rho_max
                } else {
                    (a + (b - a) * i as f64 / (k - 1) as f64).exp()
                }
            }));
        }
        Spacing::Mixed => {
            // inverse of softplus, ln(e^ρ - 1), computed without overflow
            let inv = |r: f64| r + (-(-r).exp_m1()).ln();
            let (a, b) = (inv(rho_min), inv(rho_max));
            grid.extend((0..k).map(|i| {
                let x = a + (b - a) * i as f64 / (k - 1) as f64;
                if x > 30.0 {
                    x + (-x).exp().ln_1p()
                } else {
                    x.exp().ln_1p()
                }
            }));
        }
    }
    *grid.last_mut().expect("non-empty") = rho_max;
    validate_grid(&grid)?;
    Ok(grid)
}

impl RadialFunction {
    pub fn new(grid: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        validate_grid(&grid)?;
        if values.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                found: values.len(),
            });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Domain {
                what: "radial sample",
                value: *bad,
            });
        }
        let second = spline_second_derivatives(&grid, &values);
        Ok(Self { grid, values, second })
    }

    /// Samples `f` on `grid`.
    pub fn from_fn<F: FnMut(f64) -> f64>(grid: Vec<f64>, f: F) -> Result<Self> {
        let values = grid.iter().copied().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zeros(grid: Vec<f64>) -> Result<Self> {
        let values = vec![0.0; grid.len()];
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rho_max(&self) -> f64 {
        *self.grid.last().expect("validated grid")
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), values)
    }

    /// Errors unless the last sample is negligible against the peak.
    pub fn check_decay(&self) -> Result<()> {
        let tail = self.values.last().expect("validated grid").abs();
        let peak = self.max_abs();
        if peak > 0.0 && tail > DECAY_TOL * peak {
            return Err(Error::Divergence(format!(
                "profile does not decay: |f(rho_max)| / max|f| = {:.3e}",
                tail / peak
            )));
        }
        Ok(())
    }

    fn locate(&self, rho: f64) -> usize {
        match self.grid.binary_search_by(|g| g.total_cmp(&rho)) {
            Ok(i) => i.min(self.grid.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.grid.len() - 2),
        }
    }

    /// Value, first and second derivative at `ρ` (even extension for `ρ < 0`).
    pub fn eval_with_derivatives(&self, rho: f64) -> (f64, f64, f64) {
        let sign = if rho < 0.0 { -1.0 } else { 1.0 };
        let x = rho.abs();
        if x > self.rho_max() {
            return (0.0, 0.0, 0.0);
        }
        let i = self.locate(x);
        let (x0, x1) = (self.grid[i], self.grid[i + 1]);
        let h = x1 - x0;
        let a = (x1 - x) / h;
        let b = (x - x0) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h - (3.0 * a * a - 1.0) / 6.0 * h * m0 + (3.0 * b * b - 1.0) / 6.0 * h * m1;
        let dd = a * m0 + b * m1;
        (v, sign * d, dd)
    }

    pub fn eval(&self, rho: f64) -> f64 {
        self.eval_with_derivatives(rho).0
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        self.eval_with_derivatives(rho).1
    }

    pub fn second_derivative(&self, rho: f64) -> f64 {
        self.eval_with_derivatives(rho).2
    }

    /// Radial Laplace–Beltrami operator `f'' + (n-1) coth ρ f'`, using the
    /// limit `n f''(0)` at the origin.
    pub fn laplacian(&self, n: usize, rho: f64) -> f64 {
        let (_, d, dd) = self.eval_with_derivatives(rho);
        if rho.abs() < 1e-8 {
            return n as f64 * dd;
        }
        dd + (n as f64 - 1.0) * d / rho.tanh()
    }
}

/// Spline second derivatives with `f'(0) = 0` and a natural right end.
fn spline_second_derivatives(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    // tridiagonal system, solved by the Thomas algorithm
    let mut sub = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut sup = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let h0 = x[1] - x[0];
    diag[0] = h0 / 3.0;
    sup[0] = h0 / 6.0;
    rhs[0] = (y[1] - y[0]) / h0;
    for i in 1..n - 1 {
        let hl = x[i] - x[i - 1];
        let hr = x[i + 1] - x[i];
        sub[i] = hl / 6.0;
        diag[i] = (hl + hr) / 3.0;
        sup[i] = hr / 6.0;
        rhs[i] = (y[i + 1] - y[i]) / hr - (y[i] - y[i - 1]) / hl;
    }
    diag[n - 1] = 1.0;
    for i in 1..n {
        let w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    let mut m = vec![0.0; n];
    m[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        m[i] = (rhs[i] - sup[i] * m[i + 1]) / diag[i];
    }
    m
}
