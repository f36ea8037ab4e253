//! Radialized integral operators: for a radial kernel `k(d(x, y))`,
//! `∫ k(d(x, y)) φ(|y|) dy = ∫_0^∞ A(|x|, r') φ(r') sinh^{n-1} r' dr'` with
//! `A(r, r') = |S^{n-2}| ∫_0^π k(ρ(r, r', θ)) sin^{n-2}θ dθ`.

use crate::error::Result;
use crate::kernels::{sphere_area, GreenFunction};
use crate::quadrature::{tanh_sinh_nodes, GaussLegendre};

const THETA_ORDER: usize = 8;
const R_ORDER: usize = 8;
const TANH_SINH_LEVEL: usize = 4;
const MAX_GRADING: i32 = 60;

/// Radial kernel evaluated from `ρ` and `σ = sinh²(ρ/2)`; `σ` carries full
/// relative accuracy for nearby points.
pub(crate) trait RadialKernel: Sync {
    fn eval(&self, rho: f64, sigma: f64) -> f64;
}

/// `|S^{n-2}|`, with `|S^0| = 2`.
fn low_sphere(n: usize) -> f64 {
    if n == 2 {
        2.0
    } else {
        sphere_area(n - 2)
    }
}

/// `A(r, r')`; `delta = r - r'` is passed separately so that it keeps its
/// accuracy when `r' -> r`.
pub(crate) fn angular_integral<K: RadialKernel + ?Sized>(
    k: &K,
    n: usize,
    r: f64,
    rp: f64,
    delta: f64,
) -> f64 {
    let sa = (0.5 * delta).sinh();
    let a = sa * sa;
    let b = r.sinh() * rp.sinh();
    let sigma_to_rho = |sigma: f64| 2.0 * sigma.sqrt().asinh();
    if b == 0.0 {
        return sphere_area(n - 1) * k.eval(sigma_to_rho(a), a);
    }
    // the integrand peaks within θ ~ 2 sqrt(a/b) of 0; grade the panels there
    let theta_c = 2.0 * (a / b).sqrt();
    let mut breaks = vec![std::f64::consts::PI];
    for _ in 0..MAX_GRADING {
        let next = breaks[breaks.len() - 1] * 0.5;
        if next < 0.25 * theta_c {
            break;
        }
        breaks.push(next);
    }
    breaks.push(0.0);
    breaks.reverse();
    let rule = GaussLegendre::cached(THETA_ORDER);
    let mut sum = 0.0;
    for w in breaks.windows(2) {
        sum += rule.integrate(w[0], w[1], |theta| {
            let sh = (0.5 * theta).sin();
            let sigma = a + b * sh * sh;
            k.eval(sigma_to_rho(sigma), sigma) * theta.sin().powi(n as i32 - 2)
        });
    }
    low_sphere(n) * sum
}

/// Quadrature for `∫_0^R A(r, r') φ(r') sinh^{n-1} r' dr'` at a fixed `r`:
/// `(r', weight)` pairs with the kernel and volume factor folded into the weight.
/// Panels follow the knots of `knots` and are split at `r`; the two panels
/// touching `r` use tanh-sinh for the `|r - r'|^{2s-1}`-type singularity.
pub(crate) fn row_nodes<K: RadialKernel + ?Sized>(k: &K, n: usize, r: f64, knots: &[f64]) -> Vec<(f64, f64)> {
    let mut breaks: Vec<f64> = knots.to_vec();
    let end = *knots.last().expect("non-empty knots");
    if r > 0.0 && r < end && !knots.iter().any(|&x| (x - r).abs() <= 1e-14 * end) {
        let pos = knots.partition_point(|&x| x < r);
        breaks.insert(pos, r);
    }
    let rule = GaussLegendre::cached(R_ORDER);
    let mut out = Vec::new();
    let mut mapped = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let singular_lo = (lo - r).abs() <= 1e-14 * end.max(1.0);
        let singular_hi = (hi - r).abs() <= 1e-14 * end.max(1.0);
        if singular_lo || singular_hi {
            for nd in tanh_sinh_nodes(lo, hi, TANH_SINH_LEVEL) {
                let delta = if singular_lo { -nd.from_a } else { nd.from_b };
                let weight = angular_integral(k, n, r, nd.x, delta) * nd.x.sinh().powi(n as i32 - 1);
                out.push((nd.x, nd.weight * weight));
            }
        } else {
            mapped.clear();
            rule.push_mapped(lo, hi, &mut mapped);
            for &(x, wq) in &mapped {
                let weight = angular_integral(k, n, r, x, r - x) * x.sinh().powi(n as i32 - 1);
                out.push((x, wq * weight));
            }
        }
    }
    out
}

/// `ln(e^{(n-1)ρ} G(ρ))` tabulated on a uniform grid in `ln ρ` with
/// four-point interpolation; a power law continues the table below its start.
pub(crate) struct GreenTable {
    n: usize,
    x0: f64,
    h: f64,
    values: Vec<f64>,
}

const TABLE_RHO_MIN: f64 = 1e-8;
const TABLE_STEP: f64 = 0.02;

impl GreenTable {
    pub(crate) fn new(green: &GreenFunction, rho_max: f64) -> Result<Self> {
        use rayon::prelude::*;
        let n = green.params().n;
        let x0 = TABLE_RHO_MIN.ln();
        let x1 = rho_max.max(1.0).ln();
        let count = ((x1 - x0) / TABLE_STEP).ceil() as usize + 4;
        let values = (0..count)
            .into_par_iter()
            .map(|i| {
                let rho = (x0 + i as f64 * TABLE_STEP).exp();
                Ok(green.eval_scaled(rho)?.ln())
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            n,
            x0,
            h: TABLE_STEP,
            values,
        })
    }

    fn log_scaled(&self, rho: f64) -> f64 {
        let t = (rho.ln() - self.x0) / self.h;
        let last = self.values.len() - 1;
        if t <= 0.0 {
            let slope = self.values[1] - self.values[0];
            return self.values[0] + slope * t;
        }
        if t >= last as f64 {
            let slope = self.values[last] - self.values[last - 1];
            return self.values[last] + slope * (t - last as f64);
        }
        let i = (t.floor() as usize).clamp(1, last - 2);
        let u = t - i as f64;
        let (y0, y1, y2, y3) = (
            self.values[i - 1],
            self.values[i],
            self.values[i + 1],
            self.values[i + 2],
        );
        // cubic Lagrange through nodes -1, 0, 1, 2
        -u * (u - 1.0) * (u - 2.0) / 6.0 * y0 + (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0 * y1
            - (u + 1.0) * u * (u - 2.0) / 2.0 * y2
            + (u + 1.0) * u * (u - 1.0) / 6.0 * y3
    }

    pub(crate) fn eval(&self, rho: f64) -> f64 {
        let e = self.log_scaled(rho) - (self.n as f64 - 1.0) * rho;
        e.exp()
    }
}

impl RadialKernel for GreenTable {
    fn eval(&self, rho: f64, _sigma: f64) -> f64 {
        GreenTable::eval(self, rho)
    }
}
