//! Hardy–Littlewood–Sobolev quotient on `H^n` with the kernel `(2 sinh(ρ/2))^{-λ}`.

use std::f64::consts::PI;

use super::angular::{row_nodes, RadialKernel};
use crate::error::{Error, Result};
use crate::kernels::sphere_area;
use crate::quadrature::composite_nodes;
use crate::specfun::ln_gamma_abs;
use crate::spectral::RadialFunction;

const OUTER_ORDER: usize = 4;

struct HlsKernel {
    lambda: f64,
}

impl RadialKernel for HlsKernel {
    fn eval(&self, _rho: f64, sigma: f64) -> f64 {
        // (2 sinh(ρ/2))² = 4σ
        (4.0 * sigma).powf(-0.5 * self.lambda)
    }
}

fn check_exponent(n: usize, lambda: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParams(format!(
            "dimension n = {n} must be at least 2"
        )));
    }
    if !(lambda > 0.0 && lambda < n as f64) {
        return Err(Error::Domain {
            what: "HLS exponent (must lie in (0, n))",
            value: lambda,
        });
    }
    Ok(())
}

/// Sharp constant `π^{λ/2} Γ(n/2 - λ/2)/Γ(n - λ/2) (Γ(n/2)/Γ(n))^{-1+λ/n}`.
pub fn hls_constant(n: usize, lambda: f64) -> Result<f64> {
    check_exponent(n, lambda)?;
    let nf = n as f64;
    let ln = 0.5 * lambda * PI.ln() + ln_gamma_abs(0.5 * (nf - lambda))? - ln_gamma_abs(nf - 0.5 * lambda)?
        + (lambda / nf - 1.0) * (ln_gamma_abs(0.5 * nf)? - ln_gamma_abs(nf)?);
    Ok(ln.exp())
}

/// `(∫ |f|^p dV)^{1/p}` for radial `f`.
fn lp_norm(f: &RadialFunction, n: usize, p: f64) -> f64 {
    let s: f64 = composite_nodes(f.grid(), OUTER_ORDER)
        .into_iter()
        .map(|(r, w)| w * f.eval(r).abs().powf(p) * r.sinh().powi(n as i32 - 1))
        .sum();
    (sphere_area(n - 1) * s).powf(1.0 / p)
}

/// `∫∫ f(x) g(y) (2 sinh(ρ(x, y)/2))^{-λ} dx dy / (‖f‖_p ‖g‖_p)` with
/// `p = 2n/(2n - λ)`; 0 when either function vanishes.
pub fn hls_ratio(f: &RadialFunction, g: &RadialFunction, n: usize, lambda: f64) -> Result<f64> {
    use rayon::prelude::*;
    check_exponent(n, lambda)?;
    let p = 2.0 * n as f64 / (2.0 * n as f64 - lambda);
    let norms = lp_norm(f, n, p) * lp_norm(g, n, p);
    if norms == 0.0 {
        return Ok(0.0);
    }
    let kernel = HlsKernel { lambda };
    let outer = composite_nodes(f.grid(), OUTER_ORDER);
    let double: f64 = outer
        .par_iter()
        .map(|&(r, w)| {
            let fr = f.eval(r);
            if fr == 0.0 {
                return 0.0;
            }
            let inner: f64 = row_nodes(&kernel, n, r, g.grid())
                .into_iter()
                .map(|(x, wx)| wx * g.eval(x))
                .sum();
            w * fr * inner * r.sinh().powi(n as i32 - 1)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .sum();
    Ok(sphere_area(n - 1) * double / norms)
}
