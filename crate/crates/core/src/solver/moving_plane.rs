//! Moving-plane diagnostic: sign of `w_λ(x) = u(x_λ) - u(x)` on the half-space
//! `Σ_λ` beyond the leaf `U_λ`, where `x_λ` is the reflection of `x` across `U_λ`.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{boost, dist, polar_point, reflect, Foliation, HPoint};
use crate::kernels::sphere_area;
use crate::quadrature::composite;
use crate::spectral::RadialFunction;

/// `w_λ` below `-NEGATIVE_TOL · max|u|` counts as negative.
const NEGATIVE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepOptions {
    /// Samples per leaf.
    pub samples: usize,
    /// Geodesic radius of the sampled ball, centred on the leaf.
    pub radius: f64,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            samples: 4000,
            radius: 4.0,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafReport {
    pub lambda: f64,
    pub min_w: f64,
    /// Fraction of samples with `w_λ < 0`.
    pub negative_fraction: f64,
    /// Monte Carlo volume of `Σ_λ^-` within the sampled half-ball.
    pub negative_measure: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MovingPlaneReport {
    pub leaves: Vec<LeafReport>,
}

impl MovingPlaneReport {
    pub fn min_w(&self) -> f64 {
        self.leaves.iter().map(|l| l.min_w).fold(f64::INFINITY, f64::min)
    }
}

/// Volume of the geodesic ball of radius `r` in `H^n`.
fn ball_volume(n: usize, r: f64) -> f64 {
    let breaks: Vec<f64> = (0..=64).map(|k| r * k as f64 / 64.0).collect();
    sphere_area(n - 1) * composite(&breaks, 8, |t| t.sinh().powi(n as i32 - 1))
}

/// Point uniform in hyperbolic volume within `radius` of the origin.
fn sample_ball(rng: &mut StdRng, n: usize, radius: f64) -> HPoint {
    let direction = loop {
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 && norm <= 1.0 {
            break v.into_iter().map(|x| x / norm).collect::<Vec<_>>();
        }
    };
    // radial density ∝ sinh^{n-1}, by rejection from the uniform law
    let top = radius.sinh().powi(n as i32 - 1);
    let r = loop {
        let r = rng.random_range(0.0..=radius);
        if rng.random::<f64>() * top <= r.sinh().powi(n as i32 - 1) {
            break r;
        }
    };
    polar_point(r, &direction)
}

/// Evaluates `w_λ` on random samples of `Σ_λ`, the side of `U_λ` away from `center`.
///
/// Samples are drawn in the leaf frame (a ball about `A_λ(o)`) with the
/// foliation coordinate forced to the far sign, so every sample lies strictly
/// inside `Σ_λ`. If `center` lies on `U_λ`, the positive side is used.
pub fn moving_plane_sweep(
    u: &RadialFunction,
    center: &HPoint,
    f: &Foliation,
    lambdas: &[f64],
    options: SweepOptions,
) -> Result<MovingPlaneReport> {
    let n = center.dim();
    if options.samples == 0 {
        return Err(Error::Sampling("no samples requested".into()));
    }
    if !(options.radius > 0.0) || !options.radius.is_finite() {
        return Err(Error::Sampling(format!(
            "sample radius {} must be positive",
            options.radius
        )));
    }
    if f.direction_index() > n {
        return Err(Error::Shape {
            expected: n,
            found: f.direction_index(),
        });
    }
    let k = f.direction_index();
    let tol = NEGATIVE_TOL * u.max_abs();
    let half_volume = 0.5 * ball_volume(n, options.radius);
    let mut rng = StdRng::seed_from_u64(options.seed);
    let mut leaves = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let center_side = f.side(lambda, center);
        let sign = if center_side > 0.0 { -1.0 } else { 1.0 };
        let mut min_w = f64::INFINITY;
        let mut negative = 0usize;
        let mut taken = 0usize;
        let mut attempts = 0usize;
        while taken < options.samples {
            attempts += 1;
            if attempts > 100 * options.samples {
                return Err(Error::Sampling(format!(
                    "could not place samples strictly inside Σ at λ = {lambda}"
                )));
            }
            let y = sample_ball(&mut rng, n, options.radius);
            let yk = y.coords()[k];
            if yk == 0.0 {
                continue;
            }
            let mut coords = y.coords().to_vec();
            coords[k] = sign * yk.abs();
            let x = boost(lambda, &HPoint::new(coords)?, f);
            let xl = reflect(lambda, &x, f);
            let w = u.eval(dist(&xl, center)?) - u.eval(dist(&x, center)?);
            min_w = min_w.min(w);
            if w < -tol {
                negative += 1;
            }
            taken += 1;
        }
        let fraction = negative as f64 / taken as f64;
        leaves.push(LeafReport {
            lambda,
            min_w,
            negative_fraction: fraction,
            negative_measure: fraction * half_volume,
            samples: taken,
        });
    }
    Ok(MovingPlaneReport { leaves })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{radial_grid, Spacing};
    use approx::assert_relative_eq;

    fn bump() -> RadialFunction {
        let grid = radial_grid(Spacing::Uniform, 0.0, 12.0, 601).unwrap();
        RadialFunction::from_fn(grid, |r| (-r * r).exp()).unwrap()
    }

    #[test]
    fn ball_volume_in_three_dimensions() {
        let r: f64 = 1.7;
        assert_relative_eq!(
            ball_volume(3, r),
            std::f64::consts::PI * ((2.0 * r).sinh() - 2.0 * r),
            max_relative = 1e-12
        );
    }

    #[test]
    fn leaf_through_center_gives_zero() {
        let u = bump();
        let f = Foliation::new(1, 3).unwrap();
        let center = boost(0.8, &HPoint::origin(3), &f);
        let opts = SweepOptions {
            samples: 500,
            ..Default::default()
        };
        let rep = moving_plane_sweep(&u, &center, &f, &[0.8], opts).unwrap();
        assert!(rep.leaves[0].min_w.abs() < 1e-12);
        assert_eq!(rep.leaves[0].negative_measure, 0.0);
    }

    #[test]
    fn far_leaves_are_nonnegative() {
        let u = bump();
        let f = Foliation::new(2, 3).unwrap();
        let center = HPoint::origin(3);
        let opts = SweepOptions {
            samples: 500,
            ..Default::default()
        };
        let rep = moving_plane_sweep(&u, &center, &f, &[-1.0, 0.2, 1.5], opts).unwrap();
        assert!(rep.min_w() >= -1e-6);
    }

    #[test]
    fn ring_profile_has_negative_set() {
        let grid = radial_grid(Spacing::Uniform, 0.0, 12.0, 601).unwrap();
        let u = RadialFunction::from_fn(grid, |r| (-(r - 2.0) * (r - 2.0)).exp()).unwrap();
        let f = Foliation::new(1, 3).unwrap();
        let opts = SweepOptions {
            samples: 2000,
            ..Default::default()
        };
        let rep = moving_plane_sweep(&u, &HPoint::origin(3), &f, &[0.5], opts).unwrap();
        assert!(rep.leaves[0].negative_measure > 0.0);
        assert!(rep.leaves[0].min_w < -0.1);
    }

    #[test]
    fn empty_sample_set_is_an_error() {
        let f = Foliation::new(1, 3).unwrap();
        let opts = SweepOptions {
            samples: 0,
            ..Default::default()
        };
        let err = moving_plane_sweep(&bump(), &HPoint::origin(3), &f, &[0.0], opts).unwrap_err();
        assert!(matches!(err, Error::Sampling(_)));
    }
}
