//! Radial solver checked against direct quadrature in geodesic polar
//! coordinates about the evaluation point, which never touches the angular
//! reduction used to assemble the matrix.

use hyperfrac_core::quadrature::{composite, composite_nodes, graded_breaks, uniform_breaks};
use hyperfrac_core::solver::{picard_solve, radial_green_matrix};
use hyperfrac_core::spectral::radial_grid;
use hyperfrac_core::{GreenFunction, ProblemParams, RadialFunction, Spacing};

/// Distance from a point at radius `r` to the sphere of radius `big`, along
/// the ray at angle `theta` from the outward radial direction.
fn exit_distance(r: f64, big: f64, theta: f64) -> f64 {
    // cosh R = cosh r cosh t + sinh r sinh t cos θ, solved for e^t
    let (a, b, c) = (r.cosh(), r.sinh() * theta.cos(), big.cosh());
    ((c + (c * c - (a * a - b * b)).sqrt()) / (a + b)).ln()
}

/// Radius of the point at distance `t` from radius `r` along angle `theta`.
fn radius_along(r: f64, t: f64, theta: f64) -> f64 {
    (r.cosh() * t.cosh() + r.sinh() * t.sinh() * theta.cos())
        .max(1.0)
        .acosh()
}

/// `∫_{B_big} G(d(x, y)) w(|y|) dy` for `|x| = r` in `H^3`.
fn ball_integral(g: &GreenFunction, r: f64, big: f64, w: impl Fn(f64) -> f64) -> f64 {
    composite_nodes(&uniform_breaks(0.0, std::f64::consts::PI, 0.25), 16)
        .into_iter()
        .map(|(theta, wt)| {
            let top = exit_distance(r, big, theta);
            let mut breaks = graded_breaks(0.0, top.min(0.5), 24);
            if top > 0.5 {
                breaks.pop();
                breaks.extend(uniform_breaks(0.5, top, 0.25));
            }
            let inner = composite(&breaks, 16, |t| {
                g.eval(t).unwrap() * t.sinh().powi(2) * w(radius_along(r, t, theta))
            });
            wt * 2.0 * std::f64::consts::PI * theta.sin() * inner
        })
        .sum()
}

#[test]
fn matrix_rows_match_ball_oracle() {
    let params = ProblemParams::linear(3, 0.5).unwrap();
    let g = GreenFunction::new(params).unwrap();
    let big = 6.0;
    let grid = radial_grid(Spacing::Uniform, 0.0, big, 121).unwrap();
    let matrix = radial_green_matrix(params, &grid).unwrap();
    // hats sum to one on [0, R], so T(1) is the potential of the ball's indicator
    let ones = matrix.apply(&vec![1.0; grid.len()]).unwrap();
    for i in [0, 10, 40, 80, 110] {
        let want = ball_integral(&g, grid[i], big, |_| 1.0);
        let rel = (ones[i] / want - 1.0).abs();
        assert!(
            rel < 1e-5,
            "row {i} (r = {}): {} vs {want}, rel {rel:.2e}",
            grid[i],
            ones[i]
        );
    }
}

fn fixed_point_error(nodes: usize) -> f64 {
    let params = ProblemParams::new(3, 0.5, 1.5).unwrap();
    let g = GreenFunction::new(params).unwrap();
    let big = 12.0;
    let grid = radial_grid(Spacing::Uniform, 0.0, big, nodes).unwrap();
    let sol = picard_solve(params, &grid, 1e-9, 5000).unwrap();
    assert!(sol.converged, "{:?}", sol.warnings);
    let u: &RadialFunction = &sol.profile;
    [0.0, 0.5, 1.5, 3.0]
        .iter()
        .map(|&r| {
            let want = ball_integral(&g, r, big, |rho| u.eval(rho).max(0.0).powf(params.p));
            (u.eval(r) / want - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn solution_satisfies_the_integral_equation() {
    // the hat basis is second order, so halving the spacing should cut the error about fourfold
    let coarse = fixed_point_error(121);
    let fine = fixed_point_error(241);
    assert!(fine < 3e-3, "{fine:.2e}");
    assert!(coarse / fine > 3.0, "{coarse:.2e} -> {fine:.2e}");
}
