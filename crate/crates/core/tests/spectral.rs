use hyperfrac_core::spectral::{
    choose_lambda_max, inverse_spherical_transform, l2_norm_squared, radial_grid, spectral_l2_norm_squared,
    spectral_multiplier_radial, spherical_transform, LambdaGrid, RadialFunction, Spacing,
};

fn bump(width: f64, rho_max: f64) -> RadialFunction {
    let grid = radial_grid(Spacing::Uniform, 0.0, rho_max, 241).unwrap();
    RadialFunction::from_fn(grid, |r| (-(r / width).powi(2)).exp()).unwrap()
}

fn max_error(a: &RadialFunction, b: &RadialFunction) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / a.max_abs()
}

#[test]
fn round_trip_and_plancherel() {
    let f = bump(1.0, 6.0);
    for n in 2..=5 {
        let lmax = choose_lambda_max(&f, n, 0.0).unwrap();
        let grid = LambdaGrid::for_support(n, lmax, f.rho_max()).unwrap();
        let spec = spherical_transform(&f, n, &grid).unwrap();
        let back = inverse_spherical_transform(&spec, n, f.grid().to_vec()).unwrap();
        let err = max_error(&f, &back);
        let p = l2_norm_squared(&f, n);
        let q = spectral_l2_norm_squared(&spec, n);
        assert!(err < 1e-4);
        assert!((p / q - 1.0).abs() < 1e-4);
    }
}

#[test]
fn laplacian_multiplier() {
    let f = bump(1.0, 6.0);
    for n in 2..=5 {
        let lap = spectral_multiplier_radial(&f, n, 1.0, None).unwrap();
        let mut worst = 0.0f64;
        for (i, &r) in f.grid().iter().enumerate().skip(1).take(160) {
            // -Δ e^{-ρ²} = (2 - 4ρ²) e^{-ρ²} + (n-1) coth ρ · 2ρ e^{-ρ²}
            let want = ((2.0 - 4.0 * r * r) + (n as f64 - 1.0) * 2.0 * r / r.tanh()) * (-r * r).exp();
            worst = worst.max((lap.values()[i] - want).abs());
        }
        assert!(worst < 1e-4 * 2.0 * n as f64);
    }
}
