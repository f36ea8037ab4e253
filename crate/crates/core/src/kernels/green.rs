use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use super::abel::{abel_scaled, AbelOptions};
use super::operator::{apply_scaled, bessel_source_scaled};
use super::{c1_constant, c_ns_constant, dn_constant, KernelConstants, ProblemParams};
use crate::error::{Error, Result};

/// Reference radius for the one-point normalization.
pub const CALIBRATION_POINT: f64 = 1.0;
/// Held-out radii on which the calibrated ratio must stay constant.
pub const CALIBRATION_CHECK_POINTS: [f64; 4] = [0.1, 0.5, 2.0, 5.0];
pub const CALIBRATION_DRIFT_TOL: f64 = 1e-5;

/// Beyond `UNDERFLOW_EXPONENT / (n - 1)` the unscaled values are reported as 0.
const UNDERFLOW_EXPONENT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Profile {
    /// `ρ^{s-1/2} K_{1/2-s}(ρ0 ρ)`
    Green,
    /// `ρ^{-s-1/2} K_{s+1/2}(ρ0 ρ)`
    Kernel,
}

impl Profile {
    fn power_and_order(self, s: f64) -> (f64, f64) {
        match self {
            Profile::Green => (s - 0.5, 0.5 - s),
            Profile::Kernel => (-s - 0.5, s + 0.5),
        }
    }
}

/// `e^{(n-1)ρ}` times the unnormalized shape: `(-∂/sinh)^m` of the profile
/// for odd `n`, the Abel integral of it for even `n`.
pub(crate) fn shape_scaled(n: usize, s: f64, profile: Profile, rho: f64) -> Result<f64> {
    let (a, nu) = profile.power_and_order(s);
    let rho0 = 0.5 * (n as f64 - 1.0);
    if n % 2 == 1 {
        let m = (n - 1) / 2;
        let taylor = bessel_source_scaled(a, nu, rho0, rho, m);
        return Ok(apply_scaled(&taylor, rho, m, -1.0)[0]);
    }
    let m = n / 2;
    let fs = |r: f64| {
        let taylor = bessel_source_scaled(a, nu, rho0, r, m);
        apply_scaled(&taylor, r, m, -1.0)[0]
    };
    abel_scaled(rho, rho0 + m as f64, fs, AbelOptions::default())
}

fn check_radius(rho: f64) -> Result<()> {
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain {
            what: "radius",
            value: rho,
        });
    }
    Ok(())
}

fn unscale(n: usize, rho: f64, scaled: f64) -> f64 {
    let e = (n as f64 - 1.0) * rho;
    if e > UNDERFLOW_EXPONENT {
        0.0
    } else {
        scaled * (-e).exp()
    }
}

/// Calibrated Green's function of `(-Δ)^s` for one `(n, s)`.
#[derive(Debug, Clone, Copy)]
pub struct GreenFunction {
    params: ProblemParams,
    constants: KernelConstants,
}

impl GreenFunction {
    /// Calibrates (or fetches the cached calibration of) `α`.
    pub fn new(params: ProblemParams) -> Result<Self> {
        let constants = calibrate_normalization(params)?;
        Ok(Self { params, constants })
    }

    pub fn params(&self) -> ProblemParams {
        self.params
    }

    pub fn constants(&self) -> KernelConstants {
        self.constants
    }

    /// `G(ρ)`; returns 0 once `e^{-(n-1)ρ}` underflows (see [`Self::underflows`]).
    pub fn eval(&self, rho: f64) -> Result<f64> {
        let scaled = self.eval_scaled(rho)?;
        Ok(unscale(self.params.n, rho, scaled))
    }

    /// `e^{(n-1)ρ} G(ρ)`, finite for every `ρ > 0`.
    pub fn eval_scaled(&self, rho: f64) -> Result<f64> {
        check_radius(rho)?;
        Ok(self.constants.alpha * shape_scaled(self.params.n, self.params.s, Profile::Green, rho)?)
    }

    pub fn underflows(&self, rho: f64) -> bool {
        (self.params.n as f64 - 1.0) * rho > UNDERFLOW_EXPONENT
    }
}

/// `G_s(ρ)` for the given parameters.
pub fn green(params: ProblemParams, rho: f64) -> Result<f64> {
    GreenFunction::new(params)?.eval(rho)
}

/// `e^{(n-1)ρ} 𝒦_{n,s}(ρ)`.
pub fn singular_kernel_scaled(params: ProblemParams, rho: f64) -> Result<f64> {
    check_radius(rho)?;
    let c1 = c1_constant(params.n, params.s);
    let pref = if params.is_odd() { c1 } else { c1 / PI.sqrt() };
    Ok(pref * shape_scaled(params.n, params.s, Profile::Kernel, rho)?)
}

/// The singular kernel `𝒦_{n,s}(ρ)`; 0 once it underflows.
pub fn singular_kernel(params: ProblemParams, rho: f64) -> Result<f64> {
    let scaled = singular_kernel_scaled(params, rho)?;
    Ok(unscale(params.n, rho, scaled))
}

type CacheKey = (usize, u64);

fn cache() -> &'static Mutex<HashMap<CacheKey, KernelConstants>> {
    static CACHE: OnceLock<Mutex<HashMap<CacheKey, KernelConstants>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fixes `α` so that the closed form matches the spectral representation at
/// [`CALIBRATION_POINT`], then requires the ratio to stay constant on
/// [`CALIBRATION_CHECK_POINTS`]. Results are cached per `(n, s)`.
pub fn calibrate_normalization(params: ProblemParams) -> Result<KernelConstants> {
    let key = (params.n, params.s.to_bits());
    if let Some(c) = cache().lock().expect("calibration cache poisoned").get(&key) {
        return Ok(*c);
    }
    let ratio = |rho: f64| -> Result<f64> {
        let spectral = crate::spectral::green_spectral_scaled(params, rho)?;
        Ok(spectral / shape_scaled(params.n, params.s, Profile::Green, rho)?)
    };
    let mut points = vec![CALIBRATION_POINT];
    points.extend_from_slice(&CALIBRATION_CHECK_POINTS);
    let ratios: Vec<f64> = points.par_iter().map(|&r| ratio(r)).collect::<Result<_>>()?;
    let alpha = ratios[0];
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Calibration { drift: f64::NAN });
    }
    let drift = ratios[1..]
        .iter()
        .map(|r| (r / alpha - 1.0).abs())
        .fold(0.0, f64::max);
    if drift > CALIBRATION_DRIFT_TOL {
        return Err(Error::Calibration { drift });
    }
    let constants = KernelConstants {
        c_ns: c_ns_constant(params.n, params.s),
        c1: c1_constant(params.n, params.s),
        alpha,
        dn: dn_constant(params.n),
    };
    cache()
        .lock()
        .expect("calibration cache poisoned")
        .insert(key, constants);
    Ok(constants)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::analytic_alpha;
    use crate::specfun::bessel::k_scaled;
    use approx::assert_relative_eq;

    #[test]
    fn three_dimensional_half_order_is_k1_over_sinh() {
        // h = K_0(ρ), and -(d/dρ) K_0 / sinh = K_1 / sinh
        for &rho in &[0.5f64, 1.0, 2.0] {
            let got = shape_scaled(3, 0.5, Profile::Green, rho).unwrap() * (-2.0 * rho).exp();
            let want = k_scaled(1.0, rho) * (-rho).exp() / rho.sinh();
            assert_relative_eq!(got, want, max_relative = 1e-13);
        }
    }

    #[test]
    fn odd_dimension_recursion() {
        // d/dρ G_{2m+1} = -sinh ρ · G_{2m+3} (same s, same ρ0 inside K)
        // checked on raw shapes with ρ0 held fixed: use n = 3 and 5 sources
        // built by hand with ρ0 = 2
        let (s, rho) = (0.3, 0.8);
        let (a, nu) = (s - 0.5, 0.5 - s);
        let t = bessel_source_scaled(a, nu, 2.0, rho, 3);
        let one = apply_scaled(&t, rho, 1, -1.0);
        let two = apply_scaled(&t, rho, 2, -1.0);
        // one[1] is the Taylor slope of the scaled one-step result; undo the e^{2ρ + ρ} scaling
        let scale1 = (-(2.0 + 1.0) * rho).exp();
        let scale2 = (-(2.0 + 2.0) * rho).exp();
        let direct = one[1] * scale1;
        let via_recursion = -rho.sinh() * two[0] * scale2;
        assert_relative_eq!(direct, via_recursion, max_relative = 1e-9);
    }

    #[test]
    fn shapes_are_positive_and_green_is_decreasing() {
        for &(n, s) in &[(2usize, 0.3), (3, 0.5), (4, 0.7), (5, 0.25)] {
            let mut prev = f64::INFINITY;
            for k in 0..40 {
                let rho = 1e-3 * 1.3f64.powi(k);
                let g = shape_scaled(n, s, Profile::Green, rho).unwrap() * (-(n as f64 - 1.0) * rho).exp();
                let kk = shape_scaled(n, s, Profile::Kernel, rho).unwrap();
                assert!(g > 0.0 && kk > 0.0, "n={n} s={s} rho={rho}");
                assert!(g < prev);
                prev = g;
            }
        }
    }

    #[test]
    fn calibrated_alpha_matches_fourier_cosine_constant() {
        for &(n, s) in &[(3usize, 0.5), (5, 0.25), (2, 0.3), (4, 0.7)] {
            let p = ProblemParams::linear(n, s).unwrap();
            let c = calibrate_normalization(p).unwrap();
            assert_relative_eq!(c.alpha, analytic_alpha(n, s), max_relative = 1e-6);
        }
    }

    #[test]
    fn underflow_is_reported_as_zero() {
        let g = GreenFunction::new(ProblemParams::linear(3, 0.5).unwrap()).unwrap();
        assert!(g.underflows(400.0));
        assert_eq!(g.eval(400.0).unwrap(), 0.0);
        assert!(g.eval_scaled(400.0).unwrap() > 0.0);
        assert!(g.eval(0.0).is_err());
        assert!(g.eval(-1.0).is_err());
    }
}
