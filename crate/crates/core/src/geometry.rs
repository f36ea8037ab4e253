//! Models of hyperbolic space, geodesic distance and the isometries used by
//! the moving-plane diagnostics.
//!
//! Points are stored on the upper sheet of the hyperboloid
//! `x0² - x1² - ... - xn² = 1`. The Poincaré ball and the upper half-space
//! are conversion targets only.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Allowed defect of the Lorentz constraint, relative to `x0²`.
pub const CONSTRAINT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    coords: Vec<f64>,
}

fn lorentz(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<f64>()
}

impl HPoint {
    /// Validates `(x0, x1, ..., xn)` against the hyperboloid constraint.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidParams(
                "a point of H^n needs n >= 1 spatial coordinates".into(),
            ));
        }
        if coords.iter().any(|c| !c.is_finite()) || coords[0] < 1.0 {
            return Err(Error::InvalidPoint { defect: f64::NAN });
        }
        let defect = (lorentz(&coords, &coords) - 1.0).abs();
        if defect > CONSTRAINT_TOL * coords[0] * coords[0] {
            return Err(Error::InvalidPoint { defect });
        }
        Ok(Self { coords })
    }

    /// Lifts spatial coordinates `(x1, ..., xn)` onto the upper sheet.
    pub fn from_spatial(spatial: &[f64]) -> Result<Self> {
        if spatial.is_empty() || spatial.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParams(
                "spatial coordinates must be finite and non-empty".into(),
            ));
        }
        let mut coords = Vec::with_capacity(spatial.len() + 1);
        coords.push(0.0);
        coords.extend_from_slice(spatial);
        Ok(Self::renormalized(coords))
    }

    /// The base point `(1, 0, ..., 0)` of `H^n`.
    pub fn origin(n: usize) -> Self {
        let mut coords = vec![0.0; n + 1];
        coords[0] = 1.0;
        Self { coords }
    }

    /// Restores `x0 = sqrt(1 + |x|²)` to absorb rounding drift.
    fn renormalized(mut coords: Vec<f64>) -> Self {
        let r2: f64 = coords[1..].iter().map(|x| x * x).sum();
        coords[0] = (1.0 + r2).sqrt();
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn constraint_defect(&self) -> f64 {
        (lorentz(&self.coords, &self.coords) - 1.0).abs()
    }
}

/// A point of the open unit ball `B^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    coords: Vec<f64>,
}

impl BallPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = coords.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm < 1.0) || coords.is_empty() {
            return Err(Error::OutOfModel { norm });
        }
        Ok(Self { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// A point of the upper half-space: `(y1, ..., y_{n-1}, t)` with `t > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpacePoint {
    pub coords: Vec<f64>,
}

/// A family of hyperplanes `U_λ = A_λ(U_0)`, where `U_0 = {x_k = 0}` and
/// `A_t` boosts in the `(x0, x_k)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Foliation {
    direction_index: usize,
    pub leaf_parameter: f64,
}

impl Foliation {
    pub fn new(direction_index: usize, n: usize) -> Result<Self> {
        if direction_index == 0 || direction_index > n {
            return Err(Error::InvalidParams(format!(
                "foliation direction {direction_index} outside 1..={n}"
            )));
        }
        Ok(Self {
            direction_index,
            leaf_parameter: 0.0,
        })
    }

    pub fn direction_index(&self) -> usize {
        self.direction_index
    }

    pub fn at_leaf(self, lambda: f64) -> Self {
        Self {
            leaf_parameter: lambda,
            ..self
        }
    }

    /// Signed coordinate of `p` across the leaf `U_λ`: the k-th spatial
    /// coordinate of `A_{-λ} p`. Zero on the leaf.
    pub fn side(&self, lambda: f64, p: &HPoint) -> f64 {
        boost(-lambda, p, self).coords[self.direction_index]
    }
}

fn check_dims(a: &HPoint, b: &HPoint) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::Shape {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// Geodesic distance, `cosh ρ = -<a, b>`.
///
/// Nearby points use `ρ = 2 asinh(|a - b|/2)` with the Lorentz norm of the
/// chord, which keeps full relative accuracy as `ρ -> 0`.
pub fn dist(a: &HPoint, b: &HPoint) -> Result<f64> {
    check_dims(a, b)?;
    for p in [a, b] {
        let defect = p.constraint_defect();
        if defect > CONSTRAINT_TOL * p.coords[0] * p.coords[0] {
            return Err(Error::InvalidPoint { defect });
        }
    }
    let q = lorentz(&a.coords, &b.coords);
    if q >= 2.0 {
        return Ok(q.acosh());
    }
    let diff: Vec<f64> = a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect();
    let chord2 = (-lorentz(&diff, &diff)).max(0.0);
    Ok(2.0 * (0.5 * chord2.sqrt()).asinh())
}

pub fn ball_to_hyperboloid(b: &BallPoint) -> HPoint {
    let r2: f64 = b.coords.iter().map(|x| x * x).sum();
    let denom = 1.0 - r2;
    let mut coords = Vec::with_capacity(b.coords.len() + 1);
    coords.push((1.0 + r2) / denom);
    coords.extend(b.coords.iter().map(|x| 2.0 * x / denom));
    HPoint::renormalized(coords)
}

pub fn hyperboloid_to_ball(p: &HPoint) -> BallPoint {
    let scale = 1.0 / (1.0 + p.coords[0]);
    BallPoint {
        coords: p.coords[1..].iter().map(|x| x * scale).collect(),
    }
}

/// Upper half-space image, using the last coordinate as the vertical axis.
pub fn hyperboloid_to_half_space(p: &HPoint) -> HalfSpacePoint {
    let n = p.dim();
    let denom = p.coords[0] - p.coords[n];
    let mut coords: Vec<f64> = p.coords[1..n].iter().map(|x| x / denom).collect();
    coords.push(1.0 / denom);
    HalfSpacePoint { coords }
}

pub fn half_space_to_hyperboloid(h: &HalfSpacePoint) -> Result<HPoint> {
    let n = h.coords.len();
    let t = h.coords[n - 1];
    if !(t > 0.0) {
        return Err(Error::OutOfModel { norm: t });
    }
    let y2: f64 = h.coords[..n - 1].iter().map(|y| y * y).sum();
    let mut coords = Vec::with_capacity(n + 1);
    coords.push((1.0 + y2 + t * t) / (2.0 * t));
    coords.extend(h.coords[..n - 1].iter().map(|y| y / t));
    coords.push((y2 + t * t - 1.0) / (2.0 * t));
    Ok(HPoint::renormalized(coords))
}

/// Hyperbolic rotation `A_t` in the `(x0, x_k)` plane of the foliation.
pub fn boost(t: f64, p: &HPoint, f: &Foliation) -> HPoint {
    let k = f.direction_index;
    let (sh, ch) = (t.sinh(), t.cosh());
    let mut coords = p.coords.clone();
    coords[0] = ch * p.coords[0] + sh * p.coords[k];
    coords[k] = sh * p.coords[0] + ch * p.coords[k];
    HPoint::renormalized(coords)
}

/// Reflection `I_λ = A_λ ∘ I ∘ A_{-λ}` across the leaf `U_λ`.
pub fn reflect(lambda: f64, p: &HPoint, f: &Foliation) -> HPoint {
    let mut q = boost(-lambda, p, f);
    q.coords[f.direction_index] = -q.coords[f.direction_index];
    boost(lambda, &q, f)
}

/// `cosh` of the distance between points at radii `r`, `rp` from a common
/// centre separated by the angle `θ`.
pub fn cosh_dist_radial(r: f64, rp: f64, theta: f64) -> Result<f64> {
    check_radii(r, rp)?;
    Ok(1.0 + 2.0 * sinh2_half_dist(r, rp, theta))
}

fn check_radii(r: f64, rp: f64) -> Result<()> {
    if !(r >= 0.0) {
        return Err(Error::Domain {
            what: "radius",
            value: r,
        });
    }
    if !(rp >= 0.0) {
        return Err(Error::Domain {
            what: "radius",
            value: rp,
        });
    }
    Ok(())
}

/// The distance itself, via
/// `sinh²(ρ/2) = sinh²((r - rp)/2) + sinh r sinh rp sin²(θ/2)`,
/// accurate when the two points nearly coincide.
fn sinh2_half_dist(r: f64, rp: f64, theta: f64) -> f64 {
    let a = (0.5 * (r - rp)).sinh();
    let b = (0.5 * theta).sin();
    a * a + r.sinh() * rp.sinh() * b * b
}

pub(crate) fn radial_distance(r: f64, rp: f64, theta: f64) -> f64 {
    if r + rp < 600.0 {
        return 2.0 * sinh2_half_dist(r, rp, theta).sqrt().asinh();
    }
    // log domain: ln sinh²(ρ/2) as a log-sum-exp, then ρ = ln(4 sinh²(ρ/2))
    // up to a relative e^{-ρ} correction
    let ln_sinh = |x: f64| x + (-(-2.0 * x).exp_m1() / 2.0).ln();
    let la = 2.0 * ln_sinh((0.5 * (r - rp)).abs());
    let lb = ln_sinh(r) + ln_sinh(rp) + 2.0 * (0.5 * theta).sin().abs().ln();
    let hi = la.max(lb);
    let ln_s2 = hi + ((la - hi).exp() + (lb - hi).exp()).ln();
    4f64.ln() + ln_s2
}

/// Polar point at geodesic radius `r` in the direction `u` (unit vector).
pub fn polar_point(r: f64, u: &[f64]) -> HPoint {
    let sh = r.sinh();
    let mut coords = Vec::with_capacity(u.len() + 1);
    coords.push(r.cosh());
    coords.extend(u.iter().map(|x| sh * x));
    HPoint::renormalized(coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ball_half_radius_is_log3() {
        let b = BallPoint::new(vec![0.5, 0.0, 0.0]).unwrap();
        let p = ball_to_hyperboloid(&b);
        let d = dist(&p, &HPoint::origin(3)).unwrap();
        assert_relative_eq!(d, 3f64.ln(), max_relative = 1e-14);
    }

    #[test]
    fn identical_points_have_zero_distance() {
        let p = HPoint::from_spatial(&[0.3, -1.2]).unwrap();
        assert_eq!(dist(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn ball_pair_matches_lorentz_oracle() {
        let a = ball_to_hyperboloid(&BallPoint::new(vec![0.3, 0.0]).unwrap());
        let b = ball_to_hyperboloid(&BallPoint::new(vec![-0.3, 0.0]).unwrap());
        let oracle = lorentz(&a.coords, &b.coords).acosh();
        assert_relative_eq!(dist(&a, &b).unwrap(), oracle, max_relative = 1e-12);
        // along a diameter the ball formula adds
        assert_relative_eq!(
            dist(&a, &b).unwrap(),
            2.0 * (1.3f64 / 0.7).ln(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn small_distances_keep_relative_accuracy() {
        let a = polar_point(1.0, &[1.0, 0.0]);
        let b = polar_point(1.0 + 1e-9, &[1.0, 0.0]);
        assert_relative_eq!(dist(&a, &b).unwrap(), 1e-9, max_relative = 1e-6);
    }

    #[test]
    fn model_round_trips() {
        let b = BallPoint::new(vec![0.2, -0.4, 0.1]).unwrap();
        let back = hyperboloid_to_ball(&ball_to_hyperboloid(&b));
        for (x, y) in b.coords().iter().zip(back.coords()) {
            assert!((x - y).abs() < 1e-12);
        }
        let p = HPoint::from_spatial(&[0.4, 1.1, -0.7]).unwrap();
        let q = half_space_to_hyperboloid(&hyperboloid_to_half_space(&p)).unwrap();
        for (x, y) in p.coords().iter().zip(q.coords()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert_eq!(
            ball_to_hyperboloid(&BallPoint::new(vec![0.0, 0.0]).unwrap()),
            HPoint::origin(2)
        );
    }

    #[test]
    fn out_of_model_inputs_are_rejected() {
        assert!(matches!(
            BallPoint::new(vec![0.6, 0.8]),
            Err(Error::OutOfModel { .. })
        ));
        assert!(matches!(
            HPoint::new(vec![1.0, 0.5]),
            Err(Error::InvalidPoint { .. })
        ));
        assert!(HPoint::new(vec![1.0, 0.0]).is_ok());
        assert!(cosh_dist_radial(-1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn boost_of_origin() {
        let f = Foliation::new(1, 3).unwrap();
        let q = boost(0.8, &HPoint::origin(3), &f);
        assert_relative_eq!(q.coords()[0], 0.8f64.cosh());
        assert_relative_eq!(q.coords()[1], 0.8f64.sinh());
        assert_eq!(q.coords()[2], 0.0);
        let p = HPoint::from_spatial(&[0.1, 0.2, 0.3]).unwrap();
        assert_eq!(boost(0.0, &p, &f), p);
        let two = boost(0.3, &boost(0.4, &p, &f), &f);
        let one = boost(0.7, &p, &f);
        for (x, y) in two.coords().iter().zip(one.coords()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(Foliation::new(4, 3).is_err());
        assert!(Foliation::new(0, 3).is_err());
    }

    #[test]
    fn reflection_at_zero_flips_one_coordinate() {
        let f = Foliation::new(1, 2).unwrap();
        let p = HPoint::from_spatial(&[0.5, -0.25]).unwrap();
        let q = reflect(0.0, &p, &f);
        assert_relative_eq!(q.coords()[1], -0.5);
        assert_relative_eq!(q.coords()[2], -0.25);
        let back = reflect(0.6, &reflect(0.6, &p, &f), &f);
        for (x, y) in p.coords().iter().zip(back.coords()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_law_of_cosines() {
        assert_relative_eq!(cosh_dist_radial(1.3, 0.0, 2.0).unwrap(), 1.3f64.cosh());
        assert_eq!(cosh_dist_radial(0.7, 0.7, 0.0).unwrap(), 1.0);
        assert_relative_eq!(
            cosh_dist_radial(1.0, 2.0, PI).unwrap(),
            3f64.cosh(),
            max_relative = 1e-14
        );
        let c = cosh_dist_radial(1.0, 2.0, PI / 2.0).unwrap();
        assert_relative_eq!(c, 1f64.cosh() * 2f64.cosh(), max_relative = 1e-14);
        let a = polar_point(1.0, &[1.0, 0.0]);
        let b = polar_point(2.0, &[0.0, 1.0]);
        assert_relative_eq!(dist(&a, &b).unwrap().cosh(), c, max_relative = 1e-13);
        assert_relative_eq!(
            radial_distance(1.0, 2.0, PI / 2.0),
            c.acosh(),
            max_relative = 1e-13
        );
        assert_relative_eq!(
            radial_distance(400.0, 390.0, 1.0),
            790.0 + 2.0 * (0.5f64).sin().ln(),
            max_relative = 1e-10
        );
    }
}
