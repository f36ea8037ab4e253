//! Truncated derivative jets of scalar functions.
//!
//! A [`Jet`] stores the derivatives `f(x0), f'(x0), ..., f^(m)(x0)`. Products
//! and quotients follow the Leibniz rule; internally they are carried out on
//! Taylor-scaled coefficients, which turns the Leibniz sums into Cauchy
//! products.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base_point: f64,
    coeffs: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl Jet {
    /// Builds a jet from raw derivatives (entry k is the k-th derivative).
    pub fn new(base_point: f64, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParams("jet needs at least one coefficient".into()));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain {
                what: "jet coefficient",
                value: *bad,
            });
        }
        Ok(Self { base_point, coeffs })
    }

    pub(crate) fn from_raw(base_point: f64, coeffs: Vec<f64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { base_point, coeffs }
    }

    pub fn from_taylor(base_point: f64, taylor: &[f64]) -> Self {
        let coeffs = taylor.iter().enumerate().map(|(k, c)| c * factorial(k)).collect();
        Self { base_point, coeffs }
    }

    pub fn constant(base_point: f64, value: f64, order: usize) -> Self {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = value;
        Self { base_point, coeffs }
    }

    /// Jet of `x -> x^a` at `x0 > 0`.
    pub fn power(x0: f64, a: f64, order: usize) -> Self {
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut falling = 1.0;
        for k in 0..=order {
            coeffs.push(falling * x0.powf(a - k as f64));
            falling *= a - k as f64;
        }
        Self {
            base_point: x0,
            coeffs,
        }
    }

    /// Jet of `x -> exp(c (x - x0))`, i.e. the exponential with its value at
    /// the base point factored out.
    pub fn exp_shifted(x0: f64, c: f64, order: usize) -> Self {
        let coeffs = (0..=order).map(|k| c.powi(k as i32)).collect();
        Self {
            base_point: x0,
            coeffs,
        }
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn taylor(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c / factorial(k))
            .collect()
    }

    pub fn truncate(mut self, order: usize) -> Self {
        self.coeffs.truncate(order + 1);
        self
    }

    pub fn scale(mut self, factor: f64) -> Self {
        self.coeffs.iter_mut().for_each(|c| *c *= factor);
        self
    }

    /// Jet of the derivative; one order shorter.
    pub fn differentiate(&self) -> Result<Self> {
        if self.coeffs.len() < 2 {
            return Err(Error::UnsupportedOrder {
                order: 1,
                max: self.order(),
            });
        }
        Ok(Self {
            base_point: self.base_point,
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Leibniz product, truncated to the shorter order.
    pub fn mul(&self, other: &Jet) -> Jet {
        let order = self.order().min(other.order());
        let a = self.taylor();
        let b = other.taylor();
        let prod = cauchy_product(&a, &b, order);
        Jet::from_taylor(self.base_point, &prod)
    }

    /// Jet of `1 / f`. The value at the base point must be non-zero.
    pub fn recip(&self) -> Result<Jet> {
        let a = self.taylor();
        if a[0] == 0.0 {
            return Err(Error::Domain {
                what: "jet reciprocal",
                value: 0.0,
            });
        }
        Ok(Jet::from_taylor(self.base_point, &series_recip(&a)))
    }
}

pub(crate) fn cauchy_product(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    (0..=order)
        .map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum())
        .collect()
}

/// Reciprocal of a power series with non-zero constant term.
pub(crate) fn series_recip(a: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len()];
    out[0] = 1.0 / a[0];
    for k in 1..a.len() {
        let s: f64 = (1..=k).map(|j| a[j] * out[k - j]).sum();
        out[k] = -s / a[0];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_follows_leibniz() {
        // (x^2)(x^3) = x^5 at x = 1.5
        let x0 = 1.5;
        let p = Jet::power(x0, 2.0, 4).mul(&Jet::power(x0, 3.0, 4));
        let want = Jet::power(x0, 5.0, 4);
        for k in 0..=4 {
            assert_relative_eq!(p.derivative(k), want.derivative(k), max_relative = 1e-13);
        }
    }

    #[test]
    fn reciprocal_of_power() {
        let x0 = 0.7;
        let r = Jet::power(x0, 1.5, 5).recip().unwrap();
        let want = Jet::power(x0, -1.5, 5);
        for k in 0..=5 {
            assert_relative_eq!(r.derivative(k), want.derivative(k), max_relative = 1e-12);
        }
    }

    #[test]
    fn rejects_non_finite() {
        assert!(Jet::new(1.0, vec![1.0, f64::NAN]).is_err());
        assert!(Jet::new(1.0, vec![]).is_err());
    }

    #[test]
    fn differentiate_drops_one_order() {
        let j = Jet::power(2.0, 3.0, 3);
        let d = j.differentiate().unwrap();
        assert_eq!(d.order(), 2);
        assert_relative_eq!(d.value(), 12.0);
        assert!(Jet::constant(1.0, 1.0, 0).differentiate().is_err());
    }
}
