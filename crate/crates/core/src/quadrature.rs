//! Quadrature rules shared by the kernel, spectral and solver modules.
//!
//! Gauss-Legendre rules are computed once per order by Newton iteration on
//! the Legendre recurrence and cached. A tanh-sinh rule handles integrable
//! endpoint singularities.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    /// Shared cached rule of the given order.
    pub fn cached(order: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(rule) = cache.read().expect("quadrature cache poisoned").get(&order) {
            return rule.clone();
        }
        let rule = Arc::new(GaussLegendre::new(order));
        cache
            .write()
            .expect("quadrature cache poisoned")
            .entry(order)
            .or_insert(rule)
            .clone()
    }

    /// Integrates `f` over [a, b].
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Maps the rule onto [a, b], appending (node, weight) pairs to `out`.
    pub fn push_mapped(&self, a: f64, b: f64, out: &mut Vec<(f64, f64)>) {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        out.extend(
            self.nodes
                .iter()
                .zip(&self.weights)
                .map(|(&x, &w)| (mid + half * x, w * half)),
        );
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Composite rule over consecutive breakpoints.
pub fn composite<F: FnMut(f64) -> f64>(breaks: &[f64], order: usize, mut f: F) -> f64 {
    let rule = GaussLegendre::cached(order);
    breaks
        .windows(2)
        .map(|w| rule.integrate(w[0], w[1], &mut f))
        .sum()
}

/// Node/weight list for a composite rule over consecutive breakpoints.
pub fn composite_nodes(breaks: &[f64], order: usize) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::cached(order);
    let mut out = Vec::with_capacity(order * breaks.len().saturating_sub(1));
    for w in breaks.windows(2) {
        rule.push_mapped(w[0], w[1], &mut out);
    }
    out
}

/// Breakpoints `a, a + h, ...` up to `b` with at most `max_width` spacing.
pub fn uniform_breaks(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let panels = (((b - a) / max_width).ceil() as usize).max(1);
    (0..=panels)
        .map(|k| a + (b - a) * k as f64 / panels as f64)
        .collect()
}

/// Breakpoints refined geometrically towards `a`: `a, a + w/2^k, ..., a + w/2, a + w`.
pub fn graded_breaks(a: f64, b: f64, levels: usize) -> Vec<f64> {
    let w = b - a;
    let mut out = Vec::with_capacity(levels + 2);
    out.push(a);
    for k in (1..=levels).rev() {
        out.push(a + w * 0.5f64.powi(k as i32));
    }
    out.push(b);
    out
}

/// A tanh-sinh node: position, distances to both endpoints, weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointNode {
    pub x: f64,
    pub from_a: f64,
    pub from_b: f64,
    pub weight: f64,
}

/// Nodes of the tanh-sinh rule on [a, b] with step `2^-level`.
pub fn tanh_sinh_nodes(a: f64, b: f64, level: usize) -> Vec<EndpointNode> {
    let h = 2.0f64.powi(-(level as i32));
    let half = 0.5 * (b - a);
    let tmax = 4.0;
    let steps = (tmax / h).ceil() as i64;
    let mut out = Vec::with_capacity(2 * steps as usize + 1);
    for k in -steps..=steps {
        let t = k as f64 * h;
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let cu = u.cosh();
        // distance of the mapped node from each endpoint, in units of `half`
        let e = (-2.0 * u.abs()).exp();
        let from_near = 2.0 * e / (1.0 + e);
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() / (cu * cu);
        if w < 1e-300 || from_near == 0.0 {
            continue;
        }
        let (da, db) = if t < 0.0 {
            (half * from_near, half * (2.0 - from_near))
        } else {
            (half * (2.0 - from_near), half * from_near)
        };
        if da <= 0.0 || db <= 0.0 {
            continue;
        }
        let x = if t < 0.0 { a + da } else { b - db };
        out.push(EndpointNode {
            x,
            from_a: da,
            from_b: db,
            weight: w * h * half,
        });
    }
    out
}

/// Tanh-sinh rule on [a, b]; tolerates integrable algebraic or logarithmic
/// singularities at either endpoint. `f` receives `(x, distance_to_a, distance_to_b)`
/// so singular factors can be evaluated without cancellation.
pub fn tanh_sinh<F: FnMut(f64, f64, f64) -> f64>(a: f64, b: f64, level: usize, mut f: F) -> f64 {
    tanh_sinh_nodes(a, b, level)
        .into_iter()
        .map(|nd| nd.weight * f(nd.x, nd.from_a, nd.from_b))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = GaussLegendre::new(7);
        // degree 13 is the highest exactly integrated
        let val = rule.integrate(0.0, 2.0, |x| x.powi(13));
        assert_relative_eq!(val, 2f64.powi(14) / 14.0, max_relative = 1e-13);
        let wsum: f64 = rule.weights.iter().sum();
        assert_relative_eq!(wsum, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn gauss_legendre_high_order_nodes_are_sorted() {
        let rule = GaussLegendre::new(40);
        assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        let val = rule.integrate(0.0, std::f64::consts::PI, f64::sin);
        assert_relative_eq!(val, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn tanh_sinh_handles_inverse_sqrt_endpoint() {
        let val = tanh_sinh(0.0, 1.0, 6, |_, da, _| da.powf(-0.5));
        assert_relative_eq!(val, 2.0, max_relative = 1e-10);
        let val = tanh_sinh(0.0, 1.0, 6, |_, _, db| db.ln());
        assert_relative_eq!(val, -1.0, max_relative = 1e-10);
    }

    #[test]
    fn graded_breaks_accumulate_at_left_end() {
        let b = graded_breaks(1.0, 2.0, 3);
        assert_eq!(b, vec![1.0, 1.125, 1.25, 1.5, 2.0]);
    }
}
