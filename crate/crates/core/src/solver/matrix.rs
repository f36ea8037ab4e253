//! Discretization of `φ -> ∫ G_s(d(x, y)) φ(y) dy` on radial profiles.

use rayon::prelude::*;
use serde::Serialize;

use super::angular::{angular_integral, row_nodes, GreenTable};
use crate::error::{Error, Result};
use crate::kernels::{sphere_area, GreenFunction, ProblemParams};
use crate::spectral::RadialFunction;

/// `A[i][j]`: weight of `φ(r_j)` in `∫ G φ` at `r_i`, with `φ` interpolated
/// piecewise linearly between grid nodes (so every entry is nonnegative).
#[derive(Debug, Clone, Serialize)]
pub struct RadialOperatorMatrix {
    params: ProblemParams,
    grid: Vec<f64>,
    entries: Vec<f64>,
    /// `|S^{n-1}| ∫ hat_j sinh^{n-1}`: volume carried by node `j`.
    volumes: Vec<f64>,
    /// Quadrature nodes used per row, for diagnostics.
    nodes_per_row: Vec<usize>,
}

impl RadialOperatorMatrix {
    pub fn params(&self) -> ProblemParams {
        self.params
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.grid.len() + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.grid.len();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn volumes(&self) -> &[f64] {
        &self.volumes
    }

    pub fn nodes_per_row(&self) -> &[usize] {
        &self.nodes_per_row
    }

    /// `A φ` for nodal values `φ`.
    pub fn apply(&self, phi: &[f64]) -> Result<Vec<f64>> {
        if phi.len() != self.grid.len() {
            return Err(Error::Shape {
                expected: self.grid.len(),
                found: phi.len(),
            });
        }
        Ok((0..self.grid.len())
            .map(|i| self.row(i).iter().zip(phi).map(|(a, p)| a * p).sum())
            .collect())
    }
}

/// Assembles [`RadialOperatorMatrix`] for the calibrated Green's function.
pub fn radial_green_matrix(params: ProblemParams, grid: &[f64]) -> Result<RadialOperatorMatrix> {
    // validates the grid
    RadialFunction::zeros(grid.to_vec())?;
    let green = GreenFunction::new(params)?;
    let rho_max = *grid.last().expect("validated grid");
    let table = GreenTable::new(&green, 2.0 * rho_max + 1.0)?;
    let n = params.n;
    let size = grid.len();
    let rows: Vec<(Vec<f64>, usize)> = grid
        .par_iter()
        .map(|&r| {
            let nodes = row_nodes(&table, n, r, grid);
            let mut row = vec![0.0; size];
            for &(x, w) in &nodes {
                let k = grid.partition_point(|&g| g <= x).clamp(1, size - 1) - 1;
                let h = grid[k + 1] - grid[k];
                let t = ((x - grid[k]) / h).clamp(0.0, 1.0);
                row[k] += w * (1.0 - t);
                row[k + 1] += w * t;
            }
            (row, nodes.len())
        })
        .collect();
    let mut entries = Vec::with_capacity(size * size);
    let mut nodes_per_row = Vec::with_capacity(size);
    for (row, count) in rows {
        if row.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Accuracy(format!(
                "Green matrix row with {count} quadrature nodes has invalid entries"
            )));
        }
        entries.extend(row);
        nodes_per_row.push(count);
    }
    Ok(RadialOperatorMatrix {
        params,
        grid: grid.to_vec(),
        entries,
        volumes: hat_volumes(n, grid),
        nodes_per_row,
    })
}

fn hat_volumes(n: usize, grid: &[f64]) -> Vec<f64> {
    let rule = crate::quadrature::GaussLegendre::cached(8);
    let mut out = vec![0.0; grid.len()];
    for k in 0..grid.len() - 1 {
        let (a, b) = (grid[k], grid[k + 1]);
        out[k] += rule.integrate(a, b, |x| (b - x) / (b - a) * x.sinh().powi(n as i32 - 1));
        out[k + 1] += rule.integrate(a, b, |x| (x - a) / (b - a) * x.sinh().powi(n as i32 - 1));
    }
    let area = sphere_area(n - 1);
    out.iter().map(|v| v * area).collect()
}

/// The angular kernel `A(r, r')` of the Green's function (radialized `G`).
pub fn green_angular_kernel(params: ProblemParams, r: f64, rp: f64) -> Result<f64> {
    let green = GreenFunction::new(params)?;
    let table = GreenTable::new(&green, r + rp + 1.0)?;
    Ok(angular_integral(&table, params.n, r, rp, r - rp))
}

/// `(G ⋆ g)(r)` on `out_grid` for a radial `g` (cubic interpolation of `g`).
pub fn green_convolution(
    params: ProblemParams,
    g: &RadialFunction,
    out_grid: &[f64],
) -> Result<RadialFunction> {
    let green = GreenFunction::new(params)?;
    let reach = g.rho_max() + out_grid.last().copied().unwrap_or(0.0) + 1.0;
    let table = GreenTable::new(&green, reach)?;
    let values = out_grid
        .par_iter()
        .map(|&r| {
            row_nodes(&table, params.n, r, g.grid())
                .into_iter()
                .map(|(x, w)| w * g.eval(x))
                .sum()
        })
        .collect();
    RadialFunction::new(out_grid.to_vec(), values)
}
