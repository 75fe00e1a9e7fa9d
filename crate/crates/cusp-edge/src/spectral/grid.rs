use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::error::{invalid, Result};

/// Node placement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum GridScheme {
    Uniform,
    /// `x_j = x_max (j/N)^q`
    Graded(f64),
}

/// Nodes `x_1 < … < x_N = x_max` with dual cells `[c_{j−1}, c_j]`,
/// `c_0 = 0`, `c_j` the midpoints and `c_N = x_max`. Weights are the exact
/// integrals of `x^{kf}` over the dual cells.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Grid {
    pub scheme: GridScheme,
    pub x_max: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// Exponent `kf` of the measure.
    pub exponent: f64,
}

impl Grid {
    pub fn size(&self) -> usize {
        self.nodes.len()
    }

    /// Dual cell boundaries `c_0 … c_N`.
    pub fn cells(&self) -> Vec<f64> {
        let n = self.size();
        let mut c = Vec::with_capacity(n + 1);
        c.push(0.0);
        for j in 0..n - 1 {
            c.push(0.5 * (self.nodes[j] + self.nodes[j + 1]));
        }
        c.push(self.x_max);
        c
    }

    /// Uniform spacing, when the scheme is uniform.
    pub fn spacing(&self) -> Option<f64> {
        match self.scheme {
            GridScheme::Uniform => Some(self.x_max / self.size() as f64),
            GridScheme::Graded(_) => None,
        }
    }

    /// `∫_0^{x_max} x^{kf} dx`
    pub fn exact_mass(&self) -> f64 {
        self.x_max.powf(self.exponent + 1.0) / (self.exponent + 1.0)
    }
}

pub(crate) fn cell_weights(cells: &[f64], exponent: f64) -> Vec<f64> {
    let p = exponent + 1.0;
    cells.windows(2).map(|w| (w[1].powf(p) - w[0].powf(p)) / p).collect()
}

/// Grid on `(0, x_max]` carrying the cusp volume factor `x^{kf}`.
pub fn build_grid(scheme: GridScheme, size: usize, x_max: f64, g: &GeometryParams) -> Result<Grid> {
    if size < 16 {
        return invalid(format!("grid size must be at least 16, got {size}"));
    }
    if !(x_max > 0.0 && x_max.is_finite()) {
        return invalid(format!("x_max must be positive, got {x_max}"));
    }
    let nodes: Vec<f64> = match scheme {
        GridScheme::Uniform => (1..=size).map(|j| x_max * j as f64 / size as f64).collect(),
        GridScheme::Graded(q) => {
            if !(q >= 1.0 && q.is_finite()) {
                return invalid(format!("grading exponent must be at least 1, got {q}"));
            }
            (1..=size).map(|j| x_max * (j as f64 / size as f64).powf(q)).collect()
        }
    };
    let exponent = (g.k as usize * g.f) as f64;
    let mut grid = Grid { scheme, x_max, nodes, weights: Vec::new(), exponent };
    grid.weights = cell_weights(&grid.cells(), exponent);
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_and_order() {
        let g = GeometryParams::new(3, 1, 0).unwrap();
        let grid = build_grid(GridScheme::Uniform, 100, 1.0, &g).unwrap();
        let s: f64 = grid.weights.iter().sum();
        assert!((s - 0.25).abs() < 1e-12);
        let graded = build_grid(GridScheme::Graded(2.0), 64, 1.5, &g).unwrap();
        assert!(graded.nodes.windows(2).all(|w| w[0] < w[1]) && graded.nodes[0] > 0.0);
        assert!(graded.weights.iter().all(|w| *w > 0.0));
        assert!(build_grid(GridScheme::Uniform, 8, 1.0, &g).is_err());
        assert!(build_grid(GridScheme::Uniform, 32, -1.0, &g).is_err());
    }
}
