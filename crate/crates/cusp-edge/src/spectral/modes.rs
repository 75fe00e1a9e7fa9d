use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::error::{invalid, Error, Result};

use super::grid::{cell_weights, Grid};
use super::tridiag::SymTridiag;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OperatorKind {
    /// Chiral 2×2 block first-order operator for one fiber eigenvalue `μ`.
    DiracMode,
    /// Scalar Laplacian for one Fourier mode `n`.
    LaplaceMode,
    /// `−∂² + n²` on an interval, the flat control.
    FlatMode,
}

/// Condition at the artificial wall `x = x_max`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WallCondition {
    Dirichlet,
    Neumann,
}

/// One Fourier mode of a model operator.
///
/// `matrix` is the symmetrised form `W^{1/2} M W^{−1/2}` of the operator `M`
/// acting on nodal values `u`, where `W = diag(weights)` is the quadrature of
/// the volume measure. A symmetrised vector `v` corresponds to `u = v/√w`.
#[derive(Clone, Debug)]
pub struct ModeOperator {
    pub params: GeometryParams,
    pub kind: OperatorKind,
    pub mode: f64,
    pub matrix: SymTridiag,
    pub positions: Vec<f64>,
    pub weights: Vec<f64>,
    /// `+1`/`−1` per unknown for Dirac modes, empty otherwise.
    pub chirality: Vec<i8>,
    pub wall: WallCondition,
    grid_size: usize,
    /// `(diag, sub)` of the lower bidiagonal `D⁺`-block for Dirac modes.
    bidiagonal: Option<(Vec<f64>, Vec<f64>)>,
    /// Whether nodes (rather than half nodes) carry positive chirality.
    nodes_positive: bool,
}

impl ModeOperator {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Total bandwidth of the stored matrix.
    pub fn bandwidth(&self) -> usize {
        3
    }

    /// `max |(WM)_{ij} − (WM)_{ji}| / max |WM|` for the unsymmetrised operator.
    pub fn symmetry_defect(&self) -> f64 {
        let w = &self.weights;
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for (i, s) in self.matrix.off.iter().enumerate() {
            let m_ij = s * (w[i + 1] / w[i]).sqrt();
            let m_ji = s * (w[i] / w[i + 1]).sqrt();
            let a = w[i] * m_ij;
            let b = w[i + 1] * m_ji;
            num = num.max((a - b).abs());
            den = den.max(a.abs()).max(b.abs());
        }
        for (i, d) in self.matrix.diag.iter().enumerate() {
            den = den.max((w[i] * d).abs());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    /// Nodal values `u` of a symmetrised vector.
    pub fn to_nodal(&self, v: &[f64]) -> Vec<f64> {
        v.iter().zip(&self.weights).map(|(a, w)| a / w.sqrt()).collect()
    }

    /// Symmetrised `D⁻D⁺` and `D⁺D⁻` for a Dirac mode, acting on the
    /// positive and negative chirality unknowns.
    pub fn chiral_squares(&self) -> Result<(SymTridiag, SymTridiag)> {
        let (a, c) = self
            .bidiagonal
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("chiral squares need a Dirac mode".into()))?;
        let n = a.len();
        // BᵀB on nodes
        let btb_d: Vec<f64> = (0..n).map(|j| a[j] * a[j] + if j + 1 < n { c[j + 1] * c[j + 1] } else { 0.0 }).collect();
        let btb_o: Vec<f64> = (0..n - 1).map(|j| c[j + 1] * a[j + 1]).collect();
        // BBᵀ on half nodes
        let bbt_d: Vec<f64> = (0..n).map(|j| a[j] * a[j] + if j > 0 { c[j] * c[j] } else { 0.0 }).collect();
        let bbt_o: Vec<f64> = (0..n - 1).map(|j| a[j] * c[j + 1]).collect();
        let nodes = SymTridiag::new(btb_d, btb_o)?;
        let halves = SymTridiag::new(bbt_d, bbt_o)?;
        Ok(if self.nodes_positive { (nodes, halves) } else { (halves, nodes) })
    }
}

fn mode_is_admissible(mu: f64) -> bool {
    mu.is_finite() && (2.0 * mu - (2.0 * mu).round()).abs() < 1e-12
}

/// Staggered discretisation of `cl(∂_x)(∂_x + kf/(2x)) + μ x^{−k}` on a
/// uniform grid.
///
/// In `w = x^{kf/2} u` the chiral blocks are `D⁺ = ∂_x + μx^{−k}` and
/// `D⁻ = (D⁺)* = −∂_x + μx^{−k}`. For `μ > 0` the positive spinor lives on
/// the nodes `x_j`, the negative one on the half nodes `x_j − h/2` and
/// vanishes beyond the wall; for `μ < 0` the roles swap. The wall condition
/// is the one that keeps the decaying solution of the kernel equation out of
/// the domain.
pub fn assemble_dirac_mode(g: &GeometryParams, mu: f64, grid: &Grid) -> Result<ModeOperator> {
    if g.f != 1 {
        return Err(Error::Unsupported(format!("Dirac modes need a circle fiber, got dimension {}", g.f)));
    }
    if !mode_is_admissible(mu) {
        return invalid(format!("fiber eigenvalue {mu} is neither an integer nor a half-integer"));
    }
    if mu == 0.0 {
        return Err(Error::Unsupported("boundary family not invertible: fiber eigenvalue 0".into()));
    }
    let h = grid
        .spacing()
        .ok_or_else(|| Error::Unsupported("Dirac modes are assembled on uniform grids only".into()))?;
    let n = grid.size();
    let k = g.k as i32;
    let m = mu.abs();
    let sign = mu.signum();
    let mut a = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(n);
    for j in 1..=n {
        let xh = (j as f64 - 0.5) * h;
        let v = m * xh.powi(-k);
        a.push(sign * (1.0 / h + 0.5 * v));
        c.push(sign * (-1.0 / h + 0.5 * v));
    }
    // interleave: half node j−1/2, node j
    let mut off = Vec::with_capacity(2 * n - 1);
    let mut positions = Vec::with_capacity(2 * n);
    let mut chirality = Vec::with_capacity(2 * n);
    for j in 0..n {
        if j > 0 {
            off.push(c[j]);
        }
        off.push(a[j]);
        positions.push((j as f64 + 0.5) * h);
        positions.push((j + 1) as f64 * h);
        let node = if mu > 0.0 { 1 } else { -1 };
        chirality.push(-node);
        chirality.push(node);
    }
    let e = grid.exponent;
    let weights = positions.iter().map(|x| h * x.powf(e)).collect();
    Ok(ModeOperator {
        params: *g,
        kind: OperatorKind::DiracMode,
        mode: mu,
        matrix: SymTridiag::new(vec![0.0; 2 * n], off)?,
        positions,
        weights,
        chirality,
        wall: WallCondition::Dirichlet,
        grid_size: n,
        bidiagonal: Some((a, c)),
        nodes_positive: mu > 0.0,
    })
}

struct ScalarSetup<'a> {
    nodes: &'a [f64],
    cells: Vec<f64>,
    exponent: f64,
    potential: &'a dyn Fn(f64) -> f64,
    left_dirichlet: bool,
    wall: WallCondition,
}

/// Flux-form `−x^{−e}∂(x^e ∂u) + V u` with exact dual-cell weights.
fn assemble_scalar(s: ScalarSetup) -> Result<(SymTridiag, Vec<f64>, Vec<f64>)> {
    let x = s.nodes;
    let n = x.len();
    let w_all = cell_weights(&s.cells, s.exponent);
    let flux = |i: usize| {
        let mid = 0.5 * (x[i] + x[i + 1]);
        mid.powf(s.exponent) / (x[i + 1] - x[i])
    };
    let mut diag: Vec<f64> = (0..n).map(|i| (s.potential)(x[i]) * w_all[i]).collect();
    let mut off = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let a = flux(i);
        diag[i] += a;
        diag[i + 1] += a;
        off.push(-a);
    }
    if s.left_dirichlet {
        diag[0] += (0.5 * x[0]).powf(s.exponent) / x[0];
    }
    let keep = match s.wall {
        WallCondition::Dirichlet => n - 1,
        WallCondition::Neumann => n,
    };
    diag.truncate(keep);
    off.truncate(keep - 1);
    let w: Vec<f64> = w_all[..keep].to_vec();
    for i in 0..keep {
        diag[i] /= w[i];
    }
    for i in 0..keep - 1 {
        off[i] /= (w[i] * w[i + 1]).sqrt();
    }
    Ok((SymTridiag::new(diag, off)?, w, x[..keep].to_vec()))
}

/// `−∂_x² − (kf/x)∂_x + n²x^{−2k}` on `L²(x^{kf}dx)`, with no condition at
/// `x = 0` and a Dirichlet wall.
pub fn assemble_laplace_mode(g: &GeometryParams, n: i64, grid: &Grid) -> Result<ModeOperator> {
    assemble_laplace_mode_with(g, n, grid, WallCondition::Dirichlet)
}

pub fn assemble_laplace_mode_with(
    g: &GeometryParams,
    n: i64,
    grid: &Grid,
    wall: WallCondition,
) -> Result<ModeOperator> {
    let k = g.k as i32;
    let n2 = (n * n) as f64;
    let potential = move |x: f64| n2 * x.powi(-2 * k);
    let (matrix, weights, positions) = assemble_scalar(ScalarSetup {
        nodes: &grid.nodes,
        cells: grid.cells(),
        exponent: grid.exponent,
        potential: &potential,
        left_dirichlet: false,
        wall,
    })?;
    Ok(ModeOperator {
        params: *g,
        kind: OperatorKind::LaplaceMode,
        mode: n as f64,
        matrix,
        positions,
        weights,
        chirality: Vec::new(),
        wall,
        grid_size: grid.size(),
        bidiagonal: None,
        nodes_positive: true,
    })
}

/// `−∂_x² + n²` on `(0, x_max)`, Dirichlet at `0`: the fiber keeps a fixed
/// size instead of collapsing.
pub fn assemble_flat_mode(g: &GeometryParams, n: i64, grid: &Grid, wall: WallCondition) -> Result<ModeOperator> {
    let n2 = (n * n) as f64;
    let potential = move |_: f64| n2;
    let mut cells = grid.cells();
    cells[0] = 0.5 * grid.nodes[0];
    let (matrix, weights, positions) = assemble_scalar(ScalarSetup {
        nodes: &grid.nodes,
        cells,
        exponent: 0.0,
        potential: &potential,
        left_dirichlet: true,
        wall,
    })?;
    Ok(ModeOperator {
        params: *g,
        kind: OperatorKind::FlatMode,
        mode: n as f64,
        matrix,
        positions,
        weights,
        chirality: Vec::new(),
        wall,
        grid_size: grid.size(),
        bidiagonal: None,
        nodes_positive: true,
    })
}
