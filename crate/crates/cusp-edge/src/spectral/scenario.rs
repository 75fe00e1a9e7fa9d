use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::charforms::FiberSpin;
use crate::error::{invalid, Result};

use super::grid::{build_grid, GridScheme};
use super::heat::{mckean_singer, HeatTrace};
use super::modes::assemble_dirac_mode;
use super::solve::{eigen_solve, eigenvalues_below, refine, Spectrum};

/// Fiber eigenvalues `μ` with `|μ| ≤ mu_max` for a spin structure.
pub fn dirac_modes(spin: FiberSpin, mu_max: f64) -> Vec<f64> {
    let shift = match spin {
        FiberSpin::Periodic => 0.0,
        FiberSpin::Antiperiodic => 0.5,
    };
    let top = (mu_max + 1.0).ceil() as i64;
    (-top..=top).map(|j| j as f64 + shift).filter(|m| m.abs() <= mu_max + 1e-12).collect()
}

/// Cusp Dirac operator on `(0, x_max] × S¹`, mode by mode.
#[derive(Clone, Debug, Serialize)]
pub struct DiracScenario {
    pub k: u32,
    pub spin: FiberSpin,
    pub mu_max: f64,
    pub grid: usize,
    pub x_max: f64,
    /// Positive eigenvalues tracked per mode.
    pub count: usize,
    pub t_grid: Vec<f64>,
    /// Second wall position for the sensitivity report.
    pub wall_compare: Option<f64>,
}

impl Default for DiracScenario {
    fn default() -> Self {
        Self {
            k: 3,
            spin: FiberSpin::Antiperiodic,
            mu_max: 5.5,
            grid: 4000,
            x_max: 1.0,
            count: 6,
            t_grid: (0..10).map(|i| 0.05 + 0.05 * i as f64).collect(),
            wall_compare: Some(1.5),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ModeReport {
    pub mu: f64,
    /// Smallest positive eigenvalue on the fine grid.
    pub gap: f64,
    /// Positive eigenvalues on the fine grid with refinement data.
    pub spectrum: Spectrum,
    pub max_rel_change: f64,
    /// Gap with the wall moved, if requested.
    pub gap_moved_wall: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DiracReport {
    pub modes: Vec<ModeReport>,
    pub min_gap: f64,
    /// Gap nondecreasing in `|μ|`.
    pub gap_grows: bool,
    pub max_rel_change: f64,
    pub max_residual: f64,
    pub supertrace: HeatTrace,
}

fn positive_part(s: Spectrum) -> Spectrum {
    let keep: Vec<usize> = (0..s.eigenvalues.len()).filter(|&i| s.eigenvalues[i] > 0.0).collect();
    Spectrum {
        mode: s.mode,
        grid_size: s.grid_size,
        eigenvalues: keep.iter().map(|&i| s.eigenvalues[i]).collect(),
        residuals: keep.iter().map(|&i| s.residuals[i]).collect(),
        refinement_delta: keep.iter().map(|&i| s.refinement_delta[i]).collect(),
        richardson: keep.iter().map(|&i| s.richardson[i]).collect(),
        vectors: keep.iter().map(|&i| s.vectors[i].clone()).collect(),
    }
}

/// Runs the discreteness, stability and McKean–Singer checks. Eigenvalues
/// are computed on grids `N` and `2N`; the supertrace uses the fine grid.
pub fn run_dirac_scenario(s: &DiracScenario) -> Result<DiracReport> {
    if s.count == 0 || s.t_grid.is_empty() {
        return invalid("scenario needs a positive count and a time grid");
    }
    let g = GeometryParams::new(s.k, 1, 0)?;
    let coarse_grid = build_grid(GridScheme::Uniform, s.grid, s.x_max, &g)?;
    let fine_grid = build_grid(GridScheme::Uniform, 2 * s.grid, s.x_max, &g)?;
    let moved = s.wall_compare.map(|x| build_grid(GridScheme::Uniform, s.grid, x, &g)).transpose()?;
    let t_min = s.t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    let cutoff = 30.0 / t_min;
    let mus = dirac_modes(s.spin, s.mu_max);
    let mut modes = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for &mu in &mus {
        let coarse = positive_part(eigen_solve(&assemble_dirac_mode(&g, mu, &coarse_grid)?, 2 * s.count)?);
        let fine_op = assemble_dirac_mode(&g, mu, &fine_grid)?;
        let fine = positive_part(eigen_solve(&fine_op, 2 * s.count)?);
        let spectrum = refine(&coarse, fine)?;
        let (tp, tm) = fine_op.chiral_squares()?;
        plus.extend(eigenvalues_below(&tp, cutoff)?);
        minus.extend(eigenvalues_below(&tm, cutoff)?);
        let gap_moved_wall = match &moved {
            Some(grid) => {
                let s = eigen_solve(&assemble_dirac_mode(&g, mu, grid)?, 2)?;
                Some(s.eigenvalues.iter().fold(f64::INFINITY, |m, v| m.min(v.abs())))
            }
            None => None,
        };
        modes.push(ModeReport {
            mu,
            gap: spectrum.eigenvalues[0],
            max_rel_change: spectrum.max_refinement_delta().unwrap_or(0.0),
            spectrum,
            gap_moved_wall,
        });
    }
    let mut supertrace = mckean_singer(&plus, &minus, &s.t_grid, cutoff)?;
    supertrace.modes = mus;
    let min_gap = modes.iter().map(|m| m.gap).fold(f64::INFINITY, f64::min);
    let mut by_abs: Vec<(f64, f64)> = modes.iter().map(|m| (m.mu.abs(), m.gap)).collect();
    by_abs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let gap_grows = by_abs.windows(2).all(|w| w[1].1 >= w[0].1 * (1.0 - 1e-9));
    Ok(DiracReport {
        min_gap,
        gap_grows,
        max_rel_change: modes.iter().map(|m| m.max_rel_change).fold(0.0, f64::max),
        max_residual: modes
            .iter()
            .flat_map(|m| m.spectrum.residuals.iter().copied())
            .fold(0.0, f64::max),
        modes,
        supertrace,
    })
}
