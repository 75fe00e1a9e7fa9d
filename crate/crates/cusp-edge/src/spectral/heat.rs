use std::f64::consts::PI;

use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::error::{invalid, Error, Result};

use super::grid::{build_grid, GridScheme};
use super::modes::assemble_laplace_mode;
use super::solve::eigenvalues_below;

/// Truncation allowance `e^{−t_min · cutoff}` for a heat trace.
const TRUNCATION: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TraceKind {
    Supertrace,
    Trace,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatTrace {
    pub kind: TraceKind,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    /// Eigenvalue cutoff of the squared operator.
    pub cutoff: f64,
    /// Fiber modes included, when assembled from a mode family.
    pub modes: Vec<f64>,
}

impl HeatTrace {
    /// `max − min` of the values.
    pub fn spread(&self) -> f64 {
        let hi = self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.values.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn check_times(t_grid: &[f64], cutoff: f64) -> Result<()> {
    let t_min = t_grid.iter().copied().fold(f64::INFINITY, f64::min);
    if t_grid.is_empty() || !(t_min > 0.0) {
        return invalid("heat trace times must be positive");
    }
    if (-t_min * cutoff).exp() > TRUNCATION {
        return invalid(format!(
            "eigenvalue cutoff {cutoff:.3e} is too small for t_min = {t_min:.3e}; need at least {:.3e}",
            -TRUNCATION.ln() / t_min
        ));
    }
    Ok(())
}

fn heat_sum(spec: &[f64], t: f64, cutoff: f64) -> f64 {
    spec.iter().filter(|l| **l <= cutoff).map(|l| (-t * l).exp()).sum()
}

/// `Str e^{−tD²} = Σ e^{−tλ⁺} − Σ e^{−tλ⁻}` from the spectra of `D⁻D⁺` and
/// `D⁺D⁻`, each complete below `cutoff`.
pub fn mckean_singer(spec_plus: &[f64], spec_minus: &[f64], t_grid: &[f64], cutoff: f64) -> Result<HeatTrace> {
    check_times(t_grid, cutoff)?;
    if spec_plus.iter().chain(spec_minus).any(|l| !(*l >= -1e-9 * cutoff)) {
        return invalid("squared spectra must be nonnegative");
    }
    let values = t_grid.iter().map(|&t| heat_sum(spec_plus, t, cutoff) - heat_sum(spec_minus, t, cutoff)).collect();
    Ok(HeatTrace { kind: TraceKind::Supertrace, t: t_grid.to_vec(), values, cutoff, modes: Vec::new() })
}

/// `Tr e^{−tΔ}` truncated at `cutoff`.
pub fn heat_trace(spec: &[f64], t_grid: &[f64], cutoff: f64) -> Result<HeatTrace> {
    check_times(t_grid, cutoff)?;
    let values = t_grid.iter().map(|&t| heat_sum(spec, t, cutoff)).collect();
    Ok(HeatTrace { kind: TraceKind::Trace, t: t_grid.to_vec(), values, cutoff, modes: Vec::new() })
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub area: f64,
    pub lambdas: Vec<f64>,
    pub counts: Vec<usize>,
    /// `N(λ)·4π/(area·λ)`
    pub ratios: Vec<f64>,
    /// Largest `|n|` included.
    pub mode_cutoff: i64,
}

impl WeylReport {
    pub fn top_ratio(&self) -> f64 {
        *self.ratios.last().unwrap_or(&f64::NAN)
    }
}

/// Weyl ratios from per-mode eigenvalues.
///
/// `potential_floor` bounds the mode potential from below by
/// `n² · potential_floor`; a mode left out while `n² · potential_floor` is
/// below the largest `λ` could still contribute, and is refused.
pub fn weyl_check(modes: &[(i64, Vec<f64>)], lambdas: &[f64], area: f64, potential_floor: f64) -> Result<WeylReport> {
    if lambdas.is_empty() || lambdas.iter().any(|l| !(*l > 0.0)) || !(area > 0.0) {
        return invalid("Weyl check needs positive eigenvalue levels and area");
    }
    let top = lambdas.iter().copied().fold(0.0, f64::max);
    let present: std::collections::BTreeSet<i64> = modes.iter().map(|(n, _)| *n).collect();
    let mut n = 0i64;
    while (n * n) as f64 * potential_floor < top {
        if !present.contains(&n) || !present.contains(&-n) {
            return invalid(format!("mode cutoff insufficient: mode {n} may contribute below {top}"));
        }
        n += 1;
    }
    let mode_cutoff = present.iter().map(|n| n.abs()).max().unwrap_or(0);
    let counts: Vec<usize> = lambdas
        .iter()
        .map(|&l| modes.iter().map(|(_, e)| e.iter().filter(|v| **v < l).count()).sum())
        .collect();
    let ratios = counts.iter().zip(lambdas).map(|(c, l)| *c as f64 * 4.0 * PI / (area * l)).collect();
    Ok(WeylReport { area, lambdas: lambdas.to_vec(), counts, ratios, mode_cutoff })
}

/// Weyl ratios of the cusp Laplacian on `(0, x_max] × S¹` with a Dirichlet
/// wall, counting every mode with `n² x_max^{−2k} < 4 λ_max`.
pub fn laplace_weyl(g: &GeometryParams, x_max: f64, size: usize, lambdas: &[f64]) -> Result<WeylReport> {
    if g.f != 1 {
        return Err(Error::Unsupported("Weyl check is implemented for a circle fiber".into()));
    }
    let grid = build_grid(GridScheme::Uniform, size, x_max, g)?;
    let top = lambdas.iter().copied().fold(0.0, f64::max);
    let floor = x_max.powi(-2 * g.k as i32);
    let n_max = ((4.0 * top / floor).sqrt()).floor() as i64;
    let mut modes = Vec::new();
    for n in -n_max..=n_max {
        let op = assemble_laplace_mode(g, n, &grid)?;
        modes.push((n, eigenvalues_below(&op.matrix, top)?));
    }
    let area = 2.0 * PI * grid.exact_mass();
    weyl_check(&modes, lambdas, area, floor)
}

/// Weyl ratio of the flat torus `(ℝ/2πℤ)²` from the closed form count of
/// `m² + n² < λ`.
pub fn torus_weyl_ratio(lambda: f64) -> f64 {
    let r = lambda.sqrt().ceil() as i64;
    let mut count = 0usize;
    for m in -r..=r {
        for n in -r..=r {
            if ((m * m + n * n) as f64) < lambda {
                count += 1;
            }
        }
    }
    count as f64 * 4.0 * PI / (4.0 * PI * PI * lambda)
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayFit {
    /// Least squares slope of `log|u|` against `log x`.
    pub slope: f64,
    pub window: (f64, f64),
    pub points: usize,
}

/// Vanishing order of nodal values `u` of a ground mode at `x = 0`, fitted on
/// `[x_lo, 4 x_lo]`. `x_lo` is the largest of eight grid cells, the first
/// point where `|u|` exceeds `floor · max|u|`, and 1.5 times the last sign
/// change in `x ≤ x_max/4` (staggered stencils oscillate where the potential
/// is not resolved).
///
/// `floor` is the relative accuracy of the eigenvector: about `1e−250` for
/// the diagonally dominant Laplace modes, about `1e−13` for Dirac modes,
/// whose indefinite solve leaves a noise floor near `ε · max|u|`.
pub fn boundary_decay_check(values: &[f64], nodes: &[f64], floor: f64) -> Result<DecayFit> {
    if values.len() != nodes.len() || values.is_empty() || !(floor > 0.0 && floor < 1.0) {
        return invalid("eigenvector and grid lengths differ");
    }
    let top = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if top == 0.0 || !top.is_finite() {
        return invalid("eigenvector is zero");
    }
    let first = nodes
        .iter()
        .zip(values)
        .find(|(_, v)| v.abs() > floor * top)
        .map(|(x, _)| *x)
        .unwrap_or(f64::INFINITY);
    let quarter = 0.25 * nodes[nodes.len() - 1];
    let flip = (1..nodes.len())
        .filter(|&i| nodes[i] <= quarter && values[i] * values[i - 1] < 0.0)
        .map(|i| 1.5 * nodes[i])
        .fold(0.0, f64::max);
    let lo = (8.0 * nodes[0]).max(first).max(flip);
    let hi = 4.0 * lo;
    let pts: Vec<(f64, f64)> = nodes
        .iter()
        .zip(values)
        .filter(|(x, v)| **x >= lo && **x <= hi && v.abs() > 0.0)
        .map(|(x, v)| (x.ln(), v.abs().ln()))
        .collect();
    if pts.len() < 4 || hi > *nodes.last().unwrap() {
        return Err(Error::Numerical(format!("decay window [{lo:.3e}, {hi:.3e}] is underresolved")));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(DecayFit { slope: sxy / sxx, window: (lo, hi), points: pts.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_and_refusal() {
        let t = [0.1, 0.2, 0.4];
        let h = mckean_singer(&[0.0, 2.0, 5.0], &[2.0, 5.0], &t, 1e3).unwrap();
        assert!(h.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(mckean_singer(&[1.0], &[1.0], &t, 10.0).is_err());
        let tr = heat_trace(&[1.0, 2.0, 3.0], &t, 1e3).unwrap();
        assert!(tr.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn torus_control() {
        assert!((torus_weyl_ratio(1e4) - 1.0).abs() < 0.05);
    }

    #[test]
    fn weyl_refuses_missing_modes() {
        let modes = vec![(0, vec![1.0, 4.0])];
        assert!(weyl_check(&modes, &[10.0], 1.0, 1.0).is_err());
        assert!(weyl_check(&modes, &[0.5], 1.0, 1.0).is_ok());
    }

    #[test]
    fn decay_rejects_zero() {
        assert!(boundary_decay_check(&[0.0; 20], &[1.0; 20], 1e-250).is_err());
    }
}
