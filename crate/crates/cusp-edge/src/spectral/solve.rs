use serde::Serialize;

use crate::error::{invalid, Error, Result};

use super::modes::ModeOperator;
use super::tridiag::SymTridiag;

/// Residual bound `‖Mv − λv‖_w ≤ RESIDUAL_TOL · max(1, |λ|)` for unit `v`.
pub const RESIDUAL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    pub mode: f64,
    pub grid_size: usize,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Relative change against the next coarser grid, once refined.
    pub refinement_delta: Vec<Option<f64>>,
    /// Second order Richardson value from the coarse/fine pair.
    pub richardson: Vec<Option<f64>>,
    /// Symmetrised unit eigenvectors, aligned with `eigenvalues`.
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn max_refinement_delta(&self) -> Option<f64> {
        self.refinement_delta.iter().flatten().copied().reduce(f64::max)
    }
}

/// The `m` eigenvalues of smallest magnitude, with eigenvectors by inverse
/// iteration.
pub fn eigen_solve(op: &ModeOperator, m: usize) -> Result<Spectrum> {
    let t = &op.matrix;
    let n = t.dim();
    if m == 0 || m > n {
        return invalid(format!("requested {m} eigenvalues from a matrix of dimension {n}"));
    }
    let z = t.count_below(0.0);
    let lo = z.saturating_sub(m);
    let hi = (z + m).min(n);
    let mut cand = Vec::with_capacity(hi - lo);
    for j in lo..hi {
        cand.push(t.eigenvalue(j)?);
    }
    cand.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    cand.truncate(m);
    cand.sort_by(f64::total_cmp);
    let mut residuals = Vec::with_capacity(m);
    let mut vectors = Vec::with_capacity(m);
    for &l in &cand {
        let (v, r) = t.eigenvector(l)?;
        if r > RESIDUAL_TOL * l.abs().max(1.0) {
            return Err(Error::Numerical(format!(
                "mode {}: eigenvalue {l:.6e} has residual {r:.3e} on {} unknowns",
                op.mode,
                n
            )));
        }
        residuals.push(r);
        vectors.push(v);
    }
    Ok(Spectrum {
        mode: op.mode,
        grid_size: op.grid_size(),
        refinement_delta: vec![None; cand.len()],
        richardson: vec![None; cand.len()],
        eigenvalues: cand,
        residuals,
        vectors,
    })
}

/// Fills the refinement fields of `fine` from a solve on a grid half as fine.
pub fn refine(coarse: &Spectrum, mut fine: Spectrum) -> Result<Spectrum> {
    if coarse.eigenvalues.len() != fine.eigenvalues.len() {
        return invalid("coarse and fine spectra have different lengths");
    }
    for (i, (c, f)) in coarse.eigenvalues.iter().zip(&fine.eigenvalues).enumerate() {
        fine.refinement_delta[i] = Some((f - c).abs() / f.abs().max(f64::MIN_POSITIVE));
        fine.richardson[i] = Some(f + (f - c) / 3.0);
    }
    Ok(fine)
}

/// All eigenvalues of `t` strictly below `cut`.
pub fn eigenvalues_below(t: &SymTridiag, cut: f64) -> Result<Vec<f64>> {
    (0..t.count_below(cut)).map(|j| t.eigenvalue(j)).collect()
}
