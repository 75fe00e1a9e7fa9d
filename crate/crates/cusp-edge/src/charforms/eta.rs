use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::erf::erfc;

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate, QuadOptions};

/// How an eta invariant was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EtaMethod {
    HeatIntegral,
    ZetaOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EtaResult {
    pub value: f64,
    pub method: EtaMethod,
    pub error_estimate: f64,
}

/// Largest `Λ` such that the spectrum is complete on `[−Λ, Λ]`, taken as
/// the smaller of the extreme eigenvalue magnitudes.
fn window(spectrum: &[f64]) -> f64 {
    let pos = spectrum.iter().copied().filter(|l| *l > 0.0).fold(0.0f64, f64::max);
    let neg = spectrum.iter().copied().filter(|l| *l < 0.0).fold(0.0f64, |m, l| m.max(-l));
    pos.min(neg)
}

/// Heat-regularised eta with eigenvalues cut at `|λ| ≤ cut`.
///
/// `t ≥ 1`: `Σ sign(λ) erfc(|λ|)` in closed form. `t ∈ [t₀, 1]` with
/// `t₀ = 36/cut²`: quadrature of the truncated sum in `u = √t`. The piece
/// below `t₀`, where truncation is visible, is dropped.
fn eta_at(spectrum: &[f64], cut: f64) -> Result<f64> {
    let kept: Vec<f64> = spectrum.iter().copied().filter(|l| *l != 0.0 && l.abs() <= cut).collect();
    let t0 = 36.0 / (cut * cut);
    if t0 >= 1.0 {
        return invalid(format!("spectrum window |lambda| <= {cut} is too short for the heat integral"));
    }
    let large: f64 = kept.iter().map(|l| l.signum() * erfc(l.abs())).sum();
    let f = |u: f64| 2.0 * kept.iter().map(|l| l * (-u * u * l * l).exp()).sum::<f64>();
    let opts = QuadOptions { rel_tol: 1e-10, abs_tol: 1e-12, ..QuadOptions::default() };
    let small = integrate(f, t0.sqrt(), 1.0, opts)?;
    Ok(large + small.value / PI.sqrt())
}

/// `η = (1/√π) ∫_0^∞ t^{−1/2} Σ λ e^{−tλ²} dt` for a finite piece of a
/// discrete spectrum; zero eigenvalues are ignored.
///
/// The error estimate is the change when the window is halved; a change above
/// `0.05` is treated as a divergent tail and refused.
pub fn eta_heat(spectrum: &[f64]) -> Result<EtaResult> {
    if spectrum.iter().any(|l| !l.is_finite()) {
        return invalid("spectrum must be finite");
    }
    let cut = window(spectrum);
    if cut == 0.0 {
        return invalid("spectrum needs eigenvalues of both signs");
    }
    let full = eta_at(spectrum, cut)?;
    let half = eta_at(spectrum, 0.5 * cut)?;
    let err = (full - half).abs();
    if err > 0.05 {
        return Err(Error::Divergent(format!(
            "eta changes by {err:.3e} when the spectral window is halved"
        )));
    }
    Ok(EtaResult { value: full, method: EtaMethod::HeatIntegral, error_estimate: err.max(1e-12) })
}

/// `{n + a : |n| ≤ n_max}` without zero, the spectrum of `−i∂_θ + a`.
pub fn circle_spectrum(a: f64, n_max: i64) -> Vec<f64> {
    (-n_max..=n_max).map(|n| n as f64 + a).filter(|l| *l != 0.0).collect()
}

/// Hurwitz-zeta value `ζ(0, a) − ζ(0, 1−a) = 1 − 2a` for the circle spectrum
/// `{n + a}`; `0` when `a ∈ ℤ` (the zero mode is excluded).
pub fn eta_zeta_circle(a: f64) -> EtaResult {
    let r = a - a.floor();
    let value = if r == 0.0 { 0.0 } else { 1.0 - 2.0 * r };
    EtaResult { value, method: EtaMethod::ZetaOracle, error_estimate: 0.0 }
}
