use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_log, integrate_to_infinity, least_squares, QuadOptions};

use super::coeffs::{Coefficients, ExpansionResult};
use super::density::{cutoff, Generator, PhgBDensity};

const QUAD: QuadOptions = QuadOptions { rel_tol: 1e-14, abs_tol: 1e-300, max_intervals: 4000 };

/// Largest condition number accepted for the template fit.
pub const MAX_CONDITION: f64 = 1e14;

#[derive(Clone, Debug, Serialize)]
pub struct PushforwardSamples {
    pub tau: Vec<f64>,
    pub values: Vec<f64>,
    /// Contribution of each generator.
    pub components: Vec<(Generator, Vec<f64>)>,
}

/// `v(τ) = vol(∂M) ∫_0^∞ u(x, τ) x^{kf} dx` by quadrature over `x` at each
/// fixed `τ`, from the generators of `d`. A back-face generator `c T e^{−T}`
/// contributes the constant `vol(∂M)·c ∫ e^{−T} dT`.
pub fn direct_pushforward_oracle(d: &PhgBDensity, tau: &[f64]) -> Result<PushforwardSamples> {
    if d.generators.is_empty() && (!d.tf.is_empty() || !d.ff.is_empty() || !d.corner.is_empty() || d.bkf.is_some()) {
        return Err(Error::Unsupported("direct pushforward needs a density assembled from generators".into()));
    }
    if tau.iter().any(|t| !(*t > 0.0 && *t <= 1.0)) {
        return invalid("τ samples must lie in (0, 1]");
    }
    let (n, k) = (d.n(), d.k());
    let kf = k * d.params.f as i64;
    let vol = d.boundary_volume;
    let mut components = Vec::new();
    for gen in &d.generators {
        let mut values = vec![0.0; tau.len()];
        match *gen {
            Generator::Tf { i, c, gamma } => {
                let p = gamma as i32 + kf as i32;
                let m = integrate_to_infinity(|x| x.powi(p) * (-x).exp(), 0.0, QUAD)?.value;
                for (v, t) in values.iter_mut().zip(tau) {
                    *v += vol * c * m * t.powi(i as i32 - n as i32);
                }
            }
            Generator::Ff { j, c, alpha } => {
                let p = (-k * n - 1 + j as i64 + kf) as i32;
                let kk = k as i32;
                for (v, &t) in values.iter_mut().zip(tau) {
                    let integrand = |x: f64| {
                        let tt = t * x.powi(-kk);
                        cutoff(x) * (-tt).exp() * x.powi(p) * tt.powi(alpha as i32)
                    };
                    // T̃ ≥ 900 below lo
                    let lo = (t / 900.0).powf(1.0 / k as f64).min(1.0);
                    let q = integrate_log(integrand, lo, 2.0, QUAD)?;
                    *v += vol * c * q.value;
                }
            }
            Generator::Bkf { c } => {
                let m = integrate_to_infinity(|s| (-s).exp(), 0.0, QUAD)?.value;
                values.iter_mut().for_each(|v| *v += vol * c * m);
            }
        }
        components.push((*gen, values));
    }
    let values = (0..tau.len()).map(|i| components.iter().map(|(_, v)| v[i]).sum()).collect();
    Ok(PushforwardSamples { tau: tau.to_vec(), values, components })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FitOptions {
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    /// Integer powers `τ^m`, `m = 1..=remainder`, beyond the constant term.
    pub remainder: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self { tau_min: 1e-4, tau_max: 1.0, points: 160, remainder: 10 }
    }
}

impl FitOptions {
    /// `τ` sample points, Chebyshev distributed in `τ^{1/k}`.
    pub fn tau_grid(&self, k: u32) -> Vec<f64> {
        let e = 1.0 / k as f64;
        let (a, b) = (self.tau_min.powf(e), self.tau_max.powf(e));
        (0..self.points)
            .map(|i| {
                let th = std::f64::consts::PI * (i as f64 + 0.5) / self.points as f64;
                let s = 0.5 * (a + b) - 0.5 * (b - a) * th.cos();
                s.powi(k as i32)
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TemplateFit {
    /// Fitted coefficients; powers shared by `a_i` and `b_{k(i−f)}` are
    /// reported as the sum in `a_i`.
    pub coefficients: Coefficients,
    pub condition: f64,
    /// Relative residual of the fit.
    pub residual: f64,
}

/// Template columns as `(power of s, with log)`, `s = τ^{1/k}`, after
/// multiplication by `τ^n`. With `fractional = false` the powers
/// `τ^{−(b+1)+j/k}` that are not integers are left out.
fn columns(g: &GeometryParams, fractional: bool, only: Option<usize>) -> Vec<(usize, bool)> {
    let (n, k, f, b) = (g.n(), g.k as usize, g.f, g.b);
    let kf = k * f;
    let mut cols: Vec<(usize, bool)> = Vec::new();
    cols.extend((0..=f).map(|i| (k * i, false)));
    for j in 1..k * (b + 1) {
        if j % k == 0 || fractional || only == Some(j) {
            cols.push((kf + j, false));
        }
    }
    cols.push((k * n, false));
    cols.extend((f + 1..=n).map(|i| (k * i, true)));
    cols
}

fn fit_columns(
    g: &GeometryParams,
    tau: &[f64],
    values: &[f64],
    template: &[(usize, bool)],
    opts: &FitOptions,
) -> Result<TemplateFit> {
    let (n, k, f) = (g.n(), g.k as usize, g.f);
    let (kf, kn) = (k * f, k * n);
    let mut cols = template.to_vec();
    cols.extend((1..=opts.remainder).map(|m| (kn + k * m, false)));
    let mut rows = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in tau.iter().zip(values) {
        let s = t.powf(1.0 / k as f64);
        rows.push(
            cols.iter()
                .map(|&(p, l)| {
                    let base = s.powi(p as i32);
                    if l {
                        base * k as f64 * s.ln()
                    } else {
                        base
                    }
                })
                .collect::<Vec<_>>(),
        );
        ys.push(v * s.powi(kn as i32));
    }
    let fit = least_squares(&rows, &ys)?;
    if !(fit.condition <= MAX_CONDITION) {
        return Err(Error::Numerical(format!("template fit is ill-conditioned: condition number {:.3e}", fit.condition)));
    }
    let norm = ys.iter().map(|y| y * y).sum::<f64>().sqrt().max(1e-300);
    let mut out = Coefficients::zeros(g);
    for (&(p, l), &c) in template.iter().zip(&fit.coeffs) {
        if l {
            let i = p / k;
            if i == n {
                out.c1 = c;
            } else {
                out.d[i - f - 1] = c;
            }
        } else if p == kn {
            out.c0 = c;
        } else if p <= kf || (p - kf) % k == 0 {
            out.a[p / k] = c;
        } else {
            out.b[p - kf - 1] = c;
        }
    }
    Ok(TemplateFit { coefficients: out, condition: fit.condition, residual: fit.residual / norm })
}

/// Least-squares fit of `v` against the full expansion template plus
/// integer powers `τ^m`, in the variable `s = τ^{1/k}` where every template
/// power is an integer power of `s`. The remainder of the synthetic
/// densities has only integer powers: their `ff` generators carry a single
/// power of `x`.
pub fn fit_template(g: &GeometryParams, samples: &PushforwardSamples, opts: &FitOptions) -> Result<TemplateFit> {
    fit_columns(g, &samples.tau, &samples.values, &columns(g, true, None), opts)
}

/// Generator by generator fit. Each contribution is fitted against the
/// integer and logarithmic template powers plus the one fractional power
/// its `x` exponent produces, and the results are summed. Much better
/// conditioned than [`fit_template`] when `b ≥ 1`.
pub fn fit_by_generator(g: &GeometryParams, samples: &PushforwardSamples, opts: &FitOptions) -> Result<TemplateFit> {
    if samples.components.is_empty() {
        return invalid("samples carry no generator components");
    }
    let mut total = Coefficients::zeros(g);
    let (mut cond, mut resid) = (0.0f64, 0.0f64);
    for (gen, values) in &samples.components {
        let only = match gen {
            Generator::Ff { j, .. } => Some(*j),
            _ => None,
        };
        let fit = fit_columns(g, &samples.tau, values, &columns(g, false, only), opts)?;
        total.add(&fit.coefficients);
        cond = cond.max(fit.condition);
        resid = resid.max(fit.residual);
    }
    Ok(TemplateFit { coefficients: total, condition: cond, residual: resid })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub name: String,
    pub expansion: f64,
    pub direct: f64,
    pub rel_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub rows: Vec<ComparisonRow>,
    pub max_rel_error: f64,
    pub condition: f64,
    pub fit_residual: f64,
}

/// Entry-wise relative errors; coefficients below `10^{−3}` of the largest
/// one are measured against that floor.
pub fn compare(expansion: &ExpansionResult, fit: &TemplateFit) -> Comparison {
    let g = expansion.params();
    let e = expansion.coefficients.merged(&g).entries(&g);
    let f = fit.coefficients.entries(&g);
    let scale = e.iter().fold(0.0f64, |m, (_, v)| m.max(v.abs()));
    let floor = (1e-3 * scale).max(1e-300);
    let rows: Vec<ComparisonRow> = e
        .into_iter()
        .zip(f)
        .map(|((name, ev), (_, fv))| ComparisonRow {
            name,
            expansion: ev,
            direct: fv,
            rel_error: (ev - fv).abs() / ev.abs().max(floor),
        })
        .collect();
    Comparison {
        max_rel_error: rows.iter().map(|r| r.rel_error).fold(0.0, f64::max),
        rows,
        condition: fit.condition,
        fit_residual: fit.residual,
    }
}
