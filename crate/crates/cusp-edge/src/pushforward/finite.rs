use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_log, integrate_to_infinity, least_squares, QuadOptions};

/// A term `x^r` or `x^r log x` of an expansion at `x = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Order {
    pub exponent: f64,
    pub log: bool,
}

impl Order {
    pub fn power(exponent: f64) -> Self {
        Self { exponent, log: false }
    }

    pub fn log(exponent: f64) -> Self {
        Self { exponent, log: true }
    }

    fn basis(&self, x: f64) -> f64 {
        let p = if self.exponent == 0.0 { 1.0 } else { x.powf(self.exponent) };
        if self.log {
            p * x.ln()
        } else {
            p
        }
    }

    /// `FP ∫_0^{x0} basis(x) dx/x`
    fn finite_integral(&self, x0: f64) -> f64 {
        let r = self.exponent;
        let l = x0.ln();
        match (r == 0.0, self.log) {
            (true, false) => l,
            (true, true) => 0.5 * l * l,
            (false, false) => x0.powf(r) / r,
            (false, true) => x0.powf(r) * (l / r - 1.0 / (r * r)),
        }
    }
}

/// Shifts every order by `s`, as for multiplication by `x^s`.
pub fn shift_orders(orders: &[Order], s: f64) -> Vec<Order> {
    orders.iter().map(|o| Order { exponent: o.exponent + s, log: o.log }).collect()
}

#[derive(Clone, Copy, Debug)]
pub struct FinitePartOptions {
    /// The integrand is replaced by its fitted expansion on `(0, split]`.
    pub split: f64,
    /// The ladder covers `[split · 10^{−decades}, split]`.
    pub decades: f64,
    /// Relative residual allowed for the expansion fit.
    pub tolerance: f64,
}

impl Default for FinitePartOptions {
    fn default() -> Self {
        Self { split: 0.05, decades: 2.0, tolerance: 1e-7 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FinitePart {
    pub value: f64,
    pub fit_residual: f64,
    /// Error estimate of the regular part.
    pub quadrature_error: f64,
}

/// Constant term of `∫_ε^{upper} u(x) dx/x` as `ε → 0`, for `u` with the
/// declared expansion at `0`; `upper` may be infinite when the tail is
/// integrable.
///
/// The coefficients of the declared terms are fitted from samples of `u`
/// on a geometric ladder below `split`; the singular part is integrated in
/// closed form and the rest by quadrature. The declared orders should
/// reach well past the split scale (about exponent 8 with the defaults) or
/// the fit residual exceeds the tolerance.
pub fn finite_part(u: &dyn Fn(f64) -> f64, orders: &[Order], upper: f64) -> Result<FinitePart> {
    finite_part_with(u, orders, upper, FinitePartOptions::default())
}

pub fn finite_part_with(
    u: &dyn Fn(f64) -> f64,
    orders: &[Order],
    upper: f64,
    opts: FinitePartOptions,
) -> Result<FinitePart> {
    if !(upper > 0.0) {
        return invalid("upper endpoint must be positive");
    }
    if orders.is_empty() {
        return invalid("at least one expansion order must be declared");
    }
    let x0 = opts.split.min(0.5 * upper);
    let mut basis: Vec<Order> = orders.to_vec();
    basis.sort_by(|a, b| a.exponent.total_cmp(&b.exponent).then(a.log.cmp(&b.log)));
    basis.dedup();
    let r_min = basis[0].exponent;
    let points = (3 * basis.len()).max(8);
    let lo = x0 * 10f64.powf(-opts.decades);
    let xs: Vec<f64> = (0..points).map(|i| lo * (x0 / lo).powf(i as f64 / (points - 1) as f64)).collect();
    let mut rows = Vec::with_capacity(points);
    let mut ys = Vec::with_capacity(points);
    for &x in &xs {
        let s = x.powf(-r_min);
        rows.push(basis.iter().map(|o| o.basis(x) * s).collect::<Vec<_>>());
        let v = u(x);
        if !v.is_finite() {
            return Err(Error::Numerical(format!("integrand is not finite at x = {x:e}")));
        }
        ys.push(v * s);
    }
    let fit = least_squares(&rows, &ys)?;
    let norm = ys.iter().map(|y| y * y).sum::<f64>().sqrt();
    let residual = if norm > 0.0 { fit.residual / norm } else { 0.0 };
    if residual > opts.tolerance {
        return Err(Error::ExpansionMismatch { residual, tolerance: opts.tolerance });
    }
    let singular: f64 = basis.iter().zip(&fit.coeffs).map(|(o, c)| c * o.finite_integral(x0)).sum();
    let q = QuadOptions { rel_tol: 1e-13, abs_tol: 1e-300, max_intervals: 4000 };
    let (regular, err) = if upper.is_finite() {
        let r = integrate_log(|x| u(x) / x, x0, upper, q)?;
        (r.value, r.error)
    } else {
        let a = integrate_log(|x| u(x) / x, x0, 1.0f64.max(2.0 * x0), q)?;
        let b = integrate_to_infinity(|x| u(x) / x, 1.0f64.max(2.0 * x0), q)?;
        (a.value + b.value, a.error + b.error)
    };
    Ok(FinitePart { value: singular + regular, fit_residual: residual, quadrature_error: err })
}
