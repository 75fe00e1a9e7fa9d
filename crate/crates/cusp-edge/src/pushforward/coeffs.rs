use serde::Serialize;

use crate::blowup::GeometryParams;
use crate::error::{Error, Result};

use super::density::{Coefficient, PhgBDensity};
use super::finite::{finite_part, shift_orders, FinitePart};

/// Coefficients of
/// `Σ_{i<n} a_i τ^{−n+i} + Σ_{j<k(b+1)} b_j τ^{−(b+1)+j/k} + c_0 + c_1 log τ
///  + Σ_{f<i<n} d_i τ^{−n+i} log τ + o(1)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Coefficients {
    /// `a_0 … a_{n−1}`
    pub a: Vec<f64>,
    /// `b_1 … b_{k(b+1)−1}`
    pub b: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
    /// `d_{f+1} … d_{n−1}`
    pub d: Vec<f64>,
}

impl Coefficients {
    pub fn zeros(g: &GeometryParams) -> Self {
        let n = g.n();
        Self {
            a: vec![0.0; n],
            b: vec![0.0; g.k as usize * (g.b + 1) - 1],
            c0: 0.0,
            c1: 0.0,
            d: vec![0.0; n - 1 - g.f],
        }
    }

    pub fn add(&mut self, other: &Self) {
        let pairs = self.a.iter_mut().zip(&other.a).chain(self.b.iter_mut().zip(&other.b));
        pairs.chain(self.d.iter_mut().zip(&other.d)).for_each(|(x, y)| *x += y);
        self.c0 += other.c0;
        self.c1 += other.c1;
    }

    /// Named entries in template order.
    pub fn entries(&self, g: &GeometryParams) -> Vec<(String, f64)> {
        let mut out = Vec::new();
        out.extend(self.a.iter().enumerate().map(|(i, v)| (format!("a_{i}"), *v)));
        out.extend(self.b.iter().enumerate().map(|(j, v)| (format!("b_{}", j + 1), *v)));
        out.push(("c_0".into(), self.c0));
        out.push(("c_1".into(), self.c1));
        out.extend(self.d.iter().enumerate().map(|(i, v)| (format!("d_{}", g.f + 1 + i), *v)));
        out
    }

    /// For `f < i < n` the powers of `a_i` and `b_{k(i−f)}` coincide; the
    /// sum is stored in `a_i` and `b_{k(i−f)}` is cleared.
    pub fn merged(&self, g: &GeometryParams) -> Self {
        let mut out = self.clone();
        let k = g.k as usize;
        for i in g.f + 1..g.n() {
            let j = k * (i - g.f);
            if j <= out.b.len() {
                out.a[i] += out.b[j - 1];
                out.b[j - 1] = 0.0;
            }
        }
        out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpansionResult {
    pub k: u32,
    pub f: usize,
    pub b: usize,
    pub coefficients: Coefficients,
    /// Error estimates in the same layout.
    pub errors: Coefficients,
    /// `a_i` computed as absolutely convergent integrals.
    pub a_convergent: Vec<bool>,
    /// Back-face term added to `c_0`, if any.
    pub bkf_term: Option<f64>,
}

impl ExpansionResult {
    pub fn params(&self) -> GeometryParams {
        GeometryParams { k: self.k, f: self.f, b: self.b }
    }
}

fn fp(name: &str, c: &Coefficient, shift: f64) -> Result<FinitePart> {
    if let Some(exact) = c.exact_finite_part(shift) {
        return exact.map_err(|e| Error::Numerical(format!("{name}: {e}")));
    }
    let orders = shift_orders(&c.orders, shift);
    finite_part(&|s: f64| c.eval(s) * s.powf(shift), &orders, c.support).map_err(|e| match e {
        Error::ExpansionMismatch { .. } => e,
        other => Error::Numerical(format!("{name}: {other}")),
    })
}

fn err_of(p: &FinitePart) -> f64 {
    p.quadrature_error + p.fit_residual * p.value.abs()
}

/// Expansion coefficients of the pushforward of `d`:
/// `a_i = A·FP∫ u_{i,tf} x^{kf} dx`,
/// `b_j = (A/k)·FP∫ T̃^{b+1−j/k} u_{j,ff} dT̃/T̃`,
/// `c_0 = A·FP∫ u_{n,tf} x^{kf} dx + (A/k)·FP∫ u_{k(b+1),ff} dT̃/T̃`,
/// `c_1 = −(A/k) u_{0,−kf−1}`, `d_i = −(A/k) u_{−n+i,−k(n+f−i)−1}`,
/// with `A = vol(∂M)`. For `i ≤ f` the `a_i` integrals must converge.
pub fn expansion_coefficients(d: &PhgBDensity) -> Result<ExpansionResult> {
    d.validate()?;
    let g = d.params;
    let (n, k, f, bb) = (g.n(), g.k as f64, g.f, g.b);
    let kf = (g.k as usize * f) as f64;
    let vol = d.boundary_volume;
    let mut coef = Coefficients::zeros(&g);
    let mut errs = Coefficients::zeros(&g);
    let mut a_convergent = vec![false; n];
    let tf_integral = |i: usize| -> Result<(f64, f64, bool)> {
        match d.tf.get(&i) {
            None => Ok((0.0, 0.0, true)),
            Some(c) => {
                let convergent = c.leading_order() + kf + 1.0 > 0.0;
                if i <= f && !convergent {
                    return Err(Error::Divergent(format!(
                        "a_{i}: the integrand has order {} at x = 0 but must converge",
                        c.leading_order() + kf + 1.0
                    )));
                }
                let p = fp(&format!("a_{i}"), c, kf + 1.0)?;
                Ok((vol * p.value, vol * err_of(&p), convergent))
            }
        }
    };
    for i in 0..n {
        let (v, e, conv) = tf_integral(i)?;
        coef.a[i] = v;
        errs.a[i] = e;
        a_convergent[i] = conv;
    }
    let top = g.k as usize * (bb + 1);
    for j in 1..top {
        if let Some(c) = d.ff.get(&j) {
            let p = fp(&format!("b_{j}"), c, (bb + 1) as f64 - j as f64 / k)?;
            coef.b[j - 1] = vol / k * p.value;
            errs.b[j - 1] = vol / k * err_of(&p);
        }
    }
    let (tfc, tfe, _) = tf_integral(n)?;
    coef.c0 = tfc;
    errs.c0 = tfe;
    if let Some(c) = d.ff.get(&top) {
        let p = fp("c_0", c, 0.0)?;
        coef.c0 += vol / k * p.value;
        errs.c0 += vol / k * err_of(&p);
    }
    let (ni, ki, fi) = (n as i64, g.k as i64, f as i64);
    coef.c1 = -vol / k * d.corner.get(&(0, -ki * fi - 1)).copied().unwrap_or(0.0);
    for i in f + 1..n {
        let ii = i as i64;
        let u = d.corner.get(&(-ni + ii, -ki * (ni + fi - ii) - 1)).copied().unwrap_or(0.0);
        coef.d[i - f - 1] = -vol / k * u;
    }
    Ok(ExpansionResult { k: g.k, f, b: bb, coefficients: coef, errors: errs, a_convergent, bkf_term: None })
}

/// Adds `A·FP∫_0^∞ u_{0,bkf}(T) dT/T` to `c_0` when `d` carries a back-face
/// coefficient; otherwise returns `result` unchanged.
pub fn bkf_extension(d: &PhgBDensity, mut result: ExpansionResult) -> Result<ExpansionResult> {
    let Some(c) = &d.bkf else {
        return Ok(result);
    };
    let p = fp("c_0 (bkf)", c, 0.0)?;
    let term = d.boundary_volume * p.value;
    result.coefficients.c0 += term;
    result.errors.c0 += d.boundary_volume * err_of(&p);
    result.bkf_term = Some(term);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::super::density::Generator;
    use super::*;

    #[test]
    fn zero_density() {
        let g = GeometryParams::new(3, 1, 1).unwrap();
        let d = PhgBDensity::new(g, 2.0).unwrap();
        let r = expansion_coefficients(&d).unwrap();
        assert_eq!(r.coefficients, Coefficients::zeros(&g));
        assert_eq!(r.coefficients.entries(&g).len(), 3 + 5 + 2 + 1);
    }

    #[test]
    fn single_tf_term() {
        // u_{0,tf} = e^{−x}, k = 2, f = 1: a_0 = ∫ e^{−x} x² dx = 2
        let g = GeometryParams::new(2, 1, 0).unwrap();
        let d = PhgBDensity::synthetic(g, 1.0, &[Generator::Tf { i: 0, c: 1.0, gamma: 0 }]).unwrap();
        let r = expansion_coefficients(&d).unwrap();
        assert!((r.coefficients.a[0] - 2.0).abs() < 1e-9);
        assert!(r.a_convergent[0]);
    }

    #[test]
    fn constant_corner_gives_log() {
        let g = GeometryParams::new(3, 1, 0).unwrap();
        let mut d = PhgBDensity::new(g, 5.0).unwrap();
        d.corner.insert((0, -4), 0.6);
        let r = expansion_coefficients(&d).unwrap();
        assert!((r.coefficients.c1 + 0.6 * 5.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn divergent_a_named() {
        let g = GeometryParams::new(2, 1, 0).unwrap();
        let mut d = PhgBDensity::new(g, 1.0).unwrap();
        d.tf.insert(1, Coefficient::exp_atoms(vec![(1.0, -3.0)]));
        match expansion_coefficients(&d) {
            Err(Error::Divergent(m)) => assert!(m.starts_with("a_1")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bkf_gamma() {
        let g = GeometryParams::new(2, 1, 0).unwrap();
        let d = PhgBDensity::synthetic(g, 1.0, &[Generator::Bkf { c: 1.0 }]).unwrap();
        let base = expansion_coefficients(&d).unwrap();
        let r = bkf_extension(&d, base.clone()).unwrap();
        assert!((r.coefficients.c0 - base.coefficients.c0 - 1.0).abs() < 1e-8);
        let none = PhgBDensity::synthetic(g, 1.0, &[]).unwrap();
        let r0 = bkf_extension(&none, expansion_coefficients(&none).unwrap()).unwrap();
        assert_eq!(r0.coefficients.c0, 0.0);
    }
}
