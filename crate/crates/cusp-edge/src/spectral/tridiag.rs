use crate::error::{invalid, Error, Result};

/// Real symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiag {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i+1`.
    pub off: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return invalid(format!("tridiagonal shape mismatch: {} diagonal, {} off-diagonal", diag.len(), off.len()));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::Numerical("tridiagonal matrix has non-finite entries".into()));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Gershgorin enclosure of the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence of `T − x`).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0f64;
        for i in 0..self.dim() {
            let b2 = if i > 0 { self.off[i - 1] * self.off[i - 1] } else { 0.0 };
            d = self.diag[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::MIN_POSITIVE * (1.0 + self.diag[i].abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `j`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, j: usize) -> Result<f64> {
        if j >= self.dim() {
            return invalid(format!("eigenvalue index {j} out of range for dimension {}", self.dim()));
        }
        let (mut lo, mut hi) = self.bounds();
        let pad = 1e-12 * (lo.abs() + hi.abs()) + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        for _ in 0..400 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `y = T x`
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    /// Unit eigenvector for an accurate eigenvalue `lambda`, by inverse
    /// iteration with partial pivoting, and its residual `‖Tv − λv‖`.
    pub fn eigenvector(&self, lambda: f64) -> Result<(Vec<f64>, f64)> {
        let n = self.dim();
        let shift = lambda + 4.0 * f64::EPSILON * lambda.abs().max(f64::MIN_POSITIVE);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        let mut resid = f64::INFINITY;
        for _ in 0..6 {
            v = self.solve_shifted(shift, &v)?;
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return Err(Error::Numerical("inverse iteration broke down".into()));
            }
            v.iter_mut().for_each(|a| *a /= norm);
            let tv = self.apply(&v);
            resid = tv.iter().zip(&v).map(|(a, b)| (a - lambda * b).powi(2)).sum::<f64>().sqrt();
            if resid <= 1e-13 * lambda.abs().max(1.0) {
                break;
            }
        }
        Ok((v, resid))
    }

    /// Solves `(T − σ) x = b` by LU with partial pivoting.
    fn solve_shifted(&self, sigma: f64, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - sigma).collect();
        let mut dl = self.off.clone();
        let mut du = self.off.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut piv = vec![false; n.saturating_sub(1)];
        let (lo, hi) = self.bounds();
        let tiny = f64::EPSILON * lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                piv[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut x = b.to_vec();
        for i in 0..n.saturating_sub(1) {
            if piv[i] {
                let temp = x[i];
                x[i] = x[i + 1];
                x[i + 1] = temp - dl[i] * x[i];
            } else {
                x[i + 1] -= dl[i] * x[i];
            }
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            if i + 1 < n {
                s -= du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= du2[i] * x[i + 2];
            }
            x[i] = s / d[i];
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("inverse iteration produced non-finite entries".into()));
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn diagonal_exact() {
        let t = SymTridiag::new(vec![3.0, -1.0, 2.0], vec![0.0, 0.0]).unwrap();
        for (j, want) in [-1.0, 2.0, 3.0].into_iter().enumerate() {
            let got = t.eigenvalue(j).unwrap();
            assert!((got - want).abs() <= 4.0 * f64::EPSILON * want.abs(), "{got}");
        }
    }

    #[test]
    fn discrete_laplacian_closed_form() {
        let n = 50;
        let t = laplacian(n);
        for j in [0, 7, 49] {
            let want = 2.0 - 2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            let got = t.eigenvalue(j).unwrap();
            assert!((got - want).abs() < 1e-13, "{j}: {got} {want}");
            let (_, r) = t.eigenvector(got).unwrap();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn counts() {
        let t = laplacian(10);
        assert_eq!(t.count_below(-1.0), 0);
        assert_eq!(t.count_below(5.0), 10);
    }
}
