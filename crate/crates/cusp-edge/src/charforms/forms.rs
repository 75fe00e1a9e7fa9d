use std::fmt;

use num_traits::{One, Zero};

use crate::clifford::{berezin, ExteriorElement, GaussRat, Rational};
use crate::error::{invalid, Error, Result};

/// Square matrix whose entries are even forms of positive degree over an
/// `m`-dimensional space; a curvature matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FormMatrix {
    m: usize,
    entries: Vec<Vec<ExteriorElement>>,
}

impl FormMatrix {
    pub fn zeros(m: usize, size: usize) -> Self {
        Self { m, entries: vec![vec![ExteriorElement::zero(m); size]; size] }
    }

    /// Checks that every entry is an even form of degree ≥ 2 over `R^m`.
    pub fn new(m: usize, entries: Vec<Vec<ExteriorElement>>) -> Result<Self> {
        let size = entries.len();
        for row in &entries {
            if row.len() != size {
                return invalid("form matrix must be square");
            }
            for e in row {
                if e.dim() != m {
                    return Err(Error::DimensionMismatch { left: e.dim(), right: m });
                }
                if e.terms().any(|(idx, _)| idx.grade() == 0 || idx.grade() % 2 == 1) {
                    return invalid("form matrix entries must be even forms of positive degree");
                }
            }
        }
        Ok(Self { m, entries })
    }

    /// As [`FormMatrix::new`], additionally requiring `R_ij = −R_ji`.
    pub fn antisymmetric(m: usize, entries: Vec<Vec<ExteriorElement>>) -> Result<Self> {
        let r = Self::new(m, entries)?;
        for i in 0..r.size() {
            for j in 0..r.size() {
                if !r.entries[i][j].add(&r.entries[j][i])?.is_zero() {
                    return invalid(format!("entries ({i},{j}) and ({j},{i}) are not antisymmetric"));
                }
            }
        }
        Ok(r)
    }

    /// Block-diagonal curvature `⊕ [[0, ω_j], [−ω_j, 0]]` with `ω_j` 2-forms.
    pub fn from_blocks(m: usize, omegas: &[ExteriorElement]) -> Result<Self> {
        let size = 2 * omegas.len();
        let mut entries = vec![vec![ExteriorElement::zero(m); size]; size];
        for (j, w) in omegas.iter().enumerate() {
            entries[2 * j][2 * j + 1] = w.clone();
            entries[2 * j + 1][2 * j] = w.scale(-GaussRat::one());
        }
        Self::antisymmetric(m, entries)
    }

    pub fn base_dim(&self) -> usize {
        self.m
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &ExteriorElement {
        &self.entries[i][j]
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.m != other.m || self.size() != other.size() {
            return Err(Error::DimensionMismatch { left: self.size(), right: other.size() });
        }
        let n = self.size();
        let mut out = Self::zeros(self.m, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExteriorElement::zero(self.m);
                for l in 0..n {
                    acc = acc.add(&self.entries[i][l].wedge(&other.entries[l][j])?)?;
                }
                out.entries[i][j] = acc;
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Result<ExteriorElement> {
        let mut acc = ExteriorElement::zero(self.m);
        for i in 0..self.size() {
            acc = acc.add(&self.entries[i][i])?;
        }
        Ok(acc)
    }

    /// `R ⊕ S`.
    pub fn block_sum(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { left: self.m, right: other.m });
        }
        let (a, b) = (self.size(), other.size());
        let mut out = Self::zeros(self.m, a + b);
        for i in 0..a {
            for j in 0..a {
                out.entries[i][j] = self.entries[i][j].clone();
            }
        }
        for i in 0..b {
            for j in 0..b {
                out.entries[a + i][a + j] = other.entries[i][j].clone();
            }
        }
        Ok(out)
    }

    /// `tr(R^p)` for `p = 1..=top`.
    fn power_traces(&self, top: usize) -> Result<Vec<ExteriorElement>> {
        let mut out = Vec::with_capacity(top);
        let mut pow = self.clone();
        for p in 1..=top {
            if p > 1 {
                pow = pow.mul(self)?;
            }
            out.push(pow.trace()?);
        }
        Ok(out)
    }
}

/// Mixed-degree form truncated at the top degree of its space.
#[derive(Clone, Debug, PartialEq)]
pub struct FormSeries(pub ExteriorElement);

impl FormSeries {
    pub fn degree(&self, d: usize) -> ExteriorElement {
        self.0.grade_part(d)
    }

    /// Coefficient of `e_1 ∧ … ∧ e_m`, the integral over the oriented unit cube.
    pub fn top(&self) -> GaussRat {
        berezin(&self.0)
    }

    /// True when every nonzero term has degree `≡ 0 (mod q)`.
    pub fn degrees_divisible_by(&self, q: usize) -> bool {
        self.0.terms().all(|(idx, _)| idx.grade() % q == 0)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.wedge(&other.0)?))
    }
}

impl fmt::Display for FormSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `exp(X)` for a nilpotent even form `X`.
pub fn form_exp(x: &ExteriorElement) -> Result<ExteriorElement> {
    if x.terms().any(|(idx, _)| idx.grade() == 0) {
        return invalid("exponent must have no scalar part");
    }
    let mut acc = ExteriorElement::one(x.dim());
    let mut term = ExteriorElement::one(x.dim());
    let mut n = 1i128;
    loop {
        term = term.wedge(x)?.scale(GaussRat::from(Rational::new(1, n)));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = acc.add(&term)?;
        n += 1;
    }
}

fn binomial(n: usize, k: usize) -> Rational {
    let mut r = Rational::one();
    for i in 0..k {
        r = r * Rational::from_integer((n - i) as i128) / Rational::from_integer((i + 1) as i128);
    }
    r
}

/// Bernoulli numbers `B_0..=B_n` with `B_1 = −1/2`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        let mut s = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += binomial(m + 1, k) * bk;
        }
        b.push(-s / Rational::from_integer((m + 1) as i128));
    }
    b
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, i| acc * Rational::from_integer(i as i128))
}

/// Coefficients `c_j` of `log((x/2)/sinh(x/2)) = Σ_{j≥1} c_j x^{2j}`.
fn a_hat_log_coeffs(top: usize) -> Vec<Rational> {
    let b = bernoulli(2 * top);
    (1..=top)
        .map(|j| -b[2 * j] / (Rational::from_integer(2 * j as i128) * factorial(2 * j)))
        .collect()
}

/// Coefficients `c_j` of `log(x/tanh x) = Σ_{j≥1} c_j x^{2j}`.
fn l_log_coeffs(top: usize) -> Vec<Rational> {
    let b = bernoulli(2 * top);
    (1..=top)
        .map(|j| {
            let four = Rational::from_integer(1i128 << (2 * j));
            // log(x/sinh x) + log cosh x
            let denom = Rational::from_integer(2 * j as i128) * factorial(2 * j);
            (-four * b[2 * j] + four * (four - Rational::one()) * b[2 * j]) / denom
        })
        .collect()
}

/// `Π_l φ(x_l)` over the Pontryagin roots of `R`, with `log φ(x) = Σ c_j x^{2j}`.
///
/// For `R ≅ ⊕ [[0, x_l], [−x_l, 0]]`, `Σ_l x_l^{2j} = (−1)^j tr(R^{2j}) / 2`.
fn genus(r: &FormMatrix, coeffs: fn(usize) -> Vec<Rational>) -> Result<FormSeries> {
    let top = r.base_dim() / 4;
    if top == 0 {
        return Ok(FormSeries(ExteriorElement::one(r.base_dim())));
    }
    let c = coeffs(top);
    let traces = r.power_traces(2 * top)?;
    let mut log = ExteriorElement::zero(r.base_dim());
    for j in 1..=top {
        let sign = if j % 2 == 0 { Rational::one() } else { -Rational::one() };
        let w = c[j - 1] * sign / Rational::from_integer(2);
        log = log.add(&traces[2 * j - 1].scale(GaussRat::from(w)))?;
    }
    Ok(FormSeries(form_exp(&log)?))
}

fn check_antisymmetric(r: &FormMatrix) -> Result<()> {
    FormMatrix::antisymmetric(r.m, r.entries.clone()).map(|_| ())
}

/// `Â(R) = Π (x_l/2)/sinh(x_l/2) = 1 − p₁/24 + …`, with `p₁ = −tr(R²)/2`.
pub fn a_hat_form(r: &FormMatrix) -> Result<FormSeries> {
    check_antisymmetric(r)?;
    genus(r, a_hat_log_coeffs)
}

/// `L(R) = Π x_l/tanh(x_l) = 1 + p₁/3 + …`.
pub fn l_form(r: &FormMatrix) -> Result<FormSeries> {
    check_antisymmetric(r)?;
    genus(r, l_log_coeffs)
}

/// First Pontryagin form `p₁ = −tr(R²)/2`.
pub fn p1_form(r: &FormMatrix) -> Result<ExteriorElement> {
    Ok(r.mul(r)?.trace()?.scale(GaussRat::from(Rational::new(-1, 2))))
}

/// `ch(F) = tr exp(F)`.
pub fn chern_char(f: &FormMatrix) -> Result<FormSeries> {
    let n = f.size();
    let m = f.base_dim();
    let mut acc = ExteriorElement::scalar(m, GaussRat::from(n as i128));
    let mut pow = f.clone();
    let mut fact = Rational::one();
    for p in 1..=m / 2 {
        if p > 1 {
            pow = pow.mul(f)?;
        }
        fact *= Rational::from_integer(p as i128);
        acc = acc.add(&pow.trace()?.scale(GaussRat::from(Rational::one() / fact)))?;
    }
    Ok(FormSeries(acc))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_form(m: usize, i: usize, j: usize, c: i128) -> ExteriorElement {
        ExteriorElement::basis(m, &[i, j]).unwrap().scale(GaussRat::from(c))
    }

    #[test]
    fn log_coefficients() {
        assert_eq!(a_hat_log_coeffs(2), vec![Rational::new(-1, 24), Rational::new(1, 2880)]);
        assert_eq!(l_log_coeffs(1), vec![Rational::new(1, 3)]);
        assert_eq!(bernoulli(4)[4], Rational::new(-1, 30));
    }

    #[test]
    fn zero_curvature() {
        let r = FormMatrix::zeros(4, 4);
        assert_eq!(a_hat_form(&r).unwrap().0, ExteriorElement::one(4));
        assert_eq!(l_form(&r).unwrap().0, ExteriorElement::one(4));
        assert_eq!(chern_char(&FormMatrix::zeros(4, 3)).unwrap().0, ExteriorElement::scalar(4, GaussRat::from(3)));
    }

    #[test]
    fn degree_four_coefficients() {
        let m = 4;
        let r = FormMatrix::from_blocks(m, &[two_form(m, 1, 2, 1), two_form(m, 3, 4, 2)]).unwrap();
        let p1 = p1_form(&r).unwrap();
        let ah = a_hat_form(&r).unwrap();
        let l = l_form(&r).unwrap();
        assert_eq!(ah.degree(4), p1.scale(GaussRat::from(Rational::new(-1, 24))));
        assert_eq!(l.degree(4), p1.scale(GaussRat::from(Rational::new(1, 3))));
        assert!(ah.degrees_divisible_by(4) && l.degrees_divisible_by(4));
    }

    #[test]
    fn surfaces_have_no_a_hat_integral() {
        let r = FormMatrix::from_blocks(2, &[two_form(2, 1, 2, 5)]).unwrap();
        assert!(a_hat_form(&r).unwrap().top().is_zero());
    }

    #[test]
    fn line_bundle_c1() {
        let f = FormMatrix::new(2, vec![vec![two_form(2, 1, 2, 3)]]).unwrap();
        assert_eq!(chern_char(&f).unwrap().degree(2), two_form(2, 1, 2, 3));
    }

    #[test]
    fn rejects_non_antisymmetric() {
        let w = two_form(4, 1, 2, 1);
        let r = FormMatrix::new(4, vec![vec![ExteriorElement::zero(4), w.clone()], vec![w, ExteriorElement::zero(4)]]).unwrap();
        assert!(a_hat_form(&r).is_err());
    }
}
