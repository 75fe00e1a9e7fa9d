use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::algebra::{CliffordElement, MultiIndex};
use super::scalar::GaussRat;
use super::trace::TraceConvention;
use crate::error::{invalid, Error, Result};

/// Largest even dimension for which a spinor representation is built.
pub const MAX_SPINOR_DIM: usize = 12;

/// Dense square matrix with Gaussian-rational entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    dim: usize,
    data: Vec<GaussRat>,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![GaussRat::zero(); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, GaussRat::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<GaussRat>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim, "matrix must be square");
            for (j, v) in r.iter().enumerate() {
                m.set(i, j, *v);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> GaussRat {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussRat) {
        self.data[i * self.dim + j] = v;
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for l in 0..d {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = o.get(l, j);
                    if !b.is_zero() {
                        out.data[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        let data = self.data.iter().zip(&o.data).map(|(a, b)| *a + *b).collect();
        Self { dim: self.dim, data }
    }

    pub fn scale(&self, c: GaussRat) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|a| *a * c).collect() }
    }

    pub fn trace(&self) -> GaussRat {
        (0..self.dim).fold(GaussRat::zero(), |acc, i| acc + self.get(i, i))
    }

    pub fn kron(&self, o: &Self) -> Self {
        let d = self.dim * o.dim;
        let mut out = Self::zeros(d);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for p in 0..o.dim {
                    for q in 0..o.dim {
                        out.set(i * o.dim + p, j * o.dim + q, a * o.get(p, q));
                    }
                }
            }
        }
        out
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j).to_c64())
    }
}

/// Complex spinor representation of `Cl(2k)` on `S = (ℂ²)^{⊗k}`.
#[derive(Clone, Debug)]
pub struct SpinorRep {
    n: usize,
    generators: Vec<ExactMatrix>,
    grading: ExactMatrix,
}

fn pauli(which: u8) -> ExactMatrix {
    let z = GaussRat::zero();
    let o = GaussRat::one();
    let i = GaussRat::i();
    match which {
        1 => ExactMatrix::from_rows(&[vec![z, o], vec![o, z]]),
        2 => ExactMatrix::from_rows(&[vec![z, -i], vec![i, z]]),
        _ => ExactMatrix::from_rows(&[vec![o, z], vec![z, -o]]),
    }
}

fn kron_all(factors: &[ExactMatrix]) -> ExactMatrix {
    factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kron(f))
}

/// Builds the spinor representation of `Cl(n)`, `n = 2k ≤ 12`.
///
/// Generators `e_{2j−1} = σ₃^{⊗(j−1)} ⊗ iσ₁ ⊗ 1`, `e_{2j} = σ₃^{⊗(j−1)} ⊗ iσ₂ ⊗ 1`;
/// the grading is `i^k ρ(γ_n)`.
pub fn spinor_rep(n: usize) -> Result<SpinorRep> {
    if n == 0 || n % 2 != 0 {
        return invalid(format!("spinor representation needs positive even n, got {n}"));
    }
    if n > MAX_SPINOR_DIM {
        return Err(Error::Resource(format!("spinor representation capped at n = {MAX_SPINOR_DIM}")));
    }
    let k = n / 2;
    let id = ExactMatrix::identity(2);
    let mut generators = Vec::with_capacity(n);
    for j in 0..k {
        for which in [1u8, 2u8] {
            let mut factors = Vec::with_capacity(k);
            for slot in 0..k {
                factors.push(match slot.cmp(&j) {
                    std::cmp::Ordering::Less => pauli(3),
                    std::cmp::Ordering::Equal => pauli(which).scale(GaussRat::i()),
                    std::cmp::Ordering::Greater => id.clone(),
                });
            }
            generators.push(kron_all(&factors));
        }
    }
    let dim = 1usize << k;
    let vol = generators.iter().fold(ExactMatrix::identity(dim), |acc, g| acc.mul(g));
    let grading = vol.scale(GaussRat::i().powi(k as i32));
    Ok(SpinorRep { n, generators, grading })
}

impl SpinorRep {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `2^k` of the module.
    pub fn dim(&self) -> usize {
        1 << (self.n / 2)
    }

    pub fn generators(&self) -> &[ExactMatrix] {
        &self.generators
    }

    pub fn grading(&self) -> &ExactMatrix {
        &self.grading
    }

    /// Matrix of a basis monomial.
    pub fn rho_monomial(&self, idx: MultiIndex) -> ExactMatrix {
        idx.indices()
            .iter()
            .fold(ExactMatrix::identity(self.dim()), |acc, &i| acc.mul(&self.generators[i - 1]))
    }

    /// Matrix of a Clifford element.
    pub fn rho(&self, a: &CliffordElement) -> Result<ExactMatrix> {
        if a.dim() != self.n {
            return Err(Error::DimensionMismatch { left: a.dim(), right: self.n });
        }
        let mut out = ExactMatrix::zeros(self.dim());
        for (idx, c) in a.terms() {
            out = out.add(&self.rho_monomial(idx).scale(c));
        }
        Ok(out)
    }

    /// `tr(Γ ρ(a))`.
    pub fn matrix_supertrace(&self, a: &CliffordElement) -> Result<GaussRat> {
        Ok(self.grading.mul(&self.rho(a)?).trace())
    }
}

/// Trace of `a ∈ Cl(2k−1)` on the half spin module of `Cl(2k)`, realised through
/// `e_i ↦ −e_0 e_i` with `e_0` the first generator of `Cl(2k)`.
///
/// Unlike [`super::trace::trace_odd`] this is the full module trace, scalar
/// part included.
pub fn module_trace_odd(a: &CliffordElement, conv: TraceConvention) -> Result<GaussRat> {
    let n = a.dim();
    if n % 2 != 1 {
        return invalid(format!("odd trace needs odd dimension, got {n}"));
    }
    let rep = spinor_rep(n + 1)?;
    let g = rep.generators();
    let minus_one = -GaussRat::one();
    let images: Vec<ExactMatrix> = (1..=n).map(|i| g[0].mul(&g[i]).scale(minus_one)).collect();
    let dim = rep.dim();
    let half = GaussRat::real(Ratio::new(1, 2));
    let sign = match conv {
        TraceConvention::PositiveHalf => GaussRat::one(),
        TraceConvention::NegativeHalf => minus_one,
    };
    let proj = ExactMatrix::identity(dim).add(&rep.grading().scale(sign)).scale(half);
    let mut total = GaussRat::zero();
    for (idx, c) in a.terms() {
        let m = idx
            .indices()
            .iter()
            .fold(ExactMatrix::identity(dim), |acc, &i| acc.mul(&images[i - 1]));
        total += proj.mul(&m).trace() * c;
    }
    Ok(total)
}

/// Graded auxiliary space `W = W⁺ ⊕ W⁻` twisting the spinor module.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedSpace {
    pub even: usize,
    pub odd: usize,
}

impl GradedSpace {
    pub fn dim(&self) -> usize {
        self.even + self.odd
    }

    pub fn grading(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim(), self.dim(), |i, j| {
            if i != j {
                Complex64::new(0.0, 0.0)
            } else if i < self.even {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        })
    }
}

fn kron_c(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

/// Relative supertrace `str'_E(A) = 2^{−k} tr(R'_E A)` on `E = S ⊗ W`, with
/// `R'_E = Γ R_E = 1 ⊗ Γ_W`. `A` must commute with the Clifford action.
pub fn relative_supertrace(
    rep: &SpinorRep,
    w: GradedSpace,
    a: &DMatrix<Complex64>,
) -> Result<Complex64> {
    let dim = rep.dim() * w.dim();
    if a.nrows() != dim || a.ncols() != dim {
        return Err(Error::DimensionMismatch { left: a.nrows(), right: dim });
    }
    let id_w = DMatrix::<Complex64>::identity(w.dim(), w.dim());
    let scale = a.norm().max(1.0);
    for g in rep.generators() {
        let ge = kron_c(&g.to_complex(), &id_w);
        let comm = &ge * a - a * &ge;
        if comm.norm() > 1e-10 * scale {
            return invalid("operator does not commute with the Clifford action");
        }
    }
    let r_prime = kron_c(&DMatrix::identity(rep.dim(), rep.dim()), &w.grading());
    let tr = (r_prime * a).trace();
    Ok(tr / (rep.dim() as f64))
}

/// Supertrace `tr(R_E B)` on `E = S ⊗ W` with total grading `R_E = Γ ⊗ Γ_W`.
pub fn twisted_supertrace(rep: &SpinorRep, w: GradedSpace, b: &DMatrix<Complex64>) -> Complex64 {
    let r = kron_c(&rep.grading().to_complex(), &w.grading());
    (r * b).trace()
}
