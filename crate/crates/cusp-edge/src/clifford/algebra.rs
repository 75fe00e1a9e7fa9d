use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::scalar::GaussRat;
use crate::error::{invalid, Error, Result};

/// Largest algebra dimension supported by the bitmask basis.
pub const MAX_DIM: usize = 30;

/// Strictly increasing multi-index `I = (i_1 < … < i_j)` with entries in `1..=n`,
/// stored as a bitmask (bit `i-1` set iff `i ∈ I`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiIndex(u32);

impl MultiIndex {
    pub const EMPTY: MultiIndex = MultiIndex(0);

    /// Builds from a strictly increasing list of 1-based indices.
    pub fn new(indices: &[usize], n: usize) -> Result<Self> {
        let mut mask = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > n || i > MAX_DIM {
                return invalid(format!("index {i} outside 1..={n}"));
            }
            if i <= last {
                return invalid("multi-index must be strictly increasing");
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Ok(Self(mask))
    }

    pub fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub fn full(n: usize) -> Self {
        if n == 0 {
            Self(0)
        } else {
            Self(u32::MAX >> (32 - n))
        }
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn fits(self, n: usize) -> bool {
        self.0 & !Self::full(n).0 == 0
    }

    /// Shifts every index up by `by`.
    pub fn shifted(self, by: usize) -> Self {
        Self(self.0 << by)
    }
}

impl Ord for MultiIndex {
    // Grade first, then lexicographic in the index list.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.grade()
            .cmp(&other.grade())
            .then_with(|| self.0.reverse_bits().cmp(&other.0.reverse_bits()).reverse())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "1");
        }
        let idx: Vec<String> = self.indices().iter().map(|i| i.to_string()).collect();
        write!(f, "e{}", idx.join("."))
    }
}

/// Parity of the number of transpositions needed to sort the word `e_A e_B`.
fn reorder_odd(a: u32, b: u32) -> bool {
    let mut swaps = 0u32;
    let mut rest = a >> 1;
    while rest != 0 {
        swaps += (rest & b).count_ones();
        rest >>= 1;
    }
    swaps % 2 == 1
}

/// `e_A e_B = ± e_{A Δ B}`, using `e_i e_i = -1`.
pub fn blade_product(a: MultiIndex, b: MultiIndex) -> (bool, MultiIndex) {
    let contractions = (a.0 & b.0).count_ones() % 2 == 1;
    (reorder_odd(a.0, b.0) ^ contractions, MultiIndex(a.0 ^ b.0))
}

/// `e_A ∧ e_B`, `None` when the indices overlap.
pub fn wedge_blades(a: MultiIndex, b: MultiIndex) -> Option<(bool, MultiIndex)> {
    if a.0 & b.0 != 0 {
        None
    } else {
        Some((reorder_odd(a.0, b.0), MultiIndex(a.0 | b.0)))
    }
}

fn insert(map: &mut BTreeMap<MultiIndex, GaussRat>, key: MultiIndex, c: GaussRat) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(GaussRat::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&key);
    }
}

macro_rules! graded_element {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, Debug, PartialEq, Eq)]
        pub struct $name {
            n: usize,
            coeffs: BTreeMap<MultiIndex, GaussRat>,
        }

        impl $name {
            pub fn zero(n: usize) -> Self {
                Self { n, coeffs: BTreeMap::new() }
            }

            pub fn scalar(n: usize, c: GaussRat) -> Self {
                Self::monomial(n, MultiIndex::EMPTY, c)
            }

            pub fn one(n: usize) -> Self {
                Self::scalar(n, GaussRat::one())
            }

            pub fn monomial(n: usize, idx: MultiIndex, c: GaussRat) -> Self {
                let mut e = Self::zero(n);
                insert(&mut e.coeffs, idx, c);
                e
            }

            /// Basis element `e_i` (1-based).
            pub fn generator(n: usize, i: usize) -> Result<Self> {
                Ok(Self::monomial(n, MultiIndex::new(&[i], n)?, GaussRat::one()))
            }

            pub fn basis(n: usize, indices: &[usize]) -> Result<Self> {
                Ok(Self::monomial(n, MultiIndex::new(indices, n)?, GaussRat::one()))
            }

            /// Builds from `(multi-index, coefficient)` pairs, summing repeats.
            pub fn from_terms(
                n: usize,
                terms: impl IntoIterator<Item = (MultiIndex, GaussRat)>,
            ) -> Result<Self> {
                if n > MAX_DIM {
                    return Err(Error::Resource(format!("dimension {n} above {MAX_DIM}")));
                }
                let mut e = Self::zero(n);
                for (k, c) in terms {
                    if !k.fits(n) {
                        return invalid(format!("basis element {k} not in dimension {n}"));
                    }
                    insert(&mut e.coeffs, k, c);
                }
                Ok(e)
            }

            pub fn dim(&self) -> usize {
                self.n
            }

            pub fn coeff(&self, idx: MultiIndex) -> GaussRat {
                self.coeffs.get(&idx).copied().unwrap_or_else(GaussRat::zero)
            }

            pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, GaussRat)> + '_ {
                self.coeffs.iter().map(|(k, c)| (*k, *c))
            }

            pub fn is_zero(&self) -> bool {
                self.coeffs.is_empty()
            }

            pub fn len(&self) -> usize {
                self.coeffs.len()
            }

            pub fn is_empty(&self) -> bool {
                self.coeffs.is_empty()
            }

            /// `Some(parity)` if all terms share a parity.
            pub fn parity(&self) -> Option<usize> {
                let mut it = self.coeffs.keys().map(|k| k.grade() % 2);
                let first = it.next().unwrap_or(0);
                it.all(|p| p == first).then_some(first)
            }

            pub fn scale(&self, c: GaussRat) -> Self {
                let mut e = Self::zero(self.n);
                for (k, v) in &self.coeffs {
                    insert(&mut e.coeffs, *k, *v * c);
                }
                e
            }

            pub fn add(&self, other: &Self) -> Result<Self> {
                check_dims(self.n, other.n)?;
                let mut e = self.clone();
                for (k, v) in &other.coeffs {
                    insert(&mut e.coeffs, *k, *v);
                }
                Ok(e)
            }

            pub fn sub(&self, other: &Self) -> Result<Self> {
                self.add(&other.scale(-GaussRat::one()))
            }

            /// Part of grade `g`.
            pub fn grade_part(&self, g: usize) -> Self {
                Self {
                    n: self.n,
                    coeffs: self
                        .coeffs
                        .iter()
                        .filter(|(k, _)| k.grade() == g)
                        .map(|(k, v)| (*k, *v))
                        .collect(),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                if self.coeffs.is_empty() {
                    return write!(f, "0");
                }
                let parts: Vec<String> =
                    self.coeffs.iter().map(|(k, c)| format!("({c}){k}")).collect();
                write!(f, "{}", parts.join(" + "))
            }
        }
    };
}

graded_element!(
    CliffordElement,
    "Element of the complexified Clifford algebra `Cl(n)` with `e_i e_j + e_j e_i = -2δ_ij`."
);
graded_element!(
    ExteriorElement,
    "Element of the complexified exterior algebra `Λℂⁿ` in the wedge basis."
);

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left: a, right: b })
    }
}

impl CliffordElement {
    /// Clifford product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dims(self.n, other.n)?;
        let mut out = Self::zero(self.n);
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                let (neg, k) = blade_product(*ka, *kb);
                let c = *va * *vb;
                insert(&mut out.coeffs, k, if neg { -c } else { c });
            }
        }
        Ok(out)
    }

    /// Supercommutator `ab − (−1)^{|a||b|} ba` for homogeneous arguments.
    pub fn supercommutator(&self, other: &Self) -> Result<Self> {
        let (pa, pb) = match (self.parity(), other.parity()) {
            (Some(a), Some(b)) => (a, b),
            _ => return invalid("supercommutator needs homogeneous arguments"),
        };
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        if pa * pb == 1 {
            ab.add(&ba)
        } else {
            ab.sub(&ba)
        }
    }
}

impl ExteriorElement {
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        check_dims(self.n, other.n)?;
        let mut out = Self::zero(self.n);
        for (ka, va) in &self.coeffs {
            for (kb, vb) in &other.coeffs {
                if let Some((neg, k)) = wedge_blades(*ka, *kb) {
                    let c = *va * *vb;
                    insert(&mut out.coeffs, k, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }
}

/// Volume element `γ_n = e_1 ⋯ e_n`.
pub fn volume_element(n: usize) -> Result<CliffordElement> {
    if n == 0 || n > MAX_DIM {
        return invalid(format!("volume element needs 1 <= n <= {MAX_DIM}, got {n}"));
    }
    Ok(CliffordElement::monomial(n, MultiIndex::full(n), GaussRat::one()))
}

/// Symbol map `σ(e_I) = e_{i_1} ∧ … ∧ e_{i_j}`.
pub fn symbol_map(a: &CliffordElement) -> ExteriorElement {
    ExteriorElement { n: a.n, coeffs: a.coeffs.clone() }
}

/// Inverse of [`symbol_map`] (quantisation of the wedge basis).
pub fn quantize(w: &ExteriorElement) -> CliffordElement {
    CliffordElement { n: w.n, coeffs: w.coeffs.clone() }
}

/// Berezin integral: coefficient of `e_1 ∧ … ∧ e_n`.
pub fn berezin(w: &ExteriorElement) -> GaussRat {
    w.coeff(MultiIndex::full(w.n))
}

/// Graded tensor product `Cl(n) ⊗̂ Cl(m) → Cl(n+m)`, `e_I ⊗ e_J ↦ e_I e_{J+n}`.
pub fn graded_tensor(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    let n = a.n + b.n;
    if n > MAX_DIM {
        return Err(Error::Resource(format!("dimension {n} above {MAX_DIM}")));
    }
    let mut out = CliffordElement::zero(n);
    for (ka, va) in &a.coeffs {
        for (kb, vb) in &b.coeffs {
            // indices of `a` all precede the shifted indices of `b`: no reordering sign
            insert(&mut out.coeffs, MultiIndex(ka.0 | kb.shifted(a.n).0), *va * *vb);
        }
    }
    Ok(out)
}

/// Element of `Λℂⁿ ⊗̂ Cl(m)`, basis `e_I^∧ ⊗ e_J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedElement {
    pub n: usize,
    pub m: usize,
    coeffs: BTreeMap<(MultiIndex, MultiIndex), GaussRat>,
}

impl MixedElement {
    pub fn coeff(&self, i: MultiIndex, j: MultiIndex) -> GaussRat {
        self.coeffs.get(&(i, j)).copied().unwrap_or_else(GaussRat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (MultiIndex, MultiIndex, GaussRat)> + '_ {
        self.coeffs.iter().map(|((i, j), c)| (*i, *j, *c))
    }

    /// Berezin integral over the exterior factor, leaving an element of `Cl(m)`.
    pub fn berezin_first(&self) -> CliffordElement {
        let top = MultiIndex::full(self.n);
        let mut out = CliffordElement::zero(self.m);
        for ((i, j), c) in &self.coeffs {
            if *i == top {
                insert(&mut out.coeffs, *j, *c);
            }
        }
        out
    }

    /// Second partial symbol `σ_{m,2}`: symbol on the Clifford factor, giving `Λℂ^{n+m}`.
    pub fn symbol_second(&self) -> ExteriorElement {
        let mut out = ExteriorElement::zero(self.n + self.m);
        for ((i, j), c) in &self.coeffs {
            insert(&mut out.coeffs, MultiIndex(i.0 | j.shifted(self.n).0), *c);
        }
        out
    }
}

/// Partial symbol `σ_{n,1}`: symbol map on the first `n` generators of `Cl(n+m)`.
pub fn partial_symbol(a: &CliffordElement, n: usize) -> Result<MixedElement> {
    if n > a.n {
        return invalid(format!("split {n} outside 0..={}", a.n));
    }
    let m = a.n - n;
    let low = MultiIndex::full(n).0;
    let mut coeffs = BTreeMap::new();
    for (k, c) in &a.coeffs {
        coeffs.insert((MultiIndex(k.0 & low), MultiIndex(k.0 >> n)), *c);
    }
    Ok(MixedElement { n, m, coeffs })
}
