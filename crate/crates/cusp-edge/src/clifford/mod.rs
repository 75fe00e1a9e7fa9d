//! Exact complexified Clifford algebra.
//!
//! Conventions: `e_i e_j + e_j e_i = −2δ_ij`, `γ_n = e_1 ⋯ e_n`, symbol map
//! `σ(e_I) = e_{i_1} ∧ … ∧ e_{i_j}`, Berezin integral `T` = top coefficient.
//! Scalars are Gaussian rationals so every identity is checked exactly.
//!
//! ```
//! use cusp_edge::clifford::{supertrace_even, volume_element, GaussRat};
//! let s = supertrace_even(&volume_element(4).unwrap()).unwrap();
//! assert_eq!(s, GaussRat::from_ints(-4, 0));
//! ```

mod algebra;
mod scalar;
mod spinor;
mod trace;

pub use algebra::{
    berezin, blade_product, graded_tensor, partial_symbol, quantize, symbol_map, volume_element,
    wedge_blades, CliffordElement, ExteriorElement, MixedElement, MultiIndex, MAX_DIM,
};
pub use scalar::{GaussRat, Rational};
pub use spinor::{
    module_trace_odd, relative_supertrace, spinor_rep, twisted_supertrace, ExactMatrix,
    GradedSpace, SpinorRep, MAX_SPINOR_DIM,
};
pub use trace::{split_trace, supertrace_even, trace_odd, volume_supertrace, TraceConvention};

use rand::Rng;

/// Random element with `terms` monomials and small integer Gaussian coefficients.
pub fn random_element<R: Rng>(rng: &mut R, n: usize, terms: usize) -> CliffordElement {
    let span = 1u32 << n;
    let items: Vec<(MultiIndex, GaussRat)> = (0..terms)
        .map(|_| {
            let mask = rng.random_range(0..span);
            let c = GaussRat::from_ints(rng.random_range(-3..=3), rng.random_range(-3..=3));
            (MultiIndex::from_mask(mask), c)
        })
        .collect();
    CliffordElement::from_terms(n, items).expect("masks are in range")
}

/// Random homogeneous element of the given parity.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    n: usize,
    terms: usize,
    parity: usize,
) -> CliffordElement {
    let span = 1u32 << n;
    let mut items = Vec::with_capacity(terms);
    while items.len() < terms {
        let mask: u32 = rng.random_range(0..span);
        if mask.count_ones() as usize % 2 != parity {
            continue;
        }
        let c = GaussRat::from_ints(rng.random_range(-3..=3), rng.random_range(-3..=3));
        items.push((MultiIndex::from_mask(mask), c));
    }
    CliffordElement::from_terms(n, items).expect("masks are in range")
}
