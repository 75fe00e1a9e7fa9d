//! Exact index sets and index families.
//!
//! An index set is a discrete subset of `ℂ × ℕ` closed under `(z,p) → (z+1,p)`
//! and `(z,p) → (z,q)` for `q ≤ p`. Each set is materialised below a rational
//! cutoff; every operation tracks how far its result is known.
//!
//! ```
//! use cusp_edge::indexsets::{ext_union, IndexSet, IndexTerm};
//! use cusp_edge::clifford::Rational;
//! let n = IndexSet::naturals(Rational::from_integer(3));
//! let u = ext_union(&n, &n);
//! assert!(u.contains(IndexTerm::real(Rational::from_integer(2), 1)));
//! ```

mod family;
mod parse;
mod set;

pub use family::{
    action_on_function, compose_double, pullback_family, pushforward_family, BMapData,
    IndexFamily, DOUBLE_FACES, HEAT_FACES,
};
pub use parse::{parse_families, parse_rational, FamilyFile};
pub use set::{
    ext_union, inf_set, scale_down, set_sum, shift, Exponent, IndexSet, IndexSetRecord, IndexTerm,
    Infimum, TermRecord,
};
