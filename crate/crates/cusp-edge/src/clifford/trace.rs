use num_rational::Ratio;

use super::algebra::{berezin, partial_symbol, symbol_map, CliffordElement};
use super::scalar::GaussRat;
use crate::error::{invalid, Result};

/// Sign convention for traces in odd dimension.
///
/// `Cl(2k−1)` acts on `S_{2k}` through `e_i ↦ −e_0 e_i`; restricting to the
/// positive or negative half spin space flips the sign of the volume trace.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceConvention {
    #[default]
    PositiveHalf,
    NegativeHalf,
}

fn minus_two_i() -> GaussRat {
    GaussRat::from_ints(0, -2)
}

fn minus_half() -> GaussRat {
    GaussRat::real(Ratio::new(-1, 2))
}

/// Supertrace on the spinor module of `Cl(2k)`: `str(A) = (−2i)^k T∘σ(A)`.
///
/// `n = 0` is allowed and returns the scalar part.
pub fn supertrace_even(a: &CliffordElement) -> Result<GaussRat> {
    let n = a.dim();
    if n % 2 != 0 {
        return invalid(format!("supertrace needs even dimension, got {n}"));
    }
    Ok(minus_two_i().powi((n / 2) as i32) * berezin(&symbol_map(a)))
}

/// Trace on the spinor module of `Cl(2k−1)`: `tr(A) = −½(−2i)^k T∘σ(A)`.
///
/// Only the top-degree part of `A` contributes; the scalar part, which the full
/// module trace sees as `2^{k−1}·a_∅`, is dropped. See
/// [`super::spinor::module_trace_odd`] for the matrix trace.
pub fn trace_odd(a: &CliffordElement, conv: TraceConvention) -> Result<GaussRat> {
    let n = a.dim();
    if n % 2 != 1 {
        return invalid(format!("odd trace needs odd dimension, got {n}"));
    }
    let k = (n + 1) / 2;
    let v = minus_half() * minus_two_i().powi(k as i32) * berezin(&symbol_map(a));
    Ok(match conv {
        TraceConvention::PositiveHalf => v,
        TraceConvention::NegativeHalf => -v,
    })
}

/// Trace of `A ∈ Cl(n+m)`, `n+m` odd, computed through the partial symbol on
/// the first `n` generators:
///
/// * `n` even: `tr(A) = (−2i)^{n/2} T(tr_m(σ_{n,1}A))`
/// * `n` odd: `tr(A) = −½(−2i)^{(n+1)/2} T(str_m(σ_{n,1}A))`
pub fn split_trace(a: &CliffordElement, n: usize, conv: TraceConvention) -> Result<GaussRat> {
    let total = a.dim();
    if n > total {
        return invalid(format!("split {n} outside 0..={total}"));
    }
    if total % 2 != 1 {
        return invalid(format!("split trace needs odd total dimension, got {total}"));
    }
    let rest = partial_symbol(a, n)?.berezin_first();
    if n % 2 == 0 {
        let inner = trace_odd(&rest, conv)?;
        Ok(minus_two_i().powi((n / 2) as i32) * inner)
    } else {
        let inner = supertrace_even(&rest)?;
        let v = minus_half() * minus_two_i().powi(((n + 1) / 2) as i32) * inner;
        Ok(match conv {
            TraceConvention::PositiveHalf => v,
            TraceConvention::NegativeHalf => -v,
        })
    }
}

/// `(−2i)^k`, the value of `str(γ_{2k})`.
pub fn volume_supertrace(k: usize) -> GaussRat {
    minus_two_i().powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::algebra::volume_element;
    use num_traits::Zero;

    #[test]
    fn str_gamma2() {
        let s = supertrace_even(&volume_element(2).unwrap()).unwrap();
        assert_eq!(s, GaussRat::from_ints(0, -2));
    }

    #[test]
    fn str_gamma4() {
        let s = supertrace_even(&volume_element(4).unwrap()).unwrap();
        assert_eq!(s, GaussRat::from_ints(-4, 0));
    }

    #[test]
    fn str_generator_vanishes() {
        let e1 = CliffordElement::generator(2, 1).unwrap();
        assert!(supertrace_even(&e1).unwrap().is_zero());
    }

    #[test]
    fn odd_traces() {
        let conv = TraceConvention::default();
        assert_eq!(trace_odd(&volume_element(3).unwrap(), conv).unwrap(), 2.into());
        assert!(trace_odd(&CliffordElement::generator(3, 1).unwrap(), conv).unwrap().is_zero());
        assert_eq!(trace_odd(&volume_element(1).unwrap(), conv).unwrap(), GaussRat::i());
        assert_eq!(
            trace_odd(&volume_element(1).unwrap(), TraceConvention::NegativeHalf).unwrap(),
            -GaussRat::i()
        );
    }

    #[test]
    fn parity_errors() {
        assert!(supertrace_even(&volume_element(3).unwrap()).is_err());
        assert!(trace_odd(&volume_element(2).unwrap(), TraceConvention::default()).is_err());
        assert!(split_trace(&volume_element(4).unwrap(), 2, TraceConvention::default()).is_err());
    }

    #[test]
    fn split_matches_direct_on_gamma3() {
        let g = volume_element(3).unwrap();
        let conv = TraceConvention::default();
        let direct = trace_odd(&g, conv).unwrap();
        for n in 0..=3 {
            assert_eq!(split_trace(&g, n, conv).unwrap(), direct, "split at {n}");
        }
    }
}
