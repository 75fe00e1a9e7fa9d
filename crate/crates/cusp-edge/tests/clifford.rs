use cusp_edge::clifford::{
    berezin, graded_tensor, quantize, random_element, random_homogeneous, spinor_rep, supertrace_even, symbol_map,
    volume_element, CliffordElement, GaussRat, MultiIndex,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn zero() -> GaussRat {
    GaussRat::from_ints(0, 0)
}

#[test]
fn generators_anticommute() {
    for n in 1..=6 {
        for i in 1..=n {
            for j in 1..=n {
                let a = CliffordElement::generator(n, i).unwrap();
                let b = CliffordElement::generator(n, j).unwrap();
                let s = a.mul(&b).unwrap().add(&b.mul(&a).unwrap()).unwrap();
                // e_i e_j + e_j e_i = −2δ_ij
                let want = if i == j { CliffordElement::scalar(n, GaussRat::from_ints(-2, 0)) } else { CliffordElement::zero(n) };
                assert_eq!(s, want, "n={n} i={i} j={j}");
            }
        }
    }
}

#[test]
fn volume_square() {
    // γ_n² = (−1)^{n(n+1)/2}
    for n in 1..=8 {
        let v = volume_element(n).unwrap();
        let sign = if (n * (n + 1) / 2) % 2 == 0 { 1 } else { -1 };
        assert_eq!(v.mul(&v).unwrap(), CliffordElement::scalar(n, GaussRat::from_ints(sign, 0)));
    }
}

#[test]
fn supertrace_of_identity_vanishes() {
    for n in (2..=8).step_by(2) {
        let rep = spinor_rep(n).unwrap();
        assert_eq!(rep.matrix_supertrace(&CliffordElement::one(n)).unwrap(), zero());
        assert_eq!(supertrace_even(&CliffordElement::one(n)).unwrap(), zero());
    }
}

#[test]
fn berezin_reads_top_coefficient() {
    let c = GaussRat::from_ints(3, -1);
    let a = CliffordElement::monomial(4, MultiIndex::full(4), c);
    assert_eq!(berezin(&symbol_map(&a)), c);
    let b = CliffordElement::monomial(4, MultiIndex::from_mask(0b0111), c);
    assert_eq!(berezin(&symbol_map(&b)), zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn supertrace_kills_supercommutators(seed in any::<u64>(), half in 1usize..=4, pa in 0usize..2, pb in 0usize..2) {
        let n = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_homogeneous(&mut rng, n, 4, pa);
        let b = random_homogeneous(&mut rng, n, 4, pb);
        let c = a.supercommutator(&b).unwrap();
        prop_assert_eq!(supertrace_even(&c).unwrap(), zero());
    }

    #[test]
    fn product_is_associative(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b, c) = (random_element(&mut rng, n, 5), random_element(&mut rng, n, 5), random_element(&mut rng, n, 5));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn symbol_and_quantisation_are_inverse(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut rng, n, 6);
        prop_assert_eq!(quantize(&symbol_map(&a)), a);
    }

    #[test]
    fn supertrace_is_multiplicative(seed in any::<u64>(), p in 1usize..=2, q in 1usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = random_element(&mut rng, 2 * p, 6);
        let mut b = random_element(&mut rng, 2 * q, 6);
        a = a.add(&volume_element(2 * p).unwrap()).unwrap();
        b = b.add(&volume_element(2 * q).unwrap()).unwrap();
        let t = graded_tensor(&a, &b).unwrap();
        prop_assert_eq!(supertrace_even(&t).unwrap(), supertrace_even(&a).unwrap() * supertrace_even(&b).unwrap());
    }

    #[test]
    fn matrix_supertrace_matches_symbol(seed in any::<u64>(), half in 1usize..=4) {
        let n = 2 * half;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_element(&mut rng, n, 8).add(&volume_element(n).unwrap()).unwrap();
        let rep = spinor_rep(n).unwrap();
        prop_assert_eq!(rep.matrix_supertrace(&a).unwrap(), supertrace_even(&a).unwrap());
    }
}
