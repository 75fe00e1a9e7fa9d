use cusp_edge::clifford::Rational;
use cusp_edge::indexsets::{
    compose_double, ext_union, parse_families, set_sum, shift, IndexFamily, IndexSet, IndexTerm, Infimum,
};
use proptest::prelude::*;

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn term() -> impl Strategy<Value = IndexTerm> {
    (-6i128..12, prop::sample::select(vec![1i128, 2, 3]), prop::bool::weighted(0.2), 0u32..=2).prop_map(|(n, d, cplx, p)| {
        IndexTerm::new(q(n, d), if cplx { q(1, 2) } else { q(0, 1) }, p)
    })
}

fn set() -> impl Strategy<Value = IndexSet> {
    (prop::collection::vec(term(), 0..4), 2i128..6).prop_map(|(t, c)| IndexSet::from_terms(t, q(c, 1)))
}

fn nonempty_set() -> impl Strategy<Value = IndexSet> {
    (prop::collection::vec(term(), 1..4), 2i128..6)
        .prop_map(|(t, c)| IndexSet::from_terms(t, q(c, 1)))
        .prop_filter("something stored", |s| matches!(s.inf(), Infimum::Value(_)))
}

#[test]
fn naturals_sum_and_union() {
    let n = IndexSet::naturals(q(5, 1));
    assert_eq!(set_sum(&n, &n).truncate(q(4, 1)), n.truncate(q(4, 1)));
    let u = ext_union(&n, &n);
    for j in 0..5 {
        assert_eq!(u.max_log((q(j, 1), q(0, 1))), Some(1));
    }
}

#[test]
fn extended_union_adds_log() {
    let a = IndexSet::from_terms([IndexTerm::real(q(1, 2), 1)], q(3, 1));
    let b = IndexSet::from_terms([IndexTerm::real(q(1, 2), 0)], q(3, 1));
    // p + p' + 1 = 2
    assert_eq!(ext_union(&a, &b).max_log((q(1, 2), q(0, 1))), Some(2));
}

#[test]
fn small_file_composes_to_the_small_calculus() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/small.txt")).unwrap();
    let file = parse_families(&text).unwrap();
    let g = compose_double(file.family("E").unwrap(), file.family("F").unwrap(), file.k.unwrap(), file.b.unwrap()).unwrap();
    assert!(g.get("ff").unwrap().contains(IndexTerm::real(q(0, 1), 0)));
    for face in ["lf", "rf", "bkf"] {
        assert!(g.get(face).unwrap().is_empty());
    }
}

#[test]
fn missing_face_is_an_error() {
    let e = IndexFamily::new().with("ff", IndexSet::naturals(q(3, 1)));
    assert!(compose_double(&e, &e, 2, 0).is_err());
}

proptest! {
    #[test]
    fn operations_stay_canonical(a in set(), b in set(), c in -3i128..4) {
        prop_assert!(a.is_canonical());
        prop_assert!(ext_union(&a, &b).is_canonical());
        prop_assert!(set_sum(&a, &b).is_canonical());
        prop_assert!(shift(&a, q(c, 2)).is_canonical());
    }

    #[test]
    fn extended_union_commutes_and_contains(a in set(), b in set()) {
        let u = ext_union(&a, &b);
        prop_assert_eq!(&u, &ext_union(&b, &a));
        if let Some(cut) = u.cutoff() {
            for t in a.elements().into_iter().chain(b.elements()) {
                if t.re < cut {
                    prop_assert!(u.contains(t), "{} missing from {}", t.re, u);
                }
            }
        }
    }

    #[test]
    fn infimum_is_additive(a in nonempty_set(), b in nonempty_set()) {
        let (Infimum::Value(x), Infimum::Value(y)) = (a.inf(), b.inf()) else { unreachable!() };
        let s = set_sum(&a, &b);
        prop_assert_eq!(s.inf().lower(), Some(x + y));
    }

    #[test]
    fn sum_is_commutative(a in set(), b in set()) {
        prop_assert_eq!(set_sum(&a, &b), set_sum(&b, &a));
    }
}
