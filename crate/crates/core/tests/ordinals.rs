use std::collections::HashSet;

use ordrep_core::ordinal::{self, Ordinal};
use proptest::prelude::*;

fn ord(s: &str) -> Ordinal {
    s.parse().unwrap()
}

fn small_ordinal() -> impl Strategy<Value = Ordinal> {
    let exponent = prop_oneof![
        (0u64..4).prop_map(Ordinal::nat),
        (0u64..3, 0u64..3).prop_map(|(a, b)| Ordinal::from_terms([(Ordinal::one(), a), (Ordinal::zero(), b)])),
    ];
    prop::collection::vec((exponent, 0u64..4), 0..4).prop_map(Ordinal::from_terms)
}

proptest! {
    #[test]
    fn addition_is_associative(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn addition_is_monotone_on_the_right(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
        prop_assert!(a.add(&b) >= a);
        if b < c {
            prop_assert!(a.add(&b) < a.add(&c));
        }
    }

    #[test]
    fn left_subtraction_inverts_addition(a in small_ordinal(), b in small_ordinal()) {
        let s = a.add(&b);
        prop_assert_eq!(a.sub_left(&s), Some(b));
    }

    #[test]
    fn compare_is_a_total_order(a in small_ordinal(), b in small_ordinal(), c in small_ordinal()) {
        let ab = ordinal::compare(&a, &b);
        prop_assert_eq!(ab.reverse(), ordinal::compare(&b, &a));
        prop_assert_eq!(ab.is_eq(), a == b);
        if a <= b && b <= c {
            prop_assert!(a <= c);
        }
    }

    #[test]
    fn render_parse_roundtrip(a in small_ordinal()) {
        prop_assert_eq!(ord(&a.to_string()), a);
    }

    #[test]
    fn enumerate_index_roundtrip(alpha in small_ordinal(), n in 0u64..10_000) {
        prop_assume!(!alpha.is_zero());
        let finite = alpha.as_finite();
        prop_assume!(finite.is_none_or(|k| n < k));
        let beta = ordinal::enumerate(&alpha, n).unwrap();
        prop_assert!(beta < alpha);
        prop_assert_eq!(ordinal::index(&alpha, &beta).unwrap(), n);
    }
}

#[test]
fn notation() {
    assert_eq!(ord("w*2+3"), Ordinal::from_terms([(Ordinal::one(), 2), (Ordinal::zero(), 3)]));
    assert!(ord("0").terms().is_empty());
    assert_eq!(ord("w^(w)*1+5"), Ordinal::from_terms([(Ordinal::omega(), 1), (Ordinal::zero(), 5)]));
    assert!(ord("w^2") > ord("w*5+1"));
    assert!(ord("3") < ord("w"));
    assert_eq!(ord("1").add(&ord("w")), ord("w"));
    assert_eq!(ord("w").add(&ord("1")), ord("w+1"));
    assert_eq!(ord("w*2+1").add(&ord("w")), ord("w*3"));
}

#[test]
fn finite_and_omega_enumeration_is_identity() {
    assert_eq!(ordinal::enumerate(&ord("w"), 7).unwrap(), ord("7"));
    assert_eq!(ordinal::enumerate(&ord("5"), 3).unwrap(), ord("3"));
    assert_eq!(ordinal::index(&ord("w"), &ord("12")).unwrap(), 12);
    assert!(ordinal::enumerate(&ord("5"), 5).is_err());
    assert!(ordinal::index(&ord("w"), &ord("w")).is_err());
}

#[test]
fn omega_two_first_thousand() {
    let alpha = ord("w*2");
    let outs: Vec<Ordinal> = (0..1000).map(|n| ordinal::enumerate(&alpha, n).unwrap()).collect();
    let set: HashSet<String> = outs.iter().map(Ordinal::to_string).collect();
    assert_eq!(set.len(), 1000);
    assert!(outs.iter().all(|b| *b < alpha));
    for k in 0..400u64 {
        assert!(set.contains(&k.to_string()));
        assert!(set.contains(&Ordinal::omega().add(&Ordinal::nat(k)).to_string()));
    }
}

#[test]
fn index_of_omega_matches_scan() {
    // frozen from a linear scan of the enumeration
    assert_eq!(ordinal::index(&ord("w^2"), &ord("w")).unwrap(), 1);
    assert_eq!(ordinal::index(&ord("w*2"), &ord("w")).unwrap(), 1);
    assert_eq!(ordinal::index(&ord("w^2+3"), &ord("w")).unwrap(), 4);
    for a in ["w^2", "w*2", "w^2+3", "w^(w)"] {
        let alpha = ord(a);
        let n = (0..).find(|&n| ordinal::enumerate(&alpha, n).unwrap() == Ordinal::omega()).unwrap();
        assert_eq!(ordinal::index(&alpha, &Ordinal::omega()).unwrap(), n);
    }
}

#[test]
fn first_ten_thousand_are_distinct() {
    for a in ["w", "w*2", "w^2", "w^2+3", "w^3*2+w", "w^(w)", "w^(w+1)*3"] {
        let alpha = ord(a);
        let mut seen = HashSet::new();
        for n in 0..10_000 {
            let b = ordinal::enumerate(&alpha, n).unwrap();
            assert!(b < alpha);
            assert!(seen.insert(b.to_string()), "{a}: repeat at {n}");
        }
    }
}
