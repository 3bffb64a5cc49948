use std::collections::BTreeMap;

use linfty_core::sym::{block_partitions, canonicalize, coproduct, unshuffles, words, SymWord};
use linfty_core::{BasisElem, GradedSpace};
use proptest::prelude::*;

fn mixed() -> GradedSpace {
    GradedSpace::from_labels([(1, vec!["a", "b"]), (2, vec!["c", "d"]), (3, vec!["e"])]).unwrap()
}

fn elem() -> impl Strategy<Value = BasisElem> {
    prop_oneof![
        (0usize..2).prop_map(|i| BasisElem::new(1, i)),
        (0usize..2).prop_map(|i| BasisElem::new(2, i)),
        Just(BasisElem::new(3, 0)),
    ]
}

proptest! {
    #[test]
    fn canonicalize_is_idempotent(v in prop::collection::vec(elem(), 0..6)) {
        if let Some((w, s)) = canonicalize(&v) {
            prop_assert_eq!(canonicalize(w.elems()), Some((w.clone(), 1)));
            let mut rev = v.clone();
            rev.reverse();
            let (w2, s2) = canonicalize(&rev).unwrap();
            prop_assert_eq!(&w2, &w);
            prop_assert!(s == 1 || s == -1);
            prop_assert!(s2 == 1 || s2 == -1);
        } else {
            let odd_repeat = v.iter().enumerate().any(|(i, x)| x.is_odd() && v[i + 1..].contains(x));
            prop_assert!(odd_repeat);
        }
    }
}

fn binom(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

#[test]
fn unshuffles_recombine_to_the_word() {
    for w in words(&mixed(), 4, 20) {
        for i in 0..=w.len() {
            let mut total: BTreeMap<SymWord, i64> = BTreeMap::new();
            for u in unshuffles(&w, i) {
                let (x, s) = u.left.concat(&u.right).unwrap();
                *total.entry(x).or_default() += s * u.coeff;
            }
            total.retain(|_, c| *c != 0);
            let expected: BTreeMap<SymWord, i64> = [(w.clone(), binom(w.len(), i))].into();
            assert_eq!(total, expected, "{w:?} {i}");
        }
    }
}

#[test]
fn coproduct_is_coassociative() {
    for w in words(&mixed(), 4, 20) {
        let mut left: BTreeMap<(SymWord, SymWord, SymWord), i64> = BTreeMap::new();
        let mut right = left.clone();
        for u in coproduct(&w) {
            for v in coproduct(&u.left) {
                *left.entry((v.left, v.right, u.right.clone())).or_default() += u.coeff * v.coeff;
            }
            for v in coproduct(&u.right) {
                *right.entry((u.left.clone(), v.left, v.right)).or_default() += u.coeff * v.coeff;
            }
        }
        left.retain(|_, c| *c != 0);
        right.retain(|_, c| *c != 0);
        assert_eq!(left, right, "{w:?}");
    }
}

#[test]
fn partitions_of_distinct_letters_count_stirling_numbers() {
    let stirling = [
        vec![1],
        vec![0, 1],
        vec![0, 1, 1],
        vec![0, 1, 3, 1],
        vec![0, 1, 7, 6, 1],
        vec![0, 1, 15, 25, 10, 1],
    ];
    let s = GradedSpace::from_labels([(1, vec!["a", "b", "c"]), (2, vec!["d", "e"])]).unwrap();
    let all: Vec<BasisElem> = s.basis().collect();
    for k in 1..=5 {
        let w = canonicalize(&all[..k]).unwrap().0;
        for p in 1..=k {
            assert_eq!(block_partitions(&w, p).len(), stirling[k][p], "k={k} p={p}");
        }
    }
}
