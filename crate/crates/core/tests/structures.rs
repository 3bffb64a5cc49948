use linfty_core::ce::quasi_iso_check;
use linfty_core::fixtures;
use linfty_core::multilinear::Multilinear;
use linfty_core::point::{etale_pair, gauge_conjugate, invert_table, CurvedStructure, Morphism};
use linfty_core::transfer::{compute_h, transfer};
use linfty_core::{int, GradedMap, GradedSpace, Matrix, Rat};
use proptest::prelude::*;

#[test]
fn gauge_round_trip_and_composition() {
    let mut rng = fixtures::rng(1);
    for _ in 0..20 {
        let (conj, psi, abelian) = fixtures::random_gauged(&mut rng, 4, 4);
        assert!(conj.check_relations().passed());
        let back = gauge_conjugate(&conj, &invert_table(&psi).unwrap()).unwrap();
        assert_eq!(back, abelian);

        let first = Morphism::new(conj.clone(), abelian.clone(), psi.clone()).unwrap();
        assert!(first.check().passed());
        let psi2 = fixtures::random_gauge(&mut rng, abelian.space(), 0.5);
        let further = gauge_conjugate(&abelian, &psi2).unwrap();
        let second = Morphism::new(further.clone(), abelian.clone(), psi2).unwrap();
        let inv = Morphism::new(
            abelian.clone(),
            further,
            invert_table(second.comps()).unwrap(),
        )
        .unwrap();
        assert!(inv.check().passed());
        let composed = inv.compose(&first).unwrap();
        assert!(composed.check().passed());
    }
}

#[test]
fn arity_bound_holds() {
    let mut rng = fixtures::rng(2);
    for _ in 0..20 {
        let (s, psi, _) = fixtures::random_gauged(&mut rng, 5, 5);
        let n = s.top_degree() as usize;
        assert!(s.ops().iter().all(|(w, _)| w.is_empty() || w.len() < n));
        assert!(psi.iter().all(|(w, _)| w.len() <= n));
    }
}

#[test]
fn transfer_side_conditions_and_etale_inclusions() {
    let mut rng = fixtures::rng(4);
    for _ in 0..15 {
        let (s, c) = fixtures::random_transfer(&mut rng, 4, 5);
        let (_, iota, pi) = compute_h(&c).unwrap();
        assert!(pi.compose(&c.eta).unwrap().is_zero());
        assert!(c.eta.compose(&iota).unwrap().is_zero());
        let t = transfer(&s, &c).unwrap();
        if s.curvature().is_zero() {
            assert!(etale_pair(&t.phi).unwrap().etale);
            assert!(etale_pair(&t.pitilde).unwrap().etale);
        }
    }
}

fn amplitude_one(n: usize, prefix: &str) -> CurvedStructure<Rat> {
    let s = GradedSpace::from_labels([(1, (0..n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>())])
        .unwrap();
    CurvedStructure::zero(&s).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// On amplitude-one point fixtures, CE quasi-isomorphism and étaleness agree.
    #[test]
    fn quasi_smooth_quasi_iso_iff_etale(
        n in 1usize..=3,
        m in 1usize..=3,
        xs in prop::collection::vec(-1i64..=1, 9),
    ) {
        let a = amplitude_one(n, "a");
        let b = amplitude_one(m, "b");
        let mat = Matrix::from_fn(m, n, |i, j| int(xs[i * 3 + j]));
        let mut phi = GradedMap::zero(a.space(), b.space(), 0);
        phi.set_block(1, mat).unwrap();
        let mor = Morphism::linear(a, b, &phi).unwrap();
        let etale = etale_pair(&mor).unwrap().etale;
        let q = quasi_iso_check(&mor, 4).unwrap();
        prop_assert!(q.chain_map);
        prop_assert_eq!(q.quasi_iso(), etale);
    }
}

#[test]
fn e1_to_zero_is_a_weak_equivalence_both_ways() {
    let e1 = fixtures::e1();
    let zero = CurvedStructure::zero(&GradedSpace::new()).unwrap();
    let m = Morphism::new(e1.clone(), zero, Multilinear::zero(e1.space(), &GradedSpace::new(), 0)).unwrap();
    assert!(etale_pair(&m).unwrap().etale);
    assert!(quasi_iso_check(&m, 4).unwrap().quasi_iso());
}
