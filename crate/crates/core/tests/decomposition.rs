mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use rpq_core::algebra::{
    cyclic_group, find_isomorphism, is_isomorphism, klein_group, right_zero, FiniteAlgebra, Table,
};
use rpq_core::axioms::{check_system, system};
use rpq_core::corpus;
use rpq_core::decompose::{decompose, star, star_transport_violations, BandViolation, StarTable};
use rpq_core::error::Error;
use rpq_core::structure::{loop_structure_report, pointed_structure_report, LoopKind};

use common::{a_models, random_quasigroup, rng, rpq};

fn z3_rz2() -> FiniteAlgebra {
    rpq(&cyclic_group(3).unwrap(), 2)
}

fn check_round_trip(q: &FiniteAlgebra, k: usize) {
    let s = rpq(q, k);
    let d = decompose(&s).unwrap();
    assert_eq!(d.quasigroup.size() * d.right_zero.size(), s.size());
    assert_eq!(d.right_zero.size(), k);
    assert!(find_isomorphism(&d.quasigroup, q).is_some());
    assert!(is_isomorphism(&s, &d.product(), &d.witness));
}

#[test]
fn star_examples() {
    let rz = star(&right_zero(2).unwrap()).unwrap();
    assert!((0..2).all(|x| (0..2).all(|y| rz.get(x, y) == y)));
    let z3 = star(&cyclic_group(3).unwrap()).unwrap();
    assert!((0..3).all(|x| (0..3).all(|y| z3.get(x, y) == x)));
    let s = star(&z3_rz2()).unwrap();
    for x in 0..6 {
        for y in 0..6 {
            assert_eq!(s.get(x, y), (x / 2) * 2 + y % 2);
        }
    }
    assert!(matches!(
        star(&corpus::algebra("notA3").unwrap()),
        Err(Error::NotStarCompatible { .. })
    ));
}

#[test]
fn band_examples() {
    assert!(star(&z3_rz2()).unwrap().is_rectangular_band());
    let xor = StarTable::from_table(Table::from_fn(2, |x, y| x ^ y));
    assert_eq!(xor.band_violation(), Some(BandViolation::NotIdempotent(1)));
    // notA5 satisfies A3, so its star table exists; it is not a band.
    let s5 = star(&corpus::algebra("notA5").unwrap()).unwrap();
    assert_eq!(s5.table().rows(), vec![vec![1, 0], vec![1, 0]]);
    assert_eq!(s5.band_violation(), Some(BandViolation::NotIdempotent(0)));
    assert!(matches!(
        decompose(&corpus::algebra("notA5").unwrap()),
        Err(Error::NotRpq { .. })
    ));
}

#[test]
fn decompose_examples() {
    let d = decompose(&right_zero(3).unwrap()).unwrap();
    assert_eq!((d.quasigroup.size(), d.right_zero.size()), (1, 3));
    let z3 = cyclic_group(3).unwrap();
    let d = decompose(&z3).unwrap();
    assert_eq!((d.quasigroup.size(), d.right_zero.size()), (3, 1));
    assert!(find_isomorphism(&d.quasigroup, &z3).is_some());
    let d = decompose(&z3_rz2()).unwrap();
    assert_eq!((d.quasigroup.size(), d.right_zero.size()), (3, 2));
    assert!(find_isomorphism(&d.quasigroup, &z3).is_some());
    assert_eq!(d.l_representatives, [0, 2, 4]);
    assert_eq!(d.r_representatives, [0, 1]);
    match decompose(&corpus::algebra("notA3").unwrap()) {
        Err(Error::NotRpq { label, .. }) => assert_eq!(label, "A3"),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn round_trip_on_named_quasigroups() {
    for q in [
        cyclic_group(3).unwrap(),
        cyclic_group(4).unwrap(),
        klein_group(),
    ] {
        for k in 1..=3 {
            check_round_trip(&q, k);
        }
    }
}

#[test]
fn lemma_checks_on_every_model() {
    let q = system("Q").unwrap();
    for s in a_models() {
        let st = star(&s).unwrap();
        assert!(st.is_rectangular_band());
        assert!(star_transport_violations(&s, &st).unwrap().is_empty());
        let d = decompose(&s).unwrap();
        assert_eq!(d.quasigroup.size() * d.right_zero.size(), s.size());
        assert!(check_system(&d.quasigroup, q).unwrap().all_hold());
        assert_eq!(d.right_zero, right_zero(d.right_zero.size()).unwrap());
        assert!(is_isomorphism(&s, &d.product(), &d.witness));
    }
}

#[test]
fn loop_report_on_group_times_right_zero() {
    let s = z3_rz2();
    let r = loop_structure_report(&s).unwrap();
    assert_eq!(r.idempotents, BTreeSet::from([0, 1]));
    assert_eq!(r.rdiv_squares, r.idempotents);
    assert_eq!(r.left_neutrals, r.idempotents);
    assert_eq!(
        r.maximal_subquasigroups,
        vec![BTreeSet::from([0, 2, 4]), BTreeSet::from([1, 3, 5])]
    );
    assert_eq!(r.maximal_subquasigroups_confirmed, Some(true));
    let kinds: Vec<LoopKind> = r.loops.iter().map(|l| l.kind).collect();
    assert_eq!(kinds, [LoopKind::Left, LoopKind::Right, LoopKind::TwoSided]);
    for facts in &r.loops {
        assert!(facts.all_verified(), "{:?}", facts.kind);
        assert_eq!(facts.isomorphisms.len(), 2);
    }
    for slice in &r.slices {
        assert_eq!(slice.is_maximal_subquasigroup, Some(true));
    }
}

#[test]
fn loop_report_on_right_zero() {
    let r = loop_structure_report(&right_zero(3).unwrap()).unwrap();
    assert_eq!(r.idempotents, BTreeSet::from([0, 1, 2]));
    let singletons: Vec<BTreeSet<usize>> = (0..3).map(|x| BTreeSet::from([x])).collect();
    assert_eq!(r.maximal_left_zero, Some(singletons));
}

#[test]
fn loop_report_on_table2_right() {
    let r = loop_structure_report(&corpus::algebra("table2-right").unwrap()).unwrap();
    assert!(r.idempotents_form_subalgebra);
    assert_eq!(r.largest_idempotent_subalgebra, Some(true));
    let r = loop_structure_report(&corpus::algebra("table2-left").unwrap()).unwrap();
    assert!(!r.idempotents_form_subalgebra);
    assert!(loop_structure_report(&corpus::algebra("notA4").unwrap()).is_err());
}

#[test]
fn pointed_reports() {
    let s = z3_rz2();
    let r = pointed_structure_report(&s.with_point(0).unwrap()).unwrap();
    assert_eq!(r.se.len(), 3);
    assert_eq!(r.se_cap_idempotents, BTreeSet::from([0]));
    assert_eq!(r.se_is_largest_pointed_subquasigroup, Some(true));

    let r = pointed_structure_report(&right_zero(2).unwrap().with_point(0).unwrap()).unwrap();
    assert_eq!(r.se, BTreeSet::from([0]));
    assert_eq!(r.idempotents, BTreeSet::from([0, 1]));

    let r = pointed_structure_report(&s.with_point(1).unwrap()).unwrap();
    let iso = r.isomorphism.expect("Z3 has a single idempotent");
    assert!(iso.verified());
    assert!(r.loops.iter().all(|f| f.all_verified()));

    assert!(matches!(
        pointed_structure_report(&s),
        Err(Error::Precondition(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_on_random_quasigroups(n in 1usize..=4, k in 1usize..=3, seed in any::<u64>()) {
        check_round_trip(&random_quasigroup(n, &mut rng(seed)), k);
    }

    #[test]
    fn decomposition_fails_exactly_when_a_fails(
        n in 1usize..=3,
        cells in prop::collection::vec(0usize..3, 27),
    ) {
        let t = |k: usize| Table::from_fn(n, |x, y| cells[k * 9 + x * n + y] % n);
        let s = FiniteAlgebra::new(t(0), Some(t(1)), Some(t(2)), None).unwrap();
        let a_holds = check_system(&s, system("A").unwrap()).unwrap().all_hold();
        prop_assert_eq!(a_holds, decompose(&s).is_ok());
    }
}
