mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::seq::SliceRandom;

use rpq_core::algebra::{
    automorphism_count, cyclic_group, derive_divisions, derive_ldiv, derive_rdiv, direct_product,
    find_isomorphism, is_isomorphism, klein_group, latin_squares, right_zero, FiniteAlgebra,
    OpSymbol, Table,
};
use rpq_core::corpus;
use rpq_core::decompose::decompose;
use rpq_core::error::{Error, Line};

use common::{factorial, permutations, quasigroups, rng, rpq};

/// A1..A5 written directly against the tables.
fn satisfies_a_by_hand(s: &FiniteAlgebra) -> bool {
    let (l, r) = (
        s.table(OpSymbol::Ldiv).unwrap(),
        s.table(OpSymbol::Rdiv).unwrap(),
    );
    let m = |x, y| s.mul(x, y);
    let els: Vec<usize> = s.elements().collect();
    els.iter().all(|&x| {
        els.iter().all(|&y| {
            l.get(x, m(x, y)) == y
                && m(x, l.get(x, y)) == y
                && m(r.get(x, y), y) == r.get(m(x, y), y)
                && els.iter().all(|&z| {
                    r.get(m(r.get(x, y), y), z) == r.get(x, z)
                        && m(r.get(m(x, y), z), z) == m(x, m(r.get(y, z), z))
                })
        })
    })
}

/// Counts permutations preserving every table, without the library's search.
fn brute_automorphisms(a: &FiniteAlgebra) -> u64 {
    let tables: Vec<&Table> = OpSymbol::ALL
        .iter()
        .filter_map(|&op| a.table_opt(op))
        .collect();
    permutations(a.size())
        .into_iter()
        .filter(|p| {
            a.point().is_none_or(|e| p[e] == e)
                && tables.iter().all(|t| {
                    a.elements()
                        .all(|x| a.elements().all(|y| p[t.get(x, y)] == t.get(p[x], p[y])))
                })
        })
        .count() as u64
}

fn relabel(a: &FiniteAlgebra, p: &[usize]) -> FiniteAlgebra {
    let n = a.size();
    let mut inv = vec![0; n];
    for (x, &px) in p.iter().enumerate() {
        inv[px] = x;
    }
    let map = |t: &Table| Table::from_fn(n, |x, y| p[t.get(inv[x], inv[y])]);
    FiniteAlgebra::new(
        map(a.mul_table()),
        a.table_opt(OpSymbol::Ldiv).map(map),
        a.table_opt(OpSymbol::Rdiv).map(map),
        a.point().map(|e| p[e]),
    )
    .unwrap()
}

#[test]
fn apply_examples() {
    assert_eq!(
        right_zero(3).unwrap().apply(OpSymbol::Mul, 1, 2).unwrap(),
        2
    );
    assert_eq!(
        cyclic_group(3).unwrap().apply(OpSymbol::Mul, 1, 2).unwrap(),
        0
    );
    assert_eq!(
        corpus::algebra("notA3")
            .unwrap()
            .apply(OpSymbol::Rdiv, 0, 0)
            .unwrap(),
        1
    );
    assert!(matches!(
        right_zero(2).unwrap().apply(OpSymbol::Mul, 2, 0),
        Err(Error::OutOfRange { .. })
    ));
}

#[test]
fn derive_divisions_examples() {
    let z2 = derive_divisions(Table::from_rows("mul", &[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
    let want = Table::from_rows("t", &[vec![0, 1], vec![1, 0]]).unwrap();
    assert_eq!(z2.table(OpSymbol::Ldiv).unwrap(), &want);
    assert_eq!(z2.table(OpSymbol::Rdiv).unwrap(), &want);

    let noid = corpus::load("noid-left", false).unwrap();
    let l = derive_ldiv(noid.mul_table()).unwrap();
    for x in 0..3 {
        for y in 0..3 {
            assert_eq!(noid.mul(x, l.get(x, y)), y);
        }
    }

    let ex = corpus::load("example-1-3", false).unwrap();
    assert!(derive_ldiv(ex.mul_table()).is_ok());
    assert!(matches!(
        derive_rdiv(ex.mul_table()),
        Err(Error::NotCancellative {
            op: OpSymbol::Rdiv,
            line: Line::Column(0)
        })
    ));
    let derived = derive_divisions(ex.mul_table().clone()).unwrap();
    assert!(derived.has(OpSymbol::Ldiv) && !derived.has(OpSymbol::Rdiv));
    assert!(matches!(
        derived.apply(OpSymbol::Rdiv, 0, 0),
        Err(Error::MissingTable(OpSymbol::Rdiv))
    ));
}

#[test]
fn right_zero_examples() {
    assert!(matches!(right_zero(0), Err(Error::EmptyCarrier)));
    let one = right_zero(1).unwrap();
    for op in OpSymbol::ALL {
        assert_eq!(one.table(op).unwrap().rows(), vec![vec![0]]);
    }
    assert_eq!(
        right_zero(2).unwrap().mul_table().rows(),
        vec![vec![0, 1], vec![0, 1]]
    );
    assert!(satisfies_a_by_hand(&right_zero(3).unwrap()));
}

#[test]
fn direct_product_examples() {
    let z3 = cyclic_group(3).unwrap();
    let s = rpq(&z3, 2);
    assert_eq!(s.size(), 6);
    assert!(satisfies_a_by_hand(&s));

    for a in [
        z3.clone(),
        klein_group(),
        corpus::algebra("table2-left").unwrap(),
    ] {
        let b = rpq(&a, 1);
        assert!(find_isomorphism(&a, &b).is_some());
    }
    let rz = direct_product(&right_zero(2).unwrap(), &right_zero(3).unwrap()).unwrap();
    assert!(find_isomorphism(&rz, &right_zero(6).unwrap()).is_some());

    let pointed = z3.with_point(0).unwrap();
    assert!(matches!(
        direct_product(&pointed, &right_zero(2).unwrap()),
        Err(Error::Signature(_))
    ));
    let both = direct_product(&pointed, &right_zero(2).unwrap().with_point(1).unwrap()).unwrap();
    assert_eq!(both.point(), Some(1));
}

#[test]
fn idempotent_examples() {
    assert!(corpus::algebra("noid-left")
        .unwrap()
        .idempotents()
        .is_empty());
    let t2l = corpus::algebra("table2-left").unwrap();
    assert_eq!(t2l.idempotents(), BTreeSet::from([0, 1]));
    assert_eq!(t2l.mul(0, 1), 2);
    assert!(!t2l.is_subalgebra(&t2l.idempotents()));
    let t2r = corpus::algebra("table2-right").unwrap();
    assert_eq!(t2r.idempotents(), BTreeSet::from([0, 1, 2]));
    assert!(t2r.is_subalgebra(&t2r.idempotents()));
}

#[test]
fn generated_subalgebra_examples() {
    let rz3 = right_zero(3).unwrap();
    assert_eq!(
        rz3.generated_subalgebra(&BTreeSet::from([1])).unwrap(),
        BTreeSet::from([1])
    );
    let z3 = cyclic_group(3).unwrap();
    assert_eq!(
        z3.generated_subalgebra(&BTreeSet::from([1])).unwrap(),
        BTreeSet::from([0, 1, 2])
    );
    let t2r = corpus::algebra("table2-right").unwrap();
    assert_eq!(
        t2r.generated_subalgebra(&BTreeSet::from([0, 1])).unwrap(),
        BTreeSet::from([0, 1, 2])
    );
    assert!(matches!(
        z3.generated_subalgebra(&BTreeSet::new()),
        Err(Error::EmptySeeds)
    ));
    let pointed = z3.with_point(0).unwrap();
    assert_eq!(
        pointed.generated_subalgebra(&BTreeSet::new()).unwrap(),
        BTreeSet::from([0])
    );
}

#[test]
fn isomorphism_examples() {
    let t2r = corpus::algebra("table2-right").unwrap();
    let map = find_isomorphism(&t2r, &t2r).unwrap();
    assert!(is_isomorphism(&t2r, &t2r, &map));
    let z2 = cyclic_group(2).unwrap();
    assert!(find_isomorphism(&right_zero(2).unwrap(), &z2).is_none());
    let z3 = cyclic_group(3).unwrap();
    let d = decompose(&rpq(&z3, 2)).unwrap();
    assert!(find_isomorphism(&d.quasigroup, &z3).is_some());
}

#[test]
fn automorphism_examples() {
    let z3 = cyclic_group(3).unwrap();
    let cases = [
        (right_zero(3).unwrap(), 6),
        (z3.clone(), 2),
        (rpq(&z3, 2), 4),
    ];
    for (alg, want) in cases {
        assert_eq!(automorphism_count(&alg).unwrap(), want);
        assert_eq!(brute_automorphisms(&alg), want);
    }
    assert!(matches!(
        automorphism_count(&right_zero(10).unwrap()),
        Err(Error::TooLarge { .. })
    ));
}

#[test]
fn automorphisms_of_products_multiply() {
    for q in quasigroups(3) {
        let aut_q = automorphism_count(&q).unwrap();
        assert_eq!(aut_q, brute_automorphisms(&q));
        for k in 1..=3 {
            assert_eq!(
                automorphism_count(&rpq(&q, k)).unwrap(),
                aut_q * factorial(k)
            );
        }
    }
}

#[test]
fn order_four_counts() {
    assert_eq!(latin_squares(4).len(), 576);
    assert_eq!(automorphism_count(&klein_group()).unwrap(), 6);
    assert_eq!(automorphism_count(&cyclic_group(4).unwrap()).unwrap(), 2);
}

fn arb_quasigroup() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=4, any::<u64>()).prop_map(|(n, seed)| common::random_quasigroup(n, &mut rng(seed)))
}

fn arb_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(0..n, n * n).prop_map(move |cells| {
            derive_divisions(Table::from_fn(n, |x, y| cells[x * n + y])).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn idempotents_of_products_are_products(q in arb_quasigroup(), k in 1usize..=3) {
        let s = rpq(&q, k);
        let want: BTreeSet<usize> = q
            .idempotents()
            .into_iter()
            .flat_map(|e| (0..k).map(move |r| e * k + r))
            .collect();
        prop_assert_eq!(s.idempotents(), want);
    }

    #[test]
    fn derived_divisions_invert_mul(a in arb_algebra()) {
        let n = a.size();
        if let Ok(l) = a.table(OpSymbol::Ldiv) {
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(a.mul(x, l.get(x, y)), y);
                    prop_assert_eq!(l.get(x, a.mul(x, y)), y);
                }
            }
        }
        if let Ok(r) = a.table(OpSymbol::Rdiv) {
            for x in 0..n {
                for y in 0..n {
                    prop_assert_eq!(a.mul(r.get(x, y), y), x);
                    prop_assert_eq!(r.get(a.mul(x, y), y), x);
                }
            }
        }
    }

    #[test]
    fn found_isomorphisms_are_homomorphisms(q in arb_quasigroup(), k in 1usize..=2, seed in any::<u64>()) {
        let a = rpq(&q, k);
        let mut p: Vec<usize> = a.elements().collect();
        p.shuffle(&mut rng(seed));
        let b = relabel(&a, &p);
        let map = find_isomorphism(&a, &b).expect("relabelled copy is isomorphic");
        for op in OpSymbol::ALL {
            let (ta, tb) = (a.table(op).unwrap(), b.table(op).unwrap());
            for x in a.elements() {
                for y in a.elements() {
                    prop_assert_eq!(map[ta.get(x, y)], tb.get(map[x], map[y]));
                }
            }
        }
    }

    #[test]
    fn generated_subalgebra_is_a_closure(
        q in arb_quasigroup(),
        k in 1usize..=2,
        small in prop::collection::btree_set(0usize..8, 1..3),
        extra in prop::collection::btree_set(0usize..8, 0..3),
    ) {
        let s = rpq(&q, k);
        let n = s.size();
        let small: BTreeSet<usize> = small.into_iter().map(|x| x % n).collect();
        let big: BTreeSet<usize> = small.iter().copied().chain(extra.into_iter().map(|x| x % n)).collect();
        let g_small = s.generated_subalgebra(&small).unwrap();
        let g_big = s.generated_subalgebra(&big).unwrap();
        prop_assert!(g_small.is_subset(&g_big));
        prop_assert!(small.is_subset(&g_small));
        prop_assert!(s.is_subalgebra(&g_small));
        prop_assert_eq!(s.generated_subalgebra(&g_small).unwrap(), g_small);
    }
}
