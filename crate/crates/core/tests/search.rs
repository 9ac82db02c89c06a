mod common;

use rpq_core::algebra::{
    automorphism_count, find_isomorphism, latin_squares, quasigroup, FiniteAlgebra,
};
use rpq_core::axioms::{check_system, system, AxiomSystem};
use rpq_core::corpus;
use rpq_core::error::Error;
use rpq_core::search::{
    find_models, identities_by_label, independence_suite, model_set, SearchProblem,
    TruncatedIntegers,
};
use rpq_core::term::holds;

use common::factorial;

const A: &str = "A1,A2,A3,A4,A5";

fn separation(axiom: &str, n: usize) -> SearchProblem {
    let others: Vec<&str> = A.split(',').filter(|&l| l != axiom).collect();
    SearchProblem::new(n)
        .satisfy(identities_by_label(&others.join(",")).unwrap())
        .violate(identities_by_label(axiom).unwrap())
}

/// Labelled models of A of order `n` counted from the product description:
/// each class `Q` of quasigroups of order `q` with `q*k = n` contributes
/// `n! / (|Aut Q| * k!)` labelled copies of `Q x R_k`.
fn expected_a_models(n: usize) -> u64 {
    let mut total = 0;
    for q in (1..=n).filter(|q| n % q == 0) {
        let k = n / q;
        let mut classes: Vec<FiniteAlgebra> = Vec::new();
        for t in latin_squares(q) {
            let alg = quasigroup(t).unwrap();
            if classes.iter().all(|c| find_isomorphism(c, &alg).is_none()) {
                classes.push(alg);
            }
        }
        for c in classes {
            total += factorial(n) / (automorphism_count(&c).unwrap() * factorial(k));
        }
    }
    total
}

fn verify_models(models: &[FiniteAlgebra], satisfy: &AxiomSystem, violate: &str) {
    for m in models {
        assert!(check_system(m, satisfy).unwrap().all_hold());
        for id in identities_by_label(violate).unwrap() {
            assert!(!holds(m, &id).unwrap().holds());
        }
    }
}

#[test]
fn size_two_separations() {
    for (axiom, file, count) in [("A3", "notA3", 3), ("A4", "notA4", 9), ("A5", "notA5", 1)] {
        let models = find_models(&separation(axiom, 2)).unwrap();
        assert_eq!(models.len(), count, "{axiom}");
        assert!(
            models.contains(&corpus::load(file, false).unwrap()),
            "{file}"
        );
        let others: Vec<(String, _)> = system("A")
            .unwrap()
            .identities
            .iter()
            .filter(|(l, _)| l != axiom)
            .cloned()
            .collect();
        verify_models(&models, &AxiomSystem::new("rest", others).unwrap(), axiom);
    }
}

#[test]
fn no_small_model_separates_a1_or_a2() {
    for axiom in ["A1", "A2"] {
        for n in 1..=4 {
            assert!(
                find_models(&separation(axiom, n)).unwrap().is_empty(),
                "{axiom} n={n}"
            );
        }
    }
}

#[test]
fn model_counts_match_the_product_description() {
    let a = identities_by_label(A).unwrap();
    for n in 1..=4 {
        let found = find_models(&SearchProblem::new(n).satisfy(a.clone())).unwrap();
        assert_eq!(found.len() as u64, expected_a_models(n), "n={n}");
    }
    assert_eq!(expected_a_models(3), 13);
    assert_eq!(expected_a_models(4), 589);
}

#[test]
fn systems_a_and_b_have_the_same_models() {
    let a = identities_by_label(A).unwrap();
    let b = identities_by_label("A1,A2,A3,B1,B2").unwrap();
    for n in 1..=3 {
        assert_eq!(
            model_set(n, &a).unwrap(),
            model_set(n, &b).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn dedupe_keeps_a_representative_of_every_class() {
    for axiom in ["A3", "A4", "A5"] {
        let all = find_models(&separation(axiom, 2)).unwrap();
        let reps = find_models(&separation(axiom, 2).dedupe(true)).unwrap();
        assert!(reps.iter().all(|r| all.contains(r)));
        for m in &all {
            assert!(reps.iter().any(|r| find_isomorphism(r, m).is_some()));
        }
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                assert!(find_isomorphism(a, b).is_none());
            }
        }
    }
}

#[test]
fn pointed_search_and_limits() {
    let p = SearchProblem::new(3)
        .satisfy(identities_by_label(A).unwrap())
        .pointed(true)
        .limit(5);
    let models = find_models(&p).unwrap();
    assert_eq!(models.len(), 5);
    assert!(models.iter().all(|m| m.point().is_some()));
    assert!(matches!(
        find_models(&SearchProblem::new(5)),
        Err(Error::TooLarge { .. })
    ));
    assert!(find_models(&SearchProblem::new(2).limit(0)).is_err());
}

#[test]
fn threads_give_identical_results() {
    let p = separation("A4", 2);
    let one = find_models(&p).unwrap();
    for t in [2, 3, 8] {
        assert_eq!(find_models(&p.clone().threads(t)).unwrap(), one);
    }
}

#[test]
fn truncated_integer_model() {
    let report = independence_suite(2).unwrap();
    assert_eq!(report.a2_witness_value, Some(1));
    let by_label = |l: &str| report.truncated.iter().find(|c| c.label == l).unwrap();
    assert!(by_label("A2").failures > 0);
    for l in ["A3", "A4", "A5"] {
        assert_eq!(by_label(l).failures, 0, "{l}");
    }
    // x\(x*y) = max(y, 0) differs from y exactly when y < 0.
    let a1 = by_label("A1");
    assert!(a1.failures > 0);
    let first = a1.first_failure.as_ref().unwrap();
    assert!(first.iter().any(|(n, v)| n == "y" && *v < 0));
    let z = TruncatedIntegers { lo: -20, hi: 20 };
    assert_eq!(
        z.check(
            "A1",
            &rpq_core::term::Identity::parse("x\\(x*y) = y").unwrap()
        )
        .failures,
        a1.failures
    );

    let models: Vec<(String, usize)> = report
        .cases
        .iter()
        .map(|c| (c.axiom.clone(), c.models))
        .collect();
    assert_eq!(
        models,
        [("A1", 0), ("A2", 0), ("A3", 3), ("A4", 9), ("A5", 1)].map(|(a, n)| (a.to_string(), n))
    );
}
