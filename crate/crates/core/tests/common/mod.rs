#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rpq_core::algebra::{direct_product, latin_squares, quasigroup, right_zero, FiniteAlgebra};
use rpq_core::search::{find_models, identities_by_label, SearchProblem};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every quasigroup of order 1..=max_n, one per Latin square.
pub fn quasigroups(max_n: usize) -> Vec<FiniteAlgebra> {
    (1..=max_n)
        .flat_map(latin_squares)
        .map(|t| quasigroup(t).unwrap())
        .collect()
}

pub fn random_quasigroup(n: usize, rng: &mut ChaCha8Rng) -> FiniteAlgebra {
    let squares = latin_squares(n);
    quasigroup(squares.choose(rng).unwrap().clone()).unwrap()
}

pub fn rpq(q: &FiniteAlgebra, k: usize) -> FiniteAlgebra {
    direct_product(q, &right_zero(k).unwrap()).unwrap()
}

/// Models of system A: the corpus, every model of size <= 3 found by
/// search, and products of small quasigroups with right zero semigroups.
pub fn a_models() -> Vec<FiniteAlgebra> {
    let mut out: Vec<FiniteAlgebra> = rpq_core::corpus::a_models()
        .unwrap()
        .into_iter()
        .map(|(_, a)| a.without_point())
        .collect();
    let a = identities_by_label("A1,A2,A3,A4,A5").unwrap();
    for n in 1..=3 {
        out.extend(find_models(&SearchProblem::new(n).satisfy(a.clone())).unwrap());
    }
    for q in quasigroups(3) {
        for k in 1..=2 {
            out.push(rpq(&q, k));
        }
    }
    out
}

/// All bijections of `0..n`.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn factorial(k: usize) -> u64 {
    (1..=k as u64).product()
}
