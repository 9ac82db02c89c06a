//! The bundled corpus of Cayley tables and named identities, and the
//! checks that re-derive every claim made about the printed tables.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{derive_ldiv, derive_rdiv, right_zero, FiniteAlgebra, OpSymbol, Table};
use crate::axioms::{
    builtin_systems, check_system, classify, lift_identity, system, LiftMode, VarietyLabel,
};
use crate::error::{Error, Line, Result};
use crate::products::{adjoin_unit, short_product, BracketShape};
use crate::search::{find_models, identities_by_label, independence_suite};
use crate::solver::{
    check_reproductive, reproductive_map, solve_ax_b, solve_xa_b, solve_xa_b_idempotent,
};
use crate::structure::loop_structure_report;
use crate::term::{holds, parse_identity_file, parse_term, Identity};
use crate::word::wp_rpq;

macro_rules! corpus_file {
    ($name:literal) => {
        (
            $name,
            include_str!(concat!("../../../corpus/", $name, ".json")),
        )
    };
}

/// `(name, json)` for every bundled algebra.
pub const FILES: &[(&str, &str)] = &[
    corpus_file!("example-1-3"),
    corpus_file!("noid-left"),
    corpus_file!("noid-right"),
    corpus_file!("table2-left"),
    corpus_file!("table2-right"),
    corpus_file!("notA3"),
    corpus_file!("notA4"),
    corpus_file!("notA5"),
    corpus_file!("right_zero-1"),
    corpus_file!("right_zero-2"),
    corpus_file!("right_zero-3"),
    corpus_file!("z3"),
    corpus_file!("z3-loop-pointed"),
    corpus_file!("z3xR2"),
    corpus_file!("z3xR2-pointed"),
];

pub const AXIOMS: &str = include_str!("../../../corpus/axioms.txt");

pub fn names() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

pub fn text(name: &str) -> Result<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Unknown {
            kind: "corpus entry",
            name: name.to_string(),
        })
}

pub fn load(name: &str, derive: bool) -> Result<FiniteAlgebra> {
    FiniteAlgebra::from_json(text(name)?, derive)
}

/// A corpus algebra with missing divisions derived where possible.
pub fn algebra(name: &str) -> Result<FiniteAlgebra> {
    load(name, true)
}

pub fn axioms() -> Result<Vec<(String, Identity)>> {
    parse_identity_file(AXIOMS)
}

/// Every corpus algebra satisfying system A.
pub fn a_models() -> Result<Vec<(&'static str, FiniteAlgebra)>> {
    let a = system("A")?;
    let mut out = Vec::new();
    for name in names() {
        let alg = algebra(name)?;
        if alg.has(OpSymbol::Ldiv)
            && alg.has(OpSymbol::Rdiv)
            && check_system(&alg.without_point(), a)?.all_hold()
        {
            out.push((name, alg));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Check = fn() -> Result<(bool, String)>;

const CHECKS: &[(&str, Check)] = &[
    ("notA3: x/y at (0,0) is 1", check_rdiv_lookup),
    (
        "noid-left: both divisions derive and invert mul",
        check_noid_divisions,
    ),
    (
        "example-1-3: ldiv derives, rdiv fails at column 0",
        check_example_divisions,
    ),
    ("noid-left has no idempotents", check_noid_idempotents),
    (
        "table2-left: idempotents {0,1}, not closed",
        check_table2_left_idempotents,
    ),
    (
        "table2-right: idempotents {0,1,2} form a subalgebra",
        check_table2_right_idempotents,
    ),
    ("tail of x\\(x*y) is y", check_tail),
    ("notA3 fails A3 with a counterexample", check_not_a3_holds),
    (
        "catalog: A has A1..A5, LL has (x/x)*y = y, Q is Q1..Q4",
        check_catalog,
    ),
    ("notA3: only A3 fails", || check_pattern("notA3", "A3")),
    ("notA4: only A4 fails", || check_pattern("notA4", "A4")),
    ("notA5: only A5 fails", || check_pattern("notA5", "A5")),
    (
        "example-1-3 classifies as a right quasigroup only",
        check_example_classification,
    ),
    (
        "commutativity lifts to (x*y)*z = (y*x)*z",
        check_commutativity_lift,
    ),
    ("commutativity has no plain lift", check_plain_lift_refused),
    (
        "table2-right: idempotents are the largest idempotent subalgebra",
        check_largest_idempotent_subalgebra,
    ),
    ("noid-left: 0x = 2 has x = 2", check_left_equation),
    (
        "z3xR2: (b/a)p/p is reproductive for every consistent a, b",
        check_reproductive_maps,
    ),
    (
        "z3xR2: xa = b has exactly |R| solutions when consistent",
        check_solution_counts,
    ),
    (
        "noid-left: idempotent solving falls back with a notice",
        check_idempotent_fallback,
    ),
    (
        "adjoined unit is neutral for all operations",
        check_adjoin_unit,
    ),
    (
        "products with at most two nonidempotents shorten to three factors",
        check_short_products,
    ),
    (
        "A1..A5 and B2 are valid in right product quasigroups",
        check_wp_valid,
    ),
    ("Q3 is not valid in right product quasigroups", check_wp_q3),
    (
        "table2-left refutes commutativity at 0*1 = 2, 1*0 = 3",
        check_commutativity_refuted,
    ),
    (
        "size-2 search reproduces notA3, notA4, notA5",
        check_search_reproduces,
    ),
    (
        "truncated integers violate A2 at x=1, y=0",
        check_truncated_a2,
    ),
    ("axioms.txt matches the catalog", check_axiom_file),
];

/// Runs every corpus check in a fixed order.
pub fn verify() -> Vec<CorpusCheck> {
    CHECKS
        .iter()
        .map(|&(name, check)| {
            let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
            CorpusCheck {
                name,
                passed,
                detail,
            }
        })
        .collect()
}

fn check_rdiv_lookup() -> Result<(bool, String)> {
    let v = algebra("notA3")?.apply(OpSymbol::Rdiv, 0, 0)?;
    Ok((v == 1, format!("0/0 = {v}")))
}

fn check_noid_divisions() -> Result<(bool, String)> {
    let a = load("noid-left", false)?;
    let ldiv = derive_ldiv(a.mul_table())?;
    let rdiv = derive_rdiv(a.mul_table())?;
    let n = a.size();
    let ok = (0..n)
        .all(|x| (0..n).all(|y| a.mul(x, ldiv.get(x, y)) == y && a.mul(rdiv.get(x, y), y) == x));
    Ok((ok, format!("{} pairs checked", n * n)))
}

fn check_example_divisions() -> Result<(bool, String)> {
    let a = load("example-1-3", false)?;
    let ldiv_ok = derive_ldiv(a.mul_table()).is_ok();
    let rdiv = derive_rdiv(a.mul_table());
    let col0 = matches!(
        rdiv,
        Err(Error::NotCancellative {
            op: OpSymbol::Rdiv,
            line: Line::Column(0)
        })
    );
    Ok((
        ldiv_ok && col0,
        format!("ldiv derivable: {ldiv_ok}, rdiv: {:?}", rdiv.err()),
    ))
}

fn check_noid_idempotents() -> Result<(bool, String)> {
    let e = algebra("noid-left")?.idempotents();
    Ok((e.is_empty(), format!("E = {e:?}")))
}

fn check_table2_left_idempotents() -> Result<(bool, String)> {
    let a = algebra("table2-left")?;
    let e = a.idempotents();
    let product = a.mul(0, 1);
    let ok = e == BTreeSet::from([0, 1]) && product == 2 && !e.contains(&product);
    Ok((ok, format!("E = {e:?}, 0*1 = {product}")))
}

fn check_table2_right_idempotents() -> Result<(bool, String)> {
    let a = algebra("table2-right")?;
    let e = a.idempotents();
    let ok = e == BTreeSet::from([0, 1, 2]) && a.is_subalgebra(&e);
    Ok((ok, format!("E = {e:?}, closed: {}", a.is_subalgebra(&e))))
}

fn check_tail() -> Result<(bool, String)> {
    let t = parse_term("x \\ (x * y)")?;
    let tail = t.tail()?;
    Ok((tail == "y", format!("tail = {tail}")))
}

fn check_not_a3_holds() -> Result<(bool, String)> {
    let v = holds(&algebra("notA3")?, crate::axioms::identity("A3")?)?;
    let detail = match v.counterexample() {
        Some(cx) => format!("fails at {cx}"),
        None => "holds".into(),
    };
    Ok((!v.holds(), detail))
}

fn check_catalog() -> Result<(bool, String)> {
    let a = system("A")?;
    let ll = system("LL")?;
    let q = system("Q")?;
    let target = Identity::parse("(x/x)*y = y")?;
    let ok = a.labels() == ["A1", "A2", "A3", "A4", "A5"]
        && ll.identities.iter().any(|(_, id)| *id == target)
        && q.labels() == ["Q1", "Q2", "Q3", "Q4"];
    Ok((ok, format!("A: {:?}, Q: {:?}", a.labels(), q.labels())))
}

fn check_pattern(name: &str, failing: &str) -> Result<(bool, String)> {
    let report = check_system(&algebra(name)?, system("A")?)?;
    let fails = report.failing_labels();
    Ok((fails == [failing], format!("failing: {fails:?}")))
}

fn check_example_classification() -> Result<(bool, String)> {
    let plain = load("example-1-3", true)?;
    let n = plain.size();
    let adjoined = FiniteAlgebra::new(
        plain.mul_table().clone(),
        Some(plain.table(OpSymbol::Ldiv)?.clone()),
        Some(Table::from_fn(n, |_, _| 0)),
        None,
    )?;
    let want = BTreeSet::from([VarietyLabel::RightQuasigroup]);
    let (a, b) = (classify(&plain), classify(&adjoined));
    Ok((
        a == want && b == want,
        format!("without /: {a:?}, with constant /: {b:?}"),
    ))
}

fn check_commutativity_lift() -> Result<(bool, String)> {
    let lifted = lift_identity(&Identity::parse("x*y = y*x")?, LiftMode::MulZ)?;
    let want = Identity::parse("(x*y)*z = (y*x)*z")?;
    Ok((lifted == want, lifted.to_string()))
}

fn check_plain_lift_refused() -> Result<(bool, String)> {
    let r = lift_identity(&Identity::parse("x*y = y*x")?, LiftMode::Plain);
    Ok((
        matches!(r, Err(Error::TailMismatch { .. })),
        format!("{:?}", r.err()),
    ))
}

fn check_largest_idempotent_subalgebra() -> Result<(bool, String)> {
    let r = loop_structure_report(&algebra("table2-right")?)?;
    let ok = r.idempotents_form_subalgebra && r.largest_idempotent_subalgebra == Some(true);
    Ok((ok, format!("E = {:?}", r.idempotents)))
}

fn check_left_equation() -> Result<(bool, String)> {
    let x = solve_ax_b(&algebra("noid-left")?, 0, 2)?;
    Ok((x == 2, format!("x = {x}")))
}

fn consistent_pairs(a: &FiniteAlgebra) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in a.elements() {
        for y in a.elements() {
            if crate::solver::consistent_xa_b(a, x, y).unwrap_or(false) {
                out.push((x, y));
            }
        }
    }
    out
}

fn check_reproductive_maps() -> Result<(bool, String)> {
    let s = algebra("z3xR2")?;
    let pairs = consistent_pairs(&s);
    let mut ok = true;
    for &(a, b) in &pairs {
        ok &= check_reproductive(s.size(), reproductive_map(&s, a, b)?);
    }
    Ok((ok, format!("{} consistent pairs", pairs.len())))
}

fn check_solution_counts() -> Result<(bool, String)> {
    let s = algebra("z3xR2")?;
    let r = crate::decompose::decompose(&s)?.right_zero.size();
    let pairs = consistent_pairs(&s);
    let mut ok = true;
    for &(a, b) in &pairs {
        ok &= solve_xa_b(&s, a, b)?.solutions.len() == r;
    }
    Ok((ok, format!("|R| = {r}, {} consistent pairs", pairs.len())))
}

fn check_idempotent_fallback() -> Result<(bool, String)> {
    let out = solve_xa_b_idempotent(&algebra("noid-left")?, 0, 0)?;
    Ok((out.notice.is_some(), out.notice.unwrap_or_default()))
}

fn check_adjoin_unit() -> Result<(bool, String)> {
    let ext = adjoin_unit(&right_zero(2)?);
    let u = ext.unit;
    let mut ok = u == 2;
    for op in OpSymbol::ALL {
        for x in ext.algebra.elements() {
            ok &= ext.algebra.apply(op, u, x)? == x && ext.algebra.apply(op, x, u)? == x;
        }
    }
    Ok((ok, format!("unit = {u}")))
}

fn check_short_products() -> Result<(bool, String)> {
    let s = algebra("z3xR2")?;
    let n = s.size();
    let mut checked = 0;
    let mut ok = true;
    for len in 1..=4usize {
        let shapes = BracketShape::all(len);
        for code in 0..n.pow(len as u32) {
            let seq: Vec<usize> = (0..len).map(|i| code / n.pow(i as u32) % n).collect();
            let Ok(short) = short_product(&s, &seq) else {
                continue;
            };
            let value = crate::products::rho(&s, &short)?;
            for shape in &shapes {
                ok &= crate::products::eval_shape(&s, shape, &seq)? == value;
                checked += 1;
            }
        }
    }
    Ok((ok, format!("{checked} bracketings checked")))
}

fn check_wp_valid() -> Result<(bool, String)> {
    let mut bad = Vec::new();
    for label in ["A1", "A2", "A3", "A4", "A5", "B2"] {
        let id = crate::axioms::identity(label)?;
        if !wp_rpq(&id.lhs, &id.rhs)? {
            bad.push(label);
        }
    }
    Ok((bad.is_empty(), format!("invalid: {bad:?}")))
}

fn check_wp_q3() -> Result<(bool, String)> {
    let id = crate::axioms::identity("Q3")?;
    let valid = wp_rpq(&id.lhs, &id.rhs)?;
    Ok((!valid, format!("valid = {valid}")))
}

fn check_commutativity_refuted() -> Result<(bool, String)> {
    let a = algebra("table2-left")?;
    let v = holds(&a, &Identity::parse("x*y = y*x")?)?;
    let ok = a.mul(0, 1) == 2 && a.mul(1, 0) == 3 && !v.holds();
    Ok((
        ok,
        format!("{:?}", v.counterexample().map(ToString::to_string)),
    ))
}

fn check_search_reproduces() -> Result<(bool, String)> {
    let mut found = Vec::new();
    for (name, axiom) in [("notA3", "A3"), ("notA4", "A4"), ("notA5", "A5")] {
        let others: Vec<&str> = ["A1", "A2", "A3", "A4", "A5"]
            .into_iter()
            .filter(|&l| l != axiom)
            .collect();
        let p = crate::search::SearchProblem::new(2)
            .satisfy(identities_by_label(&others.join(","))?)
            .violate(identities_by_label(axiom)?);
        let target = load(name, false)?;
        found.push((name, find_models(&p)?.contains(&target)));
    }
    Ok((found.iter().all(|(_, f)| *f), format!("{found:?}")))
}

fn check_truncated_a2() -> Result<(bool, String)> {
    let report = independence_suite(0)?;
    let a2 = report.truncated.iter().find(|c| c.label == "A2");
    let ok = report.a2_witness_value == Some(1) && a2.is_some_and(|c| c.failures > 0);
    Ok((ok, format!("1*(1\\0) = {:?}", report.a2_witness_value)))
}

fn check_axiom_file() -> Result<(bool, String)> {
    let file = axioms()?;
    let mut missing = Vec::new();
    for sys in builtin_systems() {
        for (label, id) in &sys.identities {
            if !file.iter().any(|(l, i)| l == label && i == id) {
                missing.push(label.clone());
            }
        }
    }
    let extra = file
        .iter()
        .filter(|(l, _)| builtin_systems().iter().all(|s| s.get(l).is_none()))
        .count();
    Ok((
        missing.is_empty() && extra == 0,
        format!("{} identities, missing {missing:?}", file.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_file_loads() {
        for name in names() {
            let alg = algebra(name).unwrap();
            assert!(alg.size() >= 1, "{name}");
        }
        assert!(text("nope").is_err());
        assert_eq!(text("z3.json").unwrap(), text("z3").unwrap());
    }

    #[test]
    fn a_models_are_the_expected_files() {
        let names: Vec<&str> = a_models().unwrap().into_iter().map(|(n, _)| n).collect();
        assert_eq!(
            names,
            [
                "noid-left",
                "noid-right",
                "table2-left",
                "table2-right",
                "right_zero-1",
                "right_zero-2",
                "right_zero-3",
                "z3",
                "z3-loop-pointed",
                "z3xR2",
                "z3xR2-pointed"
            ]
        );
    }

    #[test]
    fn all_checks_pass() {
        for c in verify() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
