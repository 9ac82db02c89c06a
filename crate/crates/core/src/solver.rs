//! The equations `ax = b` and `xa = b`.
//!
//! `ax = b` always has the unique solution `a\b` in a right quasigroup.
//! `xa = b` is consistent exactly when `(b/a)a = b`, and then its solutions
//! are the values of the reproductive map `F(p) = (b/a)p/p`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra, OpSymbol};
use crate::axioms::{check_system, has_label, system, VarietyLabel};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `ax = b`
    Left,
    /// `xa = b`
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    pub a: Element,
    pub b: Element,
    pub side: Side,
    pub solutions: BTreeSet<Element>,
    /// `(p, F(p))` for each parameter used.
    pub generator_trace: Vec<(Element, Element)>,
    /// Set when idempotent parameters were asked for but none exist.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
    /// Whether `(b/a)e = (b/a)e/e` for every idempotent `e`; only checked in
    /// right product right loops.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub simplified_form_agrees: Option<bool>,
}

fn check_range(alg: &FiniteAlgebra, what: &'static str, x: Element) -> Result<()> {
    if x >= alg.size() {
        return Err(Error::OutOfRange {
            what,
            index: x,
            size: alg.size(),
        });
    }
    Ok(())
}

pub fn solve_ax_b(alg: &FiniteAlgebra, a: Element, b: Element) -> Result<Element> {
    let report = check_system(alg, system("RQ")?)?;
    if let Some(fail) = report.first_failure() {
        return Err(Error::Precondition(format!(
            "not a right quasigroup: {} fails at {}",
            fail.label,
            fail.counterexample.clone().unwrap_or_default()
        )));
    }
    let x = alg.apply(OpSymbol::Ldiv, a, b)?;
    assert_eq!(alg.mul(a, x), b, "a*(a\\b) != b in a right quasigroup");
    Ok(x)
}

/// `(b/a)a`, the value the consistency test compares against `b`.
fn consistency_product(alg: &FiniteAlgebra, a: Element, b: Element) -> Result<Element> {
    check_range(alg, "a", a)?;
    check_range(alg, "b", b)?;
    Ok(alg.mul(alg.table(OpSymbol::Rdiv)?.get(b, a), a))
}

pub fn consistent_xa_b(alg: &FiniteAlgebra, a: Element, b: Element) -> Result<bool> {
    Ok(consistency_product(alg, a, b)? == b)
}

fn require_consistent(alg: &FiniteAlgebra, a: Element, b: Element) -> Result<()> {
    let product = consistency_product(alg, a, b)?;
    if product != b {
        return Err(Error::Inconsistent { product, b });
    }
    Ok(())
}

/// `F(p) = (b/a)p/p`.
pub fn reproductive_map(
    alg: &FiniteAlgebra,
    a: Element,
    b: Element,
) -> Result<impl Fn(Element) -> Element + '_> {
    let rdiv = alg.table(OpSymbol::Rdiv)?;
    let c = rdiv.get(b, a);
    Ok(move |p| rdiv.get(alg.mul(c, p), p))
}

fn from_parameters(
    alg: &FiniteAlgebra,
    a: Element,
    b: Element,
    params: impl IntoIterator<Item = Element>,
) -> Result<SolutionSet> {
    let f = reproductive_map(alg, a, b)?;
    let generator_trace: Vec<(Element, Element)> = params.into_iter().map(|p| (p, f(p))).collect();
    let solutions: BTreeSet<Element> = generator_trace.iter().map(|&(_, x)| x).collect();
    for &x in &solutions {
        assert_eq!(
            alg.mul(x, a),
            b,
            "generated value {x} does not solve xa = b"
        );
    }
    Ok(SolutionSet {
        a,
        b,
        side: Side::Right,
        solutions,
        generator_trace,
        notice: None,
        simplified_form_agrees: None,
    })
}

pub fn solve_xa_b(alg: &FiniteAlgebra, a: Element, b: Element) -> Result<SolutionSet> {
    require_consistent(alg, a, b)?;
    from_parameters(alg, a, b, alg.elements())
}

/// Solutions from idempotent parameters `(b/a)e/e`; falls back to all
/// parameters with a notice when there are no idempotents.
pub fn solve_xa_b_idempotent(alg: &FiniteAlgebra, a: Element, b: Element) -> Result<SolutionSet> {
    require_consistent(alg, a, b)?;
    let idempotents = alg.idempotents();
    if idempotents.is_empty() {
        let mut out = from_parameters(alg, a, b, alg.elements())?;
        out.notice = Some("no idempotents; solved with every element as parameter".into());
        return Ok(out);
    }
    let mut out = from_parameters(alg, a, b, idempotents.iter().copied())?;
    if has_label(&alg.without_point(), VarietyLabel::RpRightLoop) {
        let c = alg.table(OpSymbol::Rdiv)?.get(b, a);
        let f = reproductive_map(alg, a, b)?;
        out.simplified_form_agrees = Some(idempotents.iter().all(|&e| alg.mul(c, e) == f(e)));
    }
    Ok(out)
}

/// Whether `F(F(x)) = F(x)` for every `x < n`.
pub fn check_reproductive(n: usize, f: impl Fn(Element) -> Element) -> bool {
    (0..n).all(|x| {
        let fx = f(x);
        f(fx) == fx
    })
}
