//! Idempotents, maximal substructures and the splitting `S ≅ Se × E_S`.
//!
//! Reports are computed from a [`Decomposition`]; the claims that only
//! follow from the factor description (maximality, largest substructures)
//! are confirmed by brute force over all subsets when the carrier has at
//! most [`MAX_BRUTE_FORCE`] elements and left as `None` otherwise.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{Element, FiniteAlgebra, OpSymbol};
use crate::decompose::{decompose, Decomposition};
use crate::error::{Error, Result};

pub const MAX_BRUTE_FORCE: usize = 8;

pub type ElementSet = BTreeSet<Element>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoCheck {
    pub e: Element,
    pub formula: &'static str,
    /// `x ↦ (f1(x), f2(x))`.
    pub map: Vec<(Element, Element)>,
    /// Bijective onto `Se × E_S`.
    pub bijective: bool,
    pub homomorphism: bool,
}

impl IsoCheck {
    pub fn verified(&self) -> bool {
        self.bijective && self.homomorphism
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LoopKind {
    Left,
    Right,
    TwoSided,
}

impl LoopKind {
    fn formula(self) -> &'static str {
        match self {
            LoopKind::Left => "(xe/e, x/x)",
            LoopKind::Right => "(xe, x\\x)",
            LoopKind::TwoSided => "(xe, x/x)",
        }
    }

    fn map(self, s: &FiniteAlgebra, e: Element, x: Element) -> (Element, Element) {
        let (m, l, r) = (OpSymbol::Mul, OpSymbol::Ldiv, OpSymbol::Rdiv);
        let xe = s.apply(m, x, e).expect("mul present");
        match self {
            LoopKind::Left => (s.apply(r, xe, e).unwrap(), s.apply(r, x, x).unwrap()),
            LoopKind::Right => (xe, s.apply(l, x, x).unwrap()),
            LoopKind::TwoSided => (xe, s.apply(r, x, x).unwrap()),
        }
    }

    /// `{x : x/x = e}`, `{x : x\x = e}` or both.
    fn slice_by_squares(self, s: &FiniteAlgebra, e: Element) -> ElementSet {
        let rd = |x| s.apply(OpSymbol::Rdiv, x, x).unwrap();
        let ld = |x| s.apply(OpSymbol::Ldiv, x, x).unwrap();
        s.elements()
            .filter(|&x| match self {
                LoopKind::Left => rd(x) == e,
                LoopKind::Right => ld(x) == e,
                LoopKind::TwoSided => rd(x) == e && ld(x) == e,
            })
            .collect()
    }

    fn has_neutral(self, s: &FiniteAlgebra, set: &ElementSet) -> bool {
        set.iter().any(|&u| match self {
            LoopKind::Left => set.iter().all(|&x| s.mul(u, x) == x),
            LoopKind::Right => set.iter().all(|&x| s.mul(x, u) == x),
            LoopKind::TwoSided => set.iter().all(|&x| s.mul(u, x) == x && s.mul(x, u) == x),
        })
    }
}

/// What holds when the quasigroup factor is a left, right or two-sided loop.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopFacts {
    pub kind: LoopKind,
    /// `E_S = {a/a}` (left) or `E_S = {a\a}` (right).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub idempotents_are_squares: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left_neutrals_are_idempotents: Option<bool>,
    /// A right neutral exists exactly when `|R| = 1`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right_neutral_iff_trivial_r: Option<bool>,
    /// Each `Se` equals its description through `x/x` and/or `x\x`.
    pub slices_by_squares: bool,
    /// Each `Se` is a subquasigroup with a neutral of the matching side.
    pub slices_are_subloops: bool,
    pub isomorphisms: Vec<IsoCheck>,
}

impl LoopFacts {
    pub fn all_verified(&self) -> bool {
        [
            self.idempotents_are_squares,
            self.left_neutrals_are_idempotents,
            self.right_neutral_iff_trivial_r,
        ]
        .iter()
        .all(|c| c.unwrap_or(true))
            && self.slices_by_squares
            && self.slices_are_subloops
            && self.isomorphisms.iter().all(IsoCheck::verified)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Slice {
    pub e: Element,
    /// `Se = {x*e}`.
    pub se: ElementSet,
    /// `Se` is the slice of its right zero coordinate.
    pub is_q_slice: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_maximal_subquasigroup: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LoopStructureReport {
    pub size: usize,
    pub quasigroup_size: usize,
    pub right_zero_size: usize,
    pub idempotents: ElementSet,
    pub idempotents_form_subalgebra: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_idempotent_subalgebra: Option<bool>,
    pub rdiv_squares: ElementSet,
    pub ldiv_squares: ElementSet,
    pub left_neutrals: ElementSet,
    pub right_neutrals: ElementSet,
    /// `Q × {r}` for each right zero coordinate `r`.
    pub maximal_subquasigroups: Vec<ElementSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_subquasigroups_confirmed: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_left_zero: Option<Vec<ElementSet>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub maximal_right_zero: Option<Vec<ElementSet>>,
    pub slices: Vec<Slice>,
    pub loops: Vec<LoopFacts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointedStructureReport {
    pub point: Element,
    pub se: ElementSet,
    pub se_is_q_slice: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub se_is_largest_pointed_subquasigroup: Option<bool>,
    pub idempotents: ElementSet,
    pub idempotents_form_subalgebra: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_idempotent_subalgebra: Option<bool>,
    pub point_is_idempotent: bool,
    pub se_cap_idempotents: ElementSet,
    /// Largest subset containing the point on which `xy = x`, if unique.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_pointed_left_zero: Option<ElementSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub largest_pointed_right_zero: Option<ElementSet>,
    /// `f(x) = (xe/e, ex/x)`, checked when the only idempotent of the
    /// quasigroup factor is the point's coordinate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isomorphism: Option<IsoCheck>,
    pub loops: Vec<LoopFacts>,
}

fn set(it: impl IntoIterator<Item = Element>) -> ElementSet {
    it.into_iter().collect()
}

fn closed(s: &FiniteAlgebra, xs: &ElementSet, ops: &[OpSymbol]) -> bool {
    ops.iter().all(|&op| match s.table_opt(op) {
        None => true,
        Some(t) => xs
            .iter()
            .all(|&x| xs.iter().all(|&y| xs.contains(&t.get(x, y)))),
    })
}

fn is_subquasigroup(s: &FiniteAlgebra, xs: &ElementSet) -> bool {
    if xs.is_empty() || !closed(s, xs, &OpSymbol::ALL) {
        return false;
    }
    let (l, r) = (
        s.table(OpSymbol::Ldiv).unwrap(),
        s.table(OpSymbol::Rdiv).unwrap(),
    );
    xs.iter().all(|&x| {
        xs.iter().all(|&y| {
            l.get(x, s.mul(x, y)) == y
                && s.mul(x, l.get(x, y)) == y
                && r.get(s.mul(x, y), y) == x
                && s.mul(r.get(x, y), y) == x
        })
    })
}

/// All nonempty subsets satisfying `pred`, or `None` above the brute-force bound.
fn subsets(n: usize, pred: impl Fn(&ElementSet) -> bool) -> Option<Vec<ElementSet>> {
    if n > MAX_BRUTE_FORCE {
        return None;
    }
    Some(
        (1u32..1 << n)
            .map(|mask| set((0..n).filter(|&i| mask >> i & 1 == 1)))
            .filter(|xs| pred(xs))
            .collect(),
    )
}

fn maximal(family: Vec<ElementSet>) -> Vec<ElementSet> {
    let mut out: Vec<ElementSet> = family
        .iter()
        .filter(|a| !family.iter().any(|b| b.len() > a.len() && b.is_superset(a)))
        .cloned()
        .collect();
    out.sort();
    out
}

fn largest(family: Vec<ElementSet>) -> Option<ElementSet> {
    let max = maximal(family);
    match max.as_slice() {
        [one] => Some(one.clone()),
        _ => None,
    }
}

/// Checks `f = (f1, f2)` is a bijection `S → Se × E_S` preserving every
/// present operation and the point.
fn check_iso(
    s: &FiniteAlgebra,
    e: Element,
    formula: &'static str,
    se: &ElementSet,
    es: &ElementSet,
    f: impl Fn(Element) -> (Element, Element),
) -> IsoCheck {
    let map: Vec<(Element, Element)> = s.elements().map(&f).collect();
    let image: BTreeSet<_> = map.iter().copied().collect();
    let bijective = image.len() == s.size()
        && se.len() * es.len() == s.size()
        && map.iter().all(|(a, b)| se.contains(a) && es.contains(b));
    let homomorphism = s.present_ops().into_iter().all(|op| {
        let t = s.table(op).unwrap();
        s.elements().all(|x| {
            s.elements().all(|y| {
                let (fx, fy) = (map[x], map[y]);
                map[t.get(x, y)] == (t.get(fx.0, fy.0), t.get(fx.1, fy.1))
            })
        })
    }) && s.point().map_or(true, |p| map[p] == (e, e));
    IsoCheck {
        e,
        formula,
        map,
        bijective,
        homomorphism,
    }
}

struct Basics {
    idempotents: ElementSet,
    idempotents_form_subalgebra: bool,
    largest_idempotent_subalgebra: Option<bool>,
}

fn basics(s: &FiniteAlgebra) -> Basics {
    let idempotents = s.idempotents();
    let sub = !idempotents.is_empty() && s.is_subalgebra(&idempotents);
    let largest = if sub {
        subsets(s.size(), |xs| {
            xs.is_subset(&s.idempotents()) && s.is_subalgebra(xs)
        })
        .map(|fam| largest(fam).as_ref() == Some(&idempotents))
    } else {
        None
    };
    Basics {
        idempotents,
        idempotents_form_subalgebra: sub,
        largest_idempotent_subalgebra: largest,
    }
}

/// Which loop kinds the quasigroup factor belongs to, with its neutral.
fn factor_loop_kinds(q: &FiniteAlgebra) -> Vec<(LoopKind, Element)> {
    [LoopKind::Left, LoopKind::Right, LoopKind::TwoSided]
        .into_iter()
        .filter_map(|k| q.elements().find(|&u| k_neutral(q, k, u)).map(|u| (k, u)))
        .collect()
}

fn k_neutral(q: &FiniteAlgebra, k: LoopKind, u: Element) -> bool {
    q.elements().all(|x| match k {
        LoopKind::Left => q.mul(u, x) == x,
        LoopKind::Right => q.mul(x, u) == x,
        LoopKind::TwoSided => q.mul(u, x) == x && q.mul(x, u) == x,
    })
}

fn neutrals(s: &FiniteAlgebra, left: bool) -> ElementSet {
    s.elements()
        .filter(|&u| {
            s.elements().all(|x| {
                if left {
                    s.mul(u, x) == x
                } else {
                    s.mul(x, u) == x
                }
            })
        })
        .collect()
}

fn squares(s: &FiniteAlgebra, op: OpSymbol) -> ElementSet {
    s.elements().map(|a| s.apply(op, a, a).unwrap()).collect()
}

fn slice_of(d: &Decomposition, r: Element) -> ElementSet {
    set((0..d.r_class.len()).filter(|&x| d.r_class[x] == r))
}

fn products_with(s: &FiniteAlgebra, e: Element) -> ElementSet {
    s.elements().map(|x| s.mul(x, e)).collect()
}

#[allow(clippy::too_many_arguments)]
fn loop_facts(
    s: &FiniteAlgebra,
    d: &Decomposition,
    kind: LoopKind,
    idempotents: &ElementSet,
    points: &[Element],
    pointed: bool,
) -> LoopFacts {
    let (rdiv_sq, ldiv_sq) = (squares(s, OpSymbol::Rdiv), squares(s, OpSymbol::Ldiv));
    let left_neutrals = neutrals(s, true);
    let right_neutrals = neutrals(s, false);
    let idempotents_are_squares = match kind {
        LoopKind::Left => Some(*idempotents == rdiv_sq),
        LoopKind::Right => Some(*idempotents == ldiv_sq),
        LoopKind::TwoSided => None,
    };
    let left_neutrals_are_idempotents =
        (kind != LoopKind::Right).then(|| left_neutrals == *idempotents);
    let right_neutral_iff_trivial_r = (kind != LoopKind::Left).then(|| {
        let expected = d.right_zero.size() == 1;
        let unique = right_neutrals.len() == 1;
        let is_point = !pointed || right_neutrals.iter().all(|u| Some(*u) == s.point());
        (!right_neutrals.is_empty() == expected) && (!expected || (unique && is_point))
    });
    let mut slices_by_squares = true;
    let mut slices_are_subloops = true;
    let mut isomorphisms = Vec::new();
    for &e in points {
        let se = products_with(s, e);
        slices_by_squares &= se == kind.slice_by_squares(s, e);
        slices_are_subloops &= is_subquasigroup(s, &se) && kind.has_neutral(s, &se);
        isomorphisms.push(check_iso(s, e, kind.formula(), &se, idempotents, |x| {
            kind.map(s, e, x)
        }));
    }
    LoopFacts {
        kind,
        idempotents_are_squares,
        left_neutrals_are_idempotents,
        right_neutral_iff_trivial_r,
        slices_by_squares,
        slices_are_subloops,
        isomorphisms,
    }
}

/// Structure of a model of system A viewed without its point.
pub fn loop_structure_report(alg: &FiniteAlgebra) -> Result<LoopStructureReport> {
    let s = alg.without_point();
    let d = decompose(&s)?;
    let n = s.size();
    let b = basics(&s);
    let maximal_subquasigroups: Vec<ElementSet> =
        (0..d.right_zero.size()).map(|r| slice_of(&d, r)).collect();
    let brute_subq = subsets(n, |xs| is_subquasigroup(&s, xs)).map(maximal);
    let maximal_subquasigroups_confirmed = brute_subq.as_ref().map(|found| {
        let mut expected = maximal_subquasigroups.clone();
        expected.sort();
        *found == expected
    });
    let maximal_left_zero = subsets(n, |xs| {
        xs.iter().all(|&x| xs.iter().all(|&y| s.mul(x, y) == x))
    })
    .map(maximal);
    let maximal_right_zero = subsets(n, |xs| {
        xs.iter().all(|&x| xs.iter().all(|&y| s.mul(x, y) == y))
    })
    .map(maximal);
    let slices = b
        .idempotents
        .iter()
        .map(|&e| {
            let se = products_with(&s, e);
            Slice {
                e,
                is_q_slice: se == slice_of(&d, d.r_class[e]),
                is_maximal_subquasigroup: brute_subq.as_ref().map(|m| m.contains(&se)),
                se,
            }
        })
        .collect();
    let points: Vec<Element> = b.idempotents.iter().copied().collect();
    let loops = factor_loop_kinds(&d.quasigroup.without_point())
        .into_iter()
        .map(|(k, _)| loop_facts(&s, &d, k, &b.idempotents, &points, false))
        .collect();
    Ok(LoopStructureReport {
        size: n,
        quasigroup_size: d.quasigroup.size(),
        right_zero_size: d.right_zero.size(),
        idempotents: b.idempotents,
        idempotents_form_subalgebra: b.idempotents_form_subalgebra,
        largest_idempotent_subalgebra: b.largest_idempotent_subalgebra,
        rdiv_squares: squares(&s, OpSymbol::Rdiv),
        ldiv_squares: squares(&s, OpSymbol::Ldiv),
        left_neutrals: neutrals(&s, true),
        right_neutrals: neutrals(&s, false),
        maximal_subquasigroups,
        maximal_subquasigroups_confirmed,
        maximal_left_zero,
        maximal_right_zero,
        slices,
        loops,
    })
}

/// Structure of a pointed model of system A relative to its point.
pub fn pointed_structure_report(alg: &FiniteAlgebra) -> Result<PointedStructureReport> {
    let e = alg
        .point()
        .ok_or_else(|| Error::Precondition("the algebra has no distinguished element".into()))?;
    let d = decompose(alg)?;
    let s = alg;
    let n = s.size();
    let b = basics(s);
    let (i, j) = d.components(e);
    let se = products_with(s, e);
    let se_is_largest_pointed_subquasigroup =
        subsets(n, |xs| xs.contains(&e) && is_subquasigroup(s, xs))
            .map(|fam| largest(fam).as_ref() == Some(&se));
    let largest_pointed_left_zero = subsets(n, |xs| {
        xs.contains(&e) && xs.iter().all(|&x| xs.iter().all(|&y| s.mul(x, y) == x))
    })
    .and_then(largest);
    let largest_pointed_right_zero = subsets(n, |xs| {
        xs.contains(&e) && xs.iter().all(|&x| xs.iter().all(|&y| s.mul(x, y) == y))
    })
    .and_then(largest);
    let q = d.quasigroup.without_point();
    let q_idempotents = q.idempotents();
    let isomorphism = (q_idempotents == set([i])).then(|| {
        check_iso(s, e, "(xe/e, ex/x)", &se, &b.idempotents, |x| {
            let xe = s.mul(x, e);
            let rd = |a, c| s.apply(OpSymbol::Rdiv, a, c).unwrap();
            (rd(xe, e), rd(s.mul(e, x), x))
        })
    });
    let loops = if q_idempotents == set([i]) {
        [LoopKind::Left, LoopKind::Right, LoopKind::TwoSided]
            .into_iter()
            .filter(|&k| k_neutral(&q, k, i))
            .map(|k| loop_facts(s, &d, k, &b.idempotents, &[e], true))
            .collect()
    } else {
        Vec::new()
    };
    Ok(PointedStructureReport {
        point: e,
        se_is_q_slice: se == slice_of(&d, j),
        se_is_largest_pointed_subquasigroup,
        point_is_idempotent: b.idempotents.contains(&e),
        se_cap_idempotents: se.intersection(&b.idempotents).copied().collect(),
        se,
        idempotents: b.idempotents,
        idempotents_form_subalgebra: b.idempotents_form_subalgebra,
        largest_idempotent_subalgebra: b.largest_idempotent_subalgebra,
        largest_pointed_left_zero,
        largest_pointed_right_zero,
        isomorphism,
        loops,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{cyclic_group, direct_product, quasigroup, right_zero, Table};

    fn z3_rz2() -> FiniteAlgebra {
        direct_product(&cyclic_group(3).unwrap(), &right_zero(2).unwrap()).unwrap()
    }

    #[test]
    fn z3_times_rz2_loop_report() {
        let r = loop_structure_report(&z3_rz2()).unwrap();
        assert_eq!(r.idempotents, set([0, 1]));
        assert_eq!(r.idempotents, r.rdiv_squares);
        assert_eq!(r.left_neutrals, r.idempotents);
        assert!(r.right_neutrals.is_empty());
        assert_eq!(r.maximal_subquasigroups_confirmed, Some(true));
        assert_eq!(r.loops.len(), 3);
        for facts in &r.loops {
            assert!(facts.all_verified(), "{facts:?}");
            assert_eq!(facts.isomorphisms.len(), 2);
        }
        assert!(r
            .slices
            .iter()
            .all(|s| s.is_q_slice && s.is_maximal_subquasigroup == Some(true)));
    }

    #[test]
    fn right_zero_singletons_are_maximal_left_zero() {
        let r = loop_structure_report(&right_zero(3).unwrap()).unwrap();
        assert_eq!(r.idempotents, set(0..3));
        let singletons: Vec<ElementSet> = (0..3).map(|x| set([x])).collect();
        assert_eq!(r.maximal_left_zero, Some(singletons));
        assert_eq!(r.maximal_right_zero, Some(vec![set(0..3)]));
    }

    #[test]
    fn pointed_reports() {
        let s = z3_rz2().with_point(0).unwrap();
        let r = pointed_structure_report(&s).unwrap();
        assert_eq!(r.se.len(), 3);
        assert_eq!(r.se_cap_idempotents, set([0]));
        assert_eq!(r.largest_pointed_left_zero, Some(set([0])));
        assert_eq!(r.se_is_largest_pointed_subquasigroup, Some(true));

        let s = z3_rz2().with_point(1).unwrap();
        let r = pointed_structure_report(&s).unwrap();
        assert!(r.isomorphism.as_ref().unwrap().verified());
        assert!(r.loops.iter().all(LoopFacts::all_verified));

        let r = pointed_structure_report(&right_zero(2).unwrap().with_point(0).unwrap()).unwrap();
        assert_eq!(r.se, set([0]));
        assert_eq!(r.idempotents, set([0, 1]));
    }

    #[test]
    fn pointed_report_needs_a_point() {
        assert!(matches!(
            pointed_structure_report(&z3_rz2()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn no_idempotent_quasigroup_has_no_loop_facts() {
        let rows = [vec![1, 0, 2], vec![0, 2, 1], vec![2, 1, 0]];
        let q = quasigroup(Table::from_rows("mul", &rows).unwrap()).unwrap();
        let r = loop_structure_report(&q).unwrap();
        assert!(r.idempotents.is_empty());
        assert!(r.loops.is_empty());
        assert!(r.slices.is_empty());
    }
}
