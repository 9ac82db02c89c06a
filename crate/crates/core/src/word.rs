//! Deciding identities of right product quasigroups.
//!
//! An identity `u = v` in `*, \, /` holds in every right product
//! quasigroup exactly when `u` and `v` have the same tail (rightmost
//! variable) and `u = v` holds in every quasigroup. The latter is decided by
//! comparing normal forms under a convergent rewriting system for
//! quasigroups.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::FiniteAlgebra;
use crate::axioms::system;
use crate::error::{Error, Result};
use crate::search::{find_models, SearchProblem, MAX_SEARCH_SIZE};
use crate::term::{holds, Assignment, Identity, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteRule {
    pub name: &'static str,
    pub lhs: Term,
    pub rhs: Term,
}

impl RewriteRule {
    fn new(name: &'static str, lhs: &str, rhs: &str) -> Self {
        let parse = |s| crate::term::parse_term(s).expect("built-in rule parses");
        RewriteRule {
            name,
            lhs: parse(lhs),
            rhs: parse(rhs),
        }
    }
}

/// The six rules, in the order they are tried.
pub fn rules() -> Vec<RewriteRule> {
    vec![
        RewriteRule::new("R1", "x*(x\\y)", "y"),
        RewriteRule::new("R2", "x\\(x*y)", "y"),
        RewriteRule::new("R3", "(x*y)/y", "x"),
        RewriteRule::new("R4", "(x/y)*y", "x"),
        RewriteRule::new("R5", "y/(x\\y)", "x"),
        RewriteRule::new("R6", "(x/y)\\x", "y"),
    ]
}

type Subst = BTreeMap<String, Term>;

fn matches(pattern: &Term, t: &Term, s: &mut Subst) -> bool {
    match pattern {
        Term::Var(v) => match s.get(v) {
            Some(bound) => bound == t,
            None => {
                s.insert(v.clone(), t.clone());
                true
            }
        },
        Term::Op(op, a, b) => match t {
            Term::Op(top, ta, tb) if top == op => matches(a, ta, s) && matches(b, tb, s),
            _ => false,
        },
        other => other == t,
    }
}

fn apply(t: &Term, s: &Subst) -> Term {
    match t {
        Term::Var(v) => s.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Op(op, a, b) => Term::op(*op, apply(a, s), apply(b, s)),
        other => other.clone(),
    }
}

fn rewrite_root(rules: &[RewriteRule], t: &Term) -> Option<Term> {
    rules.iter().find_map(|r| {
        let mut s = Subst::new();
        matches(&r.lhs, t, &mut s).then(|| apply(&r.rhs, &s))
    })
}

fn quasigroup_language(t: &Term) -> Result<()> {
    if t.has_constants() {
        return Err(Error::UnsupportedLanguage);
    }
    Ok(())
}

/// Leftmost-innermost normal form.
pub fn normalize(t: &Term) -> Result<Term> {
    quasigroup_language(t)?;
    let rules = rules();
    let mut steps = 0;
    let nf = innermost(&rules, t, &mut steps);
    debug_assert!(steps <= t.size());
    Ok(nf)
}

/// Normal form together with the number of rewrite steps taken.
pub fn normalize_counting(t: &Term) -> Result<(Term, usize)> {
    quasigroup_language(t)?;
    let mut steps = 0;
    let nf = innermost(&rules(), t, &mut steps);
    Ok((nf, steps))
}

fn innermost(rules: &[RewriteRule], t: &Term, steps: &mut usize) -> Term {
    match t {
        Term::Op(op, a, b) => {
            let t = Term::op(*op, innermost(rules, a, steps), innermost(rules, b, steps));
            // every right-hand side is a variable bound to a normal subterm
            match rewrite_root(rules, &t) {
                Some(r) => {
                    *steps += 1;
                    r
                }
                None => t,
            }
        }
        other => other.clone(),
    }
}

fn outermost_step(rules: &[RewriteRule], t: &Term) -> Option<Term> {
    if let Some(r) = rewrite_root(rules, t) {
        return Some(r);
    }
    match t {
        Term::Op(op, a, b) => {
            if let Some(a2) = outermost_step(rules, a) {
                return Some(Term::op(*op, a2, (**b).clone()));
            }
            outermost_step(rules, b).map(|b2| Term::op(*op, (**a).clone(), b2))
        }
        _ => None,
    }
}

/// Leftmost-outermost normal form.
pub fn normalize_outermost(t: &Term) -> Result<Term> {
    quasigroup_language(t)?;
    let rules = rules();
    let mut cur = t.clone();
    while let Some(next) = outermost_step(&rules, &cur) {
        assert!(
            next.size() < cur.size(),
            "rewrite step did not shrink the term"
        );
        cur = next;
    }
    Ok(cur)
}

/// Whether `u = v` holds in all quasigroups.
pub fn wp_quasigroup(u: &Term, v: &Term) -> Result<bool> {
    Ok(normalize(u)? == normalize(v)?)
}

/// Whether `u = v` holds in all right product quasigroups.
pub fn wp_rpq(u: &Term, v: &Term) -> Result<bool> {
    Ok(decide(u, v, Variety::Rpq)?.valid)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variety {
    Rpq,
    Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub variety: Variety,
    pub valid: bool,
    pub lhs_normal_form: String,
    pub rhs_normal_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs_tail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs_tail: Option<String>,
}

pub fn decide(u: &Term, v: &Term, variety: Variety) -> Result<Decision> {
    let (nu, nv) = (normalize(u)?, normalize(v)?);
    let same = nu == nv;
    let (lhs_tail, rhs_tail, valid) = match variety {
        Variety::Q => (None, None, same),
        Variety::Rpq => {
            let (tu, tv) = (u.tail()?, v.tail()?);
            (Some(tu.to_string()), Some(tv.to_string()), tu == tv && same)
        }
    };
    Ok(Decision {
        variety,
        valid,
        lhs_normal_form: nu.to_string(),
        rhs_normal_form: nv.to_string(),
        lhs_tail,
        rhs_tail,
    })
}

/// The first model of A (pointed when the identity mentions `e`) of size
/// at most `max_n`, in search order, where the identity fails.
pub fn refute_by_model(id: &Identity, max_n: usize) -> Result<Option<(FiniteAlgebra, Assignment)>> {
    if max_n > MAX_SEARCH_SIZE {
        return Err(Error::TooLarge {
            what: "refutation search",
            size: max_n,
            max: MAX_SEARCH_SIZE,
        });
    }
    if id.lhs.mentions_unit() || id.rhs.mentions_unit() {
        return Err(Error::UnitNotAllowed);
    }
    let a: Vec<Identity> = system("A")?
        .identities
        .iter()
        .map(|(_, i)| i.clone())
        .collect();
    for n in 1..=max_n {
        let p = SearchProblem::new(n)
            .satisfy(a.iter().cloned())
            .violate([id.clone()])
            .pointed(id.mentions_e())
            .limit(1);
        if let Some(m) = find_models(&p)?.into_iter().next() {
            let cx = holds(&m, id)?
                .counterexample()
                .cloned()
                .expect("search guarantees a failure");
            return Ok(Some((m, cx)));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalPair {
    pub outer: &'static str,
    pub inner: &'static str,
    /// Path from the root of the outer left-hand side: 0 left, 1 right.
    pub position: Vec<u8>,
    pub left: String,
    pub right: String,
    pub joined: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfluenceReport {
    pub pairs: Vec<CriticalPair>,
}

impl ConfluenceReport {
    pub fn all_joined(&self) -> bool {
        self.pairs.iter().all(|p| p.joined)
    }
}

fn occurs(v: &str, t: &Term) -> bool {
    match t {
        Term::Var(w) => w == v,
        Term::Op(_, a, b) => occurs(v, a) || occurs(v, b),
        _ => false,
    }
}

fn unify(a: &Term, b: &Term, s: &mut Subst) -> bool {
    let (a, b) = (apply(a, s), apply(b, s));
    match (&a, &b) {
        _ if a == b => true,
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            if occurs(v, t) {
                return false;
            }
            let single: Subst = [(v.clone(), t.clone())].into();
            for val in s.values_mut() {
                *val = apply(val, &single);
            }
            s.insert(v.clone(), t.clone());
            true
        }
        (Term::Op(o1, a1, b1), Term::Op(o2, a2, b2)) => {
            o1 == o2 && unify(a1, a2, s) && unify(b1, b2, s)
        }
        _ => false,
    }
}

fn rename(t: &Term, suffix: &str) -> Term {
    match t {
        Term::Var(v) => Term::Var(format!("{v}{suffix}")),
        Term::Op(op, a, b) => Term::op(*op, rename(a, suffix), rename(b, suffix)),
        other => other.clone(),
    }
}

fn positions(t: &Term, here: Vec<u8>, out: &mut Vec<(Vec<u8>, Term)>) {
    if let Term::Op(_, a, b) = t {
        out.push((here.clone(), t.clone()));
        let mut l = here.clone();
        l.push(0);
        positions(a, l, out);
        let mut r = here;
        r.push(1);
        positions(b, r, out);
    }
}

fn replace_at(t: &Term, pos: &[u8], with: &Term) -> Term {
    match (pos.split_first(), t) {
        (None, _) => with.clone(),
        (Some((0, rest)), Term::Op(op, a, b)) => {
            Term::op(*op, replace_at(a, rest, with), (**b).clone())
        }
        (Some((_, rest)), Term::Op(op, a, b)) => {
            Term::op(*op, (**a).clone(), replace_at(b, rest, with))
        }
        _ => unreachable!("position inside a leaf"),
    }
}

/// All critical pairs between the rules and whether each joins.
pub fn confluence_selfcheck() -> ConfluenceReport {
    let rules = rules();
    let mut pairs = Vec::new();
    for outer in &rules {
        let mut subterms = Vec::new();
        positions(&outer.lhs, Vec::new(), &mut subterms);
        for inner in &rules {
            let (il, ir) = (rename(&inner.lhs, "1"), rename(&inner.rhs, "1"));
            for (pos, sub) in &subterms {
                if pos.is_empty() && outer.name == inner.name {
                    continue;
                }
                let mut s = Subst::new();
                if !unify(sub, &il, &mut s) {
                    continue;
                }
                let left = apply(&outer.rhs, &s);
                let right = apply(&replace_at(&outer.lhs, pos, &ir), &s);
                let joined = normalize(&left).unwrap() == normalize(&right).unwrap();
                pairs.push(CriticalPair {
                    outer: outer.name,
                    inner: inner.name,
                    position: pos.clone(),
                    left: left.to_string(),
                    right: right.to_string(),
                    joined,
                });
            }
        }
    }
    ConfluenceReport { pairs }
}

/// Whether every rule strictly shrinks terms: each right-hand side is a
/// proper subterm variable of its left-hand side.
pub fn rules_shrink() -> bool {
    rules().iter().all(|r| {
        matches!(&r.rhs, Term::Var(v) if r.lhs.variables().contains(&v.as_str()))
            && r.rhs.size() < r.lhs.size()
    })
}

/// `(name, lhs, rhs)` for each rule.
pub fn rule_table() -> Vec<(String, String, String)> {
    rules()
        .into_iter()
        .map(|r| (r.name.to_string(), r.lhs.to_string(), r.rhs.to_string()))
        .collect()
}
