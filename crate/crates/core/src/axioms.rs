//! Named identity systems and variety classification.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, OpSymbol};
use crate::error::{Error, Result};
use crate::term::{holds, Identity, Term, Verdict};

/// A named, ordered list of labelled identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomSystem {
    pub name: String,
    pub identities: Vec<(String, Identity)>,
}

impl AxiomSystem {
    pub fn new(name: &str, identities: Vec<(String, Identity)>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (label, _) in &identities {
            if !seen.insert(label.as_str()) {
                return Err(Error::Precondition(format!(
                    "duplicate label {label} in system {name}"
                )));
            }
        }
        Ok(AxiomSystem {
            name: name.to_string(),
            identities,
        })
    }

    pub fn get(&self, label: &str) -> Option<&Identity> {
        self.identities
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, id)| id)
    }

    pub fn labels(&self) -> Vec<&str> {
        self.identities.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn len(&self) -> usize {
        self.identities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.identities.is_empty()
    }
}

// Every identity below is written out in full parentheses, so the ASCII
// precedence rules never matter.
const CATALOG: &[(&str, &[(&str, &str)])] = &[
    (
        "Q",
        &[
            ("Q1", "x\\(x*y) = y"),
            ("Q2", "x*(x\\y) = y"),
            ("Q3", "(x*y)/y = x"),
            ("Q4", "(x/y)*y = x"),
        ],
    ),
    ("RQ", &[("Q1", "x\\(x*y) = y"), ("Q2", "x*(x\\y) = y")]),
    ("LQ", &[("Q3", "(x*y)/y = x"), ("Q4", "(x/y)*y = x")]),
    (
        "A",
        &[
            ("A1", "x\\(x*y) = y"),
            ("A2", "x*(x\\y) = y"),
            ("A3", "(x/y)*y = (x*y)/y"),
            ("A4", "((x/y)*y)/z = x/z"),
            ("A5", "((x*y)/z)*z = x*((y/z)*z)"),
        ],
    ),
    (
        "B",
        &[
            ("A1", "x\\(x*y) = y"),
            ("A2", "x*(x\\y) = y"),
            ("A3", "(x/y)*y = (x*y)/y"),
            ("B1", "(x*x)/x = x"),
            ("B2", "((x*y)*(z/u))/(z/u) = x*((y*u)/u)"),
        ],
    ),
    (
        "LL",
        &[
            ("LL1", "(x/x)*y = y"),
            ("LL2", "(x/x)*z = (y/y)*z"),
            ("LL3-mul", "(x*y)/(x*y) = y/y"),
            ("LL3-ldiv", "(x\\y)/(x\\y) = y/y"),
            ("LL3-rdiv", "(x/y)/(x/y) = y/y"),
        ],
    ),
    (
        "RL",
        &[
            ("RL1", "(x*(y\\y))*z = x*z"),
            ("RL2", "(x\\x)*z = (y\\y)*z"),
            ("RL3-mul", "(x*y)\\(x*y) = y\\y"),
            ("RL3-ldiv", "(x\\y)\\(x\\y) = y\\y"),
            ("RL3-rdiv", "(x/y)\\(x/y) = y\\y"),
        ],
    ),
    (
        "L",
        &[
            ("L1", "(x\\x)*y = y"),
            ("L2", "x*(y/y) = (x*y)/y"),
            ("L3", "x*(y/y) = (x/y)*y"),
            ("L4", "(x\\x)*z = (y/y)*z"),
            ("L5-mul", "(x*y)\\(x*y) = y/y"),
            ("L5-ldiv", "(x\\y)\\(x\\y) = y/y"),
            ("L5-rdiv", "(x/y)\\(x/y) = y/y"),
            ("L6-mul", "(x*y)/(x*y) = y\\y"),
            ("L6-ldiv", "(x\\y)/(x\\y) = y\\y"),
            ("L6-rdiv", "(x/y)/(x/y) = y\\y"),
        ],
    ),
    ("pLL", &[("eL", "e*x = x")]),
    ("pRL", &[("eR", "(x*e)*y = x*y")]),
    ("pL", &[("eL", "e*x = x"), ("eR", "(x*e)*y = x*y")]),
    ("pQi", &[("Qi", "e*e = e")]),
    ("left-loop", &[("lloop", "x/x = y/y")]),
    ("right-loop", &[("rloop", "x\\x = y\\y")]),
    ("loop", &[("loop", "x\\x = y/y")]),
    ("assoc", &[("assoc", "x*(y*z) = (x*y)*z")]),
    ("comm", &[("comm", "x*y = y*x")]),
    ("rp-comm", &[("rp-comm", "(x*y)*z = (y*x)*z")]),
    (
        "right-zero",
        &[
            ("rz-mul", "x*y = y"),
            ("rz-ldiv", "x\\y = y"),
            ("rz-rdiv", "x/y = y"),
        ],
    ),
];

/// The full catalog, parsed once.
pub fn builtin_systems() -> &'static [AxiomSystem] {
    static SYSTEMS: OnceLock<Vec<AxiomSystem>> = OnceLock::new();
    SYSTEMS.get_or_init(|| {
        CATALOG
            .iter()
            .map(|(name, ids)| {
                let ids = ids
                    .iter()
                    .map(|(label, text)| {
                        let id = Identity::parse(text).expect("catalog identity parses");
                        (label.to_string(), id)
                    })
                    .collect();
                AxiomSystem::new(name, ids).expect("catalog labels are unique")
            })
            .collect()
    })
}

pub fn system(name: &str) -> Result<&'static AxiomSystem> {
    builtin_systems()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Unknown {
            kind: "axiom system",
            name: name.to_string(),
        })
}

/// Looks a label up across all systems (`"A3"`, `"LL1"`, `"assoc"`, ...).
pub fn identity(label: &str) -> Result<&'static Identity> {
    builtin_systems()
        .iter()
        .find_map(|s| s.get(label))
        .ok_or_else(|| Error::Unknown {
            kind: "identity label",
            name: label.to_string(),
        })
}

/// Per-identity results of checking a system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub system: String,
    pub results: Vec<LabelResult>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelResult {
    pub label: String,
    pub identity: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<crate::term::Assignment>,
}

impl SystemReport {
    pub fn all_hold(&self) -> bool {
        self.results.iter().all(|r| r.holds)
    }

    pub fn first_failure(&self) -> Option<&LabelResult> {
        self.results.iter().find(|r| !r.holds)
    }

    pub fn failing_labels(&self) -> Vec<&str> {
        self.results
            .iter()
            .filter(|r| !r.holds)
            .map(|r| r.label.as_str())
            .collect()
    }

    pub fn verdict(&self, label: &str) -> Option<bool> {
        self.results
            .iter()
            .find(|r| r.label == label)
            .map(|r| r.holds)
    }
}

pub fn check_system(alg: &FiniteAlgebra, sys: &AxiomSystem) -> Result<SystemReport> {
    let results = sys
        .identities
        .iter()
        .map(|(label, id)| {
            let verdict = holds(alg, id)?;
            Ok(LabelResult {
                label: label.clone(),
                identity: id.to_string(),
                holds: verdict.holds(),
                counterexample: match verdict {
                    Verdict::Holds => None,
                    Verdict::Fails(a) => Some(a),
                },
            })
        })
        .collect::<Result<_>>()?;
    Ok(SystemReport {
        system: sys.name.clone(),
        results,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum VarietyLabel {
    RightQuasigroup,
    LeftQuasigroup,
    Quasigroup,
    RightZero,
    #[serde(rename = "RPQ")]
    Rpq,
    #[serde(rename = "RPLeftLoop")]
    RpLeftLoop,
    #[serde(rename = "RPRightLoop")]
    RpRightLoop,
    #[serde(rename = "RPLoop")]
    RpLoop,
    #[serde(rename = "RPQi")]
    RpQi,
    LeftLoop,
    RightLoop,
    Loop,
    Group,
    RightGroup,
}

impl VarietyLabel {
    pub const ALL: [VarietyLabel; 14] = [
        VarietyLabel::RightQuasigroup,
        VarietyLabel::LeftQuasigroup,
        VarietyLabel::Quasigroup,
        VarietyLabel::RightZero,
        VarietyLabel::Rpq,
        VarietyLabel::RpLeftLoop,
        VarietyLabel::RpRightLoop,
        VarietyLabel::RpLoop,
        VarietyLabel::RpQi,
        VarietyLabel::LeftLoop,
        VarietyLabel::RightLoop,
        VarietyLabel::Loop,
        VarietyLabel::Group,
        VarietyLabel::RightGroup,
    ];

    /// The identities (by system name and label) whose conjunction defines
    /// the label. Labels are never inferred from one another.
    fn definition(self) -> Vec<(&'static str, Option<&'static str>)> {
        use VarietyLabel::*;
        match self {
            RightQuasigroup => vec![("RQ", None)],
            LeftQuasigroup => vec![("LQ", None)],
            Quasigroup => vec![("Q", None)],
            RightZero => vec![("right-zero", None)],
            Rpq => vec![("A", None)],
            RpLeftLoop => vec![("A", None), ("LL", Some("LL1"))],
            RpRightLoop => vec![("A", None), ("RL", Some("RL1"))],
            RpLoop => vec![("A", None), ("L", Some("L1"))],
            RpQi => vec![("A", None), ("pQi", None)],
            LeftLoop => vec![("Q", None), ("left-loop", None)],
            RightLoop => vec![("Q", None), ("right-loop", None)],
            Loop => vec![("Q", None), ("loop", None)],
            Group => vec![("Q", None), ("assoc", None)],
            RightGroup => vec![("A", None), ("assoc", None)],
        }
    }

    pub fn defining_identities(self) -> Vec<&'static Identity> {
        let mut out = Vec::new();
        for (sys, label) in self.definition() {
            let sys = system(sys).expect("catalog system");
            match label {
                Some(l) => out.push(sys.get(l).expect("catalog label")),
                None => out.extend(sys.identities.iter().map(|(_, id)| id)),
            }
        }
        out
    }
}

impl fmt::Display for VarietyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("label serializes");
        f.write_str(s.as_str().expect("unit variant"))
    }
}

/// Whether every defining identity of `label` holds. Signature problems
/// (missing tables, no point) count as "does not hold".
pub fn has_label(alg: &FiniteAlgebra, label: VarietyLabel) -> bool {
    label
        .defining_identities()
        .into_iter()
        .all(|id| matches!(holds(alg, id), Ok(Verdict::Holds)))
}

pub fn classify(alg: &FiniteAlgebra) -> BTreeSet<VarietyLabel> {
    VarietyLabel::ALL
        .into_iter()
        .filter(|&l| has_label(alg, l))
        .collect()
}

/// The identity families that carry a quasigroup identity `s = t` over to
/// right product quasigroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LiftMode {
    /// `s*z = t*z`
    MulZ,
    /// `s\z = t\z`
    LdivZ,
    /// `s/z = t/z`
    RdivZ,
    /// `z/(s\z) = (z/t)\z`
    Mixed,
    /// `s = (t*tail(s))/tail(s)`
    RdivTail,
    /// `s = (t/tail(s))*tail(s)`
    MulTail,
    /// `s = t`, only when the tails already agree
    Plain,
}

impl LiftMode {
    pub const ALL: [LiftMode; 7] = [
        LiftMode::MulZ,
        LiftMode::LdivZ,
        LiftMode::RdivZ,
        LiftMode::Mixed,
        LiftMode::RdivTail,
        LiftMode::MulTail,
        LiftMode::Plain,
    ];
}

/// A variable name not used by `id`: `z`, then `z1`, `z2`, ...
pub fn fresh_variable(id: &Identity) -> String {
    let used = id.variables();
    std::iter::once("z".to_string())
        .chain((1..).map(|i| format!("z{i}")))
        .find(|c| !used.contains(&c.as_str()))
        .expect("infinitely many candidates")
}

pub fn lift_identity(id: &Identity, mode: LiftMode) -> Result<Identity> {
    let s = id.lhs.clone();
    let t = id.rhs.clone();
    let z = || Term::Var(fresh_variable(id));
    Ok(match mode {
        LiftMode::MulZ => Identity::new(Term::mul(s, z()), Term::mul(t, z())),
        LiftMode::LdivZ => Identity::new(Term::ldiv(s, z()), Term::ldiv(t, z())),
        LiftMode::RdivZ => Identity::new(Term::rdiv(s, z()), Term::rdiv(t, z())),
        LiftMode::Mixed => Identity::new(
            Term::rdiv(z(), Term::ldiv(s, z())),
            Term::ldiv(Term::rdiv(z(), t), z()),
        ),
        LiftMode::RdivTail => {
            let tail = Term::var(id.lhs.tail()?);
            Identity::new(s, Term::rdiv(Term::mul(t, tail.clone()), tail))
        }
        LiftMode::MulTail => {
            let tail = Term::var(id.lhs.tail()?);
            Identity::new(s, Term::mul(Term::rdiv(t, tail.clone()), tail))
        }
        LiftMode::Plain => {
            let (ls, rs) = (id.lhs.tail()?, id.rhs.tail()?);
            if ls != rs {
                return Err(Error::TailMismatch {
                    lhs: ls.to_string(),
                    rhs: rs.to_string(),
                });
            }
            id.clone()
        }
    })
}

/// Whether an identity only mentions operations in `ops`.
pub fn uses_only(id: &Identity, ops: &[OpSymbol]) -> bool {
    OpSymbol::ALL
        .iter()
        .all(|op| ops.contains(op) || !id.mentions_op(*op))
}
