//! Terms and identities over `{*, \, /}` with the constants `e` (the point)
//! and `1` (the adjoined unit), and exhaustive identity checking on finite
//! algebras.

mod parse;

use std::fmt;

use serde::ser::{Serialize, SerializeMap, Serializer};

use crate::algebra::{Element, FiniteAlgebra, OpSymbol};
use crate::error::{Error, Result};

pub use parse::{parse_identity, parse_identity_file, parse_term};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    /// The distinguished element of a pointed algebra.
    E,
    /// The external neutral element of `S ∪ {1}`.
    Unit,
    Op(OpSymbol, Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    pub fn op(op: OpSymbol, lhs: Term, rhs: Term) -> Term {
        Term::Op(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn mul(lhs: Term, rhs: Term) -> Term {
        Term::op(OpSymbol::Mul, lhs, rhs)
    }

    pub fn ldiv(lhs: Term, rhs: Term) -> Term {
        Term::op(OpSymbol::Ldiv, lhs, rhs)
    }

    pub fn rdiv(lhs: Term, rhs: Term) -> Term {
        Term::op(OpSymbol::Rdiv, lhs, rhs)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Op(_, l, r) => 1 + l.size() + r.size(),
            _ => 1,
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Op(_, l, r) => 1 + l.depth().max(r.depth()),
            _ => 0,
        }
    }

    /// Leftmost variable, skipping constants.
    pub fn head(&self) -> Result<&str> {
        self.leaves()
            .find_map(|t| match t {
                Term::Var(v) => Some(v.as_str()),
                _ => None,
            })
            .ok_or(Error::NoVariable)
    }

    /// Rightmost variable, skipping constants.
    pub fn tail(&self) -> Result<&str> {
        let mut last = None;
        for t in self.leaves() {
            if let Term::Var(v) = t {
                last = Some(v.as_str());
            }
        }
        last.ok_or(Error::NoVariable)
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> impl Iterator<Item = &Term> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            while let Some(t) = stack.pop() {
                match t {
                    Term::Op(_, l, r) => {
                        stack.push(r);
                        stack.push(l);
                    }
                    leaf => return Some(leaf),
                }
            }
            None
        })
    }

    /// Distinct variables in order of first appearance.
    pub fn variables(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for t in self.leaves() {
            if let Term::Var(v) = t {
                if !out.contains(&v.as_str()) {
                    out.push(v);
                }
            }
        }
        out
    }

    pub fn mentions_e(&self) -> bool {
        self.leaves().any(|t| *t == Term::E)
    }

    pub fn mentions_unit(&self) -> bool {
        self.leaves().any(|t| *t == Term::Unit)
    }

    pub fn has_constants(&self) -> bool {
        self.leaves().any(|t| matches!(t, Term::E | Term::Unit))
    }

    pub fn mentions_op(&self, op: OpSymbol) -> bool {
        match self {
            Term::Op(o, l, r) => *o == op || l.mentions_op(op) || r.mentions_op(op),
            _ => false,
        }
    }

    /// Evaluates under `assignment`; every variable must be bound.
    pub fn eval(&self, alg: &FiniteAlgebra, assignment: &Assignment) -> Result<Element> {
        match self {
            Term::Var(v) => assignment.get(v).ok_or_else(|| Error::Unknown {
                kind: "variable",
                name: v.clone(),
            }),
            Term::E => alg.point().ok_or_else(|| {
                Error::Signature("term uses `e` but the algebra has no point".into())
            }),
            Term::Unit => Err(Error::UnitNotAllowed),
            Term::Op(op, l, r) => {
                let a = l.eval(alg, assignment)?;
                let b = r.eval(alg, assignment)?;
                alg.apply(*op, a, b)
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Op(OpSymbol::Mul, ..) => 1,
            Term::Op(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Term {
    /// Prints with the fewest parentheses the parser needs to rebuild the
    /// same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::E => f.write_str("e"),
            Term::Unit => f.write_str("1"),
            Term::Op(op, l, r) => {
                let p = self.precedence();
                if l.precedence() < p {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                match op {
                    OpSymbol::Mul => f.write_str(" * ")?,
                    _ => write!(f, "{}", op.symbol())?,
                }
                if r.precedence() <= p {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_identity(text)
    }

    /// Distinct variables, first appearance in `lhs` then `rhs`.
    pub fn variables(&self) -> Vec<&str> {
        let mut vars = self.lhs.variables();
        for v in self.rhs.variables() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        vars
    }

    pub fn mentions_e(&self) -> bool {
        self.lhs.mentions_e() || self.rhs.mentions_e()
    }

    pub fn mentions_op(&self, op: OpSymbol) -> bool {
        self.lhs.mentions_op(op) || self.rhs.mentions_op(op)
    }

    pub fn has_constants(&self) -> bool {
        self.lhs.has_constants() || self.rhs.has_constants()
    }

    pub fn tails_match(&self) -> Result<bool> {
        Ok(self.lhs.tail()? == self.rhs.tail()?)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// Values for variables, in a fixed variable order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment(pub Vec<(String, Element)>);

impl Assignment {
    pub fn get(&self, name: &str) -> Option<Element> {
        self.0.iter().find(|(v, _)| v == name).map(|&(_, x)| x)
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, Element)>) -> Self {
        Assignment(pairs.into_iter().map(|(v, x)| (v.to_string(), x)).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(v, x)| format!("{v}={x}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, x) in &self.0 {
            map.serialize_entry(v, x)?;
        }
        map.end()
    }
}

/// Outcome of an exhaustive identity check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    /// The lexicographically first failing assignment (variables ordered by
    /// first appearance).
    Fails(Assignment),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn counterexample(&self) -> Option<&Assignment> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(a) => Some(a),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Instr {
    Var(usize),
    Point,
    Op(OpSymbol),
}

/// A term flattened to postfix over variable slots.
#[derive(Debug, Clone)]
pub(crate) struct Program(pub(crate) Vec<Instr>);

impl Program {
    pub(crate) fn compile(t: &Term, vars: &[&str]) -> Result<Program> {
        fn go(t: &Term, vars: &[&str], out: &mut Vec<Instr>) -> Result<()> {
            match t {
                Term::Var(v) => out.push(Instr::Var(
                    vars.iter().position(|w| w == v).expect("variable listed"),
                )),
                Term::E => out.push(Instr::Point),
                Term::Unit => return Err(Error::UnitNotAllowed),
                Term::Op(op, l, r) => {
                    go(l, vars, out)?;
                    go(r, vars, out)?;
                    out.push(Instr::Op(*op));
                }
            }
            Ok(())
        }
        let mut out = Vec::new();
        go(t, vars, &mut out)?;
        Ok(Program(out))
    }

    /// Evaluates on complete tables. `stack` is scratch space.
    #[inline]
    pub(crate) fn run(
        &self,
        tables: &[Option<&crate::algebra::Table>; 3],
        point: Element,
        env: &[Element],
        stack: &mut Vec<Element>,
    ) -> Element {
        stack.clear();
        for ins in &self.0 {
            match *ins {
                Instr::Var(i) => stack.push(env[i]),
                Instr::Point => stack.push(point),
                Instr::Op(op) => {
                    let b = stack.pop().unwrap();
                    let a = stack.pop().unwrap();
                    let t = tables[op as usize].expect("signature checked");
                    stack.push(t.get(a, b));
                }
            }
        }
        stack[0]
    }
}

/// Checks that `alg` provides every table and constant `id` mentions.
pub fn check_signature(alg: &FiniteAlgebra, id: &Identity) -> Result<()> {
    if id.lhs.mentions_unit() || id.rhs.mentions_unit() {
        return Err(Error::UnitNotAllowed);
    }
    if id.mentions_e() && alg.point().is_none() {
        return Err(Error::Signature(format!(
            "`{id}` uses `e` but the algebra has no point"
        )));
    }
    for op in OpSymbol::ALL {
        if id.mentions_op(op) && !alg.has(op) {
            return Err(Error::MissingTable(op));
        }
    }
    Ok(())
}

/// Exhaustively checks `id` over all `n^k` assignments.
pub fn holds(alg: &FiniteAlgebra, id: &Identity) -> Result<Verdict> {
    check_signature(alg, id)?;
    let vars = id.variables();
    let lhs = Program::compile(&id.lhs, &vars)?;
    let rhs = Program::compile(&id.rhs, &vars)?;
    let tables = [
        alg.table_opt(OpSymbol::Mul),
        alg.table_opt(OpSymbol::Ldiv),
        alg.table_opt(OpSymbol::Rdiv),
    ];
    let point = alg.point().unwrap_or(0);
    let n = alg.size();
    let mut env = vec![0; vars.len()];
    let mut stack = Vec::with_capacity(16);
    loop {
        let l = lhs.run(&tables, point, &env, &mut stack);
        let r = rhs.run(&tables, point, &env, &mut stack);
        if l != r {
            return Ok(Verdict::Fails(Assignment(
                vars.iter()
                    .zip(&env)
                    .map(|(v, &x)| (v.to_string(), x))
                    .collect(),
            )));
        }
        // odometer, last variable fastest
        let mut i = env.len();
        loop {
            if i == 0 {
                return Ok(Verdict::Holds);
            }
            i -= 1;
            env[i] += 1;
            if env[i] < n {
                break;
            }
            env[i] = 0;
        }
    }
}
