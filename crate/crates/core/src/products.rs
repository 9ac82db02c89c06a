//! Bracketed products of sequences and the elision of idempotent factors.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{Element, FiniteAlgebra, OpSymbol, Table};
use crate::axioms::{check_system, has_label, system, VarietyLabel};
use crate::error::{Error, Result};

fn nonempty(seq: &[Element]) -> Result<()> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    Ok(())
}

fn in_range(alg: &FiniteAlgebra, seq: &[Element]) -> Result<()> {
    match seq.iter().find(|&&x| x >= alg.size()) {
        Some(&x) => Err(Error::OutOfRange {
            what: "sequence entry",
            index: x,
            size: alg.size(),
        }),
        None => Ok(()),
    }
}

/// `a1 * (a2 * (... * an))`.
pub fn rho(alg: &FiniteAlgebra, seq: &[Element]) -> Result<Element> {
    nonempty(seq)?;
    in_range(alg, seq)?;
    let (&last, init) = seq.split_last().unwrap();
    Ok(init.iter().rev().fold(last, |acc, &a| alg.mul(a, acc)))
}

/// `((a1 * a2) * ...) * an`.
pub fn lambda(alg: &FiniteAlgebra, seq: &[Element]) -> Result<Element> {
    nonempty(seq)?;
    in_range(alg, seq)?;
    let (&first, rest) = seq.split_first().unwrap();
    Ok(rest.iter().fold(first, |acc, &a| alg.mul(acc, a)))
}

fn require(alg: &FiniteAlgebra, label: VarietyLabel, what: &str) -> Result<()> {
    if !has_label(&alg.without_point(), label) {
        return Err(Error::Precondition(format!("not a right product {what}")));
    }
    Ok(())
}

/// Drops the idempotents among `a1..a(n-1)`; the right product is unchanged
/// in a right product left loop.
pub fn rho_reduce(alg: &FiniteAlgebra, seq: &[Element]) -> Result<Vec<Element>> {
    nonempty(seq)?;
    in_range(alg, seq)?;
    require(alg, VarietyLabel::RpLeftLoop, "left loop")?;
    let (&last, init) = seq.split_last().unwrap();
    let mut out: Vec<Element> = init
        .iter()
        .copied()
        .filter(|&a| alg.mul(a, a) != a)
        .collect();
    out.push(last);
    Ok(out)
}

/// Keeps `a1`, the nonidempotents strictly inside and `an`; the left
/// product is unchanged in a right product right loop.
pub fn lambda_reduce(alg: &FiniteAlgebra, seq: &[Element]) -> Result<Vec<Element>> {
    nonempty(seq)?;
    in_range(alg, seq)?;
    require(alg, VarietyLabel::RpRightLoop, "right loop")?;
    let n = seq.len();
    let mut out = vec![seq[0]];
    if n > 1 {
        out.extend(
            seq[1..n - 1]
                .iter()
                .copied()
                .filter(|&a| alg.mul(a, a) != a),
        );
        out.push(seq[n - 1]);
    }
    Ok(out)
}

/// An algebra with a fresh element neutral for every operation.
#[derive(Debug, Clone)]
pub struct ExtendedAlgebra {
    pub algebra: FiniteAlgebra,
    pub unit: Element,
}

pub fn adjoin_unit(alg: &FiniteAlgebra) -> ExtendedAlgebra {
    let unit = alg.size();
    let extend = |t: &Table| {
        Table::from_fn(unit + 1, |x, y| {
            if x == unit {
                y
            } else if y == unit {
                x
            } else {
                t.get(x, y)
            }
        })
    };
    let table = |op| alg.table_opt(op).map(extend);
    let algebra = FiniteAlgebra::new(
        extend(alg.mul_table()),
        table(OpSymbol::Ldiv),
        table(OpSymbol::Rdiv),
        alg.point(),
    )
    .expect("extension keeps the point in range");
    ExtendedAlgebra { algebra, unit }
}

/// A binary tree of multiplications; `.` is a leaf and `(s t)` a product.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketShape {
    Leaf,
    Node(Box<BracketShape>, Box<BracketShape>),
}

impl BracketShape {
    pub fn node(l: BracketShape, r: BracketShape) -> Self {
        BracketShape::Node(Box::new(l), Box::new(r))
    }

    pub fn leaves(&self) -> usize {
        match self {
            BracketShape::Leaf => 1,
            BracketShape::Node(l, r) => l.leaves() + r.leaves(),
        }
    }

    /// The shape of `rho`.
    pub fn right_comb(n: usize) -> Self {
        assert!(n > 0, "a shape has at least one leaf");
        (1..n).fold(BracketShape::Leaf, |acc, _| {
            BracketShape::node(BracketShape::Leaf, acc)
        })
    }

    /// The shape of `lambda`.
    pub fn left_comb(n: usize) -> Self {
        assert!(n > 0, "a shape has at least one leaf");
        (1..n).fold(BracketShape::Leaf, |acc, _| {
            BracketShape::node(acc, BracketShape::Leaf)
        })
    }

    /// Every shape with `n` leaves.
    pub fn all(n: usize) -> Vec<Self> {
        if n <= 1 {
            return vec![BracketShape::Leaf];
        }
        let mut out = Vec::new();
        for k in 1..n {
            for l in Self::all(k) {
                for r in Self::all(n - k) {
                    out.push(BracketShape::node(l.clone(), r));
                }
            }
        }
        out
    }

    fn eval(&self, t: &Table, seq: &[Element]) -> Element {
        match self {
            BracketShape::Leaf => seq[0],
            BracketShape::Node(l, r) => {
                let k = l.leaves();
                t.get(l.eval(t, &seq[..k]), r.eval(t, &seq[k..]))
            }
        }
    }
}

impl fmt::Display for BracketShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketShape::Leaf => write!(f, "."),
            BracketShape::Node(l, r) => write!(f, "({l}{r})"),
        }
    }
}

impl FromStr for BracketShape {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut pos = 0;
        let shape = parse_shape(&chars, &mut pos, text.len())?;
        if let Some(&(at, c)) = chars.get(pos) {
            return Err(Error::Parse {
                pos: at,
                message: format!("unexpected trailing {c:?} in shape"),
            });
        }
        Ok(shape)
    }
}

fn parse_shape(chars: &[(usize, char)], pos: &mut usize, end: usize) -> Result<BracketShape> {
    let err = |at: usize, message: &str| Error::Parse {
        pos: at,
        message: message.to_string(),
    };
    match chars.get(*pos) {
        Some(&(_, '.')) => {
            *pos += 1;
            Ok(BracketShape::Leaf)
        }
        Some(&(_, '(')) => {
            *pos += 1;
            let l = parse_shape(chars, pos, end)?;
            let r = parse_shape(chars, pos, end)?;
            match chars.get(*pos) {
                Some(&(_, ')')) => {
                    *pos += 1;
                    Ok(BracketShape::node(l, r))
                }
                Some(&(at, _)) => Err(err(at, "expected `)`; a node has exactly two children")),
                None => Err(err(end, "expected `)`")),
            }
        }
        Some(&(at, _)) => Err(err(at, "expected `.` or `(`")),
        None => Err(err(end, "unexpected end of shape")),
    }
}

pub fn eval_shape(alg: &FiniteAlgebra, shape: &BracketShape, seq: &[Element]) -> Result<Element> {
    nonempty(seq)?;
    in_range(alg, seq)?;
    if shape.leaves() != seq.len() {
        return Err(Error::ShapeMismatch {
            leaves: shape.leaves(),
            len: seq.len(),
        });
    }
    Ok(shape.eval(alg.mul_table(), seq))
}

fn require_loop(alg: &FiniteAlgebra, pointed: bool) -> Result<()> {
    if pointed {
        if alg.point().is_none() {
            return Err(Error::Precondition("no distinguished element".into()));
        }
        require(alg, VarietyLabel::Rpq, "quasigroup")?;
        if !check_system(alg, system("pL")?)?.all_hold() {
            return Err(Error::Precondition(
                "not a right product pointed loop".into(),
            ));
        }
        Ok(())
    } else {
        require(alg, VarietyLabel::RpLoop, "loop")
    }
}

/// Replaces each idempotent `a_k` with `k < n` by the adjoined unit, or by
/// the point when `pointed`. Unpointed results index into
/// [`adjoin_unit`]`(alg)`.
pub fn shape_reduce(
    alg: &FiniteAlgebra,
    shape: &BracketShape,
    seq: &[Element],
    pointed: bool,
) -> Result<Vec<Element>> {
    eval_shape(alg, shape, seq)?;
    require_loop(alg, pointed)?;
    let filler = if pointed {
        alg.point().unwrap()
    } else {
        alg.size()
    };
    let n = seq.len();
    Ok(seq
        .iter()
        .enumerate()
        .map(|(k, &a)| {
            if k + 1 < n && alg.mul(a, a) == a {
                filler
            } else {
                a
            }
        })
        .collect())
}

/// When `a_n` is idempotent: `p(a1..an)` and `p(a1..a(n-1), 1) * a_n`,
/// both evaluated with the adjoined unit.
pub fn last_idempotent_split(
    alg: &FiniteAlgebra,
    shape: &BracketShape,
    seq: &[Element],
) -> Result<Option<(Element, Element)>> {
    let value = eval_shape(alg, shape, seq)?;
    require_loop(alg, false)?;
    let last = *seq.last().unwrap();
    if alg.mul(last, last) != last {
        return Ok(None);
    }
    let ext = adjoin_unit(alg);
    let mut with_unit = seq.to_vec();
    *with_unit.last_mut().unwrap() = ext.unit;
    let split = ext
        .algebra
        .mul(eval_shape(&ext.algebra, shape, &with_unit)?, last);
    Ok(Some((value, split)))
}

/// For at most two nonidempotents: the nonidempotents among `a1..a(n-1)`
/// followed by `an`. Every bracketing of the original sequence equals the
/// right product of this one in a right product loop.
pub fn short_product(alg: &FiniteAlgebra, seq: &[Element]) -> Result<Vec<Element>> {
    nonempty(seq)?;
    in_range(alg, seq)?;
    require(alg, VarietyLabel::RpLoop, "loop")?;
    let nonidempotent = |a: Element| alg.mul(a, a) != a;
    let count = seq.iter().filter(|&&a| nonidempotent(a)).count();
    if count > 2 {
        return Err(Error::Precondition(format!(
            "{count} nonidempotent entries; at most two allowed"
        )));
    }
    let (&last, init) = seq.split_last().unwrap();
    let mut out: Vec<Element> = init.iter().copied().filter(|&a| nonidempotent(a)).collect();
    out.push(last);
    Ok(out)
}
