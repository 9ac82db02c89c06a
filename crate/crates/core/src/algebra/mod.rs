//! Finite algebras in the signature `{*, \, /}` with an optional constant.
//!
//! The carrier of an algebra of size `n` is always `{0, .., n-1}`. The
//! multiplication table is mandatory; either division may be absent, in
//! which case every operation that needs it fails with
//! [`Error::MissingTable`] instead of reading junk.

mod iso;
mod json;
mod latin;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Line, Result};

pub use iso::{automorphism_count, find_isomorphism, is_isomorphism, MAX_AUTOMORPHISM_SIZE};
pub use json::AlgebraFile;
pub use latin::latin_squares;

/// An element of a finite carrier, identified by its index.
pub type Element = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OpSymbol {
    Mul,
    Ldiv,
    Rdiv,
}

impl OpSymbol {
    pub const ALL: [OpSymbol; 3] = [OpSymbol::Mul, OpSymbol::Ldiv, OpSymbol::Rdiv];

    /// The infix symbol used by the term syntax.
    pub fn symbol(self) -> char {
        match self {
            OpSymbol::Mul => '*',
            OpSymbol::Ldiv => '\\',
            OpSymbol::Rdiv => '/',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OpSymbol::Mul => "mul",
            OpSymbol::Ldiv => "ldiv",
            OpSymbol::Rdiv => "rdiv",
        }
    }
}

impl fmt::Display for OpSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A square operation table stored row-major: `get(x, y)` is `x o y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    n: usize,
    cells: Vec<Element>,
}

impl Table {
    pub fn from_fn(n: usize, mut f: impl FnMut(Element, Element) -> Element) -> Self {
        let mut cells = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                cells.push(f(x, y));
            }
        }
        Table { n, cells }
    }

    /// Builds a table from rows, checking squareness and that every entry is
    /// a valid element.
    pub fn from_rows(what: &'static str, rows: &[Vec<Element>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::BadShape { what, expected: n });
            }
            for &v in row {
                if v >= n {
                    return Err(Error::OutOfRange {
                        what,
                        index: v,
                        size: n,
                    });
                }
                cells.push(v);
            }
        }
        Ok(Table { n, cells })
    }

    pub(crate) fn from_cells(n: usize, cells: Vec<Element>) -> Self {
        debug_assert_eq!(cells.len(), n * n);
        Table { n, cells }
    }

    #[inline]
    pub fn get(&self, x: Element, y: Element) -> Element {
        self.cells[x * self.n + y]
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Element] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<Element>> {
        self.cells
            .chunks(self.n.max(1))
            .map(<[_]>::to_vec)
            .collect()
    }

    fn row_is_permutation(&self, x: Element) -> bool {
        let mut seen = vec![false; self.n];
        (0..self.n).all(|y| !std::mem::replace(&mut seen[self.get(x, y)], true))
    }

    fn column_is_permutation(&self, y: Element) -> bool {
        let mut seen = vec![false; self.n];
        (0..self.n).all(|x| !std::mem::replace(&mut seen[self.get(x, y)], true))
    }
}

/// Computes `x\y` as the unique `z` with `x*z = y`.
pub fn derive_ldiv(mul: &Table) -> Result<Table> {
    let n = mul.size();
    if let Some(x) = (0..n).find(|&x| !mul.row_is_permutation(x)) {
        return Err(Error::NotCancellative {
            op: OpSymbol::Ldiv,
            line: Line::Row(x),
        });
    }
    let mut cells = vec![0; n * n];
    for x in 0..n {
        for z in 0..n {
            cells[x * n + mul.get(x, z)] = z;
        }
    }
    Ok(Table::from_cells(n, cells))
}

/// Computes `x/y` as the unique `z` with `z*y = x`.
pub fn derive_rdiv(mul: &Table) -> Result<Table> {
    let n = mul.size();
    if let Some(y) = (0..n).find(|&y| !mul.column_is_permutation(y)) {
        return Err(Error::NotCancellative {
            op: OpSymbol::Rdiv,
            line: Line::Column(y),
        });
    }
    let mut cells = vec![0; n * n];
    for z in 0..n {
        for y in 0..n {
            cells[mul.get(z, y) * n + y] = z;
        }
    }
    Ok(Table::from_cells(n, cells))
}

/// Builds an algebra from a multiplication table, attaching whichever
/// divisions exist.
pub fn derive_divisions(mul: Table) -> Result<FiniteAlgebra> {
    let ldiv = derive_ldiv(&mul).ok();
    let rdiv = derive_rdiv(&mul).ok();
    FiniteAlgebra::new(mul, ldiv, rdiv, None)
}

/// A quasigroup from a Latin square: both divisions must be derivable.
pub fn quasigroup(mul: Table) -> Result<FiniteAlgebra> {
    let ldiv = derive_ldiv(&mul)?;
    let rdiv = derive_rdiv(&mul)?;
    FiniteAlgebra::new(mul, Some(ldiv), Some(rdiv), None)
}

/// The right zero semigroup of order `n`: `x*y = x\y = x/y = y`.
pub fn right_zero(n: usize) -> Result<FiniteAlgebra> {
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    let t = Table::from_fn(n, |_, y| y);
    FiniteAlgebra::new(t.clone(), Some(t.clone()), Some(t), None)
}

/// The additive group of integers mod `n`, with `x\y = y-x` and `x/y = x-y`.
pub fn cyclic_group(n: usize) -> Result<FiniteAlgebra> {
    if n == 0 {
        return Err(Error::EmptyCarrier);
    }
    FiniteAlgebra::new(
        Table::from_fn(n, |x, y| (x + y) % n),
        Some(Table::from_fn(n, |x, y| (y + n - x) % n)),
        Some(Table::from_fn(n, |x, y| (x + n - y) % n)),
        None,
    )
}

/// The Klein four-group as bitwise xor on `{0,1,2,3}`.
pub fn klein_group() -> FiniteAlgebra {
    let t = Table::from_fn(4, |x, y| x ^ y);
    FiniteAlgebra::new(t.clone(), Some(t.clone()), Some(t), None).expect("xor table is valid")
}

/// Index of the pair `(a, b)` in a product whose second factor has
/// `size_b` elements.
#[inline]
pub fn pair_index(a: Element, b: Element, size_b: usize) -> Element {
    a * size_b + b
}

/// Inverse of [`pair_index`].
#[inline]
pub fn pair_components(x: Element, size_b: usize) -> (Element, Element) {
    (x / size_b, x % size_b)
}

/// Direct product with componentwise operations. The pair `(a, b)` is
/// element `a * |B| + b`.
pub fn direct_product(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let point = match (a.point, b.point) {
        (Some(p), Some(q)) => Some(pair_index(p, q, b.size)),
        (None, None) => None,
        _ => {
            return Err(Error::Signature(
                "direct product of a pointed and an unpointed algebra".into(),
            ))
        }
    };
    let nb = b.size;
    let n = a.size * nb;
    let product = |ta: &Table, tb: &Table| {
        Table::from_fn(n, |x, y| {
            let (xa, xb) = pair_components(x, nb);
            let (ya, yb) = pair_components(y, nb);
            pair_index(ta.get(xa, ya), tb.get(xb, yb), nb)
        })
    };
    let pick = |ta: &Option<Table>, tb: &Option<Table>| match (ta, tb) {
        (Some(ta), Some(tb)) => Some(product(ta, tb)),
        _ => None,
    };
    FiniteAlgebra::new(
        product(&a.mul, &b.mul),
        pick(&a.ldiv, &b.ldiv),
        pick(&a.rdiv, &b.rdiv),
        point,
    )
}

/// A finite algebra `(S; *, \, /, e)` with optional divisions and point.
///
/// Immutable after construction; every table entry is `< size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    size: usize,
    mul: Table,
    ldiv: Option<Table>,
    rdiv: Option<Table>,
    point: Option<Element>,
}

impl FiniteAlgebra {
    pub fn new(
        mul: Table,
        ldiv: Option<Table>,
        rdiv: Option<Table>,
        point: Option<Element>,
    ) -> Result<Self> {
        let size = mul.size();
        if size == 0 {
            return Err(Error::EmptyCarrier);
        }
        for (what, t) in [("ldiv", &ldiv), ("rdiv", &rdiv)] {
            if let Some(t) = t {
                if t.size() != size {
                    return Err(Error::BadShape {
                        what,
                        expected: size,
                    });
                }
            }
        }
        if let Some(p) = point {
            if p >= size {
                return Err(Error::OutOfRange {
                    what: "point",
                    index: p,
                    size,
                });
            }
        }
        Ok(FiniteAlgebra {
            size,
            mul,
            ldiv,
            rdiv,
            point,
        })
    }

    /// Convenience constructor from row vectors.
    pub fn from_rows(
        mul: &[Vec<Element>],
        ldiv: Option<&[Vec<Element>]>,
        rdiv: Option<&[Vec<Element>]>,
        point: Option<Element>,
    ) -> Result<Self> {
        let mul = Table::from_rows("mul", mul)?;
        let ldiv = ldiv.map(|r| Table::from_rows("ldiv", r)).transpose()?;
        let rdiv = rdiv.map(|r| Table::from_rows("rdiv", r)).transpose()?;
        Self::new(mul, ldiv, rdiv, point)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    pub fn point(&self) -> Option<Element> {
        self.point
    }

    pub fn with_point(&self, point: Element) -> Result<Self> {
        Self::new(
            self.mul.clone(),
            self.ldiv.clone(),
            self.rdiv.clone(),
            Some(point),
        )
    }

    pub fn without_point(&self) -> Self {
        FiniteAlgebra {
            point: None,
            ..self.clone()
        }
    }

    pub fn mul_table(&self) -> &Table {
        &self.mul
    }

    pub fn has(&self, op: OpSymbol) -> bool {
        self.table_opt(op).is_some()
    }

    pub fn table_opt(&self, op: OpSymbol) -> Option<&Table> {
        match op {
            OpSymbol::Mul => Some(&self.mul),
            OpSymbol::Ldiv => self.ldiv.as_ref(),
            OpSymbol::Rdiv => self.rdiv.as_ref(),
        }
    }

    pub fn table(&self, op: OpSymbol) -> Result<&Table> {
        self.table_opt(op).ok_or(Error::MissingTable(op))
    }

    /// Checked table lookup.
    pub fn apply(&self, op: OpSymbol, a: Element, b: Element) -> Result<Element> {
        for v in [a, b] {
            if v >= self.size {
                return Err(Error::OutOfRange {
                    what: "operand",
                    index: v,
                    size: self.size,
                });
            }
        }
        Ok(self.table(op)?.get(a, b))
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul.get(a, b)
    }

    /// Operations whose tables are present, in `*, \, /` order.
    pub fn present_ops(&self) -> Vec<OpSymbol> {
        OpSymbol::ALL
            .into_iter()
            .filter(|&op| self.has(op))
            .collect()
    }

    /// `{ x : x*x = x }`.
    pub fn idempotents(&self) -> BTreeSet<Element> {
        self.elements().filter(|&x| self.mul(x, x) == x).collect()
    }

    /// Whether `set` is closed under every present operation (and contains
    /// the point, if any). The empty set is never a subalgebra here.
    pub fn is_subalgebra(&self, set: &BTreeSet<Element>) -> bool {
        if set.is_empty() {
            return false;
        }
        if let Some(p) = self.point {
            if !set.contains(&p) {
                return false;
            }
        }
        let tables: Vec<&Table> = OpSymbol::ALL
            .iter()
            .filter_map(|&op| self.table_opt(op))
            .collect();
        set.iter().all(|&x| {
            set.iter()
                .all(|&y| tables.iter().all(|t| set.contains(&t.get(x, y))))
        })
    }

    /// The least subset containing `seeds` (and the point) closed under all
    /// present operations.
    pub fn generated_subalgebra(&self, seeds: &BTreeSet<Element>) -> Result<BTreeSet<Element>> {
        if seeds.is_empty() && self.point.is_none() {
            return Err(Error::EmptySeeds);
        }
        let mut set = BTreeSet::new();
        for &s in seeds.iter().chain(self.point.iter()) {
            if s >= self.size {
                return Err(Error::OutOfRange {
                    what: "seed",
                    index: s,
                    size: self.size,
                });
            }
            set.insert(s);
        }
        let tables: Vec<&Table> = OpSymbol::ALL
            .iter()
            .filter_map(|&op| self.table_opt(op))
            .collect();
        loop {
            let current: Vec<Element> = set.iter().copied().collect();
            let mut grew = false;
            for &x in &current {
                for &y in &current {
                    for t in &tables {
                        grew |= set.insert(t.get(x, y));
                    }
                }
            }
            if !grew {
                return Ok(set);
            }
        }
    }

    /// The subalgebra on a closed subset, relabelled so that the `i`-th
    /// smallest member of `set` becomes element `i`. Returns the algebra and
    /// the embedding (new index -> old element).
    pub fn restrict(&self, set: &BTreeSet<Element>) -> Result<(FiniteAlgebra, Vec<Element>)> {
        if !self.is_subalgebra(set) {
            return Err(Error::Precondition(format!("{set:?} is not a subalgebra")));
        }
        let members: Vec<Element> = set.iter().copied().collect();
        let mut index = vec![usize::MAX; self.size];
        for (i, &m) in members.iter().enumerate() {
            index[m] = i;
        }
        let k = members.len();
        let sub = |t: &Table| Table::from_fn(k, |i, j| index[t.get(members[i], members[j])]);
        let alg = FiniteAlgebra::new(
            sub(&self.mul),
            self.ldiv.as_ref().map(sub),
            self.rdiv.as_ref().map(sub),
            self.point.map(|p| index[p]),
        )?;
        Ok((alg, members))
    }
}
