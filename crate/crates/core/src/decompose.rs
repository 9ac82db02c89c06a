//! Splitting a model of system A into its quasigroup and right zero factors.
//!
//! On a model of A the derived operation `x ⋆ y = (x*y)/y = (x/y)*y` is a
//! rectangular band. Rows of the ⋆ table (the left translations) identify
//! the quasigroup coordinate of an element and columns (the right
//! translations) identify its right zero coordinate.

use serde::Serialize;

use crate::algebra::{
    direct_product, is_isomorphism, pair_index, right_zero, Element, FiniteAlgebra, OpSymbol, Table,
};
use crate::axioms::{check_system, has_label, system, VarietyLabel};
use crate::error::{Error, Result};

/// The materialized `⋆` table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarTable(Table);

impl StarTable {
    #[inline]
    pub fn get(&self, x: Element, y: Element) -> Element {
        self.0.get(x, y)
    }

    pub fn size(&self) -> usize {
        self.0.size()
    }

    pub fn table(&self) -> &Table {
        &self.0
    }

    pub fn from_table(t: Table) -> Self {
        StarTable(t)
    }

    /// First violation of `x⋆x = x` or of `(x⋆y)⋆z = x⋆z = x⋆(y⋆z)`;
    /// idempotence is checked over all `x` before any triple.
    pub fn band_violation(&self) -> Option<BandViolation> {
        let n = self.size();
        if let Some(x) = (0..n).find(|&x| self.get(x, x) != x) {
            return Some(BandViolation::NotIdempotent(x));
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let xz = self.get(x, z);
                    if self.get(self.get(x, y), z) != xz || self.get(x, self.get(y, z)) != xz {
                        return Some(BandViolation::NotRectangular { x, y, z });
                    }
                }
            }
        }
        None
    }

    pub fn is_rectangular_band(&self) -> bool {
        self.band_violation().is_none()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BandViolation {
    NotIdempotent(Element),
    NotRectangular { x: Element, y: Element, z: Element },
}

/// Builds `x⋆y = (x/y)*y`, checking that it agrees with `(x*y)/y`.
pub fn star(alg: &FiniteAlgebra) -> Result<StarTable> {
    let rdiv = alg.table(OpSymbol::Rdiv)?;
    let n = alg.size();
    let mut cells = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let v = alg.mul(rdiv.get(x, y), y);
            if v != rdiv.get(alg.mul(x, y), y) {
                return Err(Error::NotStarCompatible { x, y });
            }
            cells.push(v);
        }
    }
    Ok(StarTable(Table::from_fn(n, |x, y| cells[x * n + y])))
}

/// Violations of `(x o y)⋆z = x o (y⋆z)` for `o` in `*, \, /`.
pub fn star_transport_violations(
    alg: &FiniteAlgebra,
    s: &StarTable,
) -> Result<Vec<(OpSymbol, Element, Element, Element)>> {
    let mut out = Vec::new();
    for op in OpSymbol::ALL {
        let t = alg.table(op)?;
        for x in alg.elements() {
            for y in alg.elements() {
                for z in alg.elements() {
                    if s.get(t.get(x, y), z) != t.get(x, s.get(y, z)) {
                        out.push((op, x, y, z));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `S ≅ L × R` with its witness.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// The quasigroup factor, one element per class of equal left
    /// translations.
    pub quasigroup: FiniteAlgebra,
    /// The right zero factor, one element per class of equal right
    /// translations.
    pub right_zero: FiniteAlgebra,
    pub l_class: Vec<Element>,
    pub r_class: Vec<Element>,
    /// Smallest member of each class, in class order.
    pub l_representatives: Vec<Element>,
    pub r_representatives: Vec<Element>,
    /// `x ↦ (l_class(x), r_class(x))`, encoded as an element of
    /// `direct_product(quasigroup, right_zero)`.
    pub witness: Vec<Element>,
    pub star: StarTable,
}

impl Decomposition {
    pub fn product(&self) -> FiniteAlgebra {
        direct_product(&self.quasigroup, &self.right_zero).expect("factors share a signature")
    }

    pub fn components(&self, x: Element) -> (Element, Element) {
        (self.l_class[x], self.r_class[x])
    }

    /// The element with the given components.
    pub fn element(&self, l: Element, r: Element) -> Element {
        let target = pair_index(l, r, self.right_zero.size());
        self.witness
            .iter()
            .position(|&w| w == target)
            .expect("witness is a bijection")
    }
}

/// Groups elements by equal keys, numbering classes by first appearance.
fn classes<K: PartialEq>(n: usize, key: impl Fn(Element) -> K) -> (Vec<Element>, Vec<Element>) {
    let mut keys: Vec<K> = Vec::new();
    let mut reps = Vec::new();
    let mut class = Vec::with_capacity(n);
    for x in 0..n {
        let k = key(x);
        match keys.iter().position(|seen| *seen == k) {
            Some(c) => class.push(c),
            None => {
                class.push(keys.len());
                keys.push(k);
                reps.push(x);
            }
        }
    }
    (class, reps)
}

pub fn decompose(alg: &FiniteAlgebra) -> Result<Decomposition> {
    let report = check_system(alg, system("A")?)?;
    if let Some(fail) = report.first_failure() {
        return Err(Error::NotRpq {
            label: fail.label.clone(),
            counterexample: fail.counterexample.clone().unwrap_or_default(),
        });
    }
    let s = star(alg)?;
    let n = alg.size();
    let (l_class, l_reps) = classes(n, |x| (0..n).map(|z| s.get(x, z)).collect::<Vec<_>>());
    let (r_class, r_reps) = classes(n, |x| (0..n).map(|z| s.get(z, x)).collect::<Vec<_>>());

    let k = l_reps.len();
    let quotient = |op: OpSymbol| -> Table {
        let t = alg.table(op).expect("system A checked all tables");
        let q = Table::from_fn(k, |i, j| l_class[t.get(l_reps[i], l_reps[j])]);
        for x in 0..n {
            for y in 0..n {
                assert_eq!(
                    l_class[t.get(x, y)],
                    q.get(l_class[x], l_class[y]),
                    "{op} is not well defined on left translation classes at ({x}, {y})"
                );
            }
        }
        q
    };
    let quasigroup = FiniteAlgebra::new(
        quotient(OpSymbol::Mul),
        Some(quotient(OpSymbol::Ldiv)),
        Some(quotient(OpSymbol::Rdiv)),
        alg.point().map(|p| l_class[p]),
    )?;
    let mut rz = right_zero(r_reps.len())?;
    if let Some(p) = alg.point() {
        rz = rz.with_point(r_class[p])?;
    }
    let witness: Vec<Element> = (0..n)
        .map(|x| pair_index(l_class[x], r_class[x], r_reps.len()))
        .collect();

    let d = Decomposition {
        quasigroup,
        right_zero: rz,
        l_class,
        r_class,
        l_representatives: l_reps,
        r_representatives: r_reps,
        witness,
        star: s,
    };
    assert!(
        is_isomorphism(alg, &d.product(), &d.witness),
        "witness is not an isomorphism onto L x R"
    );
    assert!(
        has_label(&d.quasigroup.without_point(), VarietyLabel::Quasigroup),
        "quasigroup factor fails Q1-Q4"
    );
    Ok(d)
}
