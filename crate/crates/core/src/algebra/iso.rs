use super::{Element, FiniteAlgebra, OpSymbol, Table};
use crate::error::{Error, Result};

/// Largest carrier for which [`automorphism_count`] will run.
pub const MAX_AUTOMORPHISM_SIZE: usize = 9;

/// Checks that `map` is a bijection `A -> B` preserving every operation
/// present in both algebras and the point.
pub fn is_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra, map: &[Element]) -> bool {
    if a.size() != b.size() || map.len() != a.size() {
        return false;
    }
    let mut hit = vec![false; b.size()];
    for &m in map {
        if m >= b.size() || std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    if a.point().map(|p| map[p]) != b.point() {
        return false;
    }
    for op in OpSymbol::ALL {
        match (a.table_opt(op), b.table_opt(op)) {
            (Some(ta), Some(tb)) => {
                for x in a.elements() {
                    for y in a.elements() {
                        if map[ta.get(x, y)] != tb.get(map[x], map[y]) {
                            return false;
                        }
                    }
                }
            }
            (None, None) => {}
            _ => return false,
        }
    }
    true
}

/// Finds an isomorphism `A -> B`, if one exists.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Option<Vec<Element>> {
    let mut search = IsoSearch::new(a, b)?;
    let mut found = None;
    search.run(&mut |map| {
        found = Some(map.to_vec());
        false
    });
    found
}

/// Number of automorphisms of `A`. Refuses carriers above
/// [`MAX_AUTOMORPHISM_SIZE`].
pub fn automorphism_count(a: &FiniteAlgebra) -> Result<u64> {
    if a.size() > MAX_AUTOMORPHISM_SIZE {
        return Err(Error::TooLarge {
            what: "automorphism count",
            size: a.size(),
            max: MAX_AUTOMORPHISM_SIZE,
        });
    }
    let mut count = 0u64;
    if let Some(mut search) = IsoSearch::new(a, a) {
        search.run(&mut |_| {
            count += 1;
            true
        });
    }
    Ok(count)
}

const UNSET: Element = usize::MAX;

/// Backtracking over images. After every choice the partial map is closed
/// under the operations: if `h(x)` and `h(y)` are known then `h(x o y)` is
/// forced to `h(x) o h(y)`.
struct IsoSearch<'a> {
    a: &'a FiniteAlgebra,
    ops: Vec<(&'a Table, &'a Table)>,
    forward: Vec<Element>,
    used: Vec<bool>,
    /// Elements of `A` in the order they received images.
    trail: Vec<Element>,
    idem_a: Vec<bool>,
    idem_b: Vec<bool>,
}

impl<'a> IsoSearch<'a> {
    fn new(a: &'a FiniteAlgebra, b: &'a FiniteAlgebra) -> Option<Self> {
        if a.size() != b.size() || a.point().is_some() != b.point().is_some() {
            return None;
        }
        let mut ops = Vec::new();
        for op in OpSymbol::ALL {
            match (a.table_opt(op), b.table_opt(op)) {
                (Some(ta), Some(tb)) => ops.push((ta, tb)),
                (None, None) => {}
                _ => return None,
            }
        }
        let idem = |alg: &FiniteAlgebra| -> Vec<bool> {
            alg.elements().map(|x| alg.mul(x, x) == x).collect()
        };
        let (idem_a, idem_b) = (idem(a), idem(b));
        if idem_a.iter().filter(|&&i| i).count() != idem_b.iter().filter(|&&i| i).count() {
            return None;
        }
        let n = a.size();
        let mut search = IsoSearch {
            a,
            ops,
            forward: vec![UNSET; n],
            used: vec![false; n],
            trail: Vec::with_capacity(n),
            idem_a,
            idem_b,
        };
        if let (Some(p), Some(q)) = (a.point(), b.point()) {
            if !search.assign(p, q) {
                return None;
            }
        }
        Some(search)
    }

    /// Assigns `h(x) = y` and closes the map. Returns false on conflict; the
    /// caller undoes the trail either way.
    fn assign(&mut self, x: Element, y: Element) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            match self.forward[x] {
                UNSET => {}
                existing if existing == y => continue,
                _ => return false,
            }
            if self.used[y] || self.idem_a[x] != self.idem_b[y] {
                return false;
            }
            self.forward[x] = y;
            self.used[y] = true;
            self.trail.push(x);
            for i in 0..self.trail.len() {
                let z = self.trail[i];
                let hz = self.forward[z];
                for &(ta, tb) in &self.ops {
                    queue.push((ta.get(x, z), tb.get(y, hz)));
                    queue.push((ta.get(z, x), tb.get(hz, y)));
                }
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let x = self.trail.pop().expect("nonempty trail");
            self.used[self.forward[x]] = false;
            self.forward[x] = UNSET;
        }
    }

    /// Calls `visit` on every complete isomorphism until it returns false.
    fn run(&mut self, visit: &mut dyn FnMut(&[Element]) -> bool) -> bool {
        let Some(x) = (0..self.a.size()).find(|&x| self.forward[x] == UNSET) else {
            return visit(&self.forward);
        };
        let mark = self.trail.len();
        for y in 0..self.a.size() {
            if self.used[y] {
                continue;
            }
            let ok = self.assign(x, y);
            if ok && !self.run(visit) {
                self.undo_to(mark);
                return false;
            }
            self.undo_to(mark);
        }
        true
    }
}
