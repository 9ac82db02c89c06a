//! A small finite model finder for the signature `*, \, /` (and `e`).
//!
//! Cells are filled depth first in a fixed order: the point first when
//! there is one, then table positions row-major, and at each position the
//! `*`, `\` and `/` cells in turn. After every assignment each ground
//! instance of each identity to satisfy is evaluated over the partial
//! tables. A fully known instance must hold; an
//! instance whose only unknown is the outermost cell of one side, with the
//! other side known, forces that cell. A branch dies once some identity to
//! violate has become true on every instance.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::algebra::{find_isomorphism, Element, FiniteAlgebra, OpSymbol, Table};
use crate::axioms::identity;
use crate::error::{Error, Result};
use crate::term::{holds, Identity, Term};

pub const MAX_SEARCH_SIZE: usize = 4;

const UNKNOWN: u8 = u8::MAX;

#[derive(Debug, Clone)]
pub struct SearchProblem {
    pub size: usize,
    pub satisfy: Vec<Identity>,
    pub violate: Vec<Identity>,
    pub with_point: bool,
    /// Stop after this many models; `None` enumerates all.
    pub limit: Option<usize>,
    /// Keep one model per isomorphism class, and restrict `0*0` to `{0, 1}`.
    pub dedupe_iso: bool,
    pub threads: usize,
}

impl SearchProblem {
    pub fn new(size: usize) -> Self {
        SearchProblem {
            size,
            satisfy: Vec::new(),
            violate: Vec::new(),
            with_point: false,
            limit: None,
            dedupe_iso: false,
            threads: 1,
        }
    }

    pub fn satisfy(mut self, ids: impl IntoIterator<Item = Identity>) -> Self {
        self.satisfy.extend(ids);
        self
    }

    pub fn violate(mut self, ids: impl IntoIterator<Item = Identity>) -> Self {
        self.violate.extend(ids);
        self
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = Some(limit);
        self
    }

    pub fn dedupe(mut self, on: bool) -> Self {
        self.dedupe_iso = on;
        self
    }

    pub fn pointed(mut self, on: bool) -> Self {
        self.with_point = on;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// Operations that appear in some identity, always including `*`.
    pub fn operations(&self) -> Vec<OpSymbol> {
        OpSymbol::ALL
            .into_iter()
            .filter(|&op| {
                op == OpSymbol::Mul
                    || self
                        .satisfy
                        .iter()
                        .chain(&self.violate)
                        .any(|id| id.mentions_op(op))
            })
            .collect()
    }
}

/// Looks up catalog labels such as `A1,A2`.
pub fn identities_by_label(labels: &str) -> Result<Vec<Identity>> {
    labels
        .split(',')
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| identity(l).cloned())
        .collect()
}

#[derive(Debug, Clone, Copy)]
enum PNode {
    Var(usize),
    Point,
    Op(usize, usize, usize),
}

#[derive(Debug, Clone)]
struct Compiled {
    lhs: Vec<PNode>,
    rhs: Vec<PNode>,
    nvars: usize,
}

fn compile_term(
    t: &Term,
    vars: &[&str],
    slot: &[Option<usize>; 3],
    out: &mut Vec<PNode>,
) -> Result<usize> {
    let node = match t {
        Term::Var(v) => PNode::Var(
            vars.iter()
                .position(|w| w == v)
                .expect("variable collected"),
        ),
        Term::E => PNode::Point,
        Term::Unit => return Err(Error::UnitNotAllowed),
        Term::Op(op, a, b) => {
            let a = compile_term(a, vars, slot, out)?;
            let b = compile_term(b, vars, slot, out)?;
            PNode::Op(slot[*op as usize].expect("operation is active"), a, b)
        }
    };
    out.push(node);
    Ok(out.len() - 1)
}

fn compile(id: &Identity, slot: &[Option<usize>; 3], with_point: bool) -> Result<Compiled> {
    if id.mentions_e() && !with_point {
        return Err(Error::Signature(format!(
            "`{id}` mentions e but the search is unpointed"
        )));
    }
    let vars = id.variables();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    compile_term(&id.lhs, &vars, slot, &mut lhs)?;
    compile_term(&id.rhs, &vars, slot, &mut rhs)?;
    Ok(Compiled {
        lhs,
        rhs,
        nvars: vars.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Val {
    Known(u8),
    /// Children known, root cell unassigned.
    Pending(usize),
    /// Evaluation stopped at this unassigned inner cell.
    Blocked(usize),
}

/// Every ground instance of a list of identities, grouped by identity.
struct Instances {
    id: Vec<u32>,
    env: Vec<u8>,
    stride: usize,
    ranges: Vec<std::ops::Range<usize>>,
}

impl Instances {
    fn new(ids: &[Compiled], n: usize) -> Self {
        let stride = ids.iter().map(|c| c.nvars).max().unwrap_or(0).max(1);
        let mut out = Instances {
            id: Vec::new(),
            env: Vec::new(),
            stride,
            ranges: Vec::new(),
        };
        for (k, c) in ids.iter().enumerate() {
            let start = out.id.len();
            for mut code in 0..n.pow(c.nvars as u32) {
                let base = out.env.len();
                out.env.resize(base + stride, 0);
                for j in (0..c.nvars).rev() {
                    out.env[base + j] = (code % n) as u8;
                    code /= n;
                }
                out.id.push(k as u32);
            }
            out.ranges.push(start..out.id.len());
        }
        out
    }

    fn len(&self) -> usize {
        self.id.len()
    }

    fn env(&self, k: usize) -> &[u8] {
        &self.env[k * self.stride..(k + 1) * self.stride]
    }
}

fn eval(
    cells: &[u8],
    n: usize,
    point: Option<u8>,
    nodes: &[PNode],
    env: &[u8],
    scratch: &mut [u8],
) -> Val {
    let last = nodes.len() - 1;
    for (i, node) in nodes.iter().enumerate() {
        let v = match *node {
            PNode::Var(k) => env[k],
            PNode::Point => point.expect("point assigned before search"),
            PNode::Op(slot, a, b) => {
                let c = slot * n * n + scratch[a] as usize * n + scratch[b] as usize;
                let v = cells[c];
                if v == UNKNOWN {
                    return if i == last {
                        Val::Pending(c)
                    } else {
                        Val::Blocked(c)
                    };
                }
                v
            }
        };
        scratch[i] = v;
    }
    Val::Known(scratch[last])
}

struct State<'a> {
    n: usize,
    cells: Vec<u8>,
    point: Option<u8>,
    trail: Vec<usize>,
    satisfy: &'a [Compiled],
    violate: &'a [Compiled],
    sat: &'a Instances,
    vio: &'a Instances,
    /// Satisfy-instances to re-examine when a cell gets assigned.
    watch: Vec<Vec<u32>>,
    watched: Vec<Vec<u64>>,
    queue: Vec<usize>,
    scratch: Vec<u8>,
}

impl<'a> State<'a> {
    fn new(
        n: usize,
        ncells: usize,
        point: Option<u8>,
        (satisfy, sat): (&'a [Compiled], &'a Instances),
        (violate, vio): (&'a [Compiled], &'a Instances),
    ) -> Self {
        let longest = satisfy
            .iter()
            .chain(violate)
            .map(|c| c.lhs.len().max(c.rhs.len()))
            .max()
            .unwrap_or(1);
        State {
            n,
            cells: vec![UNKNOWN; ncells],
            point,
            trail: Vec::new(),
            satisfy,
            violate,
            sat,
            vio,
            watch: vec![Vec::new(); ncells],
            watched: vec![vec![0; sat.len().div_ceil(64)]; ncells],
            queue: Vec::new(),
            scratch: vec![0; longest],
        }
    }

    fn sides(&mut self, c: &Compiled, env: &[u8]) -> (Val, Val) {
        let l = eval(
            &self.cells,
            self.n,
            self.point,
            &c.lhs,
            env,
            &mut self.scratch,
        );
        let r = eval(
            &self.cells,
            self.n,
            self.point,
            &c.rhs,
            env,
            &mut self.scratch,
        );
        (l, r)
    }

    fn assign(&mut self, cell: usize, v: u8) {
        self.cells[cell] = v;
        self.trail.push(cell);
        self.queue.push(cell);
    }

    fn undo(&mut self, mark: usize) {
        for c in self.trail.drain(mark..) {
            self.cells[c] = UNKNOWN;
        }
        self.queue.clear();
    }

    fn watch(&mut self, cell: usize, k: usize) {
        let (w, b) = (k / 64, 1u64 << (k % 64));
        if self.watched[cell][w] & b == 0 {
            self.watched[cell][w] |= b;
            self.watch[cell].push(k as u32);
        }
    }

    /// Examines one satisfy-instance; false on conflict.
    fn check(&mut self, k: usize) -> bool {
        let sat = self.sat;
        let c = &self.satisfy[sat.id[k] as usize];
        match self.sides(c, sat.env(k)) {
            (Val::Known(a), Val::Known(b)) => a == b,
            (Val::Pending(cell), Val::Known(v)) | (Val::Known(v), Val::Pending(cell)) => {
                self.assign(cell, v);
                true
            }
            (l, r) => {
                for side in [l, r] {
                    if let Val::Pending(cell) | Val::Blocked(cell) = side {
                        self.watch(cell, k);
                    }
                }
                true
            }
        }
    }

    /// Processes queued assignments to a fixpoint; false on conflict.
    fn propagate(&mut self) -> bool {
        while let Some(cell) = self.queue.pop() {
            for i in 0..self.watch[cell].len() {
                let k = self.watch[cell][i] as usize;
                if !self.check(k) {
                    self.queue.clear();
                    return false;
                }
            }
        }
        true
    }

    fn full_scan(&mut self) -> bool {
        (0..self.sat.len()).all(|k| self.check(k)) && self.propagate()
    }

    /// Some identity to violate already holds on every instance.
    fn violation_impossible(&mut self) -> bool {
        let vio = self.vio;
        for (k, range) in vio.ranges.iter().enumerate() {
            let c = &self.violate[k];
            let alive = range.clone().any(
                |i| !matches!(self.sides(c, vio.env(i)), (Val::Known(a), Val::Known(b)) if a == b),
            );
            if !alive {
                return true;
            }
        }
        false
    }
}

struct Searcher<'a> {
    problem: &'a SearchProblem,
    ops: Vec<OpSymbol>,
    /// Cells by table position, and within a position by operation.
    order: Vec<usize>,
    limit: usize,
    found: Vec<FiniteAlgebra>,
}

impl Searcher<'_> {
    fn build(&self, st: &State) -> FiniteAlgebra {
        let n = st.n;
        let table = |op: OpSymbol| {
            self.ops
                .iter()
                .position(|&o| o == op)
                .map(|slot| Table::from_fn(n, |x, y| st.cells[slot * n * n + x * n + y] as Element))
        };
        FiniteAlgebra::new(
            table(OpSymbol::Mul).unwrap(),
            table(OpSymbol::Ldiv),
            table(OpSymbol::Rdiv),
            st.point.map(|p| p as Element),
        )
        .expect("search builds well-formed algebras")
    }

    fn record(&mut self, alg: FiniteAlgebra) {
        if self.problem.dedupe_iso
            && self
                .found
                .iter()
                .any(|m| find_isomorphism(m, &alg).is_some())
        {
            return;
        }
        self.found.push(alg);
    }

    fn values(&self, st: &State, cell: usize) -> u8 {
        if self.problem.dedupe_iso && cell == 0 {
            st.n.min(2) as u8
        } else {
            st.n as u8
        }
    }

    fn dfs(&mut self, st: &mut State, from: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(at) = (from..self.order.len()).find(|&i| st.cells[self.order[i]] == UNKNOWN)
        else {
            let alg = self.build(st);
            self.record(alg);
            return;
        };
        let cell = self.order[at];
        for v in 0..self.values(st, cell) {
            let mark = st.trail.len();
            st.assign(cell, v);
            if st.propagate() && !st.violation_impossible() {
                self.dfs(st, at + 1);
            }
            st.undo(mark);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Root branches: the point value (if any) and the value of the first cell.
fn root_branches(p: &SearchProblem) -> Vec<(Option<u8>, u8)> {
    let points: Vec<Option<u8>> = if p.with_point {
        (0..p.size as u8).map(Some).collect()
    } else {
        vec![None]
    };
    let first = if p.dedupe_iso { p.size.min(2) } else { p.size } as u8;
    points
        .into_iter()
        .flat_map(|pt| (0..first).map(move |v| (pt, v)))
        .collect()
}

fn run_branch(
    p: &SearchProblem,
    ops: &[OpSymbol],
    satisfy: &[Compiled],
    violate: &[Compiled],
    (point, first): (Option<u8>, u8),
    limit: usize,
) -> Vec<FiniteAlgebra> {
    let n = p.size;
    let (sat, vio) = (Instances::new(satisfy, n), Instances::new(violate, n));
    let mut st = State::new(
        n,
        ops.len() * n * n,
        point,
        (satisfy, &sat),
        (violate, &vio),
    );
    let mut s = Searcher {
        problem: p,
        ops: ops.to_vec(),
        order: (0..n * n)
            .flat_map(|pos| (0..ops.len()).map(move |slot| slot * n * n + pos))
            .collect(),
        limit,
        found: Vec::new(),
    };
    if !st.full_scan() {
        return Vec::new();
    }
    match st.cells[0] {
        UNKNOWN => st.assign(0, first),
        v if v != first => return Vec::new(),
        _ => {}
    }
    if st.propagate() && !st.violation_impossible() {
        s.dfs(&mut st, 1);
    }
    s.found
}

/// Models in lexicographic order of the point followed by the cells in
/// search order.
pub fn find_models(p: &SearchProblem) -> Result<Vec<FiniteAlgebra>> {
    if p.size == 0 {
        return Err(Error::EmptyCarrier);
    }
    if p.size > MAX_SEARCH_SIZE {
        return Err(Error::TooLarge {
            what: "model search",
            size: p.size,
            max: MAX_SEARCH_SIZE,
        });
    }
    if p.limit == Some(0) {
        return Err(Error::Precondition("limit must be at least 1".into()));
    }
    let ops = p.operations();
    let mut slot = [None; 3];
    for (k, &op) in ops.iter().enumerate() {
        slot[op as usize] = Some(k);
    }
    let compile_all = |ids: &[Identity]| -> Result<Vec<Compiled>> {
        ids.iter()
            .map(|id| compile(id, &slot, p.with_point))
            .collect()
    };
    let satisfy = compile_all(&p.satisfy)?;
    let violate = compile_all(&p.violate)?;
    let limit = p.limit.unwrap_or(usize::MAX);
    let branches = root_branches(p);

    let per_branch: Vec<Vec<FiniteAlgebra>> = if p.threads <= 1 {
        let mut out = Vec::new();
        let mut total = 0;
        for &b in &branches {
            if total >= limit {
                break;
            }
            let found = run_branch(p, &ops, &satisfy, &violate, b, limit);
            total += found.len();
            out.push(found);
        }
        out
    } else {
        let chunks: Vec<Vec<(Option<u8>, u8)>> = (0..p.threads)
            .map(|w| {
                branches
                    .iter()
                    .copied()
                    .skip(w)
                    .step_by(p.threads)
                    .collect()
            })
            .collect();
        let mut results: Vec<(usize, Vec<FiniteAlgebra>)> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .iter()
                .enumerate()
                .map(|(w, chunk)| {
                    let (ops, satisfy, violate) = (&ops, &satisfy, &violate);
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .enumerate()
                            .map(|(i, &b)| {
                                (
                                    w + i * p.threads,
                                    run_branch(p, ops, satisfy, violate, b, limit),
                                )
                            })
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("search worker panicked"))
                .collect()
        });
        results.sort_by_key(|(i, _)| *i);
        results.into_iter().map(|(_, v)| v).collect()
    };

    let mut models: Vec<FiniteAlgebra> = Vec::new();
    for alg in per_branch.into_iter().flatten() {
        if models.len() >= limit {
            break;
        }
        if p.dedupe_iso && models.iter().any(|m| find_isomorphism(m, &alg).is_some()) {
            continue;
        }
        models.push(alg);
    }
    for m in &models {
        verify_model(p, m)?;
    }
    Ok(models)
}

/// Independent re-check of a returned model.
fn verify_model(p: &SearchProblem, m: &FiniteAlgebra) -> Result<()> {
    for id in &p.satisfy {
        assert!(
            holds(m, id)?.holds(),
            "search returned a model violating `{id}`"
        );
    }
    for id in &p.violate {
        assert!(
            !holds(m, id)?.holds(),
            "search returned a model satisfying `{id}`"
        );
    }
    Ok(())
}

/// The integers restricted to `[lo, hi]` with `x*y = x+y`, `x/y = x-y` and
/// `x\y = max(y-x, 0)`.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedIntegers {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedCheck {
    pub label: String,
    /// Instances whose every subterm value stays in range.
    pub checked: usize,
    pub failures: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Vec<(String, i64)>>,
}

impl TruncatedIntegers {
    pub fn apply(op: OpSymbol, x: i64, y: i64) -> i64 {
        match op {
            OpSymbol::Mul => x + y,
            OpSymbol::Rdiv => x - y,
            OpSymbol::Ldiv => (y - x).max(0),
        }
    }

    /// `None` when some subterm leaves the range or a variable is unbound.
    pub fn eval(&self, t: &Term, env: &[(&str, i64)]) -> Option<i64> {
        let v = match t {
            Term::Var(name) => env.iter().find(|(n, _)| n == name)?.1,
            Term::Op(op, a, b) => Self::apply(*op, self.eval(a, env)?, self.eval(b, env)?),
            Term::E | Term::Unit => return None,
        };
        (self.lo..=self.hi).contains(&v).then_some(v)
    }

    pub fn check(&self, label: &str, id: &Identity) -> TruncatedCheck {
        let vars = id.variables();
        let width = (self.hi - self.lo + 1) as usize;
        let total = width.pow(vars.len() as u32);
        let mut out = TruncatedCheck {
            label: label.to_string(),
            checked: 0,
            failures: 0,
            first_failure: None,
        };
        for mut code in 0..total {
            let mut env: Vec<(&str, i64)> = vec![("", 0); vars.len()];
            for k in (0..vars.len()).rev() {
                env[k] = (vars[k], self.lo + (code % width) as i64);
                code /= width;
            }
            let (Some(l), Some(r)) = (self.eval(&id.lhs, &env), self.eval(&id.rhs, &env)) else {
                continue;
            };
            out.checked += 1;
            if l != r {
                out.failures += 1;
                if out.first_failure.is_none() {
                    out.first_failure =
                        Some(env.iter().map(|(n, v)| (n.to_string(), *v)).collect());
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceCase {
    pub axiom: String,
    pub satisfy: Vec<String>,
    /// Sizes searched.
    pub sizes: Vec<usize>,
    /// Models found, isomorphic copies included.
    pub models: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub cases: Vec<IndependenceCase>,
    pub truncated: Vec<TruncatedCheck>,
    /// `1*(1\0)` in the truncated integers.
    pub a2_witness_value: Option<i64>,
}

const A_LABELS: [&str; 5] = ["A1", "A2", "A3", "A4", "A5"];

/// Separating models for each axiom of A: exhaustive at size 2 for A3-A5
/// and up to `max_n` for A1 and A2, plus the truncated integer model.
pub fn independence_suite(max_n: usize) -> Result<IndependenceReport> {
    let mut cases = Vec::new();
    for axiom in A_LABELS {
        let others: Vec<String> = A_LABELS
            .iter()
            .filter(|&&l| l != axiom)
            .map(|l| l.to_string())
            .collect();
        let sizes: Vec<usize> = if matches!(axiom, "A1" | "A2") {
            (1..=max_n).collect()
        } else {
            vec![2]
        };
        let mut models = 0;
        for &n in &sizes {
            let p = SearchProblem::new(n)
                .satisfy(identities_by_label(&others.join(","))?)
                .violate(identities_by_label(axiom)?);
            models += find_models(&p)?.len();
        }
        cases.push(IndependenceCase {
            axiom: axiom.to_string(),
            satisfy: others,
            sizes,
            models,
        });
    }
    let z = TruncatedIntegers { lo: -20, hi: 20 };
    let truncated = A_LABELS
        .iter()
        .map(|&l| Ok(z.check(l, identity(l)?)))
        .collect::<Result<Vec<_>>>()?;
    let a2 = identity("A2")?;
    Ok(IndependenceReport {
        cases,
        truncated,
        a2_witness_value: z.eval(&a2.lhs, &[("x", 1), ("y", 0)]),
    })
}

/// The set of all models of size `n`, as canonical JSON strings, for
/// comparing model classes.
pub fn model_set(n: usize, satisfy: &[Identity]) -> Result<BTreeSet<String>> {
    let p = SearchProblem::new(n).satisfy(satisfy.iter().cloned());
    Ok(find_models(&p)?
        .iter()
        .map(FiniteAlgebra::to_json)
        .collect())
}
