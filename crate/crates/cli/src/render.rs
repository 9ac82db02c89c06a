//! Plain-text views of reports.

use std::collections::BTreeSet;
use std::fmt::Write;

use rpq_core::algebra::{Element, FiniteAlgebra, OpSymbol};
use rpq_core::axioms::SystemReport;
use rpq_core::structure::{IsoCheck, LoopFacts, LoopStructureReport, PointedStructureReport};

pub fn algebra(alg: &FiniteAlgebra) -> String {
    let n = alg.size();
    let width = (n.max(1) - 1).to_string().len();
    let mut out = String::new();
    if let Some(e) = alg.point() {
        let _ = writeln!(out, "  point e = {e}");
    }
    for op in OpSymbol::ALL {
        let Some(t) = alg.table_opt(op) else { continue };
        let head = width.max(op.name().len());
        let _ = write!(out, "  {:>head$} |", op.name());
        for y in 0..n {
            let _ = write!(out, " {y:>width$}");
        }
        let _ = writeln!(
            out,
            "\n  {}-+{}",
            "-".repeat(head),
            "-".repeat((width + 1) * n)
        );
        for x in 0..n {
            let _ = write!(out, "  {x:>head$} |");
            for y in 0..n {
                let _ = write!(out, " {:>width$}", t.get(x, y));
            }
            out.push('\n');
        }
    }
    out
}

pub fn report(r: &SystemReport) -> String {
    let mut out = format!("system {}\n", r.system);
    for l in &r.results {
        let mark = if l.holds { "holds" } else { "FAILS" };
        let _ = write!(out, "  {:<6} {mark:<5}  {}", l.label, l.identity);
        if let Some(cx) = &l.counterexample {
            let _ = write!(out, "  at {cx}");
        }
        out.push('\n');
    }
    let failing = r.failing_labels();
    if failing.is_empty() {
        out += "all identities hold\n";
    } else {
        let _ = writeln!(out, "failing: {}", failing.join(", "));
    }
    out
}

fn set(s: &BTreeSet<Element>) -> String {
    let items: Vec<String> = s.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "yes",
        Some(false) => "no",
        None => "n/a",
    }
}

fn iso(out: &mut String, i: &IsoCheck) {
    let ok = if i.verified() { "ok" } else { "FAILED" };
    let _ = writeln!(out, "    e={} f(x) = {}: {ok}", i.e, i.formula);
}

fn loops(out: &mut String, facts: &[LoopFacts]) {
    for f in facts {
        let _ = writeln!(out, "  {:?} loop factor", f.kind);
        let _ = writeln!(
            out,
            "    idempotents are squares: {}",
            flag(f.idempotents_are_squares)
        );
        let _ = writeln!(
            out,
            "    left neutrals are idempotents: {}",
            flag(f.left_neutrals_are_idempotents)
        );
        let _ = writeln!(
            out,
            "    right neutral iff |R| = 1: {}",
            flag(f.right_neutral_iff_trivial_r)
        );
        let _ = writeln!(
            out,
            "    slices by squares: {}",
            flag(Some(f.slices_by_squares))
        );
        let _ = writeln!(
            out,
            "    slices are subloops: {}",
            flag(Some(f.slices_are_subloops))
        );
        for i in &f.isomorphisms {
            iso(out, i);
        }
    }
}

pub fn loop_report(r: &LoopStructureReport) -> String {
    let mut out = format!(
        "size {} = |L| {} x |R| {}\n",
        r.size, r.quasigroup_size, r.right_zero_size
    );
    let _ = writeln!(out, "idempotents {}", set(&r.idempotents));
    let _ = writeln!(
        out,
        "idempotents form a subalgebra: {}",
        flag(Some(r.idempotents_form_subalgebra))
    );
    let _ = writeln!(out, "x/x values {}", set(&r.rdiv_squares));
    let _ = writeln!(out, "x\\x values {}", set(&r.ldiv_squares));
    let _ = writeln!(out, "left neutrals {}", set(&r.left_neutrals));
    let _ = writeln!(out, "right neutrals {}", set(&r.right_neutrals));
    let maxq: Vec<String> = r.maximal_subquasigroups.iter().map(set).collect();
    let _ = writeln!(out, "maximal subquasigroups {}", maxq.join(" "));
    for s in &r.slices {
        let _ = writeln!(out, "slice S{} = {}", s.e, set(&s.se));
    }
    loops(&mut out, &r.loops);
    out
}

pub fn pointed_report(r: &PointedStructureReport) -> String {
    let mut out = format!("pointed at e = {}\n", r.point);
    let _ = writeln!(out, "Se = {}", set(&r.se));
    let _ = writeln!(
        out,
        "point is idempotent: {}",
        flag(Some(r.point_is_idempotent))
    );
    let _ = writeln!(
        out,
        "Se meets idempotents in {}",
        set(&r.se_cap_idempotents)
    );
    if let Some(i) = &r.isomorphism {
        iso(&mut out, i);
    }
    loops(&mut out, &r.loops);
    out
}
