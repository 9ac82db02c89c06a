//! `rpq`: check, decompose and explore finite right product quasigroups.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 a verification
//! failed (an identity of `check` or a corpus check).

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rpq_core::algebra::{AlgebraFile, Element, FiniteAlgebra};
use rpq_core::axioms::{check_system, classify, system, AxiomSystem, SystemReport};
use rpq_core::corpus;
use rpq_core::decompose::decompose;
use rpq_core::products::{
    adjoin_unit, eval_shape, lambda, lambda_reduce, rho, rho_reduce, shape_reduce, BracketShape,
};
use rpq_core::search::{find_models, identities_by_label, SearchProblem, MAX_SEARCH_SIZE};
use rpq_core::solver::{solve_ax_b, solve_xa_b, solve_xa_b_idempotent};
use rpq_core::structure::{loop_structure_report, pointed_structure_report};
use rpq_core::term::{parse_identity_file, Identity};
use rpq_core::word::{decide, refute_by_model, Variety};
use rpq_core::{Error, Result};

#[derive(Parser)]
#[command(
    name = "rpq",
    version,
    about = "Finite right product quasigroups and loops"
)]
struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    json: bool,
    /// Do not derive missing division tables when loading algebra files.
    #[arg(long, global = true)]
    no_derive: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check an axiom system or identity file against an algebra.
    Check {
        file: PathBuf,
        /// Built-in system name (Q, A, B, LL, RL, L, pLL, pRL, pL, ...).
        #[arg(long, default_value = "A", conflicts_with = "identities")]
        system: String,
        /// File of `label: lhs = rhs` lines to check instead.
        #[arg(long)]
        identities: Option<PathBuf>,
    },
    /// List the variety labels an algebra carries.
    Classify { file: PathBuf },
    /// Split a model of system A into quasigroup and right zero factors.
    Decompose { file: PathBuf },
    /// Idempotents, slices and the splitting isomorphisms.
    Structure { file: PathBuf },
    /// Solve `a*x = b` (--left) or `x*a = b` (--right).
    Solve(SolveArgs),
    /// Decide an identity `LHS = RHS` in right product quasigroups.
    Wp {
        identity: String,
        #[arg(long, value_enum, default_value_t = VarietyArg::Rpq)]
        variety: VarietyArg,
        /// Largest model size tried when refuting.
        #[arg(long, default_value_t = MAX_SEARCH_SIZE)]
        max_n: usize,
    },
    /// Evaluate and reduce bracketed products.
    Product(ProductArgs),
    /// Search for models of one identity set that violate another.
    Search(SearchArgs),
    /// The bundled corpus.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "side")]
struct SolveSide {
    /// Solve `a*x = b`.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    left: Option<Vec<Element>>,
    /// Solve `x*a = b`.
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    right: Option<Vec<Element>>,
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    #[command(flatten)]
    side: SolveSide,
    /// Use only idempotent parameters for `x*a = b`.
    #[arg(long)]
    idempotent: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum VarietyArg {
    Rpq,
    Q,
}

#[derive(Args)]
#[command(
    after_help = "Shapes: `.` is a factor and `(s t)` the product of two shapes, \
so \"((..)(..))\" is (a1 a2)(a3 a4). Whitespace is ignored."
)]
struct ProductArgs {
    file: PathBuf,
    /// Right-bracketed product a1(a2(...an)) of a comma-separated sequence.
    #[arg(long, value_delimiter = ',', group = "form")]
    rho: Option<Vec<Element>>,
    /// Left-bracketed product ((a1 a2)...)an.
    #[arg(long, value_delimiter = ',', group = "form")]
    lambda: Option<Vec<Element>>,
    /// Bracket shape, used with --seq.
    #[arg(long, requires = "seq", group = "form")]
    shape: Option<String>,
    #[arg(long, value_delimiter = ',', requires = "shape")]
    seq: Option<Vec<Element>>,
    /// Also reduce the sequence by dropping idempotent factors.
    #[arg(long)]
    reduce: bool,
    /// With --shape: replace idempotents by the point instead of a unit.
    #[arg(long, requires = "shape")]
    pointed: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Carrier size.
    #[arg(short = 'n', long)]
    size: usize,
    /// Comma-separated catalog labels that must hold.
    #[arg(long, default_value = "")]
    satisfy: String,
    /// Comma-separated catalog labels that must each fail somewhere.
    #[arg(long, default_value = "")]
    violate: String,
    /// Return every model instead of the first.
    #[arg(long, conflicts_with = "limit")]
    all: bool,
    #[arg(long)]
    limit: Option<usize>,
    /// Keep one model per isomorphism class.
    #[arg(long)]
    dedupe: bool,
    /// Search pointed algebras.
    #[arg(long)]
    pointed: bool,
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum CorpusAction {
    /// Re-run every check on the bundled tables.
    Verify,
    /// Names of the bundled algebras.
    List,
    /// Print one bundled algebra file.
    Show { name: String },
}

/// What a command produced: its JSON form, its human form and whether a
/// verification inside it failed.
struct Outcome {
    json: Value,
    text: String,
    verified: bool,
}

impl Outcome {
    fn ok(json: Value, text: String) -> Self {
        Outcome {
            json,
            text,
            verified: true,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.verified { 0 } else { 3 })
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string() }));
            }
            eprintln!("rpq: {e}");
            ExitCode::from(2)
        }
    }
}

/// Reads an algebra file; a missing path falls back to the bundled corpus
/// entry of the same name.
fn load(path: &Path, derive: bool) -> Result<FiniteAlgebra> {
    if path.exists() {
        return FiniteAlgebra::load(path, derive);
    }
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    corpus::load(stem, derive).map_err(|_| {
        Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("{}: no such file or corpus entry", path.display()),
        ))
    })
}

fn run(cli: &Cli) -> Result<Outcome> {
    let derive = !cli.no_derive;
    match &cli.command {
        Command::Check {
            file,
            system: name,
            identities,
        } => {
            let alg = load(file, derive)?;
            let sys = match identities {
                Some(path) => AxiomSystem::new(
                    &path.display().to_string(),
                    parse_identity_file(&std::fs::read_to_string(path)?)?,
                )?,
                None => system(name)?.clone(),
            };
            Ok(check(&alg, &sys)?)
        }
        Command::Classify { file } => {
            let labels: Vec<String> = classify(&load(file, derive)?)
                .iter()
                .map(ToString::to_string)
                .collect();
            let text = labels.iter().map(|l| format!("{l}\n")).collect();
            Ok(Outcome::ok(json!(labels), text))
        }
        Command::Decompose { file } => decompose_cmd(&load(file, derive)?),
        Command::Structure { file } => structure(&load(file, derive)?),
        Command::Solve(args) => solve(&load(&args.file, derive)?, args),
        Command::Wp {
            identity,
            variety,
            max_n,
        } => wp(identity, *variety, *max_n),
        Command::Product(args) => product(&load(&args.file, derive)?, args),
        Command::Search(args) => search(args),
        Command::Corpus { action } => corpus_cmd(action),
    }
}

fn check(alg: &FiniteAlgebra, sys: &AxiomSystem) -> Result<Outcome> {
    let report: SystemReport = check_system(alg, sys)?;
    let text = render::report(&report);
    Ok(Outcome {
        verified: report.all_hold(),
        json: serde_json::to_value(&report)?,
        text,
    })
}

fn decompose_cmd(alg: &FiniteAlgebra) -> Result<Outcome> {
    let d = decompose(alg)?;
    let witness: Vec<(Element, Element)> = alg.elements().map(|x| d.components(x)).collect();
    let json = json!({
        "quasigroup": AlgebraFile::from(&d.quasigroup),
        "right_zero": AlgebraFile::from(&d.right_zero),
        "l_representatives": d.l_representatives,
        "r_representatives": d.r_representatives,
        "witness": witness,
    });
    let mut text = format!(
        "quasigroup factor L ({} elements; representatives {:?})\n",
        d.quasigroup.size(),
        d.l_representatives
    );
    text += &render::algebra(&d.quasigroup);
    text += &format!("right zero factor R ({} elements)\n", d.right_zero.size());
    text += "witness x -> (l, r)\n";
    for (x, (l, r)) in witness.iter().enumerate() {
        text += &format!("  {x} -> ({l}, {r})\n");
    }
    Ok(Outcome::ok(json, text))
}

fn structure(alg: &FiniteAlgebra) -> Result<Outcome> {
    let report = loop_structure_report(alg)?;
    let pointed = match alg.point() {
        Some(_) => Some(pointed_structure_report(alg)?),
        None => None,
    };
    let mut text = render::loop_report(&report);
    if let Some(p) = &pointed {
        text += &render::pointed_report(p);
    }
    let json = json!({ "loop": report, "pointed": pointed });
    Ok(Outcome::ok(json, text))
}

fn solve(alg: &FiniteAlgebra, args: &SolveArgs) -> Result<Outcome> {
    if let Some(ab) = &args.side.left {
        let (a, b) = (ab[0], ab[1]);
        let x = solve_ax_b(alg, a, b)?;
        let json = json!({ "a": a, "b": b, "side": "left", "solutions": [x] });
        return Ok(Outcome::ok(json, format!("{a}*x = {b}: x = {x}\n")));
    }
    let ab = args.side.right.as_ref().expect("clap requires a side");
    let (a, b) = (ab[0], ab[1]);
    let out = if args.idempotent {
        solve_xa_b_idempotent(alg, a, b)?
    } else {
        solve_xa_b(alg, a, b)?
    };
    let mut text = format!("x*{a} = {b}: x in {:?}\n", out.solutions);
    if let Some(n) = &out.notice {
        text += &format!("note: {n}\n");
    }
    if let Some(agrees) = out.simplified_form_agrees {
        text += &format!("(b/a)e agrees with (b/a)e/e: {agrees}\n");
    }
    text += "generator (b/a)p/p:\n";
    for (p, x) in &out.generator_trace {
        text += &format!("  p={p} -> x={x}\n");
    }
    Ok(Outcome::ok(serde_json::to_value(&out)?, text))
}

fn wp(text: &str, variety: VarietyArg, max_n: usize) -> Result<Outcome> {
    let id = Identity::parse(text)?;
    if id.has_constants() {
        let refuted = refute_by_model(&id, max_n)?;
        let mut out = format!("refutation-only mode: `{id}` mentions a constant\n");
        let json = match &refuted {
            Some((m, cx)) => {
                out += &format!("INVALID: fails at {cx} in\n{}", render::algebra(m));
                json!({ "mode": "refutation-only", "valid": false, "model": AlgebraFile::from(m), "counterexample": cx })
            }
            None => {
                out += &format!("no refuting model of size <= {max_n}\n");
                json!({ "mode": "refutation-only", "valid": null })
            }
        };
        return Ok(Outcome::ok(json, out));
    }
    let variety = match variety {
        VarietyArg::Rpq => Variety::Rpq,
        VarietyArg::Q => Variety::Q,
    };
    let d = decide(&id.lhs, &id.rhs, variety)?;
    let mut out = format!("{}\n", if d.valid { "VALID" } else { "INVALID" });
    out += &format!(
        "normal forms: {} | {}\n",
        d.lhs_normal_form, d.rhs_normal_form
    );
    if let (Some(l), Some(r)) = (&d.lhs_tail, &d.rhs_tail) {
        out += &format!("tails: {l} | {r}\n");
    }
    let mut json = serde_json::to_value(&d)?;
    if !d.valid && matches!(variety, Variety::Rpq) {
        if let Some((m, cx)) = refute_by_model(&id, max_n)? {
            out += &format!("refuted at {cx} by\n{}", render::algebra(&m));
            json["model"] = serde_json::to_value(AlgebraFile::from(&m))?;
            json["counterexample"] = serde_json::to_value(&cx)?;
        }
    }
    Ok(Outcome::ok(json, out))
}

fn product(alg: &FiniteAlgebra, args: &ProductArgs) -> Result<Outcome> {
    let (kind, value, reduced, target) = if let Some(seq) = &args.rho {
        let reduced = if args.reduce {
            Some(rho_reduce(alg, seq)?)
        } else {
            None
        };
        let check = reduced.as_ref().map(|r| rho(alg, r)).transpose()?;
        ("rho", rho(alg, seq)?, reduced, check)
    } else if let Some(seq) = &args.lambda {
        let reduced = if args.reduce {
            Some(lambda_reduce(alg, seq)?)
        } else {
            None
        };
        let check = reduced.as_ref().map(|r| lambda(alg, r)).transpose()?;
        ("lambda", lambda(alg, seq)?, reduced, check)
    } else if let (Some(shape), Some(seq)) = (&args.shape, &args.seq) {
        let shape: BracketShape = shape.parse()?;
        let value = eval_shape(alg, &shape, seq)?;
        let (reduced, check) = if args.reduce || args.pointed {
            let r = shape_reduce(alg, &shape, seq, args.pointed)?;
            let v = if args.pointed {
                eval_shape(alg, &shape, &r)?
            } else {
                eval_shape(&adjoin_unit(alg).algebra, &shape, &r)?
            };
            (Some(r), Some(v))
        } else {
            (None, None)
        };
        ("shape", value, reduced, check)
    } else {
        return Err(Error::Precondition(
            "give one of --rho, --lambda or --shape with --seq".into(),
        ));
    };
    let mut text = format!("{kind} = {value}\n");
    if let (Some(r), Some(v)) = (&reduced, target) {
        let unit = (!args.pointed && kind == "shape").then_some(alg.size());
        let shown: Vec<String> = r
            .iter()
            .map(|&x| {
                if Some(x) == unit {
                    "(1)".to_string()
                } else {
                    x.to_string()
                }
            })
            .collect();
        text += &format!("reduced: [{}] = {v}\n", shown.join(","));
    }
    let json = json!({ "kind": kind, "value": value, "reduced": reduced, "reduced_value": target });
    Ok(Outcome::ok(json, text))
}

fn search(args: &SearchArgs) -> Result<Outcome> {
    let labels = |s: &str| -> Result<Vec<Identity>> {
        if s.trim().is_empty() {
            Ok(Vec::new())
        } else {
            identities_by_label(s)
        }
    };
    let mut p = SearchProblem::new(args.size)
        .satisfy(labels(&args.satisfy)?)
        .violate(labels(&args.violate)?)
        .dedupe(args.dedupe)
        .pointed(args.pointed)
        .threads(args.threads);
    if !args.all {
        p = p.limit(args.limit.unwrap_or(1));
    }
    let models = find_models(&p)?;
    let files: Vec<AlgebraFile> = models.iter().map(AlgebraFile::from).collect();
    let mut text = format!("{} model(s)\n", models.len());
    for (i, m) in models.iter().enumerate() {
        text += &format!("model {i}\n{}", render::algebra(m));
    }
    Ok(Outcome::ok(serde_json::to_value(files)?, text))
}

fn corpus_cmd(action: &CorpusAction) -> Result<Outcome> {
    match action {
        CorpusAction::Verify => {
            let checks = corpus::verify();
            let mut text = String::new();
            for c in &checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                text += &format!("{mark}  {}  ({})\n", c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            text += &format!("{} checks, {failed} failed\n", checks.len());
            Ok(Outcome {
                json: serde_json::to_value(&checks)?,
                text,
                verified: failed == 0,
            })
        }
        CorpusAction::List => {
            let names: Vec<&str> = corpus::names().collect();
            let text = names.iter().map(|n| format!("{n}\n")).collect();
            Ok(Outcome::ok(json!(names), text))
        }
        CorpusAction::Show { name } => {
            let text = corpus::text(name)?;
            let json: Value = serde_json::from_str(text)?;
            Ok(Outcome::ok(json, text.to_string()))
        }
    }
}
