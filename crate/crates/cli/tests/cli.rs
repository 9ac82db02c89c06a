use std::process::{Command, Output};

use serde_json::{json, Value};

use rpq_core::algebra::AlgebraFile;
use rpq_core::corpus;

fn rpq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rpq"))
        .args(args)
        .output()
        .unwrap()
}

fn code(args: &[&str]) -> i32 {
    rpq(args).status.code().unwrap()
}

fn stdout(args: &[&str]) -> String {
    String::from_utf8(rpq(args).stdout).unwrap()
}

fn json_out(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    serde_json::from_str(&stdout(&full)).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["check", "z3xR2"]), 0);
    assert_eq!(code(&["check", "notA3"]), 3);
    assert_eq!(code(&["bogus"]), 1);
    assert_eq!(code(&["solve", "z3"]), 1);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["check", "no-such-file"]), 2);
    assert_eq!(code(&["decompose", "notA3"]), 2);
    assert_eq!(code(&["check", "z3", "--system", "nope"]), 2);
    assert_eq!(code(&["wp", "x * = y"]), 2);
    assert_eq!(code(&["search", "-n", "5"]), 2);
    assert_eq!(code(&["solve", "z3xR2", "--right", "2", "1"]), 2);
}

#[test]
fn check_json() {
    let v = json_out(&["check", "notA3"]);
    assert_eq!(v["system"], "A");
    let a3 = &v["results"][2];
    assert_eq!(a3["label"], "A3");
    assert_eq!(a3["holds"], false);
    assert_eq!(a3["counterexample"], json!({"x": 0, "y": 0}));
    let held: Vec<bool> = v["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["holds"].as_bool().unwrap())
        .collect();
    assert_eq!(held, [true, true, false, true, true]);
}

#[test]
fn check_identity_file() {
    let dir = std::env::temp_dir().join(format!("rpq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ids = dir.join("ids.txt");
    std::fs::write(&ids, "comm: x*y = y*x\nidem: x*x = x\n").unwrap();
    let ids = ids.to_str().unwrap();
    assert_eq!(code(&["check", "z3", "--identities", ids]), 3);
    assert_eq!(code(&["check", "right_zero-2", "--identities", ids]), 3);
    let v = json_out(&["check", "z3", "--identities", ids]);
    assert_eq!(v["results"][0]["holds"], true);
    assert_eq!(v["results"][1]["holds"], false);

    let alg = dir.join("custom.json");
    std::fs::write(&alg, r#"{"size": 2, "mul": [[0, 1], [1, 0]]}"#).unwrap();
    let alg = alg.to_str().unwrap();
    assert_eq!(code(&["check", alg, "--system", "Q"]), 0);
    assert_eq!(code(&["--no-derive", "check", alg, "--system", "Q"]), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn classify_output() {
    assert_eq!(
        json_out(&["classify", "z3xR2"]),
        json!([
            "RightQuasigroup",
            "RPQ",
            "RPLeftLoop",
            "RPRightLoop",
            "RPLoop",
            "RightGroup"
        ])
    );
    assert_eq!(stdout(&["classify", "notA3"]), "RightQuasigroup\n");
}

#[test]
fn decompose_json() {
    let v = json_out(&["decompose", "z3xR2"]);
    assert_eq!(v["right_zero"]["mul"], json!([[0, 1], [0, 1]]));
    assert_eq!(
        v["quasigroup"]["mul"],
        json!([[0, 1, 2], [1, 2, 0], [2, 0, 1]])
    );
    assert_eq!(v["l_representatives"], json!([0, 2, 4]));
    assert_eq!(
        v["witness"],
        json!([[0, 0], [0, 1], [1, 0], [1, 1], [2, 0], [2, 1]])
    );
}

#[test]
fn structure_json() {
    let v = json_out(&["structure", "z3xR2"]);
    assert_eq!(v["loop"]["idempotents"], json!([0, 1]));
    assert_eq!(v["pointed"], Value::Null);
    let v = json_out(&["structure", "z3xR2-pointed"]);
    assert_eq!(v["pointed"]["point"], 0);
    assert_eq!(v["pointed"]["se"], json!([0, 2, 4]));
}

#[test]
fn solve_output() {
    assert_eq!(
        stdout(&["solve", "z3", "--left", "1", "0"]),
        "1*x = 0: x = 2\n"
    );
    let v = json_out(&["solve", "z3xR2", "--right", "2", "0"]);
    assert_eq!(v["solutions"], json!([4, 5]));
    assert_eq!(v["side"], "right");
    let v = json_out(&["solve", "z3xR2", "--right", "2", "0", "--idempotent"]);
    assert_eq!(v["solutions"], json!([4, 5]));
    assert_eq!(v["generator_trace"].as_array().unwrap().len(), 2);
}

#[test]
fn word_problem_output() {
    let v = json_out(&["wp", "x*y = y*x"]);
    assert_eq!(v["valid"], false);
    assert_eq!(v["model"]["mul"], json!([[0, 1], [0, 1]]));
    let v = json_out(&["wp", "(x/y)*y = (x*y)/y"]);
    assert_eq!(v["valid"], true);
    let v = json_out(&["wp", "(x*y)/y = x", "--variety", "q"]);
    assert_eq!(v["valid"], true);
    assert_eq!(v["lhs_normal_form"], "x");
    let v = json_out(&["wp", "e*x = x"]);
    assert_eq!(v["mode"], "refutation-only");
    assert_eq!(v["valid"], false);
    assert!(stdout(&["wp", "x\\(x*y) = y"]).starts_with("VALID\n"));
}

#[test]
fn product_output() {
    assert_eq!(
        json_out(&["product", "z3xR2", "--rho", "0,1,0", "--reduce"]),
        json!({"kind": "rho", "value": 0, "reduced": [0], "reduced_value": 0})
    );
    let v = json_out(&["product", "z3xR2", "--lambda", "1,0,0", "--reduce"]);
    assert_eq!(v["reduced"], json!([1, 0]));
    let v = json_out(&[
        "product",
        "z3xR2",
        "--shape",
        "(.(.(..)))",
        "--seq",
        "0,2,1,5",
        "--reduce",
    ]);
    assert_eq!(v["reduced"], json!([6, 2, 6, 5]));
    assert_eq!(v["value"], v["reduced_value"]);
    let v = json_out(&[
        "product",
        "z3xR2-pointed",
        "--shape",
        "((..)(..))",
        "--seq",
        "3,1,2,4",
        "--pointed",
    ]);
    assert_eq!(v["value"], v["reduced_value"]);
    assert_eq!(
        code(&["product", "z3xR2", "--shape", "(..", "--seq", "0,1"]),
        2
    );
    assert_eq!(code(&["product", "z3xR2", "--shape", "(..)"]), 1);
}

#[test]
fn search_output() {
    let v = json_out(&[
        "search",
        "-n",
        "2",
        "--satisfy",
        "A1,A2,A3,A4",
        "--violate",
        "A5",
        "--all",
    ]);
    let models: Vec<AlgebraFile> = serde_json::from_value(v).unwrap();
    assert_eq!(models.len(), 1);
    let v = json_out(&[
        "search",
        "-n",
        "2",
        "--satisfy",
        "A1,A2,A3,A5",
        "--violate",
        "A4",
    ]);
    assert_eq!(v.as_array().unwrap().len(), 1);
    // five quasigroups of order 3 up to isomorphism, plus the right zero semigroup
    let v = json_out(&[
        "search",
        "-n",
        "3",
        "--satisfy",
        "A1,A2,A3,A4,A5",
        "--all",
        "--dedupe",
    ]);
    assert_eq!(v.as_array().unwrap().len(), 6);
    let v = json_out(&[
        "search",
        "-n",
        "2",
        "--satisfy",
        "A1,A2",
        "--pointed",
        "--limit",
        "2",
    ]);
    assert!(v.as_array().unwrap().iter().all(|m| m["point"].is_u64()));
    assert!(stdout(&[
        "search",
        "-n",
        "2",
        "--satisfy",
        "A1,A2,A3,A4",
        "--violate",
        "A5"
    ])
    .starts_with("1 model(s)\n"));
}

#[test]
fn corpus_commands() {
    assert_eq!(code(&["corpus", "verify"]), 0);
    let names: Vec<String> = serde_json::from_value(json_out(&["corpus", "list"])).unwrap();
    assert_eq!(names, corpus::names().collect::<Vec<_>>());
    let shown = json_out(&["corpus", "show", "notA4"]);
    let file: AlgebraFile = serde_json::from_value(shown).unwrap();
    assert_eq!(file.mul, [[0, 1], [1, 0]]);
    assert_eq!(
        stdout(&["corpus", "show", "notA4.json"]),
        corpus::text("notA4").unwrap()
    );
    assert_eq!(code(&["corpus", "show", "nothing"]), 2);
}

#[test]
fn error_json() {
    let out = rpq(&["--json", "decompose", "notA3"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"].as_str().unwrap().contains("A3"));
}
