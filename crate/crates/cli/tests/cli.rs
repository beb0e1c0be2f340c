use std::process::{Command, Output};

use serde_json::Value;

fn malcheck(args: &[&str]) -> Output {
    malcheck_env(args, None)
}

fn malcheck_env(args: &[&str], budget: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_malcheck"));
    cmd.args(args).env_remove("MALCHECK_BUDGET");
    if let Some(b) = budget {
        cmd.env("MALCHECK_BUDGET", b);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn z2_theorem_agrees() {
    let o = malcheck(&[
        "--format",
        "json",
        "theorem",
        "--generators",
        "z2",
        "--class",
        "all",
        "--depth",
        "2",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json(&o)["agreement"], true);
}

#[test]
fn theorem_text_has_ten_conditions() {
    let o = malcheck(&["theorem", "--generators", "z2", "--class", "relations"]);
    let text = String::from_utf8(o.stdout).unwrap();
    for i in 1..=10 {
        assert!(text.contains(&format!("({i:>2})")), "{text}");
    }
    assert!(text.contains("agreement: true"));
}

#[test]
fn m3_strong_relations_are_refuted() {
    let o = malcheck(&[
        "--format",
        "json",
        "theorem",
        "--generators",
        "m3",
        "--class",
        "strong",
        "--expect",
        "false",
    ]);
    assert_eq!(code(&o), 0);
    let o = malcheck(&[
        "theorem",
        "--generators",
        "m3",
        "--class",
        "strong",
        "--expect",
        "true",
    ]);
    assert_eq!(code(&o), 1);
}

#[test]
fn s3_has_no_maltsev_operation() {
    let o = malcheck(&[
        "--format",
        "json",
        "maltsev-op",
        "--algebra",
        "s3",
        "--expect",
        "nonempty",
    ]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["operations"], Value::Array(vec![]));
    let o = malcheck(&["maltsev-op", "--algebra", "z3", "--expect", "nonempty"]);
    assert_eq!(code(&o), 0);
    let o = malcheck(&["maltsev-op", "--algebra", "s3", "--expect", "empty"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn m3_strong_relation_is_not_difunctional() {
    let o = malcheck(&[
        "--format",
        "json",
        "difunctional",
        "--generators",
        "m3",
        "--class",
        "strong",
    ]);
    assert_eq!(code(&o), 1);
    let q = &json(&o)["witness"]["quadruple"];
    assert_eq!(q.as_array().map(Vec::len), Some(4));
}

#[test]
fn explicit_relations() {
    assert_eq!(
        code(&malcheck(&["difunctional", "--pairs", "0:0,1:0,1:1"])),
        1
    );
    assert_eq!(
        code(&malcheck(&[
            "difunctional",
            "--pairs",
            "0:0,1:0,1:1",
            "--expect",
            "false"
        ])),
        0
    );
    assert_eq!(
        code(&malcheck(&["difunctional", "--pairs", "0:0,1:1,2:1"])),
        0
    );
}

#[test]
fn closure_file_round_trip_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z2.json");
    let p = path.to_str().unwrap();
    let o = malcheck(&["closure", "--generators", "z2", "--depth", "1", "--out", p]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&malcheck(&["verify", "--category", p])), 0);
    let run = || {
        malcheck(&[
            "--format",
            "json",
            "theorem",
            "--category",
            p,
            "--class",
            "relations",
        ])
        .stdout
    };
    let first = run();
    assert!(!first.is_empty());
    assert_eq!(first, run());
    let o = malcheck(&[
        "--format",
        "json",
        "kernel-pair",
        "--category",
        p,
        "--span",
        "0,0,0",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(json(&o)["tables"]["ddc"].is_array());
}

#[test]
fn compat_reproduces_theorem_witness() {
    let o = malcheck(&[
        "--format",
        "json",
        "theorem",
        "--generators",
        "m3",
        "--class",
        "strong",
    ]);
    let w = json(&o)["conditions"]["c10"]["witness"].clone();
    let square = w["square"].to_string();
    let span = format!("{},{},{}", w["span"]["D"], w["span"]["d"], w["span"]["c"]);
    let o = malcheck(&[
        "compat",
        "--generators",
        "m3",
        "--square",
        &square,
        "--span",
        &span,
    ]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8(o.stdout).unwrap().contains("no theta"));
    let o = malcheck(&[
        "compat",
        "--generators",
        "m3",
        "--square",
        &square,
        "--span",
        &span,
        "--expect",
        "false",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_input_exits_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"objects\": [\n  {\"id\": 0,}\n]}").unwrap();
    let o = malcheck(&["verify", "--category", path.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn bad_flags_exit_2() {
    assert_eq!(
        code(&malcheck(&[
            "theorem",
            "--generators",
            "z2",
            "--class",
            "some"
        ])),
        2
    );
    assert_eq!(code(&malcheck(&["theorem", "--generators", "nope"])), 2);
    assert_eq!(
        code(&malcheck(&[
            "kernel-pair",
            "--generators",
            "z2",
            "--span",
            "0,1"
        ])),
        2
    );
    assert_eq!(code(&malcheck(&["examples", "--random-spans", "3"])), 2);
    assert_eq!(
        code(&malcheck_env(
            &["theorem", "--generators", "z2"],
            Some("depth=x")
        )),
        2
    );
}

#[test]
fn budget_variable_limits_closure() {
    let count = |budget| {
        let o = malcheck_env(
            &["--format", "json", "closure", "--generators", "z2"],
            budget,
        );
        json(&o)["objects"].as_array().unwrap().len()
    };
    assert!(count(Some("depth=0")) < count(None));
}

#[test]
fn truncated_closure_fails_expectation() {
    let o = malcheck_env(
        &["closure", "--generators", "m3", "--expect", "closed"],
        Some("carrier=8"),
    );
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("status: truncated"));
}

#[test]
fn seeded_span_corpus_is_reproducible() {
    let a = malcheck(&[
        "--format",
        "json",
        "examples",
        "--random-spans",
        "5",
        "--seed",
        "9",
    ]);
    let b = malcheck(&[
        "--format",
        "json",
        "examples",
        "--random-spans",
        "5",
        "--seed",
        "9",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a).as_array().unwrap().len(), 5);
}

#[test]
fn examples_list_stock_algebras() {
    let o = malcheck(&["examples"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("m3") && text.contains("s3"));
    let o = malcheck(&["--format", "json", "examples", "--name", "z2"]);
    assert_eq!(json(&o)["carrier"], 2);
}

#[test]
fn oversized_generator_is_an_input_error() {
    let o = malcheck_env(&["closure", "--generators", "m3"], Some("carrier=4"));
    assert_eq!(code(&o), 2);
}
