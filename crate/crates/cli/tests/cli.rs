use std::path::Path;
use std::process::{Command, Output};

use genfun_cli::expr::{parse, parse_genexpr, Expr, ExprKind, Span};
use proptest::prelude::*;

fn genfun(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_genfun")).args(args).arg("--out").arg(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn reproduce_writes_both_files_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = genfun(&["reproduce"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("reproduce.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "experiment,mollifier,epsilon,psi_id,value,error_estimate");
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("reproduce_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    assert_eq!(summary["implication3"][0]["implication3_fails"], true);
    assert!(summary["failures"].as_array().unwrap().is_empty());
    assert!(!dir.path().join("failures.json").exists());
}

#[test]
fn every_float_has_seventeen_significant_digits() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(genfun(&["qft"], dir.path()).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("qft.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "problem,epsilon,N,time,probability,unitarity_defect");
    for line in lines {
        for (i, field) in line.split(',').enumerate() {
            if matches!(i, 1 | 3 | 4 | 5) {
                let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
                assert_eq!(mantissa.replace('.', "").len(), 17, "{line}");
            }
        }
    }
}

#[test]
fn eval_prints_table_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let o = genfun(&["eval", "int((H^2 - H) * H')"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("epsilon,value,error_estimate\n"));
    assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 11);
    assert!(out.contains("# finite limit -1.6666666666666"), "{out}");
    assert!(dir.path().join("eval.csv").exists());
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("eval.json")).unwrap()).unwrap();
    assert_eq!(report["kind"], "number");
}

#[test]
fn classify_reports_both_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let o = genfun(&["classify", "int(D*D)"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("infinite of order 1.0000"), "{}", stdout(&o));

    let o = genfun(&["classify", "H^2 - H"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("# not negligible"), "{}", stdout(&o));

    let o = genfun(&["classify", "D'' * 0"], dir.path());
    assert!(stdout(&o).contains("# negligible"), "{}", stdout(&o));
}

#[test]
fn parse_errors_exit_two_with_a_caret() {
    let dir = tempfile::tempdir().unwrap();
    let o = genfun(&["eval", "H + * D"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("byte 4"), "{err}");
    assert!(err.contains("\n      ^\n"), "{err}");

    let o = genfun(&["eval", "int(int(H))"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("type error at bytes 4..10"));
}

#[test]
fn evaluation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = genfun(&["eval", "int(H)"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("0..6"), "{}", stderr(&o));
}

#[test]
fn bad_configuration_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["reproduce", "--grid", "0.125,2,10"],
        vec!["reproduce", "--grid", "0.125,0.5"],
        vec!["reproduce", "--mollifier", "sinc"],
        vec!["qft", "--config", "/nonexistent.toml"],
        vec!["frobnicate"],
    ] {
        let o = genfun(&args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[grid]\neps0 = 0.125\nratoi = 0.5\n").unwrap();
    let o = genfun(&["reproduce", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ratoi"), "{}", stderr(&o));
}

#[test]
fn gate_failure_exits_one_and_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("q.toml");
    std::fs::write(
        &cfg,
        r#"
[[qft]]
name = "not_flat"
dimension = 8
potential = [0.0, 0.0, 0.0, 0.0, 1.0]
coupling = { log_inverse = 0.1 }
times = [1.0]
sweep = true
expect_eps_independent = true
"#,
    )
    .unwrap();
    let o = genfun(&["qft", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("FAIL not_flat: probabilities spread"), "{}", stderr(&o));
    // partial output is still there
    assert!(dir.path().join("qft.csv").exists());
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("failures.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "qft");
    assert_eq!(manifest["failures"].as_array().unwrap().len(), 1);
}

#[test]
fn seed_and_grid_flags_change_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let o = genfun(&["reproduce", "--seed", "7", "--grid", "0.0625,0.5,9", "--mollifier", "bump"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("reproduce_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 7);
    assert_eq!(summary["eq2"].as_array().unwrap().len(), 9);
    assert_eq!(summary["mollifiers"], serde_json::json!(["bump"]));
}

#[test]
fn whitespace_does_not_matter() {
    let a = parse("int((H^2-H)*H')").unwrap();
    let b = parse(" int ( ( H ^ 2 \t- H ) *\n H ' ) ").unwrap();
    assert_eq!(a.tree(), b.tree());
    assert_eq!(a.tree(), "Int(Mul(Sub(Pow(H,2),H),Prime(H)))");
    assert!(parse_genexpr("pair ( H^2 - H , 0 )").is_ok());
}

fn node(kind: ExprKind) -> Expr {
    Expr { kind, span: Span { start: 0, end: 0 } }
}

fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(ExprKind::Heaviside),
        Just(ExprKind::Delta),
        Just(ExprKind::Var),
        (0u32..1000).prop_map(|n| ExprKind::Const(n as f64 / 8.0)),
        (0.0f64..1e6).prop_map(ExprKind::Const),
    ]
    .prop_map(node);
    leaf.prop_recursive(6, 48, 2, |inner| {
        let b = |e: Expr| Box::new(e);
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Add(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Sub(b(x), b(y)))),
            (inner.clone(), inner.clone()).prop_map(move |(x, y)| node(ExprKind::Mul(b(x), b(y)))),
            (inner.clone(), 1u32..7).prop_map(move |(x, n)| node(ExprKind::Pow(b(x), n))),
            inner.clone().prop_map(move |x| node(ExprKind::Prime(b(x)))),
            (inner.clone(), 0usize..6).prop_map(move |(x, k)| node(ExprKind::Pair(b(x), k))),
            inner.prop_map(move |x| node(ExprKind::Int(b(x)))),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printed_ast_reparses_to_the_same_tree(e in arb_expr()) {
        let text = e.to_string();
        let back = parse(&text).map_err(|err| TestCaseError::fail(format!("{text}: {err}")))?;
        prop_assert_eq!(back.tree(), e.tree(), "{}", text);
        // printing is a fixed point
        prop_assert_eq!(back.to_string(), text);
    }
}
