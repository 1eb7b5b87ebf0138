use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    report: Value,
    stderr: String,
}

fn matspace(args: &[&str]) -> Run {
    let Output { status, stdout, stderr } =
        Command::new(env!("CARGO_BIN_EXE_matspace")).args(args).output().expect("binary runs");
    let stdout = String::from_utf8(stdout).unwrap();
    Run {
        code: status.code().expect("exit code"),
        report: serde_json::from_str(&stdout).unwrap_or(Value::Null),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, v: &Value) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, serde_json::to_string(v).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn sym(n: usize) -> Vec<Value> {
    let mut basis = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut rows = vec![vec![0; n]; n];
            rows[i][j] = 1;
            rows[j][i] = 1;
            basis.push(json!({ "rows": rows }));
        }
    }
    basis
}

/// Round-trips a report through `verify` and expects every claim to reproduce.
fn verifies(dir: &TempDir, name: &str, report: &Value, extra: &[&str]) {
    let path = write(dir, name, report);
    let mut args = vec!["verify", "--input", s(&path)];
    args.extend_from_slice(extra);
    let v = matspace(&args);
    assert_eq!(v.code, 0, "verify {name}: {} {}", v.report, v.stderr);
    let claims = v.report["claims"].as_u64().unwrap();
    assert!(claims > 0);
    assert_eq!(v.report["reproduced"], json!(claims));
}

#[test]
fn recover_sym3_over_gf7_succeeds() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sym3.json", &json!({"field": "gf7", "n": 3, "basis": sym(3)}));
    let r = matspace(&["recover", "--field", "gf7", "--input", s(&input)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["outcome"], "success");
    assert!(r.report["s"].is_object());
    verifies(&dir, "sym3.report.json", &r.report, &[]);
}

#[test]
fn recover_square_class_failure_emits_witness() {
    let dir = TempDir::new().unwrap();
    // Sym_2 * diag(1,2)^-1 over GF(3); diag(1,2) is its own inverse.
    let basis = json!([{"rows": [[1, 0], [0, 0]]}, {"rows": [[0, 2], [1, 0]]}, {"rows": [[0, 0], [0, 2]]}]);
    let input = write(&dir, "sym2_times_diag12inv.json", &json!({"field": "gf3", "n": 2, "basis": basis}));
    let r = matspace(&["recover", "--field", "gf3", "--input", s(&input)]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert_eq!(r.report["outcome"], "failed");
    assert_eq!(r.report["failed_stage"], "square_class");
    assert_eq!(r.report["witness"]["rows"], json!([[0, 2], [1, 0]]));
    verifies(&dir, "witness.report.json", &r.report, &[]);
}

#[test]
fn recover_rejects_upper_triangular() {
    let dir = TempDir::new().unwrap();
    let basis = json!([{"rows": [[1, 0], [0, 0]]}, {"rows": [[0, 1], [0, 0]]}, {"rows": [[0, 0], [0, 1]]}]);
    let input = write(&dir, "upper.json", &json!({"field": "gf5", "n": 2, "basis": basis}));
    let r = matspace(&["recover", "--input", s(&input)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["failed_stage"], "symmetrizer");
    verifies(&dir, "upper.report.json", &r.report, &[]);
}

#[test]
fn recover_over_rationals_round_trips() {
    let dir = TempDir::new().unwrap();
    // S0 Sym_2 S0^T with S0 = [[1,2],[0,1]] is again Sym_2 shaped; use Sym_2 * diag(5, 1/5).
    let basis = json!([{"rows": [["1/5", 0], [0, 0]]}, {"rows": [[0, 5], ["1/5", 0]]}, {"rows": [[0, 0], [0, 5]]}]);
    let input = write(&dir, "q.json", &json!({"field": "rational", "n": 2, "basis": basis}));
    let r = matspace(&["recover", "--input", s(&input)]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.report["outcome"] == "success" || r.report["outcome"] == "conditional_success");
    assert_eq!(r.report["scales"], json!(["1/1", "5/1"]));
    verifies(&dir, "q.report.json", &r.report, &[]);
}

#[test]
fn uncertified_rational_recovery_exits_3() {
    let dir = TempDir::new().unwrap();
    // Sym_3 * diag(1,2,2)^-1: congruent to the identity over Q, but not by a diagonal rescaling.
    let mut basis = Vec::new();
    for m in sym(3) {
        let rows: Vec<Vec<String>> = m["rows"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                r.as_array()
                    .unwrap()
                    .iter()
                    .enumerate()
                    .map(|(j, x)| {
                        let x = x.as_i64().unwrap();
                        if j == 0 || x == 0 { x.to_string() } else { format!("{x}/2") }
                    })
                    .collect()
            })
            .collect();
        basis.push(json!({ "rows": rows }));
    }
    let input = write(&dir, "uncertified.json", &json!({"field": "rational", "n": 3, "basis": basis}));
    let r = matspace(&["recover", "--input", s(&input)]);
    assert_eq!(r.code, 3, "{} {}", r.report, r.stderr);
    assert_eq!(r.report["outcome"], "not_certified");
    verifies(&dir, "uncertified.report.json", &r.report, &[]);
}

#[test]
fn analyze_reports_complement_and_verdicts() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sym2.json", &json!({"n": 2, "basis": sym(2)}));
    let r = matspace(&["analyze", "--field", "gf3", "--input", s(&input)]);
    assert_eq!(r.report["dim"], 3);
    assert_eq!(r.report["complement_dim"], 1);
    assert_eq!(r.report["complement"]["basis"], json!([{"n": 2, "rows": [[0, 1], [2, 0]]}]));
    assert_eq!(r.report["verdicts"]["all_diagonalizable"]["status"], "fails");
    assert_eq!(r.code, 1);
    verifies(&dir, "analyze.report.json", &r.report, &[]);

    let alt = write(&dir, "alt2.json", &json!({"n": 2, "basis": [{"rows": [[0, 1], [2, 0]]}]}));
    let r = matspace(&["analyze", "--field", "gf3", "--input", s(&alt)]);
    for v in ["irreducible", "trivial_spectrum"] {
        assert_eq!(r.report["verdicts"][v]["status"], "holds", "{v}");
    }
    // t^2 + 1 has no root mod 3.
    assert_eq!(r.report["verdicts"]["all_diagonalizable"]["status"], "fails");
    assert_eq!(r.code, 1);
    verifies(&dir, "alt.report.json", &r.report, &[]);

    let alt5 = write(&dir, "alt2_gf5.json", &json!({"n": 2, "basis": [{"rows": [[0, 1], [4, 0]]}]}));
    let r = matspace(&["analyze", "--field", "gf5", "--input", s(&alt5)]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["verdicts"]["trivial_spectrum"]["status"], "fails");
    let diag = write(&dir, "diag.json", &json!({"n": 2, "basis": [{"rows": [[1, 0], [0, 1]]}, {"rows": [[1, 0], [0, 0]]}]}));
    let r = matspace(&["analyze", "--field", "gf5", "--input", s(&diag)]);
    assert_eq!(r.report["verdicts"]["all_diagonalizable"]["status"], "holds");
    verifies(&dir, "diag.report.json", &r.report, &[]);
}

#[test]
fn analyze_over_budget_exits_4() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "big.json", &json!({"n": 3, "basis": [{"rows": [[0, 1, 0], [100, 0, 0], [0, 0, 0]]}]}));
    let r = matspace(&["analyze", "--field", "gf101", "--budget", "4", "--input", s(&input)]);
    assert_eq!(r.code, 4, "{}", r.stderr);
    let r = matspace(&["analyze", "--field", "gf101", "--input", s(&input)]);
    assert_eq!(r.code, 1);
    verifies(&dir, "big.report.json", &r.report, &[]);
}

#[test]
fn census_counts_and_verify() {
    let dir = TempDir::new().unwrap();
    let r = matspace(&["census", "--n", "2", "--q", "2", "--d", "3", "--pred", "diag"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert_eq!(r.report["summary"], "0 of 15");
    assert_eq!(r.report["total"], 15);
    assert_eq!(r.report["manifest"]["tool"], "matspace");
    verifies(&dir, "census.json", &r.report, &[]);

    let r = matspace(&["census", "--field", "gf3", "--n", "2", "--d", "1"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    assert_eq!(r.report["total"], 40);
    verifies(&dir, "census_lines.json", &r.report, &[]);
}

#[test]
fn census_reports_do_not_depend_on_workers() {
    let base = matspace(&["census", "--n", "2", "--q", "3", "--d", "2", "--workers", "1"]);
    for w in ["2", "4", "8"] {
        let other = matspace(&["census", "--n", "2", "--q", "3", "--d", "2", "--workers", w]);
        assert_eq!(other.report, base.report);
    }
}

#[test]
fn max_diag_and_classify_round_trip() {
    let dir = TempDir::new().unwrap();
    let r = matspace(&["census", "--n", "2", "--q", "2", "--max-diag"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["d_max"], 2);
    verifies(&dir, "max_diag.json", &r.report, &[]);

    let r = matspace(&["census", "--n", "2", "--q", "3", "--classify"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.report["command"], "classify");
    verifies(&dir, "classify.json", &r.report, &[]);
}

#[test]
fn census_gates_exit_4() {
    let r = matspace(&["census", "--n", "3", "--q", "2", "--d", "4"]);
    assert_eq!(r.code, 4);
    let err: Value = serde_json::from_str(r.stderr.trim()).unwrap();
    assert_eq!(err["exit"], 4);
    assert_eq!(matspace(&["census", "--n", "2", "--q", "3", "--d", "2", "--cap", "100"]).code, 4);
}

#[test]
fn tampered_report_fails_verification() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "sym2.json", &json!({"field": "gf5", "n": 2, "basis": sym(2)}));
    let mut r = matspace(&["analyze", "--input", s(&input)]).report;
    r["transcript"][0]["dim"] = json!(2);
    let path = write(&dir, "tampered.json", &r);
    let v = matspace(&["verify", "--input", s(&path)]);
    assert_eq!(v.code, 1);
    assert_eq!(v.report["mismatches"][0]["index"], 0);

    let mut c = matspace(&["census", "--n", "2", "--q", "2", "--d", "2"]).report;
    c["transcript"][0]["value"] = json!(36);
    let path = write(&dir, "tampered_census.json", &c);
    assert_eq!(matspace(&["verify", "--input", s(&path)]).code, 1);
}

#[test]
fn input_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(matspace(&["analyze", "--input", s(&bad)]).code, 2);

    let declared = write(&dir, "gf7.json", &json!({"field": "gf7", "n": 2, "basis": sym(2)}));
    assert_eq!(matspace(&["analyze", "--field", "gf3", "--input", s(&declared)]).code, 2);

    let missing = dir.path().join("missing.json");
    assert_eq!(matspace(&["recover", "--input", s(&missing)]).code, 2);
    assert_eq!(matspace(&["analyze", "--field", "gf4", "--input", s(&declared)]).code, 2);
    assert_eq!(matspace(&["analyze", "--input", s(&declared), "--no-such-flag"]).code, 2);
    assert_eq!(matspace(&["census", "--n", "2", "--q", "7", "--d", "1"]).code, 2);
    assert_eq!(matspace(&["census", "--n", "2", "--q", "2", "--d", "1", "--pred", "bogus"]).code, 2);

    let ragged = write(&dir, "ragged.json", &json!({"field": "gf3", "n": 2, "basis": [{"rows": [[1, 0], [0]]}]}));
    let r = matspace(&["analyze", "--input", s(&ragged)]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("\"exit\":2"));
}

#[test]
fn output_flag_writes_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("out.json");
    let r = matspace(&["census", "--n", "2", "--q", "2", "--d", "1", "--output", s(&out)]);
    assert_eq!(r.code, 1);
    assert!(r.report.is_null());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["total"], 15);
}
