use std::path::Path;
use std::process::{Command, Output};

fn run(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_overasym"))
        .args(args)
        .env("OVERASYM_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn table_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["table", "--n-max", "10", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 12);
    assert_eq!(lines[0], "n,overpartition");
    assert_eq!(*lines.last().unwrap(), "10,232");
}

#[test]
fn coefficient_printing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["coeff-diff", "--j", "1", "--r", "2", "--t", "2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "1/4 * pi^2");
    let o = run(dir.path(), &["coeff", "--k", "-2", "--t", "1"]);
    assert_eq!(stdout(&o).trim(), "-1 * pi^1 - 1 * pi^-1");
    let o = run(dir.path(), &["coeff", "--k", "1", "--t", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["1"], "1/2");
    assert_eq!(v["-1"], "-1");
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(
        dir.path(),
        &["verify", "--statement", "thm1.1", "--N", "1", "--k", "1", "--span", "500"],
    );
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("verdict: pass"));

    let below = run(
        dir.path(),
        &["verify", "--statement", "thm1.1", "--N", "1", "--k", "1", "--from", "21"],
    );
    assert_eq!(below.status.code(), Some(3));

    let finding = run(dir.path(), &["verify", "--statement", "lemma2.1", "--m", "2"]);
    assert_eq!(finding.status.code(), Some(1));

    let usage = run(dir.path(), &["rigorous", "--n", "10", "--bits", "32"]);
    assert_eq!(usage.status.code(), Some(2));

    let domain = run(
        dir.path(),
        &["verify", "--statement", "thm1.2", "--N", "1", "--r", "2", "--j", "1"],
    );
    assert_eq!(domain.status.code(), Some(3));
}

#[test]
fn text_output_is_annotated() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["expand", "--n", "100", "--k", "1", "--N", "1", "--bits", "256"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("main = ") && l.ends_with("@256b")));
    let o = run(dir.path(), &["rigorous", "--n", "3000"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("@"));
    let o = run(dir.path(), &["rigorous", "--n", "100"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_is_deterministic_and_cache_independent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "verify", "--statement", "thm1.2", "--N", "3", "--r", "2", "--j", "2", "--span", "60",
        "--format", "json",
    ];
    let first = run(a.path(), &args);
    let again = run(a.path(), &args);
    let fresh = run(b.path(), &args);
    assert!(first.status.success());
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, fresh.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["statement"], "thm_1_2");
    assert_eq!(v["verdict"], true);
}

#[test]
fn csv_and_json_reports_agree() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["verify", "--statement", "lemma2.2", "--m", "3", "--k", "-1", "--span", "30"];
    let csv = run(dir.path(), &[&base[..], &["--format", "csv"]].concat());
    let json = run(dir.path(), &[&base[..], &["--format", "json"]].concat());
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let records = v["records"].as_array().unwrap();
    let text = stdout(&csv);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(records) {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], rec["n"].to_string());
        assert_eq!(cols[1], rec["exact"].as_str().unwrap());
        assert_eq!(cols[2], rec["approx"].as_str().unwrap());
        assert_eq!(cols[4], rec["bound"].as_str().unwrap());
        assert_eq!(cols[5], rec["pass"].to_string());
    }
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = run(
        dir.path(),
        &["table", "--n-max", "5", "--format", "csv", "--output", path.to_str().unwrap()],
    );
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(std::fs::read_to_string(&path).unwrap().ends_with("5,24\n"));
}
