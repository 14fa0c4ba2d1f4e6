use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_powerop");

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A golden file starts with `#! powerop ...` lines; they run in order with
/// `{dir}` replaced by a scratch directory, and the last one's stdout must
/// equal the rest of the file. `UPDATE_GOLDEN=1` rewrites the body instead.
fn check_golden(name: &str) {
    let path = golden_dir().join(name);
    let text = fs::read_to_string(&path).unwrap();
    let header: Vec<&str> = text.lines().take_while(|l| l.starts_with("#! ")).collect();
    assert!(!header.is_empty(), "{name} has no command header");
    let body: String = text.lines().skip(header.len()).map(|l| format!("{l}\n")).collect();
    let dir = tempfile::tempdir().unwrap();
    let mut last = None;
    for line in &header {
        let cmd = line.trim_start_matches("#! ").replace("{dir}", dir.path().to_str().unwrap());
        let args: Vec<&str> = cmd.split_whitespace().skip(1).collect();
        let o = run(&args);
        assert!(o.status.success(), "{cmd} failed: {}", String::from_utf8_lossy(&o.stderr));
        last = Some(o);
    }
    let got = stdout(&last.unwrap());
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        let mut out = header.join("\n");
        out.push('\n');
        out.push_str(&got);
        fs::write(&path, out).unwrap();
        return;
    }
    assert_eq!(got, body, "golden mismatch in {name}");
}

#[test]
fn golden_files() {
    let mut names: Vec<String> = fs::read_dir(golden_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert!(names.len() >= 9);
    for name in names {
        check_golden(&name);
    }
}

#[test]
fn subgroup_tables_have_the_right_sizes() {
    for (p, n, k, level, rows) in [("2", "2", "1", "2", 3), ("3", "1", "2", "2", 1), ("2", "2", "2", "2", 7)] {
        let o = run(&["subgroups", "--p", p, "--n", n, "--k", k, "--level", level, "--format", "csv"]);
        assert!(o.status.success());
        let text = stdout(&o);
        assert!(text.starts_with(&format!("# p={p} n={n} level={level} k={k} count={rows}\n")));
        assert_eq!(text.lines().count(), rows + 2);
    }
    let o = run(&["subgroups", "--p", "2", "--n", "2", "--k", "3", "--level", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn census_reports_both_counts() {
    let o = run(&["census", "--group", "C2", "--p", "2", "--n", "1", "--m", "2", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("C2,2,1,2,5,5,true\n"));
    let o = run(&["census", "--group", "S3", "--p", "2", "--n", "1", "--m", "1", "--format", "csv"]);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("S3,2,1,1,2,2,true\n"));
    let o = run(&["census", "--group", "S4", "--p", "2", "--n", "2", "--m", "4", "--cap", "1000"]);
    assert_eq!(o.status.code(), Some(3));
    let o = run(&["census", "--group", "Bogus7", "--p", "2", "--n", "1", "--m", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn section_build_verify_and_reload() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s.json");
    let o = run(&["section", "--p", "2", "--n", "2", "--level", "3", "--verify", "--out", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("PASS power section"));
    assert!(fs::metadata(&file).unwrap().len() > 0);
    let o = run(&["section", "--p", "3", "--n", "1", "--level", "2", "--verify"]);
    assert!(o.status.success());
    let o = run(&["section", "--p", "2", "--n", "3", "--level", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rank 3"));
}

#[test]
fn power_of_one_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("one.json");
    let fs_ = f.to_str().unwrap();
    assert!(run(&["classfn", "--group", "C2", "--p", "2", "--n", "1", "--level", "2", "--out", fs_]).status.success());
    let o = run(&["power", fs_, "--m", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["group"], "wr(C2,2)");
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 5);
    for e in entries {
        assert_eq!(e["value"], serde_json::json!({"terms": [{"coeff": "1", "monomial": []}]}));
    }
}

#[test]
fn power_accepts_a_section_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let s = dir.path().join("s.json");
    let (f, s) = (f.to_str().unwrap(), s.to_str().unwrap());
    let common = ["--p", "2", "--n", "1", "--level", "1"];
    let mut args = vec!["classfn", "--group", "C2", "--kind", "random", "--seed", "4", "--out", f];
    args.extend(common);
    assert!(run(&args).status.success());
    assert!(run(&["section", "--p", "2", "--n", "1", "--level", "1", "--out", s]).status.success());
    let built = run(&["power", f, "--m", "2"]);
    let loaded = run(&["power", f, "--m", "2", "--section", s]);
    assert!(built.status.success() && loaded.status.success());
    assert_eq!(built.stdout, loaded.stdout);
    let o = run(&["power", f, "--m", "2", "--section", "/nonexistent/section.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn delta_function_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("d.json");
    let f = f.to_str().unwrap();
    let o = run(&["classfn", "--group", "S3", "--p", "2", "--n", "2", "--level", "1", "--kind", "delta", "--class", "2", "--out", f]);
    assert!(o.status.success());
    let text = fs::read_to_string(f).unwrap();
    let g = powerop::classfn::ClassFunction::from_json(&text, 1000).unwrap();
    assert_eq!(g.to_json().unwrap() + "\n", text);
    let o = run(&["classfn", "--group", "S3", "--p", "2", "--n", "2", "--level", "1", "--kind", "delta", "--class", "99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_class_function_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    fs::write(&f, "{\"p\": 2, \"n\": 1, \"level\": 1, \"group\": \"C2\", \"entries\": []}").unwrap();
    let o = run(&["power", f.to_str().unwrap(), "--m", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "relations", "--group", "C2", "--p", "2", "--n", "1", "--m", "1", "--l", "1", "--functions", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("witness.json");
    let o = run(&["verify", "global-power", "--mutated", "--group", "C2", "--out", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let reports: serde_json::Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    let reports = reports.as_array().unwrap();
    assert!(!reports.is_empty());
    assert!(reports.iter().all(|r| r["pass"] == false && r["witness"].is_object()));
    let o = run(&["verify", "subgroups", "--p", "11"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "no-such-suite"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn relations_default_grid_passes() {
    let o = run(&["verify", "relations", "--functions", "2", "--format", "csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().count() > 40);
    assert!(text.lines().skip(1).all(|l| l.split(',').nth(1) == Some("true")));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = |name: &str| -> Vec<String> {
        ["verify", "descent", "--group", "C4", "--n", "1", "--seed", "9", "--jobs", "2", "--out"]
            .iter()
            .map(|s| s.to_string())
            .chain([dir.path().join(name).to_str().unwrap().to_string()])
            .collect()
    };
    for name in ["a.json", "b.json"] {
        let a = args(name);
        let a: Vec<&str> = a.iter().map(String::as_str).collect();
        assert!(run(&a).status.success());
    }
    assert_eq!(fs::read(dir.path().join("a.json")).unwrap(), fs::read(dir.path().join("b.json")).unwrap());
}
