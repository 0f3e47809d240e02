use std::process::{Command, Output};

fn bitruns(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bitruns"))
        .args(args)
        .env_remove("BITRUNS_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(args: &[&str]) -> Vec<Vec<String>> {
    let mut full = args.to_vec();
    full.extend(["--format", "csv"]);
    let out = bitruns(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn counts_multus() {
    let rows = csv_rows(&["counts", "--class", "multus", "--n", "7"]);
    assert_eq!(rows.last().unwrap(), &["7", "37"]);
}

#[test]
fn counts_bimultus() {
    let rows = csv_rows(&["counts", "--class", "bimultus", "--n", "5"]);
    let col: Vec<&str> = rows.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(col, ["0", "0", "2", "2", "4", "6"]);
}

#[test]
fn solus_mean_at_ten() {
    let rows = csv_rows(&["moments", "--class", "solus", "--n", "10"]);
    assert_eq!(rows[0], ["mean", "565/144", "3.923611"]);
}

#[test]
fn unconstrained_mean_at_one() {
    let rows = csv_rows(&["moments", "--class", "unconstrained", "--n", "1"]);
    assert_eq!(rows[0][1], "1/2");
}

#[test]
fn persolus_ones_is_domain_error() {
    let out = bitruns(&["moments", "--class", "persolus", "--bit", "1", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_error_and_help() {
    assert_eq!(bitruns(&["counts"]).status.code(), Some(1));
    assert_eq!(bitruns(&["--help"]).status.code(), Some(0));
}

#[test]
fn table1_rows() {
    let rows = csv_rows(&["table1", "--n", "10,70"]);
    assert_eq!(rows[0], ["10", "-0.383683", "-0.443900"]);
    assert_eq!(rows[1][1], "-0.085616");
}

#[test]
fn table2_small() {
    let rows = csv_rows(&["table2", "--n", "10", "--variant", "unconstrained"]);
    assert_eq!(rows[0], ["10", "-0.752444"]);
}

#[test]
fn table2_resume_reuses_cache() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let args = ["table2", "--n", "50", "--variant", "solus", "--resume", "--cache-dir", d];
    let first = csv_rows(&args);
    assert!(dir.path().join("solus-50.tsv").exists());
    assert_eq!(csv_rows(&args), first);
    assert_eq!(first[0], ["50", "-0.616674"]);
}

#[test]
fn asymptotics_lists_constants() {
    let text = stdout(&bitruns(&["asymptotics"]));
    for c in ["1.7548776662", "1.4655712318", "3.5070480758", "7.1868910445"] {
        assert!(text.contains(c), "missing {c}");
    }
}

#[test]
fn verify_passes() {
    let out = bitruns(&["verify", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn verify_catches_perturbation() {
    let out = bitruns(&["verify", "--scope", "catalog", "--n", "10", "--perturb", "multus:5:1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_bound() {
    assert_eq!(bitruns(&["verify", "--n", "30"]).status.code(), Some(3));
}

#[test]
fn json_carries_meta() {
    let out = bitruns(&["counts", "--class", "solus", "--n", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["meta"]["command"], "counts");
    assert_eq!(v["meta"]["parameters"]["class"], "solus");
    assert_eq!(v["rows"][4]["count"], "8");
}

#[test]
fn fewones_matches_closed_form() {
    for r in csv_rows(&["fewones", "--ell", "4", "--k", "5"]) {
        if !r[2].is_empty() {
            assert_eq!(r[1], r[2], "n = {}", r[0]);
        }
    }
}

#[test]
fn output_is_deterministic() {
    let a = stdout(&bitruns(&["joint", "--n", "12", "--variant", "both", "--threads", "3"]));
    let b = stdout(&bitruns(&["joint", "--n", "12", "--variant", "both"]));
    assert_eq!(a, b);
}
