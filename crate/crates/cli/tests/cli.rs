use std::process::{Command, Output};

use serde_json::Value;

fn qshelf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qshelf"))
        .args(args)
        .env_remove("QSHELF_DEFAULT_ORDER")
        .output()
        .expect("qshelf runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_pass_exits_zero() {
    let out = qshelf(&["verify", "jacobi", "--order", "30"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("PASS"));
}

#[test]
fn injected_fault_exits_one_with_certificate() {
    let out = qshelf(&["verify", "edge-match", "--order", "20", "--inject-fault", "7"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8(out.stderr).unwrap();
    let cert: Value = serde_json::from_str(stderr.lines().last().unwrap()).unwrap();
    assert_eq!(cert["exponent"], 7);
    assert_eq!(cert["suite"], "edge-match");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "no-such-suite"][..],
        &["series", "--k", "1", "--i", "1"],
        &["series", "--k", "3", "--i", "9"],
        &["frobnicate"],
        &["count", "--k", "3"],
        &["--format", "yaml", "verify", "eh"],
    ] {
        assert_eq!(qshelf(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn output_is_identical_across_job_counts() {
    let args = [
        "verify", "all", "--order", "24", "--n-max", "12", "--format", "json",
    ];
    let one = qshelf(&[&args[..], &["--jobs", "1"]].concat());
    let four = qshelf(&[&args[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn order_defaults_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_qshelf"))
        .args(["series", "--k", "3", "--i", "1", "--format", "json"])
        .env("QSHELF_DEFAULT_ORDER", "15")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["series"]["order"], 15);
}

#[test]
fn count_csv_matches_product_side() {
    // k = 2, i = 2: the product counts partitions into parts congruent to 2 mod 4.
    let out = qshelf(&[
        "count", "--k", "2", "--r", "2", "--n-max", "10", "--format", "csv",
    ]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k,r,n,kind,count"));
    let counts: Vec<u64> = lines
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(counts, [1, 0, 1, 0, 1, 0, 2, 0, 2, 0, 3]);
}

#[test]
fn witnesses_stream_as_json_arrays() {
    let out = qshelf(&["count", "--k", "2", "--r", "2", "--n", "6", "--witness"]);
    let parts: Vec<Vec<u32>> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(parts, vec![vec![6], vec![4, 2]]);
}

#[test]
fn eh_csv_columns() {
    let out = qshelf(&["verify", "eh", "--k", "3", "--j-max", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().next(), Some("kind,k,j,i,strength,f,pass"));
    assert_eq!(text.lines().count(), 1 + 3 * 5);
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("qshelf-test-{}.json", std::process::id()));
    let out = qshelf(&[
        "hmatrix",
        "--k",
        "3",
        "--j",
        "2",
        "--order",
        "8",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(v["kind"], "h");
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
}
