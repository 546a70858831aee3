//! End-to-end checks of the symspec binary: output shapes, exit codes,
//! determinism, and the documented environment override.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_symspec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn analyze_majority_json_row() {
    let out = run(&["analyze", "maj:3", "--no-timestamp"]);
    assert!(out.status.success());
    let row = stdout_json(&out);
    assert_eq!(row["schema_version"], 1);
    assert_eq!(row["function_id"], "maj:3");
    assert_eq!(row["n"], 3);
    assert_eq!(row["r0"], 1);
    assert_eq!(row["r1"], 1);
    assert_eq!(row["r"], 1);
    assert_eq!(row["clamped"], false);
    assert_eq!(row["t0"], 2);
    assert_eq!(row["t1"], 0);
    assert_eq!(row["l1_norm"]["exact"], "2");
    assert_eq!(row["log_l1"]["float"], 1.0);
    assert_eq!(row["r_functional"]["exact"], "3/2");
    assert_eq!(row["pdt_leaves"]["exact"], "8");
    assert!(row.get("generated_at").is_none());
    assert!(row.get("epsilon").is_none());
    assert!(row.get("approx_norm").is_none());
}

#[test]
fn analyze_emits_timestamp_by_default() {
    let out = run(&["analyze", "maj:3"]);
    assert!(out.status.success());
    let row = stdout_json(&out);
    let stamp = row["generated_at"].as_str().unwrap();
    assert!(stamp.contains('T'), "not a timestamp: {stamp}");
}

#[test]
fn analyze_parity_and_g1_examples() {
    let row = stdout_json(&run(&["analyze", "parity:8", "--no-timestamp"]));
    assert_eq!(row["r"], 0);
    assert_eq!(row["l1_norm"]["exact"], "1");
    assert!(row.get("envelope_ratio").is_none());

    let row = stdout_json(&run(&["analyze", "g:1:4", "--no-timestamp"]));
    assert_eq!(row["l1_norm"]["exact"], "3");
}

#[test]
fn analyze_with_accuracy_reports_the_approximate_norm() {
    let out = run(&["analyze", "maj:3", "--eps", "1/3", "--no-timestamp"]);
    assert!(out.status.success());
    let row = stdout_json(&out);
    assert_eq!(row["epsilon"], "1/3");
    assert_eq!(row["approx_norm"]["exact"], "4/3");
}

#[test]
fn analyze_csv_shape() {
    let out = run(&["analyze", "maj:3", "--csv", "--no-timestamp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("schema_version,function_id,n,r0,r1,r,clamped"));
    assert!(lines[1].starts_with("1,maj:3,3,1,1,1,false,2,0,2,1.0,3/2,"));
}

#[test]
fn analyze_literal_spec() {
    let row = stdout_json(&run(&["analyze", "++--+", "--no-timestamp"]));
    assert_eq!(row["function_id"], "++--+");
    assert_eq!(row["n"], 4);
}

#[test]
fn pdt_export_writes_golden_tree() {
    let path = std::env::temp_dir().join(format!("symspec-pdt-{}.txt", std::process::id()));
    let out = run(&[
        "analyze",
        "maj:3",
        "--no-timestamp",
        "--pdt-export",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let tree = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(
        tree,
        "PARITY\nQ 1\nQ 2\nQ 3\nLEAF -1\nLEAF +1\nLEAF +1\nQ 2\nLEAF +1\nQ 3\nLEAF +1\nLEAF -1\n"
    );
}

#[test]
fn usage_errors_exit_2_with_positions() {
    let out = run(&["analyze", "maj:x"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error:"), "stderr: {err}");
    assert!(err.contains("position 4"), "stderr: {err}");

    let out = run(&["analyze", "+-x+"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("position 2"), "stderr: {err}");

    let out = run(&["analyze", "maj:3", "--eps", "-1/3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_reports() {
    let out = run(&["verify", "--n-max", "3"]);
    assert!(out.status.success());
    let report = stdout_json(&out);
    assert_eq!(report["pass"], true);
    assert_eq!(report["n_max"], 3);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"window_r_lower_equality_maj3"));
    assert!(names.contains(&"pdt_leaf_bound"));
}

#[test]
fn verify_fault_injection_exits_1() {
    let out = run(&["verify", "--n-max", "2", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], false);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("FAIL injected_fault"), "stderr: {err}");
}

#[test]
fn verify_rejects_out_of_range_depth() {
    assert_eq!(run(&["verify", "--n-max", "0"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--n-max", "13"]).status.code(), Some(2));
}

#[test]
fn sweep_exhaustive_shape_and_footer() {
    let out = run(&["sweep", "--n", "3", "--mode", "exhaustive", "--no-timestamp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    // Header, sixteen rows, three footer comments.
    assert_eq!(lines.len(), 20);
    assert!(lines[0].starts_with("schema_version,"));
    assert_eq!(lines[17], "# functions: 16");
    // No function with r > 1 exists at n = 3.
    assert_eq!(lines[18], "# min_envelope_ratio: none");
    assert_eq!(lines[19], "# max_envelope_ratio: none");
}

#[test]
fn sweep_family_mode_row_count() {
    let out = run(&["sweep", "--n", "4", "--mode", "families", "--no-timestamp"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("1,")).count(), 8);
}

#[test]
fn sweep_is_deterministic_and_timestamps_are_optional() {
    let args = ["sweep", "--n", "5", "--mode", "random", "--no-timestamp"];
    assert_eq!(run(&args).stdout, run(&args).stdout);

    let stamped = run(&["sweep", "--n", "3", "--mode", "exhaustive"]);
    let text = String::from_utf8(stamped.stdout).unwrap();
    assert!(text.starts_with("# generated_at: "), "got: {}", &text[..40]);
}

#[test]
fn sweep_refuses_oversized_exhaustive_corpus() {
    let out = run(&["sweep", "--n", "17", "--mode", "exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("capped at n = 16"), "stderr: {err}");
}

#[test]
fn sweep_out_file() {
    let path = std::env::temp_dir().join(format!("symspec-sweep-{}.csv", std::process::id()));
    let out = run(&[
        "sweep",
        "--n",
        "3",
        "--mode",
        "families",
        "--no-timestamp",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("wrote"), "stderr: {err}");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    assert!(written.starts_with("schema_version,"));
}

#[test]
fn exact_limit_override() {
    let out = bin()
        .args(["analyze", "maj:3", "--no-timestamp"])
        .env("SYMSPEC_EXACT_LIMIT", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let row = stdout_json(&out);
    assert_eq!(row["l1_norm"]["float"], 2.0);

    let out = bin()
        .args(["analyze", "maj:3"])
        .env("SYMSPEC_EXACT_LIMIT", "banana")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
