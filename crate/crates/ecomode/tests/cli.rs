//! Process-level checks of the binary: exit codes, stderr diagnostics,
//! determinism, and the synth -> infer -> simulate -> impact happy path.

use std::path::Path;
use std::process::{Command, Output};

use ecomode::modes::ModeMapping;

fn ecomode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecomode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn no_arguments_is_a_usage_error() {
    let out = ecomode(&[]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = ecomode(&["frobnicate"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn negative_session_count_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecomode(&[
        "synth",
        "--sessions",
        "-1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--sessions"));
}

#[test]
fn missing_fares_file_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let plans = dir.path().join("plans.jsonl");
    std::fs::write(&plans, "").unwrap();
    let out = ecomode(&[
        "infer",
        "--plans",
        plans.to_str().unwrap(),
        "--fares",
        dir.path().join("nope.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("fares"));
}

#[test]
fn negative_reduction_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = ecomode(&[
        "impact",
        "--reduction",
        "-0.1",
        "--out-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("reduction"));
}

#[test]
fn bad_thread_count_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ecomode"))
        .args([
            "synth",
            "--sessions",
            "1",
            "--out-dir",
            dir.path().to_str().unwrap(),
        ])
        .env("ECOMODE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("ECOMODE_THREADS"));
}

fn synth_into(dir: &Path, sessions: &str, seed: &str) {
    let out = ecomode(&[
        "synth",
        "--sessions",
        sessions,
        "--seed",
        seed,
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "synth failed: {}", stderr(&out));
}

#[test]
fn empty_corpus_simulation_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "0", "1");
    let out = ecomode(&[
        "simulate",
        "--queries",
        corpus.join("queries.jsonl").to_str().unwrap(),
        "--plans",
        corpus.join("plans.jsonl").to_str().unwrap(),
        "--clicks",
        corpus.join("clicks.jsonl").to_str().unwrap(),
        "--out-dir",
        dir.path().join("sim").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("empty simulation"));
}

#[test]
fn same_seed_synthesizes_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    synth_into(&a, "120", "9");
    synth_into(&b, "120", "9");
    for name in [
        "queries.jsonl",
        "plans.jsonl",
        "clicks.jsonl",
        "ground_truth.json",
    ] {
        let left = std::fs::read(a.join(name)).unwrap();
        let right = std::fs::read(b.join(name)).unwrap();
        assert_eq!(left, right, "{name} differs between identical runs");
    }
}

#[test]
fn pipeline_happy_path_produces_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "400", "3");

    let infer_dir = dir.path().join("inferred");
    let out = ecomode(&[
        "infer",
        "--plans",
        corpus.join("plans.jsonl").to_str().unwrap(),
        "--out-dir",
        infer_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "infer failed: {}", stderr(&out));
    let mapping_path = infer_dir.join("mapping.json");
    let inferred = ModeMapping::from_file(&mapping_path).unwrap();
    assert_eq!(inferred, ModeMapping::bundled_default());

    let sim_dir = dir.path().join("sim");
    let out = ecomode(&[
        "simulate",
        "--queries",
        corpus.join("queries.jsonl").to_str().unwrap(),
        "--plans",
        corpus.join("plans.jsonl").to_str().unwrap(),
        "--clicks",
        corpus.join("clicks.jsonl").to_str().unwrap(),
        "--mapping",
        mapping_path.to_str().unwrap(),
        "--out-dir",
        sim_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "simulate failed: {}", stderr(&out));
    for name in [
        "report.json",
        "table2.csv",
        "table3.csv",
        "table4.csv",
        "table5.csv",
        "changes.geojson",
        "assignment.jsonl",
    ] {
        assert!(sim_dir.join(name).is_file(), "{name} missing");
    }

    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(sim_dir.join("report.json")).unwrap()).unwrap();
    let reduction = report["co2"]["reduction_pct"].as_f64().unwrap();
    let cycling_min = report["cycling"]["mean_minutes_per_day"].as_f64().unwrap();
    assert!(reduction > 0.0, "synthetic corpus should be improvable");

    let impact_dir = dir.path().join("impact");
    let out = ecomode(&[
        "impact",
        "--reduction",
        &format!("{}", reduction / 100.0),
        "--cycling-min",
        &format!("{cycling_min}"),
        "--out-dir",
        impact_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "impact failed: {}", stderr(&out));
    let impact: serde_json::Value =
        serde_json::from_slice(&std::fs::read(impact_dir.join("impact.json")).unwrap()).unwrap();
    assert!(
        impact["estimate"]["national_reduction_mt"]
            .as_f64()
            .unwrap()
            > 0.0
    );
    assert_eq!(impact["config_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn config_file_overrides_simulate_flags() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "50", "8");
    let config_path = dir.path().join("run.json");
    // The file pins example_k; the conflicting flag below must lose.
    std::fs::write(&config_path, r#"{"example_k": 2}"#).unwrap();
    let sim_dir = dir.path().join("sim");
    let out = ecomode(&[
        "simulate",
        "--queries",
        corpus.join("queries.jsonl").to_str().unwrap(),
        "--plans",
        corpus.join("plans.jsonl").to_str().unwrap(),
        "--clicks",
        corpus.join("clicks.jsonl").to_str().unwrap(),
        "--example-k",
        "9",
        "--config",
        config_path.to_str().unwrap(),
        "--out-dir",
        sim_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "simulate failed: {}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(sim_dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["examples"].as_array().unwrap().len(), 2);
}

#[test]
fn zero_weight_objective_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "40", "4");
    let out = ecomode(&[
        "simulate",
        "--queries",
        corpus.join("queries.jsonl").to_str().unwrap(),
        "--plans",
        corpus.join("plans.jsonl").to_str().unwrap(),
        "--clicks",
        corpus.join("clicks.jsonl").to_str().unwrap(),
        "--alpha",
        "0",
        "--out-dir",
        dir.path().join("sim").to_str().unwrap(),
    ]);
    assert_eq!(
        code(&out),
        0,
        "alpha 0 should be accepted: {}",
        stderr(&out)
    );
    let out = ecomode(&[
        "simulate",
        "--queries",
        corpus.join("queries.jsonl").to_str().unwrap(),
        "--plans",
        corpus.join("plans.jsonl").to_str().unwrap(),
        "--clicks",
        corpus.join("clicks.jsonl").to_str().unwrap(),
        "--alpha",
        "-1",
        "--out-dir",
        dir.path().join("sim2").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2, "negative alpha must be rejected");
}

#[test]
fn corpus_missing_a_mode_fails_inference_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "200", "6");

    // Strip every cycling plan, leaving only two unpriced modes.
    let plans_path = corpus.join("plans.jsonl");
    let original = std::fs::read_to_string(&plans_path).unwrap();
    let mut stripped = String::new();
    for line in original.lines() {
        if line.starts_with('#') {
            stripped.push_str(line);
            stripped.push('\n');
            continue;
        }
        let mut record: serde_json::Value = serde_json::from_str(line).unwrap();
        let plans = record["plans"].as_array_mut().unwrap();
        plans.retain(|p| p["mode"].as_u64() != Some(6));
        stripped.push_str(&record.to_string());
        stripped.push('\n');
    }
    std::fs::write(&plans_path, stripped).unwrap();

    let out = ecomode(&[
        "infer",
        "--plans",
        plans_path.to_str().unwrap(),
        "--out-dir",
        dir.path().join("inferred").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert!(
        stderr(&out).contains("inference"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn pure_time_objective_is_at_least_as_fast_as_the_default() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "300", "12");
    let mean_optimized_time = |alpha: &str, sub: &str| -> f64 {
        let sim_dir = dir.path().join(sub);
        let out = ecomode(&[
            "simulate",
            "--queries",
            corpus.join("queries.jsonl").to_str().unwrap(),
            "--plans",
            corpus.join("plans.jsonl").to_str().unwrap(),
            "--clicks",
            corpus.join("clicks.jsonl").to_str().unwrap(),
            "--alpha",
            alpha,
            "--out-dir",
            sim_dir.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "simulate failed: {}", stderr(&out));
        let report: serde_json::Value =
            serde_json::from_slice(&std::fs::read(sim_dir.join("report.json")).unwrap()).unwrap();
        report["travel_time"]["optimized"]["mean"].as_f64().unwrap()
    };
    let pure_time = mean_optimized_time("0", "time_only");
    let weighted = mean_optimized_time("1", "weighted");
    assert!(
        pure_time <= weighted,
        "time-only mean {pure_time} above weighted mean {weighted}"
    );
}

#[test]
fn outputs_reparse_under_the_comment_convention() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    synth_into(&corpus, "60", "2");
    // The generated corpus carries digest headers; the parsers must accept
    // every record without rejects.
    let bytes = std::fs::read(corpus.join("plans.jsonl")).unwrap();
    let parsed = ecomode::parse_plans(bytes.as_slice()).unwrap();
    assert_eq!(parsed.records.len(), 60);
    assert_eq!(parsed.stats.rejected_lines, 0);
}
