//! End-to-end tests of the `sclbench` binary: exit codes, output files,
//! byte determinism, and the report/plot round trips.

use std::fs;
use std::path::Path;
use std::process::Command;

use tempfile::TempDir;

const CONFIG: &str = r#"
[scenario]
kind = "virtual"
examples_per_concept = 150
test_per_concept = 40

[run]
seeds = [0, 1, 2]

[[strategies]]
name = "nb"

[[strategies]]
name = "forest"
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sclbench"))
}

fn write_config(dir: &Path, content: &str) -> std::path::PathBuf {
    let path = dir.join("experiment.toml");
    fs::write(&path, content).unwrap();
    path
}

/// Stable fingerprint of every file under a directory.
fn dir_fingerprint(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                files.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn run_writes_all_artifacts_with_exit_zero() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), CONFIG);
    let out = tmp.path().join("results");
    let status = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    for file in [
        "prequential.csv",
        "clmatrix.json",
        "summary.csv",
        "run_status.csv",
        "kappa_virtual.svg",
    ] {
        assert!(out.join(file).exists(), "{file} missing");
    }
    // 2 strategies x 3 seeds.
    for strategy in ["nb", "forest"] {
        for seed in [0, 1, 2] {
            assert!(out.join(format!("runs/trace_{strategy}_{seed}.csv")).exists());
            assert!(out
                .join(format!("runs/clmatrix_{strategy}_{seed}.json"))
                .exists());
        }
    }

    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    let mut lines = summary.lines();
    assert_eq!(lines.next().unwrap(), "# schema_version=1");
    assert_eq!(
        lines.next().unwrap(),
        "strategy,scenario,k_avg_mean,k_avg_std,bwt_mean,bwt_std,aaa_mean,aaa_std"
    );

    // prequential.csv has one row per stream step per run.
    let prequential = fs::read_to_string(out.join("prequential.csv")).unwrap();
    let rows = prequential.lines().count() - 2;
    assert_eq!(rows, 150 * 5 * 3 * 2);

    // One drift marker per boundary in the SVG.
    let svg = fs::read_to_string(out.join("kappa_virtual.svg")).unwrap();
    assert_eq!(svg.matches("drift-marker").count(), 4);
}

#[test]
fn reruns_and_parallelism_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), CONFIG);
    let fingerprints: Vec<_> = [("a", "1"), ("b", "1"), ("c", "4")]
        .iter()
        .map(|(name, jobs)| {
            let out = tmp.path().join(name);
            let status = bin()
                .args(["run", "--config"])
                .arg(&config)
                .arg("--out")
                .arg(&out)
                .args(["--jobs", jobs])
                .status()
                .unwrap();
            assert_eq!(status.code(), Some(0));
            dir_fingerprint(&out)
        })
        .collect();
    assert_eq!(fingerprints[0], fingerprints[1], "rerun changed outputs");
    assert_eq!(fingerprints[0], fingerprints[2], "jobs=4 changed outputs");
}

#[test]
fn config_errors_exit_one() {
    let tmp = TempDir::new().unwrap();
    // Unknown key.
    let bad = write_config(tmp.path(), &CONFIG.replace("[run]", "[evaluation]\nwindw = 5\n[run]"));
    let out = bin()
        .args(["run", "--config"])
        .arg(&bad)
        .arg("--out")
        .arg(tmp.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("windw"));

    // Missing file.
    let out = bin()
        .args(["run", "--config"])
        .arg(tmp.path().join("nope.toml"))
        .arg("--out")
        .arg(tmp.path().join("x"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failed_runs_exit_two_and_leave_others_intact() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(
        tmp.path(),
        r#"
        [scenario]
        kind = "virtual"
        examples_per_concept = 400
        test_per_concept = 30

        [run]
        seeds = [0]

        [[strategies]]
        name = "nb"

        [[strategies]]
        name = "naive"
        momentum = 8.0
        "#,
    );
    let out_dir = tmp.path().join("results");
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out_dir.join("runs/trace_nb_0.csv").exists());
    assert!(!out_dir.join("runs/trace_naive_0.csv").exists());
    let status = fs::read_to_string(out_dir.join("run_status.csv")).unwrap();
    assert!(status.contains("naive,0,error"));
    assert!(status.contains("nb,0,ok"));
}

#[test]
fn report_recomputes_the_persisted_summary() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), CONFIG);
    let out_dir = tmp.path().join("results");
    assert!(bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap()
        .success());

    let run_stdout = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(tmp.path().join("again"))
        .output()
        .unwrap()
        .stdout;
    let report_stdout = bin()
        .args(["report", "--in"])
        .arg(&out_dir)
        .output()
        .unwrap()
        .stdout;
    // The table printed from persisted files equals the in-process table.
    assert_eq!(
        String::from_utf8_lossy(&report_stdout),
        String::from_utf8_lossy(&run_stdout)
    );

    // Full-precision round trip: aggregates recomputed from the persisted
    // per-run files reproduce summary.csv byte for byte.
    let reloaded = sclbench_cli::report::load_runs(&out_dir).unwrap();
    let rows = sclbench_cli::report::aggregate_runs(&reloaded).unwrap();
    let rewritten = tmp.path().join("summary_recomputed.csv");
    sclbench_cli::report::write_summary(&rows, &rewritten).unwrap();
    assert_eq!(
        fs::read(out_dir.join("summary.csv")).unwrap(),
        fs::read(&rewritten).unwrap()
    );
}

#[test]
fn plot_renders_from_persisted_runs() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), CONFIG);
    let out_dir = tmp.path().join("results");
    assert!(bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap()
        .success());
    let svg_path = tmp.path().join("replot.svg");
    let status = bin()
        .args(["plot", "--in"])
        .arg(&out_dir)
        .arg("--out")
        .arg(&svg_path)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let svg = fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("drift-marker").count(), 4);
    // Same curves as the run-time plot (identical traces, identical SVG).
    let original = fs::read_to_string(out_dir.join("kappa_virtual.svg")).unwrap();
    assert_eq!(svg, original);
}

#[test]
fn env_variable_sets_default_parallelism() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), CONFIG);
    let out_a = tmp.path().join("env");
    let status = bin()
        .env("SCLBENCH_JOBS", "4")
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_a)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let out_b = tmp.path().join("plain");
    assert!(bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_b)
        .status()
        .unwrap()
        .success());
    assert_eq!(dir_fingerprint(&out_a), dir_fingerprint(&out_b));
}

#[test]
fn csv_scenario_round_trips_through_the_cli() {
    let tmp = TempDir::new().unwrap();
    // Export a generated scenario, then benchmark on the CSV replay.
    let scenario = sclbench_core::stream::build_virtual_scenario(9, 120, 30, 0.05).unwrap();
    let csv_path = tmp.path().join("stream.csv");
    sclbench_core::stream::write_csv_scenario(&scenario, &csv_path).unwrap();

    let config = write_config(
        tmp.path(),
        &format!(
            r#"
            [scenario]
            kind = "csv"
            path = "{}"

            [run]
            seeds = [0, 1]

            [[strategies]]
            name = "hoeffding"
            "#,
            csv_path.display()
        ),
    );
    let out_dir = tmp.path().join("results");
    let status = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--out")
        .arg(&out_dir)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out_dir.join("kappa_stream.svg").exists());
}
