use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use railyard_cli::config::ExperimentConfig;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn railyard(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_railyard"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("RAILYARD_THREADS")
        .output()
        .expect("binary runs")
}

fn config(name: &str) -> String {
    configs().join(name).display().to_string()
}

#[test]
fn z_prints_both_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = railyard(&["z", "--config", &config("reference.json")], dir.path());
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let values: Vec<f64> = text
        .lines()
        .filter_map(|l| l.split(" = ").nth(1))
        .map(|v| v.trim().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 3, "{text}");
    assert!((values[0] - 1.575448).abs() < 5e-7 && (values[1] - 1.575448).abs() < 5e-7);
    assert!(values[2] < 1e-8);
}

#[test]
fn sampling_is_deterministic_across_thread_counts() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let cfg = config("reference.json");
    assert!(
        railyard(&["sample", "--config", &cfg, "--threads", "1"], a.path())
            .status
            .success()
    );
    assert!(
        railyard(&["sample", "--config", &cfg, "--threads", "3"], b.path())
            .status
            .success()
    );
    for f in ["coverings.jsonl", "column_measures.csv"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
    // a different seed changes the draws
    let c = tempfile::tempdir().unwrap();
    assert!(
        railyard(&["sample", "--config", &cfg, "--seed", "8"], c.path())
            .status
            .success()
    );
    assert_ne!(
        fs::read(a.path().join("coverings.jsonl")).unwrap(),
        fs::read(c.path().join("coverings.jsonl")).unwrap()
    );
}

#[test]
fn sampling_needs_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("noseed.json");
    fs::write(&cfg, r#"{"schema_version": 1, "finite": {"l": 1, "r": 2, "a": ["L","L"], "b": ["+","-"], "x": [0.5, 0.5]}}"#).unwrap();
    let o = railyard(&["sample", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn echoed_config_round_trips() {
    for name in [
        "reference.json",
        "three_slot.json",
        "slope_two.json",
        "two_group.json",
    ] {
        let dir = tempfile::tempdir().unwrap();
        let cmd = if name == "reference.json" {
            "sample"
        } else {
            "moments"
        };
        let o = railyard(&[cmd, "--config", &config(name)], dir.path());
        assert!(
            o.status.success(),
            "{name}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let echoed = ExperimentConfig::load(&dir.path().join("config.json")).unwrap();
        let mut original = ExperimentConfig::load(&configs().join(name)).unwrap();
        original.output.dir = Some(dir.path().display().to_string());
        assert_eq!(echoed, original, "{name}");
    }
}

#[test]
fn outputs_are_byte_identical_on_rerun() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    for dir in [&a, &b] {
        for cmd in ["density", "frozen", "moments"] {
            assert!(
                railyard(&[cmd, "--config", &config("three_slot.json")], dir.path())
                    .status
                    .success()
            );
        }
    }
    for f in [
        "density.csv",
        "frozen.csv",
        "frozen.svg",
        "moments.csv",
        "summary.json",
    ] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn frozen_reports_tangency_and_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    assert!(railyard(
        &["frozen", "--config", &config("three_slot.json")],
        dir.path()
    )
    .status
    .success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["tangency"]["chi0"], 2);
    assert_eq!(summary["tangency"]["chi1"], 1);
    assert_eq!(summary["tangency"]["rank"], 3);
    let svg = fs::read_to_string(dir.path().join("frozen.svg")).unwrap();
    assert_eq!(
        svg.matches("<polyline").count() as u64,
        summary["branches"].as_u64().unwrap()
    );
    let csv = fs::read_to_string(dir.path().join("frozen.csv")).unwrap();
    assert!(csv.starts_with("u,chi,kappa,branch\r\n"));
    // every number carries 17 significant digits
    let first: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert!(
        first[1]
            .split('e')
            .next()
            .unwrap()
            .trim_start_matches('-')
            .replace('.', "")
            .len()
            == 17
    );
}

#[test]
fn frozen_piecewise_summary() {
    let dir = tempfile::tempdir().unwrap();
    assert!(railyard(
        &["frozen-piecewise", "--config", &config("two_group.json")],
        dir.path()
    )
    .status
    .success());
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    let groups = summary["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 2);
    for g in groups {
        assert_eq!(g["rank"]["predicted"], g["rank"]["counted"]);
    }
    assert!(summary["min_component_distance"].as_f64().unwrap() > 0.0);
    let csv = fs::read_to_string(dir.path().join("frozen_piecewise.csv")).unwrap();
    assert!(csv.starts_with("t,chi,kappa,component\r\n"));
}

#[test]
fn config_violating_the_weight_bound_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = railyard(
        &["verify", "--config", &config("violating.json")],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(
        err.contains("slots 1 and 3") && err.contains("1.2"),
        "{err}"
    );
}

#[test]
fn malformed_configs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for (i, text) in [
        "{",
        r#"{"schema_version": 1}"#,
        r#"{"schema_version": 1, "finite": {"l": 1, "r": 1, "a": ["L"], "b": ["-"], "x": [0.5]}, "extra": 1}"#,
    ]
    .iter()
    .enumerate()
    {
        let p = dir.path().join(format!("bad{i}.json"));
        fs::write(&p, text).unwrap();
        let o = railyard(&["z", "--config", p.to_str().unwrap()], dir.path());
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}
