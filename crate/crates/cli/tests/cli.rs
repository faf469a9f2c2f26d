use std::path::Path;
use std::process::{Command, Output};

use driftwalk_cli::RunConfig;

fn driftwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_driftwalk")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

const INTERVAL: &str = r#"
[problem]
a = 1.0
b = [0.8]
domain = { shape = "ball", center = [0.0], radius = 1.0 }
boundary = { kind = "affine", offset = 0.5, coeffs = [0.5] }

[walk]
epsilon = 1e-3

[execution]
n_walks = 100000
seed = 11

[query]
point = [0.0]
"#;

fn rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone()).unwrap().lines().map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn interval_ci_covers_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = driftwalk(&["solve", &write(dir.path(), "c.toml", INTERVAL)]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert_eq!(r[0].join(","), "x1,mean,stderr,ci_lo,ci_hi,n_walks,mean_steps,budget_failures,degraded");
    let (lo, hi): (f64, f64) = (r[1][3].parse().unwrap(), r[1][4].parse().unwrap());
    assert!(lo <= 0.690 && 0.690 <= hi, "[{lo}, {hi}]");
    assert_eq!(r[1][8], "false");
}

#[test]
fn constant_data_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = INTERVAL
        .replace(r#"{ kind = "affine", offset = 0.5, coeffs = [0.5] }"#, r#"{ kind = "constant", value = 3.0 }"#);
    let out = driftwalk(&["solve", &write(dir.path(), "c.toml", &cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert_eq!((r[1][1].as_str(), r[1][2].as_str()), ("3", "0"));
}

#[test]
fn oversized_shell_takes_no_steps() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = INTERVAL.replace("epsilon = 1e-3", "epsilon = 20.0").replace("n_walks = 100000", "n_walks = 50");
    let out = driftwalk(&["solve", &write(dir.path(), "c.toml", &cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let r = rows(&out);
    assert_eq!((r[1][6].as_str(), r[1][8].as_str()), ("0", "false"));
}

#[test]
fn degraded_run_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = INTERVAL
        .replace("epsilon = 1e-3", "epsilon = 1e-6\nvarsigma = 0.1\nmax_steps = 2")
        .replace("n_walks = 100000", "n_walks = 200");
    let out = driftwalk(&["solve", &write(dir.path(), "c.toml", &cfg)]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(rows(&out)[1][8], "true");
}

#[test]
fn config_errors_exit_one_and_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    for (from, to, key) in [
        ("seed = 11", "seed = 11\nthreads = 2", "threads"),
        ("a = 1.0", "a = 0.0", "problem.a"),
        ("point = [0.0]", "point = [4.0]", "query.point"),
    ] {
        let out = driftwalk(&["solve", &write(dir.path(), "c.toml", &INTERVAL.replace(from, to))]);
        assert_eq!(out.status.code(), Some(1), "{key}");
        let err = String::from_utf8(out.stderr).unwrap();
        assert!(err.contains(key), "{key}: {err}");
    }
    assert_eq!(driftwalk(&["solve", "/nonexistent.toml"]).status.code(), Some(1));
}

#[test]
fn print_config_round_trips_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "c.toml", INTERVAL);
    let out = driftwalk(&["solve", &path, "--print-config", "--seed", "5", "--workers", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let printed = RunConfig::parse(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let mut expected = RunConfig::parse(INTERVAL).unwrap();
    expected.execution.seed = 5;
    expected.execution.workers = Some(3);
    assert_eq!(printed, expected);
}

#[test]
fn seed_override_changes_output_and_workers_do_not() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = INTERVAL.replace("n_walks = 100000", "n_walks = 500");
    let path = write(dir.path(), "c.toml", &cfg);
    let base = driftwalk(&["solve", &path, "--workers", "1"]).stdout;
    assert_eq!(driftwalk(&["solve", &path, "--workers", "8"]).stdout, base);
    assert_ne!(driftwalk(&["solve", &path, "--seed", "12"]).stdout, base);
}

#[test]
fn json_output_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("u.json");
    let cfg = format!(
        "{}\n[output]\nformat = \"json\"\npath = {:?}\n",
        INTERVAL.replace("n_walks = 100000", "n_walks = 100"),
        target.to_str().unwrap()
    );
    let out = driftwalk(&["solve", &write(dir.path(), "c.toml", &cfg)]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(target).unwrap()).unwrap();
    assert_eq!(v["records"][0]["n_walks"], 100);
    assert_eq!(v["records"][0]["point"][0], 0.0);
}

#[test]
fn validate_selectors() {
    let out = driftwalk(&["validate", "bessel"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["suite"], "bessel");
    assert_eq!(v["passed"], true);
    assert!(v["checks"][0]["metrics"]["max_rel_err_d3"].as_f64().unwrap() <= 1e-12);
    assert_eq!(driftwalk(&["validate", "mvp"]).status.code(), Some(0));
    assert_eq!(driftwalk(&["validate", "everything"]).status.code(), Some(1));
}

#[test]
fn sample_exit_files() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.csv");
    let out = driftwalk(&["sample-exit", "--dim", "2", "--b", "1,-1", "--n", "0", "-o", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(empty).unwrap(), "w1,w2\n");

    let out = driftwalk(&["sample-exit", "--dim", "3", "--n", "10", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(rows(&out).len(), 11);

    assert_eq!(driftwalk(&["sample-exit", "--dim", "0", "--n", "1"]).status.code(), Some(1));
    assert_eq!(driftwalk(&["sample-exit", "--dim", "2", "--b", "1", "--n", "1"]).status.code(), Some(1));
}

#[test]
fn shipped_configs_solve() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let mut cfg = RunConfig::load(&path).unwrap();
        cfg.execution.n_walks = cfg.execution.n_walks.min(200);
        let out = driftwalk_cli::solve(&cfg).unwrap();
        assert!(!out.records.is_empty(), "{}", path.display());
        assert!(out.records.iter().all(|r| !r.degraded), "{}", path.display());
    }
}
