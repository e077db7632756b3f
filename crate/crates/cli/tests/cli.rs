use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn cppok(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cppok"))
        .args(args)
        .env_remove("CPPOK_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, body).unwrap();
    path
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect()
}

const SMALL: &str = r#"
[process]
k = 2
lambda = 1.0
jump = { kind = "exponential", rate = 1.0 }

[monte_carlo]
replicates = 2000
master_seed = 5
grid = [1.0, 2.0]
"#;

#[test]
fn pmf_rows_match_closed_form() {
    let out = cppok(&["pmf", "--k", "2", "--lambda", "1", "--t", "1", "--nmax", "3", "--oracle"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    let e2 = (-2f64).exp();
    // p_0 = e^{-2}, p_1 = e^{-2}, p_2 = 3/2 e^{-2}, p_3 = 7/6 e^{-2}
    for (row, want) in rows.iter().zip([1.0, 1.0, 1.5, 7.0 / 6.0]) {
        let got: f64 = row[1].parse().unwrap();
        assert!((got - want * e2).abs() < 1e-15, "{row:?}");
    }
}

#[test]
fn pmf_at_time_zero_is_a_point_mass() {
    let out = cppok(&["pmf", "--k", "3", "--lambda", "2", "--t", "0", "--nmax", "2"]);
    assert!(out.status.success());
    let values: Vec<f64> = data_rows(&stdout(&out)).iter().map(|r| r[1].parse().unwrap()).collect();
    assert_eq!(values, [1.0, 0.0, 0.0]);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(cppok(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(cppok(&["pmf", "--k", "0", "--lambda", "1", "--t", "1", "--nmax", "3"]).status.code(), Some(2));
    assert_eq!(cppok(&["pmf", "--k", "1", "--lambda", "-1", "--t", "1", "--nmax", "3"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let empty_grid = write_config(dir.path(), &SMALL.replace("[1.0, 2.0]", "[]"));
    let out = cppok(&["simulate", empty_grid.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid"));

    let unknown_key = write_config(dir.path(), &format!("{SMALL}\n[extra]\nx = 1\n"));
    assert_eq!(cppok(&["simulate", unknown_key.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(cppok(&["simulate", "/nonexistent/config.toml"]).status.code(), Some(2));
}

#[test]
fn simulate_header_records_seed_and_hash() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = cppok(&["simulate", config.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# seed: 5\n"), "{text}");
    let hash = text.lines().find_map(|l| l.strip_prefix("# config_hash: ")).unwrap();
    assert_eq!(hash.len(), 16);

    // the worker count is not part of the experiment
    let again = cppok(&["--workers", "3", "simulate", config.to_str().unwrap()]);
    assert_eq!(stdout(&again), text);

    let reseeded = write_config(dir.path(), &SMALL.replace("master_seed = 5", "master_seed = 6"));
    let other = stdout(&cppok(&["simulate", reseeded.to_str().unwrap()]));
    assert!(!other.contains(hash));
}

#[test]
fn simulate_writes_paths() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &format!("{SMALL}\n[output]\nformat = \"paths\"\n"));
    let target = dir.path().join("paths.csv");
    let out = cppok(&["simulate", config.to_str().unwrap(), "--output", target.to_str().unwrap()]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(target).unwrap();
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 2000 * 2);
    assert_eq!(rows[0][0], "0");
    // paths are nondecreasing in t
    for pair in rows.chunks(2) {
        let a: f64 = pair[0][2].parse().unwrap();
        let b: f64 = pair[1][2].parse().unwrap();
        assert!(b >= a);
    }
}

#[test]
fn shipped_configs_run() {
    for name in ["cppok.toml", "z1.toml", "z2.toml"] {
        let out = cppok(&["simulate", configs().join(name).to_str().unwrap()]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!data_rows(&stdout(&out)).is_empty());
    }
}

#[test]
fn dispersion_changes_sign_at_the_threshold_rate() {
    let class = |rate: &str| {
        let out = cppok(&["dispersion", "--k", "1", "--lambda", "1", "--jump", &format!("exponential:{rate}"), "--t", "1"]);
        assert!(out.status.success());
        stdout(&out).lines().find_map(|l| l.strip_prefix("class,").map(str::to_owned)).unwrap()
    };
    assert_eq!(class("1.5"), "over");
    assert_eq!(class("2"), "equi");
    assert_eq!(class("2.5"), "under");
}

#[test]
fn dispersion_refuses_bad_requests() {
    let zero_t = cppok(&["dispersion", "--k", "1", "--lambda", "1", "--jump", "dirac:1", "--t", "0"]);
    assert_eq!(zero_t.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let untempered = write_config(
        dir.path(),
        &format!(
            "{SMALL}\n[clock]\nkind = \"mtss\"\nc1 = 1.0\nc2 = 0.0\nalpha1 = 0.5\nalpha2 = 0.5\nmu1 = 0.0\nmu2 = 1.0\n"
        ),
    );
    let out = cppok(&["dispersion", "--config", untempered.to_str().unwrap(), "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("empirical"));
}

#[test]
fn lrd_fit_from_csv_classifies_fast_decay_as_short_range() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("decay.csv");
    let rows: String = (1..=20)
        .map(|i| {
            let t = i as f64 * 10.0;
            format!("{t},{}\n", t.powf(-1.5))
        })
        .collect();
    std::fs::write(&csv, format!("t,value\n{rows}")).unwrap();
    let out = cppok(&["lrd", "--from-csv", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("srd"), "{text}");
}

#[test]
fn verify_runs_the_fast_suites() {
    for suite in ["pmf", "dispersion"] {
        let out = cppok(&["verify", "--suite", suite]);
        assert!(out.status.success(), "{suite}: {}", stdout(&out));
        assert!(stdout(&out).starts_with("PASS"));
    }
}
