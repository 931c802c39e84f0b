use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn floquet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_floquet"))
        .args(args)
        .output()
        .unwrap()
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run_in(dir: &Path, cfg: &Path) -> Output {
    floquet(&["--out", dir.to_str().unwrap(), "run", cfg.to_str().unwrap()])
}

fn write_config(dir: &TempDir, text: &str) -> PathBuf {
    let path = dir.path().join("case.toml");
    std::fs::write(&path, text).unwrap();
    path
}

fn failed_count(stdout: &[u8]) -> usize {
    let text = String::from_utf8_lossy(stdout);
    let last = text.lines().last().unwrap();
    last.split(", ")
        .nth(1)
        .unwrap()
        .split(' ')
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn passing_run_writes_csv_and_json() {
    let out = TempDir::new().unwrap();
    let o = run_in(out.path(), &config("fig2.toml"));
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let csv = std::fs::read_to_string(out.path().join("fig2.csv")).unwrap();
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("F [J],"), "{header}");
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 1 + 161);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.path().join("fig2.json")).unwrap())
            .unwrap();
    assert_eq!(json["passed"], true);
    assert!(json["checks"].as_array().unwrap().len() >= 3);
    assert!(json["wall_clock_s"].as_f64().unwrap() >= 0.0);
}

#[test]
fn reruns_are_byte_identical_after_the_version_line() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        assert_eq!(
            run_in(dir.path(), &config("disorder.toml")).status.code(),
            Some(0)
        );
    }
    let read = |d: &TempDir| std::fs::read_to_string(d.path().join("disorder.csv")).unwrap();
    let (x, y) = (read(&a), read(&b));
    assert!(x.starts_with("# floquet "));
    assert_eq!(x.split_once('\n').unwrap().1, y.split_once('\n').unwrap().1);
}

#[test]
fn failed_check_exits_one() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"scenario = "kitaev-fig3"
[params]
L = { value = 16, unit = "1" }
F = { value = 0.3, unit = "J" }
[sweep.mu]
start = -0.5
stop = 0.5
count = 5
unit = "J"
"#,
    );
    let o = run_in(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    // the outputs are still written
    assert!(dir.path().join("kitaev-fig3.csv").exists());
}

#[test]
fn config_errors_exit_two_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"scenario = "two-qubit-crossing"
[params]
J = { value = 1.0, unit = "energy" }
mu = { value = 0.6, unit = "J" }
Fx = { value = 0.8, unit = "J" }
"#,
    );
    let o = run_in(dir.path(), &cfg);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("line 5"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );

    let o = run_in(dir.path(), &dir.path().join("missing.toml"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oversized_chain_exits_three() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"scenario = "chain-ed"
[params]
L = { value = 15, unit = "1" }
omega0 = { value = 10.0, unit = "energy" }
Jxx0 = { value = 0.3, unit = "energy" }
Jyy = { value = 0.2, unit = "energy" }
F = { value = 0.3, unit = "energy" }
omegaF = { value = 20.2, unit = "energy" }
"#,
    );
    let o = run_in(dir.path(), &cfg);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
}

#[test]
fn single_point_sweep() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        &dir,
        r#"scenario = "two-qubit-crossing"
output = "one"
[params]
J = { value = 1.0, unit = "energy" }
mu = { value = 0.6, unit = "J" }
[sweep.F]
start = 0.8
stop = 0.8
count = 1
unit = "J"
"#,
    );
    assert_eq!(run_in(dir.path(), &cfg).status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let rows: Vec<&str> = csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(rows.len(), 1);
    assert!(rows[0].starts_with("8.0000000000000004e-1,"), "{}", rows[0]);
}

#[test]
fn verify_prints_a_table_and_reports_the_known_failures() {
    let o = floquet(&["verify"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("ed-vs-bdg"));
    assert!(text.contains("corrupted-jw-sign-detected"));
    let failing: Vec<&str> = text.lines().filter(|l| l.contains("FAIL")).collect();
    assert!(failing.iter().all(|l| l.starts_with("fig3")), "{failing:?}");
    assert_eq!(failed_count(&o.stdout), 2);

    // tolerances tighter than double precision must fail
    let strict = floquet(&["verify", "--tol", "1e-16"]);
    assert_eq!(strict.status.code(), Some(1));
    assert!(failed_count(&strict.stdout) > 2);
}
