//! Byte-exact script outputs. Each scripts/NN_*.pdo has a pinned .out file;
//! the binary must reproduce it exactly with default flags (seed 0) and exit
//! zero. Error handling is checked through stdin-fed sessions.

use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicU32, Ordering};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pdo")
}

fn scripts_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/scripts")
}

static STAMP: AtomicU32 = AtomicU32::new(0);

/// Fresh working directory so scripts that write files stay isolated.
fn workdir(tag: &str) -> PathBuf {
    let n = STAMP.fetch_add(1, Ordering::Relaxed);
    let dir = std::env::temp_dir().join(format!(
        "pdo-golden-{}-{tag}-{n}",
        std::process::id()
    ));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_script(name: &str) -> (String, String, bool, PathBuf) {
    let dir = workdir(name);
    let out = Command::new(bin())
        .arg(scripts_dir().join(format!("{name}.pdo")))
        .current_dir(&dir)
        .output()
        .expect("binary runs");
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.success(),
        dir,
    )
}

fn assert_golden(name: &str) -> PathBuf {
    let (stdout, stderr, ok, dir) = run_script(name);
    let want = std::fs::read_to_string(scripts_dir().join(format!("{name}.out"))).unwrap();
    assert!(ok, "{name} exited nonzero; stderr:\n{stderr}");
    assert_eq!(stderr, "", "{name} wrote to stderr");
    assert_eq!(stdout, want, "{name} stdout drifted from golden file");
    dir
}

#[test]
fn zn_basics() {
    assert_golden("01_zn_basics");
}

#[test]
fn dual_partial() {
    assert_golden("02_dual_partial");
}

#[test]
fn truncpoly_radicals() {
    assert_golden("03_truncpoly_radicals");
}

#[test]
fn table_ring() {
    assert_golden("04_table_ring");
}

#[test]
fn scaling_derivation() {
    assert_golden("05_scaling");
}

#[test]
fn verify_one_suite() {
    assert_golden("06_verify_small");
}

#[test]
fn verify_all_and_report() {
    let dir = assert_golden("07_verify_all");
    let report = std::fs::read_to_string(dir.join("report.jsonl")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines.len(), 61);
    for line in lines {
        assert!(line.starts_with("{\"suite\":"), "line is not a report object: {line}");
        assert!(line.contains("\"status\""));
    }
    assert!(!report.contains("\"kind\":\"failed\""));
}

#[test]
fn precision_rebuilds() {
    assert_golden("08_precision");
}

#[test]
fn annihilator_towers() {
    assert_golden("09_annseries");
}

#[test]
fn roundtrip_mix() {
    assert_golden("10_roundtrip_mix");
}

#[test]
fn reruns_are_identical() {
    let (a, _, ok_a, _) = run_script("06_verify_small");
    let (b, _, ok_b, _) = run_script("06_verify_small");
    assert!(ok_a && ok_b);
    assert_eq!(a, b);
}

fn run_stdin(input: &str) -> (String, String, bool) {
    use std::io::Write as _;
    let dir = workdir("stdin");
    let mut child = Command::new(bin())
        .current_dir(&dir)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    (
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
        out.status.success(),
    )
}

#[test]
fn errors_carry_line_numbers_and_fail_the_run() {
    let (_, stderr, ok) = run_stdin("eval 1 + 1\n");
    assert!(!ok);
    assert!(stderr.starts_with("line 1: error: no ring set"), "got: {stderr}");

    let (stdout, stderr, ok) = run_stdin("ring zn 4\neval 2*2\nfrobnicate\n");
    assert!(!ok);
    assert_eq!(stdout, "ring: Z_4; order 4; unital\n0\n");
    assert!(stderr.starts_with("line 3: error: unknown command 'frobnicate'"));

    let (_, stderr, ok) = run_stdin("ring zn 4\neval a*x^2 +\n");
    assert!(!ok);
    assert!(stderr.contains("line 2: error:"), "got: {stderr}");

    // Nonunital session: integer literals have no meaning.
    let zero_mul = "ring table n=2 add=0,1;1,0 mul=0,0;0,0\neval 1\n";
    let (_, stderr, ok) = run_stdin(zero_mul);
    assert!(!ok);
    assert!(stderr.contains("line 2: error:"), "got: {stderr}");
}

#[test]
fn script_flag_matches_positional() {
    let dir = workdir("flagform");
    let out = Command::new(bin())
        .arg("--script")
        .arg(scripts_dir().join("01_zn_basics.pdo"))
        .current_dir(&dir)
        .output()
        .unwrap();
    let want = std::fs::read_to_string(scripts_dir().join("01_zn_basics.out")).unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}

#[test]
fn missing_script_file_is_an_error() {
    let out = Command::new(bin())
        .arg("definitely-not-here.pdo")
        .output()
        .unwrap();
    assert!(!out.status.success());
}
