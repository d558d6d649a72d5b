//! Golden-file tests for every subcommand. Set `UPDATE_GOLDEN=1` to rewrite
//! the expected outputs.

use std::path::{Path, PathBuf};
use std::process::Command;

fn dir(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(sub)
}

fn run(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hgv"))
        .args(args)
        .current_dir(dir("data"))
        .output()
        .expect("hgv runs");
    (
        String::from_utf8(out.stdout).expect("utf-8 output"),
        out.status.code().unwrap_or(-1),
    )
}

fn golden(name: &str, args: &[&str]) {
    let (stdout, code) = run(args);
    let actual = format!("$ hgv {}\n{stdout}exit: {code}\n", args.join(" "));
    let path = dir("golden").join(format!("{name}.out"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing {}; rerun with UPDATE_GOLDEN=1", path.display()));
    assert_eq!(actual, expected, "output of {name} changed");
}

#[test]
fn analyze() {
    golden("analyze_fan", &["analyze", "fan.hg"]);
    golden(
        "analyze_family",
        &["analyze", "--family", "triangular", "--params", "3,3"],
    );
}

#[test]
fn color() {
    golden("color_exact", &["color", "--family", "cycle", "--params", "7"]);
    golden(
        "color_greedy",
        &["color", "--family", "square", "--params", "3,3", "--method", "greedy"],
    );
}

#[test]
fn gamma() {
    golden("gamma_c5", &["gamma", "--family", "cycle", "--params", "5"]);
    golden("gamma_qutrit", &["gamma", "qutrit.json"]);
}

#[test]
fn protocol() {
    golden("protocol_spectrum", &["protocol", "fan.hg", "--spectrum"]);
    golden(
        "protocol_hedged",
        &[
            "protocol",
            "--family",
            "cluster-1d",
            "--params",
            "6",
            "--cover",
            "coloring",
            "--hedge",
            "auto",
        ],
    );
    golden("protocol_qutrit", &["protocol", "qutrit.json", "--hedge", "auto"]);
}

#[test]
fn counts() {
    golden("counts_all", &["counts", "--nu", "1/3", "--scenario", "all"]);
    golden(
        "counts_gme",
        &[
            "counts",
            "--nu",
            "1/2",
            "--gme",
            "2",
            "--delta",
            "0.05",
            "--scenario",
            "hedged",
        ],
    );
}

#[test]
fn oracle() {
    golden(
        "oracle_spectrum",
        &["oracle", "fan.hg", "--check", "spectrum", "--hedge", "0.2"],
    );
    golden(
        "oracle_kappa",
        &["oracle", "--family", "single-edge", "--params", "4", "--check", "kappa"],
    );
    golden(
        "oracle_gsupport",
        &[
            "oracle",
            "--family",
            "single-edge",
            "--params",
            "3",
            "--check",
            "gsupport",
            "--c",
            "0.5",
        ],
    );
    golden(
        "oracle_worstcase",
        &["oracle", "fan.hg", "--check", "worstcase", "--eps", "0.25"],
    );
    golden("oracle_stabilizer", &["oracle", "qutrit.json", "--check", "stabilizer"]);
}

#[test]
fn simulate() {
    golden(
        "simulate_depolarizing",
        &[
            "simulate",
            "fan.hg",
            "--noise",
            "depolarizing:0.2",
            "--tests",
            "200",
            "--seed",
            "7",
        ],
    );
    golden(
        "simulate_schedule",
        &[
            "simulate",
            "fan.hg",
            "--schedule",
            "target|worst_case:0.3",
            "--eps",
            "0.1",
            "--delta",
            "0.1",
            "--seed",
            "1",
        ],
    );
}

#[test]
fn compare() {
    golden(
        "compare_dfe",
        &["compare", "--against", "dfe", "--family", "cluster-1d", "--params", "6"],
    );
    golden(
        "compare_mth",
        &[
            "compare",
            "--against",
            "mth",
            "--family",
            "union-jack-chain",
            "--params",
            "2",
        ],
    );
    golden("compare_tm", &["compare", "--against", "tm", "--n", "5"]);
    golden("compare_hh", &["compare", "--against", "hh", "--m", "3"]);
    golden("compare_plm", &["compare", "--against", "plm", "--n", "6"]);
    golden(
        "compare_tmmmf",
        &["compare", "--against", "tmmmf", "--n", "20", "--c", "20", "--m", "3"],
    );
}

#[test]
fn figure() {
    golden(
        "figure2_csv",
        &["figure", "--which", "2", "--n-min", "3", "--n-max", "9"],
    );
    golden(
        "figure3_json",
        &[
            "figure", "--which", "3", "--n-min", "3", "--n-max", "5", "--format", "json",
        ],
    );
}

#[test]
fn errors() {
    golden("error_bad_nu", &["counts", "--nu", "3/2"]);
    golden("error_missing_file", &["analyze", "no-such-file.hg"]);
}

#[test]
fn simulate_is_reproducible() {
    let trace = std::env::temp_dir().join(format!("hgv-trace-{}.csv", std::process::id()));
    let args = |t: &Path| {
        vec![
            "simulate".to_string(),
            "--family".into(),
            "cycle".into(),
            "--params".into(),
            "5".into(),
            "--noise".into(),
            "zrot:1:0.6".into(),
            "--tests".into(),
            "150".into(),
            "--seed".into(),
            "99".into(),
            "--trace".into(),
            t.display().to_string(),
        ]
    };
    let a = args(&trace);
    let a: Vec<&str> = a.iter().map(String::as_str).collect();
    let (first, code) = run(&a);
    assert_eq!(code, 0);
    let first_trace = std::fs::read_to_string(&trace).unwrap();
    let (second, _) = run(&a);
    let second_trace = std::fs::read_to_string(&trace).unwrap();
    std::fs::remove_file(&trace).ok();
    assert_eq!(first, second);
    assert_eq!(first_trace, second_trace);
    assert!(first_trace.starts_with("index,set,outcome,passed\n"));
    assert_eq!(first_trace.lines().count(), 151);
}

#[test]
fn stdin_input_matches_file() {
    let text = std::fs::read_to_string(dir("data").join("fan.hg")).unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_hgv"))
        .args(["gamma", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(text.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    let (from_file, _) = run(&["gamma", "fan.hg"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), from_file);
}
