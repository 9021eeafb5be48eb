use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn koranyi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_koranyi"))
        .args(args)
        .env_remove("KORANYI_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn steinhaus_row_in_range() {
    let o = koranyi(&["steinhaus", "--rho", "0.25", "--n", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# {\"artifact\":\"koranyi\""));
    assert!(text.contains("# config {"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    let c: f64 = rows[0][2].parse().unwrap();
    assert!(c > 0.10 && c < 0.14, "{c}");
}

#[test]
fn rk_unit_mass_row() {
    let o = koranyi(&[
        "rk",
        "--k-min",
        "0",
        "--k-max",
        "0",
        "--lambda-min",
        "1e-6",
        "--lambda-max",
        "1e-6",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("k,n,lambda,r,value,imag_residual,quad_error,band"));
    let rows = data_rows(&text);
    let v: f64 = rows[0][4].parse().unwrap();
    assert!((v - 1.0).abs() < 1e-5, "{v}");
    assert_eq!(rows[0][7], "low");
}

#[test]
fn decay_json_slope() {
    let o = koranyi(&["decay", "--n", "1", "--format", "json"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let slope = doc["summary"]["slope"].as_f64().unwrap();
    assert!(slope <= -0.10, "{slope}");
    assert_eq!(doc["artifact"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["config"]["subcommand"], "decay");
    assert_eq!(doc["ok"], true);
}

#[test]
fn identical_runs_are_byte_identical() {
    let args = [
        "counterexample",
        "--pairs",
        "2000",
        "--density-samples",
        "2000",
        "--seed",
        "5",
    ];
    let a = koranyi(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_koranyi"))
        .args(args)
        .env("KORANYI_THREADS", "3")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rk = ["rk", "--k-max", "4", "--lambda-steps", "5"];
    let one = Command::new(env!("CARGO_BIN_EXE_koranyi"))
        .args(rk)
        .env("KORANYI_THREADS", "1")
        .output()
        .unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_koranyi"))
        .args(rk)
        .env("KORANYI_THREADS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["rk", "--k-min", "5", "--k-max", "2"],
        vec!["rk", "--tol", "0"],
        vec!["steinhaus", "--rho", "0.7"],
        vec!["distances"],
        vec!["lowfreq", "--lambda-max", "0.5"],
        vec!["laguerre", "--k-min", "5"],
        vec!["rk", "--plot"],
        vec!["nonsense"],
    ] {
        let o = koranyi(&args);
        assert_eq!(
            o.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
    }
    let o = Command::new(env!("CARGO_BIN_EXE_koranyi"))
        .args(["steinhaus"])
        .env("KORANYI_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = koranyi(&["steinhaus", "--out", "/nonexistent/dir/out.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failed_check_exits_one_with_record() {
    let o = koranyi(&["weyl", "--k-max", "0", "--truncation", "4", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let record: Value = serde_json::from_slice(o.stderr.trim_ascii()).unwrap();
    assert_eq!(record["status"], "verification_failed");
    assert!(!record["failures"].as_array().unwrap().is_empty());
    assert!(stdout(&o).contains("# ok false"));
}

#[test]
fn distances_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pts.txt");
    std::fs::write(&input, "# x y t\n0 0 0\n1, 0, 0\n\n0 0 4\n").unwrap();
    let o = koranyi(&["distances", "--input", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let d: Vec<f64> = data_rows(&stdout(&o)).iter().map(|r| r[0].parse().unwrap()).collect();
    // |(1,0,0)⁻¹(0,0,4)| = |(−1, 0, 4)| = 17^{1/4}.
    let want = [0.0, 1.0, 2.0, 17f64.powf(0.25)];
    assert_eq!(d.len(), want.len());
    for (a, b) in d.iter().zip(want) {
        assert!((a - b).abs() < 1e-12, "{d:?}");
    }
    std::fs::write(&input, "1 2\n").unwrap();
    assert_eq!(
        koranyi(&["distances", "--input", input.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn plot_script_references_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rk.csv");
    let o = koranyi(&[
        "rk",
        "--k-max",
        "2",
        "--lambda-steps",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--plot",
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let gp = std::fs::read_to_string(Path::new(&format!("{}.gp", out.display()))).unwrap();
    assert!(gp.contains("'rk.csv'") && gp.contains("set logscale x"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert_eq!(data_rows(&csv).len(), 12);
}

#[test]
fn json_rows_keyed_by_column() {
    let o = koranyi(&["lowfreq", "--k-max", "2", "--lambda-steps", "3", "--format", "json"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r["ratio"].as_f64().unwrap() <= 10.0));
}
