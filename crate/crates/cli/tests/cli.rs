use std::f64::consts::TAU;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qrws(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrws"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn grover_point_at_m4() {
    let out = qrws(&[
        "run", "--m", "4", "--phi", "pi", "--zeta", "pi", "--omega", "0",
    ]);
    let v = json(&out);
    assert_eq!(v["k"], 5);
    assert!((v["p"].as_f64().unwrap() - 0.390625).abs() < 1e-12);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\"p\": 0.39062500000000000"));
}

#[test]
fn zero_iterations_leave_uniform_state() {
    let v = json(&qrws(&["run", "--m", "2", "--iterations", "0"]));
    assert!((v["p"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn distribution_sums_to_one() {
    let v = json(&qrws(&[
        "run",
        "--m",
        "3",
        "--phi",
        "1.1",
        "--zeta",
        "-2",
        "--distribution",
    ]));
    let d = v["distribution"].as_array().unwrap();
    assert_eq!(d.len(), 8);
    let total: f64 = d.iter().map(|x| x.as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_input_exits_one() {
    for args in [
        &["run", "--m", "1"][..],
        &["curve", "--relation", "bogus"],
        &["run", "--phi", "nan"],
        &["run", "--m", "3", "--marked", "8"],
        &["frobnicate"],
    ] {
        let out = qrws(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    assert!(qrws(&["--help"]).status.success());
    assert!(qrws(&["sweep", "--help"]).status.success());
}

#[test]
fn grid_sweep_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for path in [&a, &b] {
        let out = qrws(&["sweep", "--m", "3", "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let (header, rows) = csv_rows(&a);
    assert_eq!(header, ["phi", "zeta", "omega", "m", "k", "p"]);
    assert_eq!(rows.len(), 33 * 33);
    assert!(rows
        .iter()
        .all(|r| r[3] == 3.0 && r[4] == 4.0 && (0.0..=1.0 + 1e-12).contains(&r[5])));
}

#[test]
fn random_sweep_depends_only_on_seed() {
    let run = |seed: &str| {
        qrws(&[
            "sweep",
            "--m",
            "3",
            "--mode",
            "random",
            "--samples",
            "20",
            "--seed",
            seed,
        ])
        .stdout
    };
    assert_eq!(run("5"), run("5"));
    assert_ne!(run("5"), run("6"));
}

#[test]
fn omega_translates_sweep_along_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path().join("base.csv");
    let moved = dir.path().join("moved.csv");
    let n = 32;
    for (path, omega) in [(&base, "0"), (&moved, "pi")] {
        let out = qrws(&[
            "sweep",
            "--m",
            "4",
            "--n-phi",
            "32",
            "--n-zeta",
            "32",
            "--omega",
            omega,
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
    }
    let (_, base) = csv_rows(&base);
    let (_, moved) = csv_rows(&moved);
    let shift = n / 2;
    for i in 0..n {
        for j in 0..n {
            let p = moved[i * n + j][5];
            let q = base[i * n + (j + n - shift) % n][5];
            assert!((p - q).abs() < 1e-12, "({i}, {j}): {p} vs {q}");
        }
    }
}

#[test]
fn two_point_curve_spans_closed_interval() {
    let out = qrws(&["curve", "--n-phi", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("phi,zeta,p"));
    let phis: Vec<f64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(phis.len(), 2);
    assert_eq!(phis[0], 0.0);
    assert!((phis[1] - TAU).abs() < 1e-15);
}

#[test]
fn width_of_constant_curve_is_full_circle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.csv");
    let n = 65;
    let mut text = String::from("phi,zeta,p\n");
    for i in 0..n {
        text.push_str(&format!("{},3.14,0.3\n", TAU * i as f64 / (n - 1) as f64));
    }
    std::fs::write(&path, text).unwrap();
    let v = json(&qrws(&["width", "--input", path.to_str().unwrap()]));
    assert!((v["width"].as_f64().unwrap() - TAU).abs() < 1e-12);
}

#[test]
fn width_rejects_unsorted_curve() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "phi,zeta,p\n1,0,0.1\n0.5,0,0.2\n").unwrap();
    assert_eq!(
        qrws(&["width", "--input", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn optimized_alpha_is_no_worse_than_zero() {
    let common = ["--m", "4", "--n-phi", "128"];
    let at_zero = json(&qrws(
        &[&["width", "--relation", "eq6", "--alpha", "0"][..], &common].concat(),
    ));
    let best = json(&qrws(&[&["optimize-alpha"][..], &common].concat()));
    let w0 = at_zero["width"].as_f64().unwrap();
    let w = best["width"].as_f64().unwrap();
    assert!(w >= w0 - 1e-12, "{w} < {w0}");
    let alpha = best["alpha"].as_f64().unwrap();
    assert!((-1.0..=1.0).contains(&alpha));
}

#[test]
fn verify_passes() {
    let out = qrws(&["verify", "--m", "4", "--samples", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 8);
}

#[test]
fn dumped_config_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    let first = qrws(&[
        "run",
        "--m",
        "5",
        "--phi",
        "-pi/2",
        "--zeta",
        "3pi/2",
        "--dump-config",
    ]);
    assert!(first.status.success());
    std::fs::write(&path, &first.stdout).unwrap();
    let second = qrws(&["run", "--config", path.to_str().unwrap(), "--dump-config"]);
    assert_eq!(first.stdout, second.stdout);

    let v = json(&qrws(&[
        "run",
        "--config",
        path.to_str().unwrap(),
        "--m",
        "3",
    ]));
    assert_eq!(v["m"], 3);
    assert!((v["phi"].as_f64().unwrap() - 1.5 * std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"m": 4, "colour": "red"}"#).unwrap();
    assert_eq!(
        qrws(&["run", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn unwritable_output_fails() {
    let out = qrws(&["run", "--out", "/nonexistent-dir/sub/out.json"]);
    assert_ne!(out.status.code(), Some(0));
}
