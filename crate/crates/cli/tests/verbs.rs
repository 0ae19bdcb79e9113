use std::path::Path;
use std::process::{Command, Output};

use mrc_cli::files::read_coefficients;
use mrc_core::field::{farfield, scattered_field};
use mrc_core::point::Point;

fn mrc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrc")).args(args).output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("exp.toml");
    let out = dir.join("out");
    std::fs::write(&path, format!("{body}\n[outputs]\ndir = {:?}\ncoefficients = true\nresidual_history = true\n", out))
        .unwrap();
    path.to_str().unwrap().to_string()
}

const DISK: &str = r#"
[obstacle]
kind = "disk"
radius = 1.0
nodes = 120

[problem]
k = 1.0
alpha = [1.0, 0.0]

[solver]
epsilon = 1e-3
order = 4
batch_size = 2
max_iterations = 300
seed = 5
"#;

#[test]
fn run_writes_artifacts_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DISK);
    let out = mrc(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("obstacle=disk2d k=1 alpha=(1,0) r_min="), "{stdout}");
    assert!(stdout.contains("converged=true"));
    let o = dir.path().join("out");
    for f in ["report.txt", "coefficients.csv", "residual_history.csv"] {
        assert!(o.join(f).exists(), "{f}");
    }
    let hist = std::fs::read_to_string(o.join("residual_history.csv")).unwrap();
    assert!(hist.starts_with("iteration,r_min\n1,"));
}

#[test]
fn unconverged_run_exits_3_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &DISK.replace("max_iterations = 300", "max_iterations = 1").replace("1e-3", "1e-9"));
    let out = mrc(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(dir.path().join("out/coefficients.csv").exists());
}

#[test]
fn config_errors_exit_1_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &DISK.replace("\"disk\"", "\"blob\""));
    let out = mrc(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blob"));

    let cfg = write_config(dir.path(), &DISK.replace("seed = 5", "seed = 5\ncolour = 2"));
    let out = mrc(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    assert_eq!(mrc(&["run", "/nonexistent/exp.toml"]).status.code(), Some(1));
    assert_eq!(mrc(&["suite", "table3"]).status.code(), Some(1));
    assert_eq!(mrc(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn field_and_farfield_verbs_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), DISK);
    assert_eq!(mrc(&["run", &cfg]).status.code(), Some(0));
    let coeffs = dir.path().join("out/coefficients.csv");
    let (exp, _) = read_coefficients(std::io::BufReader::new(std::fs::File::open(&coeffs).unwrap())).unwrap();
    let c = coeffs.to_str().unwrap();

    let out = mrc(&["field", c, "--grid", "-3,3,1.5,2", "--res", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,re_v,im_v"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 9);
    assert_eq!((rows[1][0], rows[1][1]), (-3.0, 1.75));
    for r in &rows {
        let v = scattered_field(&exp, &Point::xy(r[0], r[1])).unwrap();
        assert_eq!((r[2], r[3]), (v.re, v.im));
    }

    let ff_path = dir.path().join("ff.csv");
    let out = mrc(&["farfield", c, "--ndir", "4", "--out", ff_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&ff_path).unwrap();
    let rows: Vec<Vec<f64>> = text.lines().skip(2).map(|l| l.split(',').map(|s| s.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    let dirs: Vec<Point> = rows.iter().map(|r| Point::xy(r[0].cos(), r[0].sin())).collect();
    let ff = farfield(&exp, &dirs).unwrap();
    for (r, a) in rows.iter().zip(&ff.amplitudes) {
        assert!((r[1] - a.re).abs() < 1e-14 && (r[2] - a.im).abs() < 1e-14);
    }

    assert_eq!(mrc(&["farfield", c, "--ndir", "0"]).status.code(), Some(1));
    assert_eq!(mrc(&["field", c, "--grid", "0,1", "--res", "3"]).status.code(), Some(1));
    std::fs::write(dir.path().join("bad.csv"), "not a coefficient file\n").unwrap();
    let bad = dir.path().join("bad.csv");
    assert_eq!(mrc(&["farfield", bad.to_str().unwrap(), "--ndir", "3"]).status.code(), Some(1));
}
