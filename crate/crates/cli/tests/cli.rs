use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn burescone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burescone"))
        .args(args)
        .env_remove("BURESCONE_OUT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn repeated_runs_write_identical_files() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = burescone(&["run", "pure-to-mixed", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ta = read_tree(&a.path().join("pure_to_mixed"));
    let tb = read_tree(&b.path().join("pure_to_mixed"));
    assert!(ta.iter().any(|(n, _)| n.ends_with(".csv")));
    assert_eq!(ta, tb);
}

#[test]
fn csv_layout_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let o = burescone(&[
        "run",
        "asymptotic-purification",
        "--p",
        "0.6",
        "--gamma",
        "1.5",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let scen = dir.path().join("asymptotic_purification");
    let manifest: serde_json::Value = serde_json::from_slice(&fs::read(scen.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["parameters"]["p"], 0.6);
    assert_eq!(manifest["checks"]["failed"], 0);
    let files = manifest["files"].as_array().unwrap();
    for f in files {
        assert!(scen.join(f.as_str().unwrap()).exists());
    }
    let csv = files
        .iter()
        .map(|f| f.as_str().unwrap())
        .find(|f| f.ends_with(".csv"))
        .unwrap();
    let text = fs::read_to_string(scen.join(csv)).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# source: "));
    let header = lines.find(|l| !l.starts_with('#')).unwrap();
    let first = lines.next().unwrap();
    assert_eq!(header.split(',').count(), first.split(',').count());
    assert!(first.split(',').all(|c| c.len() >= 18 && c.contains('e')));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# n = 3 shooting\ngamma = 2\nt_max = 1.5\n").unwrap();
    let o = burescone(&[
        "run",
        "n3-shooting",
        "--config",
        cfg.to_str().unwrap(),
        "--gamma",
        "1.2",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let m: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("n3_shooting/manifest.json")).unwrap()).unwrap();
    assert_eq!(m["parameters"]["gamma"], 1.2);
    assert_eq!(m["parameters"]["t_max"], 1.5);
}

#[test]
fn environment_sets_default_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_burescone"))
        .args(["run", "cone-2d"])
        .env("BURESCONE_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("cone_2d/manifest.json").exists());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let unknown = burescone(&["run", "no-such-scenario", "--out", out]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(!unknown.stderr.is_empty());
    assert_eq!(
        burescone(&["run", "cone-2d", "--gamma", "1", "--out", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        burescone(&["run", "cone-2d", "--zeta", "x", "--out", out])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(burescone(&["metric", "nonsense"]).status.code(), Some(2));
}

#[test]
fn metric_bloch_components() {
    let o = burescone(&["metric", "bloch", "--r", "0.6", "--theta", "1.0472"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("g_r_r,3.906250000000e-01"));
    assert!(text.contains("g_theta_theta,9.000000000000e-02"));
    let origin = stdout(&burescone(&["metric", "bloch", "--r", "0"]));
    assert!(origin.contains("g_r_r,2.500000000000e-01"));
    assert!(origin.contains("g_theta_theta,0.000000000000e+00"));
}

fn value(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key},")))
        .unwrap()
        .parse()
        .unwrap()
}

#[test]
fn metric_cone3d_curvature() {
    let text = stdout(&burescone(&[
        "metric",
        "cone3d",
        "--zeta",
        "0.5",
        "--u",
        "0.1",
        "--curvature",
    ]));
    let (r, exact) = (value(&text, "R"), value(&text, "R_exact"));
    assert!((r / exact - 1.0).abs() < 1e-6);
}

#[test]
fn geodesic_accepts_negative_velocity() {
    let o = burescone(&[
        "geodesic",
        "--u0",
        "1",
        "--du0",
        "-1",
        "--dtheta0",
        "0.3",
        "--kappa",
        "0.5",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("# outcome: completed"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 200);
}

#[test]
fn geodesic_rejects_bad_kappa() {
    let o = burescone(&["geodesic", "--u0", "1", "--du0", "0", "--kappa", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}
