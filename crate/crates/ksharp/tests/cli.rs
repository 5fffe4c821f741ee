mod support;

use std::path::Path;

use ksharp::commands;
use ksharp::formats::read_snapshots;
use ksharp_core::diagnostics::{energy, ik, mass, momentum};
use ksharp_core::{HierarchyParams, Scheme, State};
use support::*;
use tempfile::tempdir;

fn header_json(out: &std::process::Output) -> serde_json::Value {
    serde_json::from_str(stdout(out).trim()).expect("header is JSON")
}

#[test]
fn profile_reports_peak_height() {
    let dir = tempdir().unwrap();
    let out = ksharp(&["profile", "--n", "1", "--m", "3", "--c", "0.75", "--out", "p.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let h = header_json(&out);
    assert_eq!(h["u_max"].as_f64().unwrap(), 2.25);
    assert!(schema_errors("profile-header.schema.json", &h).is_empty());
    assert_eq!(csv_header(&dir.path().join("p.csv")), ["xi", "u"]);

    let out = ksharp(&["profile", "--n", "2", "--m", "3", "--c", "0.75", "--out", "q.csv"], dir.path());
    let u_max = header_json(&out)["u_max"].as_f64().unwrap();
    assert!((u_max - 4.5f64.sqrt()).abs() < 1e-12);
    assert!((u_max - 2.12132).abs() < 1e-5);
}

#[test]
fn profile_window_and_endpoints() {
    let dir = tempdir().unwrap();
    let out = ksharp(
        &["profile", "--n", "1", "--m", "3", "--c", "0.75", "--samples", "2", "--out", "p.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let xi0 = header_json(&out)["xi0"].as_f64().unwrap();
    let path = dir.path().join("p.csv");
    assert_eq!(csv_column(&path, "u"), [0.0, 0.0]);
    assert_eq!(csv_column(&path, "xi"), [-1.2 * xi0, 1.2 * xi0]);

    let out = ksharp(
        &["profile", "--n", "1", "--m", "3", "--c", "0.75", "--samples", "241", "--out", "p.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let u = csv_column(&path, "u");
    assert_eq!(u.len(), 241);
    assert_eq!(u[120], 2.25);
    assert!(u[..20].iter().all(|&v| v == 0.0));
}

#[test]
fn profile_json_validates_and_honours_out_dir() {
    let dir = tempdir().unwrap();
    let target = dir.path().join("elsewhere");
    let out = ksharp_env(
        &["profile", "--n", "3", "--m", "4", "--c", "1.5", "--samples", "9", "--format", "json"],
        dir.path(),
        "KSHARP_OUT_DIR",
        target.to_str().unwrap(),
    );
    assert_eq!(out.status.code(), Some(0));
    let doc = read_json(&target.join("profile.json"));
    assert_eq!(schema_errors("profile.schema.json", &doc), Vec::<String>::new());
    assert_eq!(doc["xi"].as_array().unwrap().len(), 9);
}

#[test]
fn profile_rejects_invalid_parameters() {
    let dir = tempdir().unwrap();
    for args in [
        ["--n", "1", "--m", "1", "--c", "0.75"],
        ["--n", "1", "--m", "3", "--c", "0"],
        ["--n", "0", "--m", "3", "--c", "1"],
    ] {
        let mut full = vec!["profile"];
        full.extend(args);
        let out = ksharp(&full, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = ksharp(&["profile", "--n", "1", "--m", "3", "--c", "1", "--samples", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = ksharp(&["profile", "--n", "1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

fn scale_values(out: &std::process::Output) -> (f64, f64, f64, f64) {
    let text = stdout(out);
    let field = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).expect("line present");
        line.rsplit(['=', ' ']).next().unwrap().parse().unwrap()
    };
    (field("ell ="), field("tau ="), field("V ="), field("round-trip"))
}

#[test]
fn scale_reports_characteristic_scales() {
    let dir = tempdir().unwrap();
    let out = ksharp(&["scale", "--epsilon", "1", "--delta", "1", "--n", "1", "--m", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (ell, tau, vee, err) = scale_values(&out);
    assert_eq!((ell, tau, vee), (1.0, 1.0, 1.0));
    assert!(err <= 1e-12);

    let out = ksharp(&["scale", "--epsilon", "6", "--delta", "1", "--n", "1", "--m", "1", "--vee", "1"], dir.path());
    let (ell, tau, _, err) = scale_values(&out);
    assert!((ell - 6f64.powf(-0.5)).abs() < 1e-15);
    assert!((tau - 6f64.powf(-1.5)).abs() < 1e-15);
    assert!(err <= 1e-12);

    let out = ksharp(&["scale", "--epsilon", "0.3", "--delta", "17", "--n", "3", "--m", "5", "--vee", "2.5"], dir.path());
    assert!(scale_values(&out).3 <= 1e-12);
}

#[test]
fn scale_rejects_non_positive_input() {
    let dir = tempdir().unwrap();
    for args in [
        ["--epsilon", "0", "--delta", "1"],
        ["--epsilon", "1", "--delta", "-2"],
    ] {
        let mut full = vec!["scale", "--n", "1", "--m", "1"];
        full.extend(args);
        assert_eq!(ksharp(&full, dir.path()).status.code(), Some(2), "{args:?}");
    }
    let out = ksharp(&["scale", "--epsilon", "1", "--delta", "1", "--n", "1", "--m", "1", "--vee", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const ZERO: &str = "\
params.n = 2
params.m = 3
grid.length = 10
grid.points = 32
initial.kind = zero
t_end = 0.01
solver.dt = 0.001
outputs.dir = zero
outputs.snapshot_format = json
outputs.diagnostics_format = json
";

#[test]
fn zero_data_runs_flat() {
    let dir = tempdir().unwrap();
    write(dir.path(), "zero.cfg", ZERO);
    let out = ksharp(&["simulate", "--manifest", "zero.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let diag = read_json(&dir.path().join("zero/diagnostics.json"));
    assert!(schema_errors("diagnostics.schema.json", &diag).is_empty());
    for key in ["mass", "momentum", "energy"] {
        assert!(diag[key].as_array().unwrap().iter().all(|v| v.as_f64() == Some(0.0)));
    }
    let snaps = read_json(&dir.path().join("zero/snapshots.json"));
    assert!(schema_errors("snapshots.schema.json", &snaps).is_empty());

    let out = ksharp(&["invariants", "zero/snapshots.json", "--n", "2", "--m", "3", "--k", "1,2,5"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,mass,momentum,energy,I_1,I_2,I_5"));
    for line in lines {
        assert!(line.split(',').skip(1).all(|v| v.parse::<f64>().unwrap() == 0.0), "{line}");
    }
}

const KDV: &str = r#"{
  "params": { "n": 1, "m": 1, "c": 0.75 },
  "grid": { "length": 40, "points": 512 },
  "solver": { "dt": 1e-4 },
  "initial": { "kind": "kdv_soliton", "x0": 20 },
  "t_end": 0.5,
  "outputs": { "dir": "kdv", "sample_every": 100, "ik_orders": [1, 2, 3] }
}
"#;

#[test]
fn kdv_manifest_conserves_mass_and_momentum() {
    let dir = tempdir().unwrap();
    write(dir.path(), "kdv.json", KDV);
    let manifest = read_json(&dir.path().join("kdv.json"));
    assert!(schema_errors("manifest.schema.json", &manifest).is_empty());
    let out = ksharp(&["simulate", "--manifest", "kdv.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let drift = |label: &str| -> f64 {
        let start = text.find(label).unwrap() + label.len();
        text[start..].split_whitespace().next().unwrap().parse().unwrap()
    };
    assert!(drift("|dM/M0| =") <= 1e-8, "{text}");
    assert!(drift("|dP/P0| =") <= 1e-8, "{text}");
    assert!(!text.contains("elapsed"));

    let path = dir.path().join("kdv/diagnostics.csv");
    assert_eq!(
        csv_header(&path),
        ["t", "mass", "momentum", "energy", "peak_x", "peak_u", "I_1", "I_2", "I_3"]
    );
    let peak = csv_column(&path, "peak_x");
    assert!((peak.last().unwrap() - (20.0 + 0.75 * 0.5)).abs() < 1e-3);
    let resolved = read_json(&dir.path().join("kdv/manifest.json"));
    assert!(schema_errors("manifest.schema.json", &resolved).is_empty());
}

#[test]
fn invariants_match_direct_evaluation() {
    let dir = tempdir().unwrap();
    let text = KDV.replace("\"t_end\": 0.5", "\"t_end\": 0.001");
    write(dir.path(), "kdv.json", &text);
    for format in ["csv", "json"] {
        let set = format!("outputs.snapshot_format={format}");
        let out = ksharp(&["simulate", "--manifest", "kdv.json", "--set", &set], dir.path());
        assert_eq!(out.status.code(), Some(0));
        let snap = dir.path().join(format!("kdv/snapshots.{format}"));
        let out = ksharp(
            &["invariants", snap.to_str().unwrap(), "--n", "1", "--m", "1", "--k", "3", "--out", "inv.csv"],
            dir.path(),
        );
        assert_eq!(out.status.code(), Some(0));
        let inv = dir.path().join("inv.csv");
        assert_eq!(csv_header(&inv), ["t", "mass", "momentum", "energy", "I_3"]);

        let s = read_snapshots(&snap).unwrap();
        let grid = s.grid;
        let state = State::new(s.times[0], s.fields[0].clone());
        let p = HierarchyParams::KDV;
        assert_eq!(csv_column(&inv, "mass")[0], mass(&state, &grid));
        assert_eq!(csv_column(&inv, "momentum")[0], momentum(&state, &grid));
        assert_eq!(
            csv_column(&inv, "energy")[0],
            energy(&state, &grid, p, Scheme::FourierCollocation).unwrap()
        );
        assert_eq!(csv_column(&inv, "I_3")[0], ik(&state, &grid, 3).unwrap());
        // Same code path as the library entry point.
        let rows = commands::invariants(&snap, 1, 1, &[3], Scheme::FourierCollocation).unwrap();
        assert_eq!(rows[0].mass, csv_column(&inv, "mass")[0]);
    }
}

const PEAKED: &str = "\
params.n = 1
params.m = 3
params.c = 0.75
grid.length = 32
grid.points = 128
initial.kind = peakompacton
initial.x0 = 12
solver.dt = 1e-3
solver.form = skew_symmetric
t_end = 2
outputs.dir = pk
outputs.snapshot_every = 500
";

#[test]
fn invariants_show_third_moment_drift() {
    let dir = tempdir().unwrap();
    write(dir.path(), "pk.cfg", PEAKED);
    let out = ksharp(&["simulate", "--manifest", "pk.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("mollification:"));
    let out = ksharp(
        &["invariants", "pk/snapshots.csv", "--n", "1", "--m", "3", "--k", "3", "--out", "inv.csv"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let inv = dir.path().join("inv.csv");
    assert_eq!(csv_column(&inv, "t"), [0.0, 0.5, 1.0, 1.5, 2.0]);
    let rel = |col: &str| {
        let v = csv_column(&inv, col);
        v.iter().map(|x| ((x - v[0]) / v[0]).abs()).fold(0.0, f64::max)
    };
    assert!(rel("mass") < 1e-12);
    assert!(rel("momentum") < 1e-6);
    assert!(rel("I_3") > 1e-3);
}

#[test]
fn identical_manifests_give_identical_bytes() {
    let dir = tempdir().unwrap();
    write(dir.path(), "kdv.json", &KDV.replace("\"t_end\": 0.5", "\"t_end\": 0.02"));
    let mut digests = Vec::new();
    for run in ["a", "b"] {
        let target = dir.path().join(run);
        let out = ksharp_env(
            &["simulate", "--manifest", "kdv.json", "--set", "outputs.snapshot_every=50"],
            dir.path(),
            "KSHARP_OUT_DIR",
            target.to_str().unwrap(),
        );
        assert_eq!(out.status.code(), Some(0));
        let files: Vec<Vec<u8>> = ["manifest.json", "snapshots.csv", "diagnostics.csv"]
            .iter()
            .map(|f| std::fs::read(target.join(f)).unwrap())
            .collect();
        digests.push(files);
    }
    assert_eq!(digests[0], digests[1]);
    assert!(!dir.path().join("kdv").exists());
}

#[test]
fn blow_up_exits_with_partial_outputs() {
    let dir = tempdir().unwrap();
    write(dir.path(), "kdv.json", KDV);
    let out = ksharp(
        &["simulate", "--manifest", "kdv.json", "--set", "solver.dt=0.5", "--set", "t_end=100"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("blow-up"));
    let diag = dir.path().join("kdv/diagnostics.csv");
    assert!(!csv_column(&diag, "t").is_empty());
    assert!(dir.path().join("kdv/snapshots.csv").exists());
}

#[test]
fn bad_manifests_and_files_are_reported() {
    let dir = tempdir().unwrap();
    write(dir.path(), "bad.cfg", "params.n = 1\nparams.q = 2\n");
    assert_eq!(ksharp(&["simulate", "--manifest", "bad.cfg"], dir.path()).status.code(), Some(2));
    assert_eq!(ksharp(&["simulate", "--manifest", "missing.cfg"], dir.path()).status.code(), Some(4));
    write(dir.path(), "kdv.json", KDV);
    let out = ksharp(&["simulate", "--manifest", "kdv.json", "--set", "grid.points=17"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    write(dir.path(), "junk.csv", "t,x,u\n0,0,1\n0,abc,2\n");
    let out = ksharp(&["invariants", "junk.csv", "--n", "1", "--m", "1"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    write(dir.path(), "junk.json", "{\"grid\": 3}");
    let out = ksharp(&["invariants", "junk.json", "--n", "1", "--m", "1"], dir.path());
    assert_eq!(out.status.code(), Some(4));
    let out = ksharp(&["invariants", "junk.json", "--n", "1", "--m", "1", "--k", "0"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn non_deterministic_manifest_reports_timing() {
    let dir = tempdir().unwrap();
    write(dir.path(), "zero.cfg", &format!("{ZERO}deterministic = false\n"));
    let out = ksharp(&["simulate", "--manifest", "zero.cfg"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("elapsed:"));
}
