use std::fs;
use std::path::Path;

use euclid_companion::cli::{run, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn euclid(out: &Path, args: &[&str]) -> i32 {
    let out = out.to_str().unwrap();
    run(["euclid", "--out", out].iter().chain(args))
}

fn json(path: impl AsRef<Path>) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn poly_monomial_and_shifted() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(euclid(dir.path(), &["poly", "--k", "4"]), EXIT_OK);
    let rec = json(dir.path().join("poly_k4_monomial.json"));
    let coeffs: Vec<&str> = rec["coeffs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1", "1", "3", "6", "9", "10", "8", "4", "1"]);
    let report = json(dir.path().join("poly_k4_monomial_report.json"));
    assert_eq!(report["value_at_one"], "43");
    assert_eq!(report["unimodal"], true);

    assert_eq!(euclid(dir.path(), &["poly", "--k", "3", "--basis", "shifted"]), EXIT_OK);
    let rec = json(dir.path().join("poly_k3_shifted.json"));
    assert_eq!(rec["coeffs"], serde_json::json!(["13/16", "0", "1/2", "0", "1"]));

    assert_eq!(euclid(dir.path(), &["poly", "--k", "1"]), EXIT_OK);
    assert_eq!(json(dir.path().join("poly_k1_monomial.json"))["coeffs"], serde_json::json!(["1", "1"]));
}

#[test]
fn companion_exports() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(euclid(dir.path(), &["--format", "json", "companion", "--k", "2"]), EXIT_OK);
    let m = json(dir.path().join("companion_euclid_k2.json"));
    assert_eq!(m["rows"], serde_json::json!([[0, 1], [-1, -1]]));

    assert_eq!(euclid(dir.path(), &["companion", "--k", "5", "--verify"]), EXIT_OK);
    let r = json(dir.path().join("companion_euclid_k5_report.json"));
    assert_eq!(r["verify_charpoly"]["verified"], true);
    assert_eq!(r["dimension"], 16);
    assert_eq!(r["height"], 1);
    assert_eq!(r["corner"], 1);
    let mtx = fs::read_to_string(dir.path().join("companion_euclid_k5.mtx")).unwrap();
    assert!(mtx.starts_with("%%MatrixMarket"));

    assert_eq!(euclid(dir.path(), &["companion", "--k", "4", "--family", "mandelbrot"]), EXIT_OK);
    let r = json(dir.path().join("companion_mandelbrot_k4_report.json"));
    assert_eq!(r["dimension"], 7);
    assert_eq!(r["verify_charpoly"]["verified"], true);

    assert_eq!(euclid(dir.path(), &["--format", "csv", "companion", "--k", "4", "--e2", "2", "--block-order", "2,0,1"]), EXIT_OK);
    assert_eq!(json(dir.path().join("companion_euclid_k4_report.json"))["verify_charpoly"]["verified"], true);
}

#[test]
fn eigs_rows_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(euclid(dir.path(), &["eigs", "--k", "6", "--plot"]), EXIT_OK);
    let csv = fs::read_to_string(dir.path().join("eigs_k6.csv")).unwrap();
    assert_eq!(csv.lines().count(), 33);
    let svg = fs::read_to_string(dir.path().join("eigs_k6.svg")).unwrap();
    assert!(svg.contains(r#"class="bound""#));
    let s = json(dir.path().join("eigs_k6_summary.json"));
    assert_eq!(s["root_summary"]["count"], 32);

    assert_eq!(euclid(dir.path(), &["eigs", "--k", "2"]), EXIT_OK);
    let csv = fs::read_to_string(dir.path().join("eigs_k2.csv")).unwrap();
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], rows[1][0]);
    assert_eq!(rows[0][1], -rows[1][1]);
    assert!((rows[1][1] - 3f64.sqrt() / 2.0).abs() < 1e-15);
}

#[test]
fn fields_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fields", "--k", "6", "--kind", "pseudospectrum", "--eps", "1e-2:1e-1:10", "--nx", "120"];
    assert_eq!(euclid(dir.path(), &args), EXIT_OK);
    let side = json(dir.path().join("fields_k6_pseudospectrum.json"));
    assert_eq!(side["metadata"]["levels"].as_array().unwrap().len(), 10);
    assert_eq!(side["invalid_nodes"].as_array().unwrap().len(), 0);
    let svg = fs::read_to_string(dir.path().join("fields_k6_pseudospectrum.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="level""#).count(), 10);
    let csv = fs::read_to_string(dir.path().join("fields_k6_pseudospectrum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 120 * 120 + 1);

    assert_eq!(euclid(dir.path(), &["fields", "--k", "2", "--kind", "pseudozero_monomial", "--nx", "101"]), EXIT_OK);
    let side = json(dir.path().join("fields_k2_pseudozero_monomial.json"));
    assert!(side["metadata"]["min"].as_f64().unwrap() < 0.02);

    assert_eq!(euclid(dir.path(), &["fields", "--k", "8", "--kind", "shifted_majorant", "--nx", "50"]), EXIT_OK);
    let csv = fs::read_to_string(dir.path().join("fields_k8_shifted_majorant.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "u,k2,k3,k4,k5,k6,k7,k8");
}

#[test]
fn verify_and_report() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(euclid(dir.path(), &["verify", "--kmax", "8"]), EXIT_OK);
    let r = json(dir.path().join("verify_report.json"));
    for name in ["companion_charpoly", "egyptian_numbers", "eigen_accuracy", "euclid_constant"] {
        assert_eq!(r[name]["status"], "pass", "{name}");
    }
    assert_eq!(euclid(dir.path(), &["verify", "--kmax", "1"]), EXIT_OK);
    assert_eq!(euclid(dir.path(), &["verify", "--check", "egyptian", "--n", "10"]), EXIT_OK);
    let r = json(dir.path().join("verify_report.json"));
    assert_eq!(r.as_object().unwrap().len(), 2);

    assert_eq!(euclid(dir.path(), &["report", "--slope", "--kmax", "3"]), EXIT_USAGE);
    assert_eq!(euclid(dir.path(), &["report", "--slope", "--kmax", "7"]), EXIT_OK);
    let fit = json(dir.path().join("slope_fit.json"));
    assert!(fit["fit"]["slope"].as_f64().unwrap() < 2.0);
    let csv = fs::read_to_string(dir.path().join("slope_loglog.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);

    assert_eq!(euclid(dir.path(), &["report", "--table1", "--k", "5", "--grid", "120"]), EXIT_OK);
    let t = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(t.lines().count(), 4);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["eigs", "--k", "13"][..],
        &["poly", "--k", "0"],
        &["poly", "--k", "4", "--format", "xml"],
        &["nonsense"],
        &["fields", "--k", "4", "--kind", "pseudospectrum", "--nx", "1001", "--ny", "1000"],
        &["fields", "--k", "4", "--kind", "pseudospectrum", "--eps", "1:0.1:3"],
        &["companion", "--k", "5", "--block-order", "0,0,1,2"],
        &["report"],
        &["--threads", "0", "verify"],
    ] {
        assert_eq!(euclid(dir.path(), args), EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn every_command_writes_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(euclid(dir.path(), &["--threads", "2", "eigs", "--k", "4"]), EXIT_OK);
    let m = json(dir.path().join("eigs_k4_manifest.json"));
    assert_eq!(m["command"], "eigs");
    assert_eq!(m["status"], "ok");
    assert_eq!(m["threads"], 2);
    assert!(m["elapsed_ms"].is_u64());
    assert_eq!(m["cfg"]["command"]["eigs"]["k"], 4);
    assert!(m["versions"]["euclid_companion"].is_string());
    assert_eq!(m["outputs"], serde_json::json!(["eigs_k4.csv", "eigs_k4_summary.json"]));
}

#[test]
fn outputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let c = tempfile::tempdir().unwrap();
    let cmds: [&[&str]; 3] = [
        &["eigs", "--k", "7", "--plot"],
        &["fields", "--k", "5", "--kind", "pseudospectrum", "--nx", "60"],
        &["poly", "--k", "6"],
    ];
    for cmd in cmds {
        assert_eq!(euclid(a.path(), &[&["--threads", "1"][..], cmd].concat()), EXIT_OK);
        assert_eq!(euclid(b.path(), &[&["--threads", "1"][..], cmd].concat()), EXIT_OK);
        assert_eq!(euclid(c.path(), &[&["--threads", "3"][..], cmd].concat()), EXIT_OK);
    }
    let mut compared = 0;
    for entry in fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with("_manifest.json") {
            continue;
        }
        let x = fs::read(a.path().join(&name)).unwrap();
        assert_eq!(x, fs::read(b.path().join(&name)).unwrap(), "{name}");
        assert_eq!(x, fs::read(c.path().join(&name)).unwrap(), "{name} with 3 threads");
        compared += 1;
    }
    assert!(compared >= 8);
}
