use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use mindlin_cli::report::{to_json, EnergyRunReport, GeometryReport, HomogenizeReport, PdReport};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn mindlin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindlin"))
        .args(args)
        .env_remove("MINDLIN_LOG")
        .output()
        .expect("binary runs")
}

/// Runs a command on a data file and returns (exit code, report, stderr).
fn run_on(cmd: &str, file: &Path, extra: &[&str]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let mut args = vec![
        cmd,
        "--input",
        file.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    let o = mindlin(&args);
    let report = std::fs::read_to_string(&out).unwrap_or_default();
    (
        o.status.code().unwrap(),
        report,
        String::from_utf8(o.stderr).unwrap(),
    )
}

fn write_tmp(dir: &tempfile::TempDir, v: &Value) -> PathBuf {
    let p = dir.path().join("input.json");
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn two_phase() -> Value {
    serde_json::from_str(&std::fs::read_to_string(data("two_phase_3d.json")).unwrap()).unwrap()
}

#[test]
fn homogenize_negative_definite_c_tilde_gives_pd_a() {
    let (code, report, _) = run_on("homogenize", &data("two_phase_3d.json"), &[]);
    assert_eq!(code, 0);
    let r: HomogenizeReport = serde_json::from_str(&report).unwrap();
    let h = &r.homogenization;
    assert!(h.pd_a);
    assert_eq!(h.a_eq.len(), 3);
    assert_eq!(h.a_eq[0][0][0][0][0].len(), 3);
    // a = -(f rho^2 / 2)(0, lambda~, 0, mu~, mu~)
    let a = h.isotropic_a.unwrap();
    let want = [0.0, 0.015, 0.0, 0.01, 0.01];
    for (x, y) in a.iter().zip(want) {
        assert!((x - y).abs() < 1e-15, "{a:?}");
    }
    assert!(h.mindlin_eshel.unwrap().holds);
    assert_eq!(r.certificate.reports.len(), 20);
    assert!(r.certificate.mismatch_ok && r.certificate.max_mismatch_rel <= 1e-10);
    assert_eq!(r.seed, mindlin_core::DEFAULT_SEED);
}

#[test]
fn zero_c_tilde_gives_zero_a_and_mismatch() {
    let (code, report, _) = run_on("homogenize", &data("c_tilde_zero.json"), &[]);
    assert_eq!(code, 0);
    let r: HomogenizeReport = serde_json::from_str(&report).unwrap();
    let a = &r.homogenization.a_eq;
    let flat: Vec<f64> = a
        .iter()
        .flatten()
        .flatten()
        .flatten()
        .flatten()
        .flatten()
        .copied()
        .collect();
    assert_eq!(flat.len(), 729);
    assert!(flat.iter().all(|v| *v == 0.0));
    assert!(r.certificate.reports.iter().all(|e| e.mismatch_g == 0.0));
}

#[test]
fn broken_symmetry_names_indices() {
    let (code, report, err) = run_on("homogenize", &data("broken_symmetry.json"), &[]);
    assert_eq!(code, 4);
    assert!(report.is_empty());
    assert!(err.contains("(1,2,1,1)") && err.contains("matrix"), "{err}");
}

#[test]
fn indefinite_matrix_is_a_precondition_failure() {
    let (code, _, err) = run_on("homogenize", &data("indefinite_matrix.json"), &[]);
    assert_eq!(code, 5, "{err}");
}

#[test]
fn schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    type Edit = Box<dyn Fn(&mut Value)>;
    let cases: Vec<Edit> = vec![
        Box::new(|v| v["c_eq"] = v["c_tilde"].clone()),
        Box::new(|v| v["bogus"] = Value::Bool(true)),
        Box::new(|v| v["version"] = 7.into()),
        Box::new(|v| v["dim"] = 4.into()),
        Box::new(|v| v["f"] = 1.5.into()),
        Box::new(|v| v["rho2"] = (-1.0).into()),
        Box::new(|v| {
            v.as_object_mut().unwrap().remove("rho2");
        }),
        Box::new(|v| v["matrix"] = serde_json::json!({"components": [[1.0]]})),
    ];
    for (k, edit) in cases.iter().enumerate() {
        let mut v = two_phase();
        edit(&mut v);
        let (code, _, err) = run_on("homogenize", &write_tmp(&dir, &v), &[]);
        assert_eq!(code, 3, "case {k}: {err}");
    }
    let p = dir.path().join("input.json");
    std::fs::write(&p, "{ not json").unwrap();
    assert_eq!(run_on("homogenize", &p, &[]).0, 3);
}

#[test]
fn io_and_usage_errors() {
    let (code, _, _) = run_on("homogenize", Path::new("/nonexistent/problem.json"), &[]);
    assert_eq!(code, 1);
    let o = mindlin(&["homogenize", "--input", "x.json", "--frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mindlin(&["homogenize"]);
    assert_eq!(o.status.code(), Some(2));
    let o = mindlin(&["homogenize", "--input", "x.json", "--samples", "many"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn deterministic_bytes() {
    let f = data("two_phase_3d.json");
    let (_, a, _) = run_on("verify-energy", &f, &["--fsweep"]);
    let (_, b, _) = run_on("verify-energy", &f, &["--fsweep"]);
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let (_, c, _) = run_on("verify-energy", &f, &["--fsweep", "--seed", "7"]);
    assert_ne!(a, c);
    let (_, d, _) = run_on("verify-energy", &f, &["--fsweep", "--seed", "7"]);
    assert_eq!(c, d);
}

#[test]
fn stdout_matches_file_output() {
    let f = data("disks_2d.json");
    let (_, file_report, _) = run_on("homogenize", &f, &[]);
    let o = mindlin(&["homogenize", "--input", f.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stdout).unwrap(), file_report);
}

/// Parsing a report and writing it again reproduces it byte for byte, and so
/// every float bit for bit.
fn assert_round_trip<T: serde::de::DeserializeOwned + serde::Serialize>(report: &str) {
    let parsed: T = serde_json::from_str(report).unwrap();
    assert_eq!(to_json(&parsed).unwrap(), report);
}

#[test]
fn reports_round_trip() {
    let (_, r, _) = run_on("homogenize", &data("two_phase_3d.json"), &[]);
    assert_round_trip::<HomogenizeReport>(&r);
    let (_, r, _) = run_on("homogenize", &data("disks_2d.json"), &[]);
    assert_round_trip::<HomogenizeReport>(&r);
    let (_, r, _) = run_on("verify-energy", &data("two_phase_3d.json"), &["--fsweep"]);
    assert_round_trip::<EnergyRunReport>(&r);
    let (_, r, _) = run_on("geometry", &data("shapes_cube_3d.json"), &["--fsweep"]);
    assert_round_trip::<GeometryReport>(&r);
    let (_, r, _) = run_on("check-pd", &data("a_isotropic_pd.json"), &[]);
    assert_round_trip::<PdReport>(&r);
}

#[test]
fn floats_survive_bit_exactly() {
    // Values with no short decimal form.
    let mut v = two_phase();
    v["f"] = (1.0f64 / 3.0 / 7.0).into();
    v["rho2"] = std::f64::consts::PI.into();
    let dir = tempfile::tempdir().unwrap();
    let (code, report, _) = run_on("homogenize", &write_tmp(&dir, &v), &["--samples", "3"]);
    assert_eq!(code, 0);
    let r: HomogenizeReport = serde_json::from_str(&report).unwrap();
    assert_eq!(r.input.f.unwrap().to_bits(), (1.0f64 / 3.0 / 7.0).to_bits());
    assert_eq!(r.homogenization.rho2.to_bits(), std::f64::consts::PI.to_bits());
    let e = &r.certificate.reports[0];
    let again: HomogenizeReport = serde_json::from_str(&to_json(&r).unwrap()).unwrap();
    assert_eq!(
        again.certificate.reports[0].w_rve_beta.to_bits(),
        e.w_rve_beta.to_bits()
    );
}

#[test]
fn external_zero_a_fails_certification() {
    let (code, report, err) = run_on("verify-energy", &data("external_a_zero.json"), &[]);
    assert_eq!(code, 6, "{err}");
    let r: EnergyRunReport = serde_json::from_str(&report).unwrap();
    assert_eq!(r.a_source, mindlin_cli::report::ASource::Input);
    assert!(!r.summary.mismatch_ok);
    assert!(r.energy.iter().all(|e| e.mismatch_g.abs() > 0.0));
}

#[test]
fn verify_energy_defaults_certify() {
    let (code, report, _) = run_on("verify-energy", &data("disks_2d.json"), &[]);
    assert_eq!(code, 0);
    let r: EnergyRunReport = serde_json::from_str(&report).unwrap();
    assert_eq!(r.energy.len(), 20);
    assert!(r.energy.iter().all(|e| e.mismatch_rel <= 1e-10));
    assert!(r.energy.iter().all(|e| e.sandwich_ok == Some(true)));
    assert!(r.fsweep.is_none());
}

#[test]
fn fsweep_gap_decreases_with_f() {
    for name in ["two_phase_3d.json", "disks_2d.json"] {
        let (code, report, _) = run_on("verify-energy", &data(name), &["--fsweep", "--samples", "8"]);
        assert_eq!(code, 0);
        let r: EnergyRunReport = serde_json::from_str(&report).unwrap();
        let s = r.fsweep.unwrap();
        assert!(s.gap_monotone, "{name}");
        assert!(s.gap_slope > 0.5, "{name}: {}", s.gap_slope);
        assert!(s.points.iter().all(|p| p.max_mismatch_rel <= 1e-10));
    }
}

#[test]
fn fsweep_needs_inclusion_stiffness() {
    let mut v = two_phase();
    v.as_object_mut().unwrap().remove("inclusion");
    let dir = tempfile::tempdir().unwrap();
    let (code, _, err) = run_on("verify-energy", &write_tmp(&dir, &v), &["--fsweep"]);
    assert_eq!(code, 3, "{err}");
}

#[test]
fn geometry_commands() {
    let (code, report, _) = run_on("geometry", &data("shapes_concentric.json"), &[]);
    assert_eq!(code, 0);
    let r: GeometryReport = serde_json::from_str(&report).unwrap();
    assert!(r.gp.gp1_ok && r.gp.gp2_ok && r.warnings.is_empty());
    assert!((r.gp.f - 0.0625).abs() < 1e-15);

    let (code, report, err) = run_on("geometry", &data("shapes_offcenter.json"), &[]);
    assert_eq!(code, 0);
    let r: GeometryReport = serde_json::from_str(&report).unwrap();
    assert!(!r.gp.gp1_ok && r.gp.gp1_defect > 0.0);
    assert!(err.contains("centroid"));

    let (code, report, err) = run_on("geometry", &data("shapes_ring_family.json"), &["--fsweep"]);
    assert_eq!(code, 0);
    let r: GeometryReport = serde_json::from_str(&report).unwrap();
    assert!(!r.gp3.unwrap().vanishing);
    assert!(r.warnings.iter().any(|w| w.contains("does not vanish")));
    assert!(err.contains("does not vanish"));

    let (_, report, _) = run_on("geometry", &data("shapes_cube_3d.json"), &["--fsweep"]);
    let r: GeometryReport = serde_json::from_str(&report).unwrap();
    let gp3 = r.gp3.unwrap();
    assert!(
        gp3.vanishing && (gp3.slope - 1.0 / 3.0).abs() < 1e-6,
        "{}",
        gp3.slope
    );
}

#[test]
fn check_pd_routes() {
    let (code, report, _) = run_on("check-pd", &data("a_isotropic_pd.json"), &[]);
    assert_eq!(code, 0);
    let r: PdReport = serde_json::from_str(&report).unwrap();
    let me = r.mindlin_eshel.unwrap();
    assert_eq!((me.e1, me.e2, me.e3), (6.0, 3.0, 0.0));
    assert!(r.pd && me.holds && r.routes_agree == Some(true));

    let (code, report, _) = run_on("check-pd", &data("a_isotropic_a4_zero.json"), &[]);
    assert_eq!(code, 0);
    let r: PdReport = serde_json::from_str(&report).unwrap();
    assert!(!r.pd && !r.mindlin_eshel.unwrap().holds);

    let (code, report, _) = run_on("check-pd", &data("c_isotropic.json"), &[]);
    assert_eq!(code, 0);
    let r: PdReport = serde_json::from_str(&report).unwrap();
    let iso = r.isotropic_c.unwrap();
    assert_eq!((iso.bulk, iso.shear), (6.5, 2.0));
    assert!(r.pd && r.routes_agree == Some(true));
}

#[test]
fn check_pd_random_isotropic_a_agree() {
    let dir = tempfile::tempdir().unwrap();
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..40 {
        let a: Vec<f64> = (0..5).map(|_| next()).collect();
        let v = serde_json::json!({"version": 1, "dim": 3, "a": {"isotropic_a": a}});
        let (code, report, err) = run_on("check-pd", &write_tmp(&dir, &v), &[]);
        assert_eq!(code, 0, "{a:?}: {err}");
        let r: PdReport = serde_json::from_str(&report).unwrap();
        assert_ne!(r.routes_agree, Some(false));
    }
}

#[test]
fn log_env_controls_verbosity() {
    let f = data("c_tilde_zero.json");
    let quiet = mindlin(&["homogenize", "--input", f.to_str().unwrap(), "--samples", "2"]);
    assert!(quiet.stderr.is_empty());
    let loud = Command::new(env!("CARGO_BIN_EXE_mindlin"))
        .args(["homogenize", "--input", f.to_str().unwrap(), "--samples", "2"])
        .env("MINDLIN_LOG", "info")
        .output()
        .unwrap();
    assert!(String::from_utf8(loud.stderr).unwrap().contains("certifying"));
}

#[test]
fn shipped_files_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    for entry in std::fs::read_dir(dir.join("schemas")).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "json") {
            let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
            assert!(v.get("$schema").is_some(), "{}", p.display());
        }
    }
}
