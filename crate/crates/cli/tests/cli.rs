use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SCARF: &str = r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5}}}"#;
const MILSON: &str = r#"{"potential": {"milson": {"h0_re": 7.75, "h0_im": 3.0, "kappa_plus": 2.0}}}"#;

struct Run {
    dir: TempDir,
    out: Output,
}

impl Run {
    fn code(&self) -> i32 {
        self.out.status.code().expect("exited normally")
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join("out").join(name)
    }

    fn json(&self, name: &str) -> Value {
        serde_json::from_str(&fs::read_to_string(self.path(name)).unwrap()).unwrap()
    }

    fn stderr(&self) -> String {
        String::from_utf8_lossy(&self.out.stderr).into_owned()
    }
}

fn spectra(command: &str, config: &str, extra: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_spectra"))
        .arg(command)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .args(extra)
        .output()
        .unwrap();
    Run { dir, out }
}

fn read(p: &Path) -> Vec<u8> {
    fs::read(p).unwrap()
}

#[test]
fn scarf_spectrum_lists_three_states() {
    let r = spectra("spectrum", SCARF, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let j = r.json("spectrum.json");
    let levels = j["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    for (l, want) in levels.iter().zip([-6.25, -2.25, -0.25]) {
        assert!((l["energy"].as_f64().unwrap() - want).abs() < 1e-12);
    }
    assert_eq!(j["count_formula"], 4);
    assert_eq!(j["formula_discrepancy"], true);
    assert_eq!(j["convention"]["index_map"], "lambda*-m");
    let csv = fs::read_to_string(r.path("eigenfunctions.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x,psi_0,psi_1,psi_2");
    assert_eq!(csv.lines().count(), 1 + 8193);
}

#[test]
fn shallow_potential_has_empty_spectrum() {
    let r = spectra("spectrum", r#"{"potential": {"milson": {"h0_re": -0.9, "h0_im": 0.0, "kappa_plus": 2.0}}}"#, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    assert_eq!(r.json("spectrum.json")["levels"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_passes_for_both_families() {
    for cfg in [SCARF, MILSON] {
        let r = spectra("verify", cfg, &[]);
        assert_eq!(r.code(), 0, "{}", r.stderr());
        let j = r.json("verify.json");
        assert_eq!(j["passed"], true);
        assert_eq!(j["count_constructive"], j["count_numerov"]);
    }
}

#[test]
fn inconsistent_constant_is_a_config_error() {
    let r = spectra("spectrum", r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5, "o00": 3.0}}}"#, &[]);
    assert_eq!(r.code(), 2);
    assert!(r.stderr().contains("potential.gendenshtein.o00"), "{}", r.stderr());
    assert!(!r.path("spectrum.json").exists());
}

#[test]
fn malformed_input_is_a_config_error() {
    let bad = [
        r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5}}, "scan": {"a_range": [5, 1], "b_range": [0, 6]}}"#,
        r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5}}, "extra": 1}"#,
        r#"{"potential": {"gendenshtein": {"a": 2.5}}}"#,
        "not json",
    ];
    for cfg in bad {
        let r = spectra("spectrum", cfg, &[]);
        assert_eq!(r.code(), 2, "{cfg}: {}", r.stderr());
    }
    let r = spectra("verify", SCARF, &["--tol", "-1"]);
    assert_eq!(r.code(), 2);
    let r = spectra("scan-nodeless", SCARF, &[]);
    assert_eq!(r.code(), 2, "scan without a scan block");
}

const SCAN: &str = r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5}},
    "scan": {"a_range": [0.5, 5.0], "b_range": [0.0, 6.0], "resolution": [8, 8], "m": 2}}"#;

#[test]
fn scan_is_consistent_and_worker_independent() {
    let one = spectra("scan-nodeless", SCAN, &["--workers", "1"]);
    let four = spectra("scan-nodeless", SCAN, &["--workers", "4"]);
    assert_eq!(one.code(), 0, "{}", one.stderr());
    assert_eq!(four.code(), 0);
    for name in ["scan.csv", "scan_report.json"] {
        assert_eq!(read(&one.path(name)), read(&four.path(name)), "{name}");
    }
    let csv = fs::read_to_string(one.path("scan.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "a,b,empirical_nodeless,paper_6_15,canonical_disc");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 64);
    let symmetric: Vec<_> = rows.iter().filter(|r| r[1] == "0").collect();
    assert_eq!(symmetric.len(), 8);
    assert!(symmetric.iter().all(|r| r[2] == "true"));
}

#[test]
fn partner_inserts_or_erases_a_level() {
    let r = spectra("partner", SCARF, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let j = r.json("partner_report.json");
    assert_eq!(j["action"], "insert");
    assert_eq!(j["numerov_levels"].as_array().unwrap().len(), 4);
    let csv = fs::read_to_string(r.path("partner.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "x,V_parent,V_partner");

    let r = spectra("partner", r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5}}, "partner": {"kind": "c", "m": 0}}"#, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let j = r.json("partner_report.json");
    assert_eq!(j["action"], "erase");
    assert_eq!(j["numerov_levels"].as_array().unwrap().len(), 2);
}

#[test]
fn partner_from_noded_solution_is_numeric_failure() {
    let r = spectra("partner", r#"{"potential": {"gendenshtein": {"a": 2.5, "b": 0.5}}, "partner": {"kind": "d", "m": 1}}"#, &[]);
    assert_eq!(r.code(), 3);
    assert!(r.stderr().contains("zero"), "{}", r.stderr());
}

#[test]
fn identity_battery_passes() {
    let r = spectra("identities", MILSON, &[]);
    assert_eq!(r.code(), 0, "{}", r.stderr());
    let j = r.json("identities.json");
    assert_eq!(j["passed"], true);
    let checks = j["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["pass"] != false));
    assert!(checks.iter().any(|c| c["pass"].is_null()), "informational entries present");
}

#[test]
fn outputs_are_deterministic() {
    let a = spectra("spectrum", MILSON, &[]);
    let b = spectra("spectrum", MILSON, &[]);
    for name in ["spectrum.json", "eigenfunctions.csv"] {
        assert_eq!(read(&a.path(name)), read(&b.path(name)), "{name}");
    }
    let t = spectra("spectrum", MILSON, &["--tol", "1e-6"]);
    assert_ne!(a.json("spectrum.json")["inputs_digest"], t.json("spectrum.json")["inputs_digest"]);
}
