use std::fs;
use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ofdm-mfsk"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("config.toml");
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn thresholds_for_all_mcs_has_seven_rows() {
    let dir = tempfile::tempdir().unwrap();
    // loose target and short runs keep this quick
    let cfg = write_config(dir.path(), "target_per = 0.1\nmin_errors = 10\nmax_packets = 400\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["thresholds", "--mcs", "all", "--seed", "7", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("thresholds.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("mcs,m,gamma0_db,target_per,provenance,seed"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.ends_with(",simulated,7")));
    let manifest = fs::read_to_string(out.join("thresholds.csv.manifest.toml")).unwrap();
    assert!(manifest.contains("seed = 7"));
    assert!(manifest.contains("config_sha256"));
}

#[test]
fn reproduce_all_writes_every_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "n_drops = 3\noutage_samples = 4000\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["reproduce-all", "--workers", "1", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    for f in ["snr_cdf.csv", "outage_vs_radius.csv", "capacity_vs_k.csv", "tables_4_to_7.csv", "cell_diameter.csv"] {
        assert!(out.join(f).is_file(), "{f}");
        assert!(out.join(format!("{f}.manifest.toml")).is_file(), "{f} manifest");
    }
    let tables = fs::read_to_string(out.join("tables_4_to_7.csv")).unwrap();
    // 2 directions x (4 urban + 5 rural radii) x 2 schemes
    assert_eq!(tables.lines().count(), 1 + 36);
}

#[test]
fn coverage_urban_uplink_reports_both_schemes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "outage_samples = 20000\n");
    let out = dir.path().join("out");
    let status = bin()
        .args(["coverage", "--env", "urban", "--direction", "uplink", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    let text = fs::read_to_string(out.join("coverage_radius.csv")).unwrap();
    let radius = |scheme: &str| -> f64 {
        text.lines()
            .find(|l| l.split(',').nth(2) == Some(scheme))
            .and_then(|l| l.split(',').nth(5))
            .unwrap()
            .parse()
            .unwrap()
    };
    let ratio = radius("mfsk") / radius("bpsk");
    assert!((1.5..=2.5).contains(&ratio), "{ratio}");
}

#[test]
fn bad_config_exits_with_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "seed = 1\nn_drop = 5\n");
    let o = bin().args(["snr-cdf", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("n_drop") && err.contains("line 2"), "{err}");

    let o = bin().args(["coverage", "--radius-km", "-1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_threshold_table_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bundled_thresholds = false\n");
    let o = bin()
        .args(["capacity", "--threshold-source", "paper", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("out"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bundled thresholds are disabled"));
}

#[test]
fn missing_config_file_is_a_config_error() {
    let o = bin().args(["snr-cdf", "--config", "/nonexistent/x.toml"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
