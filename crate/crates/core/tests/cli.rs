use std::path::Path;
use std::process::{Command, Output};

fn evogame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evogame")).args(args).output().unwrap()
}

const SMALL: &str = r#"
seed = 11
replicas = 2
horizon = 200

[network]
kind = "watts_strogatz"
n = 200

[rates]
lambda = [0.02, 0.06]
mu = [0.04, 0.08]

[metrics]
burn_in = 50
tail = 50
"#;

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn theory_prints_six_significant_digits() {
    let out = evogame(&["theory", "--rates", "0.01,0.06;0.04,0.08", "--n", "1000"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "state,pi,expected_count\nG0,0.695652,695.652\nG1,0.173913,173.913\nG2,0.130435,130.435\n"
    );
}

#[test]
fn theory_handles_longer_chains() {
    let out = evogame(&["theory", "--rates", "1,1,1;1,1,1", "--n", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.contains("G3,0.250000,1.00000"));
}

#[test]
fn bad_rates_exit_nonzero_with_diagnostic() {
    let out = evogame(&["theory", "--rates", "0.01,-0.06;0.04,0.08"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("error:"), "{err}");
    assert!(err.contains("positive"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = evogame(&[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn simulate_is_reproducible_and_seed_overridable() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let run = |out: &str, seed: Option<&str>| {
        let out_dir = dir.path().join(out);
        let out_dir = out_dir.to_str().unwrap();
        let mut args = vec!["simulate", "--config", config.as_str(), "--out", out_dir];
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let o = evogame(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(dir.path().join(out).join("fig3_timeseries.csv")).unwrap()
    };
    let a = run("a", None);
    let b = run("b", None);
    assert_eq!(a, b);
    assert!(String::from_utf8_lossy(&a).starts_with("t,n_G0,n_G1,n_G2,f_c\n"));
    let c = run("c", Some("12"));
    assert_ne!(a, c);
    let manifest = std::fs::read_to_string(dir.path().join("c/manifest.toml")).unwrap();
    assert!(manifest.contains("seed = 12"), "{manifest}");
}

#[test]
fn dist_writes_histogram_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), SMALL);
    let out = dir.path().join("out");
    let o = evogame(&["dist", "--config", &config, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(out.join("tab2_dist.csv")).unwrap();
    assert!(table.starts_with("state,theory,simulation,relative_error\n"));
    assert_eq!(table.lines().count(), 4);
    assert!(out.join("fig4_histogram.csv").exists());
}

#[test]
fn malformed_config_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "seed = 1\n[network\nkind = \"lattice\"\n");
    let out = dir.path().join("out");
    let o = evogame(&["sweep", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("run.toml:2"), "{err}");
}

#[test]
fn unknown_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), &format!("{SMALL}\n[reputation]\ndelt = 0.1\n"));
    let out = dir.path().join("out");
    let o = evogame(&["simulate", "--config", &config, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("reputation.delt"), "{err}");
}
