use std::path::Path;

use evogame::engine::{histogram_mode, NetworkSpec, RunMetrics, SimConfig};
use evogame::gamespace::{expected_counts, TransitionRates};
use evogame::harness::{
    parse_config_str, pooled_histogram, read_dist_table, run_experiment, run_replicas, sweep, Axis, ExperimentKind,
    ExperimentSection, ExperimentSpec, SweepResult,
};
use evogame::Error;

fn rates(l0: f64, l1: f64, m1: f64, m2: f64) -> TransitionRates {
    TransitionRates::new(vec![l0, l1], vec![m1, m2]).unwrap()
}

fn tiny(side: usize) -> SimConfig {
    let mut c = SimConfig::new(NetworkSpec::Lattice { side }, rates(0.03, 0.03, 0.03, 0.02));
    c.replicas = 2;
    c.horizon = 60.0;
    c.metrics.burn_in = 10;
    c.metrics.tail = 20;
    c
}

fn spec(kind: ExperimentKind, axes: Vec<Axis>, base: SimConfig) -> ExperimentSpec {
    let mut section = ExperimentSection::new(kind);
    section.axes = axes;
    ExperimentSpec::resolve(section, base).unwrap()
}

fn csv_rows(path: &Path) -> usize {
    std::fs::read_to_string(path).unwrap().lines().count() - 1
}

#[test]
fn minimal_config_gets_defaults() {
    let text = "[network]\nkind = \"lattice\"\nside = 10\n\n[rates]\nlambda = [0.01, 0.06]\nmu = [0.04, 0.08]\n";
    let s = parse_config_str(text, Path::new("min.toml")).unwrap();
    assert_eq!(s.base.kappa, 0.1);
    assert_eq!(s.base.reputation.delta, 0.04);
    assert_eq!(s.base.reputation.init_mean, 2.0);
    assert_eq!(s.base.reputation.init_sigma, 0.6);
    assert_eq!(s.base.horizon, 1e4);
    assert_eq!(s.base.replicas, 5);
    assert!(s.base.reputation.enabled);
    assert_eq!(s.experiment.kind, ExperimentKind::Timeseries);
}

#[test]
fn negative_rate_is_a_rates_error() {
    let text = "[network]\nkind = \"lattice\"\nside = 10\n\n[rates]\nlambda = [0.01, -0.06]\nmu = [0.04, 0.08]\n";
    match parse_config_str(text, Path::new("neg.toml")) {
        Err(Error::Validation { key, message }) => {
            assert_eq!(key, "rates");
            assert!(message.contains("positive"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_experiment_parameter_is_named() {
    let text = "[network]\nkind = \"lattice\"\nside = 10\n\n[rates]\nlambda = [0.01, 0.06]\nmu = [0.04, 0.08]\n\n\
                [experiment]\nkind = \"mu_curves\"\n[[experiment.axes]]\nparam = \"mu9\"\nvalues = [0.1]\n";
    match parse_config_str(text, Path::new("x.toml")) {
        Err(Error::Validation { key, .. }) => assert_eq!(key, "mu9"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn sweep_rows_cover_the_grid_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let axes = vec![Axis::list("mu2", &[0.02, 0.04, 0.06]), Axis::range("mu1", 0.01, 0.05, 0.02)];
    let files = run_experiment(&spec(ExperimentKind::MuCurves, axes, tiny(6)), dir.path()).unwrap();
    let path = dir.path().join("fig6_mu_curves.csv");
    assert!(files.contains(&path));
    let result = SweepResult::read_csv(&path).unwrap();
    assert_eq!(result.axes, ["mu2", "mu1"]);
    assert_eq!(result.rows.len(), 9);
    assert_eq!(result.rows[1].coords, [0.02, 0.03]);
    for row in &result.rows {
        assert!((0.0..=1.0).contains(&row.fc_mean));
        assert!(row.fc_std >= 0.0);
        assert_eq!(row.replicas, 2);
    }
    let again = dir.path().join("again.csv");
    result.write_csv(&again).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn default_axes_cover_the_standard_ranges() {
    let mu = spec(ExperimentKind::MuCurves, vec![], tiny(6));
    let sizes: Vec<usize> = mu.experiment.axes.iter().map(|a| a.values().unwrap().len()).collect();
    assert_eq!(sizes, [3, 10]);
    let lam = spec(ExperimentKind::LambdaHeatmap, vec![], tiny(6));
    let l0 = lam.experiment.axes[1].values().unwrap();
    assert_eq!((l0[0], l0[9], l0.len()), (0.005, 0.05, 10));
    let pay = spec(ExperimentKind::PayoffHeatmap, vec![], tiny(6));
    let sizes: Vec<usize> = pay.experiment.axes.iter().map(|a| a.values().unwrap().len()).collect();
    assert_eq!(sizes, [11, 11]);
    let scale = spec(ExperimentKind::ScaleSweep, vec![], tiny(6));
    assert_eq!(scale.experiment.axes[0].values().unwrap(), [30.0, 60.0, 90.0, 120.0, 150.0, 180.0, 210.0]);
    let sched = spec(ExperimentKind::ScheduleCompare, vec![], tiny(6));
    assert_eq!(sched.experiment.schedules.len(), 5);
}

#[test]
fn timeseries_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(ExperimentKind::Timeseries, vec![], tiny(5)), dir.path()).unwrap();
    let first = RunMetrics::read_csv(&dir.path().join("fig3_timeseries.csv")).unwrap();
    let second = RunMetrics::read_csv(&dir.path().join("fig3_timeseries_rep1.csv")).unwrap();
    assert_eq!(first.len(), 60);
    assert_ne!(first, second);
    let runs = run_replicas(&tiny(5)).unwrap();
    assert_eq!(runs[0].state_counts, first.state_counts);
    assert_eq!(runs[0].sample_times, first.sample_times);
    let manifest = std::fs::read_to_string(dir.path().join("manifest.toml")).unwrap();
    let reparsed = parse_config_str(&manifest, Path::new("manifest.toml")).unwrap();
    assert_eq!(reparsed.base, tiny(5));
}

#[test]
fn payoff_ablation_shares_everything_but_the_selection_rule() {
    let dir = tempfile::tempdir().unwrap();
    let axes = vec![Axis::list("b", &[1.2, 1.8]), Axis::list("r", &[0.2, 0.7])];
    let s = spec(ExperimentKind::PayoffHeatmap, axes.clone(), tiny(6));
    run_experiment(&s, dir.path()).unwrap();
    let on = SweepResult::read_csv(&dir.path().join("fig8_payoff_heatmap.csv")).unwrap();
    let off = SweepResult::read_csv(&dir.path().join("fig9_payoff_heatmap_noreputation.csv")).unwrap();
    assert_eq!(on.rows.len(), 4);
    let coords = |r: &SweepResult| r.rows.iter().map(|x| x.coords.clone()).collect::<Vec<_>>();
    assert_eq!(coords(&on), coords(&off));

    let mut base = tiny(6);
    base.reputation.enabled = false;
    let manual = sweep(&base, &axes, &[], None).unwrap();
    assert_eq!(manual.rows.len(), off.rows.len());
    for (a, b) in manual.rows.iter().zip(&off.rows) {
        assert_eq!(a.fc_mean.to_string(), b.fc_mean.to_string());
    }
}

#[test]
fn ablation_can_be_switched_off() {
    let dir = tempfile::tempdir().unwrap();
    let mut section = ExperimentSection::new(ExperimentKind::PayoffHeatmap);
    section.axes = vec![Axis::list("b", &[1.5]), Axis::list("r", &[0.5])];
    section.ablation = false;
    let files = run_experiment(&ExperimentSpec::resolve(section, tiny(5)).unwrap(), dir.path()).unwrap();
    assert_eq!(files.len(), 2);
    assert!(!dir.path().join("fig9_payoff_heatmap_noreputation.csv").exists());
}

#[test]
fn schedule_compare_writes_one_curve_per_schedule() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(ExperimentKind::ScheduleCompare, vec![], tiny(5)), dir.path()).unwrap();
    let curves = std::fs::read_to_string(dir.path().join("fig10_schedule_compare.csv")).unwrap();
    assert!(curves.starts_with("schedule,t,fc_mean,fc_std,replicas\n"));
    assert_eq!(curves.lines().count(), 1 + 5 * 60);
    for label in ["fixed_0.5", "fixed_1", "fixed_5", "exponential_1", "powerlaw_2.5_0.6"] {
        assert!(curves.contains(&format!("\n{label},")), "missing {label}");
    }
    assert_eq!(csv_rows(&dir.path().join("fig10_schedule_summary.csv")), 5);
}

#[test]
fn scale_sweep_reports_variance_per_case() {
    let dir = tempfile::tempdir().unwrap();
    let mut section = ExperimentSection::new(ExperimentKind::ScaleSweep);
    section.axes = vec![Axis::list("side", &[4.0, 6.0, 8.0])];
    section.cases = vec![
        evogame::harness::Case { label: "low_b".into(), set: [("b".to_string(), 1.1)].into() },
        evogame::harness::Case { label: "high_b".into(), set: [("b".to_string(), 1.9)].into() },
    ];
    run_experiment(&ExperimentSpec::resolve(section, tiny(5)).unwrap(), dir.path()).unwrap();
    let result = SweepResult::read_csv(&dir.path().join("fig11_scale_sweep.csv")).unwrap();
    assert!(result.has_case);
    assert_eq!(result.rows.len(), 6);
    assert_eq!(result.case_rows("high_b").count(), 3);
    let variance = std::fs::read_to_string(dir.path().join("fig11_scale_variance.csv")).unwrap();
    assert!(variance.starts_with("case,variance\nlow_b,"));
}

#[test]
fn failing_point_names_its_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    let axes = vec![Axis::list("side", &[5.0, 2.0])];
    match run_experiment(&spec(ExperimentKind::ScaleSweep, axes, tiny(5)), dir.path()) {
        Err(Error::SweepPoint { coords, .. }) => assert_eq!(coords, "side=2"),
        other => panic!("{other:?}"),
    }
}

fn dist_config(l0: f64) -> SimConfig {
    let mut c = SimConfig::new(
        NetworkSpec::WattsStrogatz { n: 1000, k: 4, p: 0.1, seed: None },
        rates(l0, 0.06, 0.04, 0.08),
    );
    c.seed = 7;
    c
}

#[test]
fn dist_table_at_high_lambda0() {
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&spec(ExperimentKind::Dist, vec![], dist_config(0.05)), dir.path()).unwrap();
    let table = read_dist_table(&dir.path().join("tab2_dist.csv")).unwrap();
    let names: Vec<&str> = table.iter().map(|r| r.state.as_str()).collect();
    assert_eq!(names, ["PDG", "SDG", "SHG"]);
    for (row, want) in table.iter().zip([313.725, 392.156, 294.118]) {
        assert!((row.theory - want).abs() < 1e-3, "{row:?}");
        assert!(row.relative_error <= 0.015, "{row:?}");
    }
    let hist = std::fs::read_to_string(dir.path().join("fig4_histogram.csv")).unwrap();
    assert!(hist.starts_with("state,count,probability\nPDG,"));
}

#[test]
fn histogram_peaks_at_the_expected_count() {
    let config = dist_config(0.01);
    let runs = run_replicas(&config).unwrap();
    let hist = pooled_histogram(&runs, config.metrics.burn_in).unwrap();
    let expected = expected_counts(&config.rates, 1000).unwrap();
    for (state, h) in hist.iter().enumerate() {
        assert!((h.values().sum::<f64>() - 1.0).abs() < 1e-9);
        let mean: f64 = h.iter().map(|(&c, &p)| c as f64 * p).sum();
        assert!((mean - expected[state]).abs() / expected[state] <= 0.015, "G{state}: {mean}");
    }
    let mode = histogram_mode(&hist[0]).unwrap();
    assert!(mode.abs_diff(695) <= 15, "PDG mode {mode}");
}

#[test]
fn lambda_heatmap_increases_along_both_axes() {
    let mut base = SimConfig::new(NetworkSpec::Lattice { side: 50 }, rates(0.03, 0.03, 0.03, 0.02));
    base.replicas = 3;
    base.horizon = 2000.0;
    base.metrics.tail = 200;
    let axes = vec![Axis::range("lambda1", 0.005, 0.05, 0.0225), Axis::range("lambda0", 0.005, 0.05, 0.0225)];
    let result = sweep(&base, &axes, &[], None).unwrap();
    assert_eq!(result.rows.len(), 9);
    let at = |i: usize, j: usize| &result.rows[3 * i + j];
    let mut inversions = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let here = at(i, j);
            let next = [(i + 1 < 3).then(|| at(i + 1, j)), (j + 1 < 3).then(|| at(i, j + 1))];
            for there in next.into_iter().flatten() {
                if there.fc_mean < here.fc_mean {
                    let pooled = ((here.fc_std.powi(2) + there.fc_std.powi(2)) / 2.0).sqrt();
                    inversions.push((here.coords.clone(), there.coords.clone(), here.fc_mean - there.fc_mean, pooled));
                }
            }
        }
    }
    assert!(
        inversions.is_empty() || (inversions.len() == 1 && inversions[0].2 < inversions[0].3),
        "{inversions:?}\n{:?}",
        result.rows
    );
}

#[test]
fn shipped_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            evogame::harness::parse_config(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            seen += 1;
        }
    }
    assert!(seen >= 7);
}

#[test]
fn custom_game_chain_from_config() {
    let text = r#"
horizon = 50
replicas = 1

[network]
kind = "lattice"
side = 4

[rates]
lambda = [0.1]
mu = [0.2]

[metrics]
burn_in = 10
tail = 10

[[games]]
name = "PD"
matrix = { R = 1.0, S = 0.0, T = 1.3, P = 0.0 }

[[games]]
name = "harmony"
matrix = { R = 1.0, S = 0.5, T = 0.8, P = 0.0 }
"#;
    let s = parse_config_str(text, Path::new("games.toml")).unwrap();
    let games = s.base.game_spec().unwrap();
    assert_eq!(games.len(), 2);
    assert_eq!(games.name(1), "harmony");
    assert_eq!(games.matrix(0).temptation, 1.3);
    let dir = tempfile::tempdir().unwrap();
    run_experiment(&s, dir.path()).unwrap();
    let m = RunMetrics::read_csv(&dir.path().join("fig3_timeseries.csv")).unwrap();
    assert_eq!(m.state_count(), 2);

    let mismatched = text.replace("lambda = [0.1]\nmu = [0.2]", "lambda = [0.1, 0.1]\nmu = [0.2, 0.2]");
    match parse_config_str(&mismatched, Path::new("games.toml")) {
        Err(Error::Validation { key, .. }) => assert_eq!(key, "rates"),
        other => panic!("{other:?}"),
    }
}
