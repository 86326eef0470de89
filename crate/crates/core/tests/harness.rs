use std::sync::Arc;

use rmt_snr::estimator::{estimate_snr, LinearModel};
use rmt_snr::harness::io::{format_matrix, format_psi, format_vector, write_text, PsiInput};
use rmt_snr::harness::{
    dim_sweep, dump_instance, estimate_from_files, run_scenario, summarize, verify_theorem, Method,
    Parallelism, RunConfig, ScenarioRef,
};
use rmt_snr::numerics::DenseMatrix;
use rmt_snr::rmt::CorrelationSpectrum;
use rmt_snr::scenarios::{
    correlation_matrix, rng_stream, sample_wbar, scenario_catalog, CorrelationModel,
    EntryDistribution, Scenario, SweptVariance,
};
use rmt_snr::Error;

#[test]
fn dumped_instance_round_trips_through_files() {
    for name in ["a", "b", "c"] {
        let dir = tempfile::tempdir().unwrap();
        let config = RunConfig {
            master_seed: 9,
            ..RunConfig::for_scenario(name)
        };
        let (manifest, paths) = dump_instance(&config, dir.path()).unwrap();
        let lambdas = &manifest.estimate.lambdas;
        let est = estimate_from_files(&paths[0], &paths[1], &paths[2], lambdas).unwrap();
        assert_eq!(
            est.sigma_x2, manifest.estimate.sigma_x2_hat,
            "scenario {name}"
        );
        assert_eq!(
            est.sigma_n2, manifest.estimate.sigma_n2_hat,
            "scenario {name}"
        );
        assert_eq!((manifest.m, manifest.k), (80, 40));
    }
}

#[test]
fn mismatched_file_dimensions_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    let wbar = sample_wbar(&mut rng_stream(1, 0), 6, 3);
    write_text(&p("w.csv"), &format_matrix(&wbar)).unwrap();
    write_text(&p("y5.csv"), &format_vector(&[1.0; 5])).unwrap();
    write_text(&p("y6.csv"), &format_vector(&[1.0; 6])).unwrap();
    write_text(
        &p("psi5.csv"),
        &format_psi(&PsiInput::Diagonal(vec![1.0; 5])),
    )
    .unwrap();
    write_text(
        &p("psi6.csv"),
        &format_psi(&PsiInput::Diagonal(vec![1.0; 6])),
    )
    .unwrap();
    let l = [1e-3, 2e-3];
    assert!(matches!(
        estimate_from_files(&p("y5.csv"), &p("w.csv"), &p("psi6.csv"), &l),
        Err(Error::Dimension(_))
    ));
    assert!(matches!(
        estimate_from_files(&p("y6.csv"), &p("w.csv"), &p("psi5.csv"), &l),
        Err(Error::Dimension(_))
    ));
    assert!(estimate_from_files(&p("y6.csv"), &p("w.csv"), &p("psi6.csv"), &l).is_ok());
    assert!(matches!(
        estimate_from_files(&p("missing.csv"), &p("w.csv"), &p("psi6.csv"), &l),
        Err(Error::Io { .. })
    ));
}

#[test]
fn parse_errors_carry_location() {
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    write_text(&p("w.csv"), "1,2\n3,oops\n").unwrap();
    write_text(&p("y.csv"), "1\n2\n").unwrap();
    write_text(&p("psi.csv"), "diag:1,1\n").unwrap();
    match estimate_from_files(&p("y.csv"), &p("w.csv"), &p("psi.csv"), &[1e-3, 2e-3]) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn diagonal_file_matches_dense_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    let (m, k) = (40, 20);
    let mut rng = rng_stream(5, 1);
    let q: Vec<f64> = (0..m)
        .map(|i| 0.2 + (i as f64 * 0.37).sin().abs())
        .collect();
    let wbar = sample_wbar(&mut rng, m, k);
    let y: Vec<f64> = sample_wbar(&mut rng, m, 1).as_slice().to_vec();
    write_text(&p("y.csv"), &format_vector(&y)).unwrap();
    write_text(&p("w.csv"), &format_matrix(&wbar)).unwrap();
    write_text(&p("diag.csv"), &format_psi(&PsiInput::Diagonal(q.clone()))).unwrap();
    let dense = PsiInput::Dense(DenseMatrix::from_diag(&q));
    write_text(&p("dense.csv"), &format_psi(&dense)).unwrap();
    let l = [1e-3, 5e-3, 2e-2];
    let a = estimate_from_files(&p("y.csv"), &p("w.csv"), &p("diag.csv"), &l).unwrap();
    let b = estimate_from_files(&p("y.csv"), &p("w.csv"), &p("dense.csv"), &l).unwrap();
    assert!((a.sigma_x2 - b.sigma_x2).abs() <= 1e-10 * a.sigma_x2.abs().max(1.0));
    assert!((a.sigma_n2 - b.sigma_n2).abs() <= 1e-10 * a.sigma_n2.abs().max(1.0));
}

#[test]
fn dense_correlation_file_reproduces_in_memory_model() {
    let psi = correlation_matrix(CorrelationModel::Exponential { rho: 0.4 }, 30).unwrap();
    let spec = Arc::new(CorrelationSpectrum::from_dense(&psi).unwrap());
    let wbar = sample_wbar(&mut rng_stream(2, 2), 30, 10);
    let y: Vec<f64> = (0..30).map(|i| (i as f64).cos()).collect();
    let model = LinearModel::new(wbar.clone(), spec, y.clone()).unwrap();
    let direct = estimate_snr(&model, &[1e-3, 2e-3, 3e-3]).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let p = |f: &str| dir.path().join(f);
    write_text(&p("y.csv"), &format_vector(&y)).unwrap();
    write_text(&p("w.csv"), &format_matrix(&wbar)).unwrap();
    write_text(&p("psi.csv"), &format_psi(&PsiInput::Dense(psi))).unwrap();
    let from_files =
        estimate_from_files(&p("y.csv"), &p("w.csv"), &p("psi.csv"), &[1e-3, 2e-3, 3e-3]).unwrap();
    assert_eq!(direct, from_files);
}

#[test]
fn single_trial_leaves_variance_undefined() {
    let config = RunConfig {
        trials: 1,
        snr_points_db: Some(vec![0.0, 10.0]),
        ..RunConfig::for_scenario("a")
    };
    let report = run_scenario(&config).unwrap();
    assert_eq!(report.rows.len(), 4);
    for row in &report.rows {
        assert_eq!(row.trials, 1);
        assert!(row.norm_err_var.is_none());
    }
    let csv = report.to_csv();
    assert!(csv
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .all(|l| l.ends_with(",NA")));
}

#[test]
fn per_trial_dump_reproduces_aggregates() {
    let config = RunConfig {
        trials: 40,
        snr_points_db: Some(vec![4.0]),
        dump_trials: true,
        ..RunConfig::for_scenario("b")
    };
    let report = run_scenario(&config).unwrap();
    assert_eq!(report.trials.len(), 80);
    for method in [Method::Proposed, Method::Ml] {
        let est: Vec<f64> = report
            .trials_csv()
            .lines()
            .filter(|l| !l.starts_with('#') && l.contains(&format!(",{},", method.as_str())))
            .map(|l| l.split(',').nth(8).unwrap().parse::<f64>().unwrap())
            .collect();
        assert_eq!(est.len(), 40);
        let mean_db = 10.0 * (est.iter().sum::<f64>() / est.len() as f64).log10();
        let row = report.rows.iter().find(|r| r.method == method).unwrap();
        assert!((row.mean_est_db.unwrap() - mean_db).abs() < 1e-9);
    }
}

#[test]
fn zero_variances_give_zero_columns() {
    let scenario = Scenario {
        name: "silent".into(),
        dims: vec![(60, 30)],
        signal: EntryDistribution::Gaussian { variance: 0.0 },
        noise: EntryDistribution::Gaussian { variance: 0.0 },
        swept: SweptVariance::None,
        snr_points_db: vec![0.0],
        ..scenario_catalog("fig1").unwrap()
    };
    let config = RunConfig {
        scenario: ScenarioRef::Inline(Box::new(scenario)),
        trials: 20,
        lambda_grid: Some(vec![1e-2, 1.0, 10.0]),
        ..RunConfig::default()
    };
    let report = verify_theorem(&config).unwrap();
    for row in &report.rows {
        assert_eq!(row.mc_mean_phi, 0.0);
        assert_eq!(row.alpha, 0.0);
        assert_eq!(row.rel_error, 0.0);
    }
}

#[test]
fn identity_alpha_matches_closed_form() {
    // Psi = I, M = K = 60, t = K / lambda = 1.
    let scenario = Scenario {
        name: "square".into(),
        correlation: CorrelationModel::Identity,
        dims: vec![(60, 60)],
        signal: EntryDistribution::Gaussian { variance: 2.0 },
        noise: EntryDistribution::Gaussian { variance: 0.5 },
        swept: SweptVariance::None,
        snr_points_db: vec![0.0],
        ..scenario_catalog("fig1").unwrap()
    };
    let config = RunConfig {
        scenario: ScenarioRef::Inline(Box::new(scenario)),
        trials: 300,
        lambda_grid: Some(vec![60.0, 120.0]),
        ..RunConfig::default()
    };
    let report = verify_theorem(&config).unwrap();
    let row = &report.rows[0];
    let t: f64 = 1.0;
    let delta = ((1.0 + 4.0 * t).sqrt() - 1.0) / (2.0 * t);
    let tr = 60.0 * delta;
    let xi1 = tr / (1.0 + t * delta);
    let xi2 = 1.0 - t * tr / (60.0 * (1.0 + t * delta));
    assert!((row.t - 1.0).abs() < 1e-15);
    assert!((row.delta - delta).abs() < 1e-10);
    assert!((row.alpha - (2.0 * xi1 + 0.5 * xi2)).abs() < 1e-9 * row.alpha);
    // Monte-Carlo mean agrees with the deterministic value at this size.
    assert!(row.rel_error < 0.05, "{row:?}");
}

#[test]
fn verification_is_thread_count_invariant() {
    let base = RunConfig {
        trials: 50,
        lambda_grid: Some(vec![1e-2, 1.0]),
        dims: Some(vec![(60, 20)]),
        ..RunConfig::for_scenario("fig1")
    };
    let one = verify_theorem(&RunConfig {
        parallelism: Parallelism::Threads(1),
        ..base.clone()
    })
    .unwrap();
    let three = verify_theorem(&RunConfig {
        parallelism: Parallelism::Threads(3),
        ..base
    })
    .unwrap();
    assert_eq!(one.to_csv(), three.to_csv());
}

#[test]
fn dimension_sweep_behaviour() {
    let config = RunConfig {
        trials: 500,
        master_seed: 1,
        snr_points_db: Some(vec![0.0, 10.0, 20.0]),
        ..RunConfig::for_scenario("a")
    };
    let report = dim_sweep(&config).unwrap();
    assert_eq!(report.run.dims.len(), 6);
    let grid = report.run.lambda_grids[0].clone();
    let var = |m, k, method| {
        let rows: Vec<_> = report
            .select(m, k, method, &grid)
            .into_iter()
            .cloned()
            .collect();
        summarize(&rows, method).avg_norm_err_var
    };
    // Small systems: worse than 80 x 40 but still ahead of ML.
    let small_p = var(10, 7, Method::Proposed).unwrap();
    let small_ml = var(10, 7, Method::Ml).unwrap();
    assert!(small_p < small_ml, "10x7: {small_p} vs {small_ml}");
    let mid = var(40, 20, Method::Proposed).unwrap();
    let full = var(80, 40, Method::Proposed).unwrap();
    assert!(mid <= 3.0 * full, "40x20 {mid} vs 80x40 {full}");
    // Wide system: ML has no residual left to work with.
    let wide_ml = report.select(30, 35, Method::Ml, &[]);
    assert!(wide_ml.iter().all(|r| r.trials_degenerate == r.trials));
}

#[test]
fn invalid_run_configs_are_config_errors() {
    let zero = RunConfig {
        trials: 0,
        ..RunConfig::default()
    };
    assert!(matches!(run_scenario(&zero), Err(Error::Config(_))));
    let bad_grid = RunConfig {
        lambda_grid: Some(vec![1e-3, -1.0]),
        ..RunConfig::default()
    };
    assert!(matches!(run_scenario(&bad_grid), Err(Error::Config(_))));
    let unknown = RunConfig::for_scenario("zz");
    assert!(matches!(run_scenario(&unknown), Err(Error::Config(_))));
}
