//! Acceptance suite. Each test checks one numbered criterion at its stated
//! tolerance and prints a single `criterion N: PASS|FAIL` line.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rmt_snr::harness::{
    lambda_sensitivity, run_scenario, summarize, verify_theorem, Method, MetricsRow, Parallelism,
    RunConfig, RunReport,
};
use rmt_snr::numerics::{nnls_2var, nnls_gradient, DenseMatrix};
use rmt_snr::rmt::{solve_delta, trace_psi_t, CorrelationSpectrum, FixedPointOptions};
use rmt_snr::scenarios::{log_space, scenario_catalog};

/// Fixed before any run was inspected; every Monte-Carlo criterion uses it.
const SEED: u64 = 1;

fn verdict(n: &str, pass: bool, detail: String) {
    println!(
        "criterion {n}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

fn within(n: &str, elapsed: Duration, limit: Duration) -> bool {
    let ok = elapsed <= limit;
    if !ok {
        println!("criterion {n}: runtime {elapsed:?} exceeds {limit:?}");
    }
    ok
}

fn scenario_run(name: &str, trials: usize, parallelism: Parallelism) -> RunReport {
    let config = RunConfig {
        trials,
        master_seed: SEED,
        parallelism,
        ..RunConfig::for_scenario(name)
    };
    run_scenario(&config).expect("scenario run")
}

fn proposed_rows(report: &RunReport) -> Vec<&MetricsRow> {
    report
        .rows
        .iter()
        .filter(|r| r.method == Method::Proposed)
        .collect()
}

fn ml_rows(report: &RunReport) -> Vec<&MetricsRow> {
    report
        .rows
        .iter()
        .filter(|r| r.method == Method::Ml)
        .collect()
}

fn max_abs_bias(rows: &[&MetricsRow]) -> f64 {
    rows.iter()
        .map(|r| r.bias_db.map_or(f64::INFINITY, f64::abs))
        .fold(0.0, f64::max)
}

/// Criterion parts (i) and (ii) for a single-grid scenario run.
fn bias_and_ordering(report: &RunReport, bias_tol_db: f64) -> (bool, bool, String) {
    let rows: Vec<MetricsRow> = report.rows.clone();
    let prop = summarize(&rows, Method::Proposed);
    let ml = summarize(&rows, Method::Ml);
    let bias = max_abs_bias(&proposed_rows(report));
    let (pv, mv) = (
        prop.avg_norm_err_var.unwrap_or(f64::INFINITY),
        ml.avg_norm_err_var.unwrap_or(f64::INFINITY),
    );
    (
        bias <= bias_tol_db,
        pv < mv,
        format!("max |bias| {bias:.3} dB <= {bias_tol_db}; var proposed {pv:.4} < ml {mv:.4}"),
    )
}

#[test]
fn criterion_01_closed_form_fixed_point() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for m in [40usize, 100] {
        let spec = CorrelationSpectrum::from_diagonal(vec![1.0; m]).unwrap();
        for t in [0.1, 1.0, 10.0] {
            let opts = FixedPointOptions::default();
            let (delta, _) = solve_delta(&spec, m, t, opts.tol, opts.max_iter).unwrap();
            let exact = ((1.0 + 4.0 * t).sqrt() - 1.0) / (2.0 * t);
            worst = worst.max((delta - exact).abs());
        }
    }
    let fast = within("1", start.elapsed(), Duration::from_secs(1));
    verdict(
        "1",
        worst <= 1e-10 && fast,
        format!("max |delta - closed form| = {worst:.2e}"),
    );
}

#[test]
fn criterion_02_trace_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let opts = FixedPointOptions::default();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let m = rng.random_range(2..=300);
        let k = rng.random_range(1..=100);
        let q: Vec<f64> = (0..m).map(|_| rng.random_range(0.0..2.0)).collect();
        let spec = CorrelationSpectrum::from_diagonal(q).unwrap();
        let t = 10f64.powf(rng.random_range(-3.0..=3.0));
        let (delta, _) = solve_delta(&spec, k, t, opts.tol, opts.max_iter).unwrap();
        let lhs = trace_psi_t(&spec, t, delta);
        let rhs = k as f64 * delta;
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    let fast = within("2", start.elapsed(), Duration::from_secs(5));
    verdict(
        "2",
        worst <= 1e-9 && fast,
        format!("max relative gap {worst:.2e}"),
    );
}

#[test]
fn criterion_03_theorem_verification() {
    let start = Instant::now();
    let config = RunConfig {
        trials: 1000,
        master_seed: SEED,
        ..RunConfig::for_scenario("fig1")
    };
    let report = verify_theorem(&config).unwrap();
    let scenario = scenario_catalog("fig1").unwrap();
    let shape_ok = report.run.dims[0] == (300, 100)
        && report.rows.len() == 20
        && report.run.lambda_grids[0] == log_space(1e-3, 1e2, 20)
        && report.sigma_x2 == 10.0
        && report.sigma_n2 == 1.0
        && report.draws >= 200
        && report.run.scenario == scenario;
    let err = report.max_rel_error();
    let fast = within("3", start.elapsed(), Duration::from_secs(120));
    verdict(
        "3",
        shape_ok && err < 0.02 && fast,
        format!(
            "max relative error {err:.3e} over {} lambdas, {} draws",
            report.rows.len(),
            report.draws
        ),
    );
}

#[test]
fn criterion_04_scenario_a() {
    let start = Instant::now();
    let report = scenario_run("a", 1000, Parallelism::Auto);
    let fast = within("4", start.elapsed(), Duration::from_secs(300));
    let run = &report.run;
    assert_eq!(run.dims, vec![(80, 40)]);
    assert_eq!(run.lambda_grids, vec![vec![1e-3, 2e-3, 3e-3, 4e-3]]);
    assert_eq!(run.snr_points_db.len(), 13);

    let (bias_ok, order_ok, detail) = bias_and_ordering(&report, 0.5);
    let means: Vec<f64> = proposed_rows(&report)
        .iter()
        .map(|r| r.norm_err_mean.unwrap_or(f64::INFINITY))
        .collect();
    let aggregate = means.iter().sum::<f64>() / means.len() as f64;
    let worst_point = means.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let unbiased = aggregate.abs() <= 0.05;
    println!("criterion 4(i): {}", if bias_ok { "PASS" } else { "FAIL" });
    println!(
        "criterion 4(ii): {}",
        if order_ok { "PASS" } else { "FAIL" }
    );
    println!(
        "criterion 4(iii): {} (mean normalized error {aggregate:.4} averaged over points, worst point {worst_point:.4})",
        if unbiased { "PASS" } else { "FAIL" }
    );
    verdict(
        "4",
        bias_ok && order_ok && unbiased && fast,
        format!(
            "{detail}; |mean normalized error| {:.4} <= 0.05",
            aggregate.abs()
        ),
    );
}

#[test]
fn criterion_05_scenarios_b_c_d() {
    let start = Instant::now();
    let mut all = true;
    let mut details = Vec::new();
    for name in ["b", "c", "d"] {
        let report = scenario_run(name, 1000, Parallelism::Auto);
        let (bias_ok, order_ok, detail) = bias_and_ordering(&report, 0.5);
        println!(
            "criterion 5({name}): {} ({detail})",
            if bias_ok && order_ok { "PASS" } else { "FAIL" }
        );
        all &= bias_ok && order_ok;
        details.push(format!(
            "{name}: {}",
            if bias_ok && order_ok { "ok" } else { "failed" }
        ));
    }
    let fast = within("5", start.elapsed(), Duration::from_secs(900));
    verdict("5", all && fast, details.join(", "));
}

#[test]
fn criterion_06_nmse_ordering() {
    let report = scenario_run("a", 1000, Parallelism::Auto);
    let prop = proposed_rows(&report);
    let ml = ml_rows(&report);
    assert_eq!(prop.len(), ml.len());
    let mut ok = true;
    let mut worst_prop = f64::NEG_INFINITY;
    let mut min_gap = f64::INFINITY;
    for (p, m) in prop.iter().zip(&ml) {
        assert_eq!(p.snr_true_db, m.snr_true_db);
        let (pn, mn) = (
            p.nmse_db.unwrap_or(f64::INFINITY),
            m.nmse_db.unwrap_or(f64::INFINITY),
        );
        ok &= pn < mn && pn < 0.0;
        worst_prop = worst_prop.max(pn);
        min_gap = min_gap.min(mn - pn);
    }
    verdict(
        "6",
        ok,
        format!("worst proposed NMSE {worst_prop:.2} dB, smallest ML margin {min_gap:.2} dB"),
    );
}

#[test]
fn criterion_07_dimension_robustness() {
    let config = RunConfig {
        trials: 500,
        master_seed: SEED,
        snr_points_db: Some(vec![10.0]),
        ..RunConfig::for_scenario("h")
    };
    let report = run_scenario(&config).unwrap();
    let mut ok = true;
    let mut details = Vec::new();
    for (m, k) in [(31usize, 30usize), (30, 35)] {
        let grid = report.run.lambda_grids[0].clone();
        let p = report.select(m, k, Method::Proposed, &grid)[0];
        let ml = report.select(m, k, Method::Ml, &[])[0];
        let finite = p.trials_degenerate == 0;
        let close = p.bias_db.is_some_and(|b| b.abs() <= 1.5);
        let (pv, mv) = (
            p.norm_err_var.unwrap_or(f64::INFINITY),
            ml.norm_err_var.unwrap_or(f64::INFINITY),
        );
        let ratio = mv / pv;
        let ml_worse = ratio >= 5.0;
        println!(
            "criterion 7({m}x{k}): {} (degenerate {}, mean estimate {:?} dB, var ratio ml/proposed {ratio:.3e})",
            if finite && close && ml_worse { "PASS" } else { "FAIL" },
            p.trials_degenerate,
            p.mean_est_db,
        );
        ok &= finite && close && ml_worse;
        details.push(format!(
            "{m}x{k}: finite={finite} within_1.5dB={close} ml_ratio>=5={ml_worse}"
        ));
    }
    verdict("7", ok, details.join("; "));
}

#[test]
fn criterion_08_lambda_sensitivity() {
    let config = RunConfig {
        trials: 1000,
        master_seed: SEED,
        ..RunConfig::for_scenario("i")
    };
    let report = lambda_sensitivity(&config).unwrap();
    assert_eq!(report.run.lambda_grids.len(), 3);
    let mut ok = true;
    let mut details = Vec::new();
    for grid in &report.run.lambda_grids {
        let rows = report.select(80, 40, Method::Proposed, grid);
        assert_eq!(rows.len(), report.run.snr_points_db.len());
        let bias = max_abs_bias(&rows);
        let degenerate: usize = rows.iter().map(|r| r.trials_degenerate).sum();
        let pass = bias <= 1.0;
        println!(
            "criterion 8({grid:?}): {} (max |bias| {bias:.3} dB, degenerate trials {degenerate})",
            if pass { "PASS" } else { "FAIL" }
        );
        ok &= pass;
        details.push(format!("{grid:?}: {bias:.3} dB"));
    }
    verdict("8", ok, details.join("; "));
}

/// `||phi - Xi sigma||^2`.
fn objective(xi: &DenseMatrix, phi: &[f64], s: [f64; 2]) -> f64 {
    (0..phi.len())
        .map(|i| {
            let r = phi[i] - xi[(i, 0)] * s[0] - xi[(i, 1)] * s[1];
            r * r
        })
        .sum()
}

/// Exhaustive search on a grid over `[0, hi]^2`, refined four times around the best cell.
fn grid_search(xi: &DenseMatrix, phi: &[f64], hi: f64) -> f64 {
    let n = 200;
    let (mut lo0, mut lo1, mut span) = (0.0, 0.0, hi);
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for _ in 0..5 {
        let step = span / n as f64;
        for a in 0..=n {
            for b in 0..=n {
                let s = [lo0 + a as f64 * step, lo1 + b as f64 * step];
                let f = objective(xi, phi, s);
                if f < best.0 {
                    best = (f, s);
                }
            }
        }
        span = 4.0 * step;
        lo0 = (best.1[0] - 2.0 * step).max(0.0);
        lo1 = (best.1[1] - 2.0 * step).max(0.0);
    }
    best.0
}

#[test]
fn criterion_09_nnls_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst_gap: f64 = 0.0;
    let mut worst_slack: f64 = 0.0;
    let mut dual_ok = true;
    for _ in 0..1000 {
        let xi = DenseMatrix::from_fn(4, 2, |_, _| rng.random_range(-1.0..1.0));
        let phi: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
        let fit = nnls_2var(&xi, &phi).unwrap();
        let s = fit.sigma;
        assert!(s[0] >= 0.0 && s[1] >= 0.0);
        // Box large enough to contain the constrained optimum.
        let hi = 2.0 * s[0].max(s[1]) + 1.0;
        let f_nnls = objective(&xi, &phi, s);
        let f_grid = grid_search(&xi, &phi, hi);
        worst_gap = worst_gap.max((f_nnls - f_grid).abs());
        dual_ok &= f_nnls <= f_grid + 1e-12;
        let g = nnls_gradient(&xi, &phi, s).unwrap();
        for j in 0..2 {
            worst_slack = worst_slack.max((s[j] * g[j]).abs());
            dual_ok &= g[j] >= -1e-9;
        }
    }
    verdict(
        "9",
        worst_gap <= 1e-3 && worst_slack < 1e-9 && dual_ok,
        format!("max objective gap {worst_gap:.2e}, max |sigma_j g_j| {worst_slack:.2e}"),
    );
}

#[test]
fn criterion_10_determinism() {
    let one = scenario_run("a", 1000, Parallelism::Threads(1)).to_csv();
    let four = scenario_run("a", 1000, Parallelism::Threads(4)).to_csv();
    let auto = scenario_run("a", 1000, Parallelism::Auto).to_csv();
    verdict(
        "10",
        one.as_bytes() == four.as_bytes() && one.as_bytes() == auto.as_bytes(),
        format!("{} bytes compared across 1, 4 and auto threads", one.len()),
    );
}
