//! Monte-Carlo engine behind the CLI subcommands.
//!
//! Every trial draws from its own random stream, keyed by
//! `(dimension index, SNR point, trial)`, and writes into a pre-indexed slot,
//! so the output does not depend on the thread count.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Parallelism, ResolvedRun, RunConfig};
use super::io::{
    format_matrix, format_psi, format_vector, parse_matrix, parse_psi, parse_vector, read_text,
    write_text, PsiInput,
};
use super::metrics::{fmt_lambdas, fmt_num, fmt_opt, point_stats, Method, MetricsRow, CSV_HEADER};
use crate::error::{Error, Result};
use crate::estimator::{estimate_snr, ml_baseline, LinearModel, SnrEstimate};
use crate::numerics::{norm2_sq, Cholesky, DenseMatrix};
use crate::rmt::{coefficients, CorrelationSpectrum, DeterministicEquivalents};
use crate::scenarios::{
    build_correlation, correlation_matrix, rng_stream, sample_truth, sample_wbar, synthesize,
    CorrelationSpec, GroundTruth, Scenario,
};

/// Stream reserved for the fixed design of [`verify_theorem`].
pub const FIXED_DESIGN_STREAM: u64 = 1 << 63;

/// `(M, K)` pairs used by [`dim_sweep`] when none are configured.
pub const DIM_SWEEP_DEFAULT: [(usize, usize); 6] =
    [(10, 7), (20, 10), (40, 20), (80, 40), (31, 30), (30, 35)];

fn trial_stream(dim_index: usize, point: usize, trial: usize) -> u64 {
    ((dim_index as u64) << 48) | ((point as u64) << 32) | trial as u64
}

fn check_stream_capacity(run: &ResolvedRun) -> Result<()> {
    if run.trials > u32::MAX as usize
        || run.snr_points_db.len() > 1 << 16
        || run.dims.len() > 1 << 15
    {
        return Err(Error::Config(
            "run is too large to key its random streams".into(),
        ));
    }
    Ok(())
}

fn thread_pool(parallelism: Parallelism) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.num_threads())
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker threads: {e}")))
}

/// Ground truth and observation of one trial.
pub fn draw_instance(
    scenario: &Scenario,
    spec: &Arc<CorrelationSpectrum>,
    k: usize,
    snr_db: f64,
    seed: u64,
    stream: u64,
) -> Result<(GroundTruth, LinearModel)> {
    let (signal, noise) = scenario.distributions_at(snr_db);
    let mut rng = rng_stream(seed, stream);
    let truth = sample_truth(&signal, &noise, spec.dim(), k, &mut rng)?;
    let model = synthesize(Arc::clone(spec), &truth, &mut rng)?;
    Ok((truth, model))
}

/// Outcome of one estimator on one trial.
#[derive(Debug, Clone, PartialEq)]
pub enum TrialResult {
    Estimate {
        sigma_x2: f64,
        sigma_n2: f64,
        snr: Option<f64>,
    },
    Failed(String),
}

impl TrialResult {
    fn from_result(r: Result<SnrEstimate>) -> Self {
        match r {
            Ok(e) => TrialResult::Estimate {
                sigma_x2: e.sigma_x2,
                sigma_n2: e.sigma_n2,
                snr: e.snr_linear().filter(|v| v.is_finite()),
            },
            Err(e) => TrialResult::Failed(e.to_string()),
        }
    }

    /// Finite linear SNR, or `None` for degenerate and failed trials.
    pub fn snr(&self) -> Option<f64> {
        match self {
            TrialResult::Estimate { snr, .. } => *snr,
            TrialResult::Failed(_) => None,
        }
    }
}

struct TrialOutcome {
    proposed: Vec<TrialResult>,
    ml: TrialResult,
}

/// One estimator output of one trial, kept for the optional per-trial dump.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub m: usize,
    pub k: usize,
    pub lambdas: Vec<f64>,
    pub snr_true_db: f64,
    pub trial: usize,
    pub method: Method,
    pub result: TrialResult,
}

pub const TRIALS_CSV_HEADER: &str =
    "m,k,lambdas,snr_true_db,trial,method,sigma_x2_hat,sigma_n2_hat,snr_est_linear,status";

impl TrialRecord {
    pub fn to_csv(&self) -> String {
        let (sx, sn, snr, status) = match &self.result {
            TrialResult::Estimate {
                sigma_x2,
                sigma_n2,
                snr,
            } => (
                fmt_num(*sigma_x2),
                fmt_num(*sigma_n2),
                fmt_opt(*snr),
                if snr.is_some() { "ok" } else { "degenerate" }.to_string(),
            ),
            TrialResult::Failed(msg) => (
                "NA".into(),
                "NA".into(),
                "NA".into(),
                format!("error: {}", msg.replace([',', '\n'], ";")),
            ),
        };
        format!(
            "{},{},{},{},{},{},{sx},{sn},{snr},{status}",
            self.m,
            self.k,
            fmt_lambdas(&self.lambdas),
            fmt_num(self.snr_true_db),
            self.trial,
            self.method.as_str(),
        )
    }
}

/// Aggregated output of a Monte-Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub run: ResolvedRun,
    pub rows: Vec<MetricsRow>,
    /// Filled only when the run asked for per-trial output.
    pub trials: Vec<TrialRecord>,
    /// Trials on which an estimator returned an error.
    pub estimator_errors: usize,
}

fn header_block(command: &str, run: &ResolvedRun) -> String {
    let s = &run.scenario;
    let mut out = String::new();
    let _ = writeln!(out, "# rmt-snr {command}");
    let _ = writeln!(out, "# scenario: {}", s.name);
    let _ = writeln!(out, "# correlation: {}", json(&s.correlation));
    let _ = writeln!(out, "# signal: {}", json(&s.signal));
    let _ = writeln!(out, "# noise: {}", json(&s.noise));
    let _ = writeln!(out, "# swept: {}", json(&s.swept));
    let dims: Vec<String> = run.dims.iter().map(|(m, k)| format!("{m}x{k}")).collect();
    let _ = writeln!(out, "# dims: {}", dims.join(" "));
    let grids: Vec<String> = run.lambda_grids.iter().map(|g| fmt_lambdas(g)).collect();
    let _ = writeln!(out, "# lambda_grids: {}", grids.join(" "));
    let snr: Vec<String> = run.snr_points_db.iter().map(|v| format!("{v}")).collect();
    let _ = writeln!(out, "# snr_points_db: {}", snr.join(" "));
    let _ = writeln!(out, "# trials: {}", run.trials);
    let _ = writeln!(out, "# master_seed: {}", run.master_seed);
    out
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("plain data serializes")
}

impl RunReport {
    /// Metrics CSV preceded by a `#` comment block recording the configuration.
    /// Thread count and paths are left out so reruns compare byte for byte.
    pub fn to_csv(&self) -> String {
        let mut out = header_block(&self.command, &self.run);
        out.push_str(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.to_csv());
            out.push('\n');
        }
        out
    }

    pub fn trials_csv(&self) -> String {
        let mut out = header_block(&self.command, &self.run);
        out.push_str(TRIALS_CSV_HEADER);
        out.push('\n');
        for t in &self.trials {
            out.push_str(&t.to_csv());
            out.push('\n');
        }
        out
    }

    /// Rows of one method at one `(M, K)`; proposed rows also filter on the grid.
    pub fn select(&self, m: usize, k: usize, method: Method, lambdas: &[f64]) -> Vec<&MetricsRow> {
        self.rows
            .iter()
            .filter(|r| r.m == m && r.k == k && r.method == method)
            .filter(|r| method == Method::Ml || r.lambdas == lambdas)
            .collect()
    }
}

fn true_snr(scenario: &Scenario, snr_db: f64) -> Result<f64> {
    let (signal, noise) = scenario.distributions_at(snr_db);
    let snr = signal.implied_variance() / noise.implied_variance();
    if snr.is_finite() && snr > 0.0 {
        Ok(snr)
    } else {
        Err(Error::Config(format!(
            "SNR point {snr_db} dB gives signal/noise variances without a finite positive ratio"
        )))
    }
}

fn metrics_row(
    run: &ResolvedRun,
    (m, k): (usize, usize),
    lambdas: Vec<f64>,
    method: Method,
    snr: f64,
    estimates: &[Option<f64>],
) -> MetricsRow {
    let s = point_stats(snr, estimates);
    let snr_db = 10.0 * snr.log10();
    MetricsRow {
        scenario: run.scenario.name.clone(),
        m,
        k,
        lambdas,
        snr_true_db: snr_db,
        method,
        trials: estimates.len(),
        trials_degenerate: s.degenerate,
        mean_est_db: s.mean_est_db,
        bias_db: s.mean_est_db.map(|v| v - snr_db),
        nmse_db: s.nmse_db,
        norm_err_mean: s.norm_err_mean,
        norm_err_var: s.norm_err_var,
    }
}

fn execute(command: &str, run: ResolvedRun) -> Result<RunReport> {
    check_stream_capacity(&run)?;
    let pool = thread_pool(run.parallelism)?;
    let truths: Vec<f64> = run
        .snr_points_db
        .iter()
        .map(|&p| true_snr(&run.scenario, p))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut records = Vec::new();
    let mut estimator_errors = 0;
    for (d, &(m, k)) in run.dims.iter().enumerate() {
        let spec = Arc::new(build_correlation(&CorrelationSpec::new(
            run.scenario.correlation,
            m,
            run.master_seed,
        ))?);
        let tasks: Vec<(usize, usize)> = (0..run.snr_points_db.len())
            .flat_map(|p| (0..run.trials).map(move |t| (p, t)))
            .collect();
        let outcomes: Vec<TrialOutcome> = pool.install(|| {
            tasks
                .par_iter()
                .map(|&(p, t)| {
                    let stream = trial_stream(d, p, t);
                    match draw_instance(
                        &run.scenario,
                        &spec,
                        k,
                        run.snr_points_db[p],
                        run.master_seed,
                        stream,
                    ) {
                        Ok((truth, model)) => TrialOutcome {
                            proposed: run
                                .lambda_grids
                                .iter()
                                .map(|g| TrialResult::from_result(estimate_snr(&model, g)))
                                .collect(),
                            ml: TrialResult::from_result(ml_baseline(&model, truth.sigma_x2)),
                        },
                        Err(e) => TrialOutcome {
                            proposed: vec![
                                TrialResult::Failed(e.to_string());
                                run.lambda_grids.len()
                            ],
                            ml: TrialResult::Failed(e.to_string()),
                        },
                    }
                })
                .collect()
        });
        for o in &outcomes {
            estimator_errors += o
                .proposed
                .iter()
                .chain(std::iter::once(&o.ml))
                .filter(|r| matches!(r, TrialResult::Failed(_)))
                .count();
        }
        for (p, chunk) in outcomes.chunks(run.trials).enumerate() {
            let snr = truths[p];
            for (g, grid) in run.lambda_grids.iter().enumerate() {
                let est: Vec<Option<f64>> = chunk.iter().map(|o| o.proposed[g].snr()).collect();
                rows.push(metrics_row(
                    &run,
                    (m, k),
                    grid.clone(),
                    Method::Proposed,
                    snr,
                    &est,
                ));
            }
            let est: Vec<Option<f64>> = chunk.iter().map(|o| o.ml.snr()).collect();
            rows.push(metrics_row(&run, (m, k), Vec::new(), Method::Ml, snr, &est));
            if run.dump_trials {
                let snr_true_db = 10.0 * snr.log10();
                for (t, o) in chunk.iter().enumerate() {
                    for (g, grid) in run.lambda_grids.iter().enumerate() {
                        records.push(TrialRecord {
                            m,
                            k,
                            lambdas: grid.clone(),
                            snr_true_db,
                            trial: t,
                            method: Method::Proposed,
                            result: o.proposed[g].clone(),
                        });
                    }
                    records.push(TrialRecord {
                        m,
                        k,
                        lambdas: Vec::new(),
                        snr_true_db,
                        trial: t,
                        method: Method::Ml,
                        result: o.ml.clone(),
                    });
                }
            }
        }
    }
    Ok(RunReport {
        command: command.to_string(),
        run,
        rows,
        trials: records,
        estimator_errors,
    })
}

/// Both estimators on `trials` independent `(Wbar, x0, n)` draws per SNR point.
pub fn run_scenario(config: &RunConfig) -> Result<RunReport> {
    execute("scenario", config.resolve()?)
}

/// Scenario run over several `(M, K)`; defaults to [`DIM_SWEEP_DEFAULT`].
pub fn dim_sweep(config: &RunConfig) -> Result<RunReport> {
    let mut config = config.clone();
    if config.dims.is_none() {
        config.dims = Some(DIM_SWEEP_DEFAULT.to_vec());
    }
    execute("dim-sweep", config.resolve()?)
}

/// Scenario run over every regularization grid of the scenario. All grids
/// see the same draws, so differences between them are paired.
pub fn lambda_sensitivity(config: &RunConfig) -> Result<RunReport> {
    execute("lambda-sensitivity", config.resolve()?)
}

/// Monte-Carlo mean of the ridge cost against its deterministic equivalent at one `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremRow {
    pub lambda: f64,
    pub t: f64,
    pub delta: f64,
    pub xi1: f64,
    pub xi2: f64,
    pub mc_mean_phi: f64,
    /// Standard error of `mc_mean_phi`.
    pub mc_std_err: f64,
    pub alpha: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub run: ResolvedRun,
    pub sigma_x2: f64,
    pub sigma_n2: f64,
    pub draws: usize,
    pub rows: Vec<TheoremRow>,
}

pub const THEOREM_CSV_HEADER: &str =
    "lambda,t,delta,xi1,xi2,mc_mean_phi,mc_std_err,alpha,rel_error";

impl TheoremReport {
    pub fn max_rel_error(&self) -> f64 {
        self.rows.iter().map(|r| r.rel_error).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = header_block("verify-theorem", &self.run);
        let _ = writeln!(out, "# sigma_x2: {}", self.sigma_x2);
        let _ = writeln!(out, "# sigma_n2: {}", self.sigma_n2);
        out.push_str(THEOREM_CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let fields = [
                r.lambda,
                r.t,
                r.delta,
                r.xi1,
                r.xi2,
                r.mc_mean_phi,
                r.mc_std_err,
                r.alpha,
                r.rel_error,
            ];
            let line: Vec<String> = fields.iter().map(|v| fmt_num(*v)).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Fixes one `Wbar` and averages the ridge cost over `trials` draws of
/// `(x0, n)` at every `lambda` of the first grid, at the first SNR point and
/// the first `(M, K)`.
pub fn verify_theorem(config: &RunConfig) -> Result<TheoremReport> {
    let run = config.resolve()?;
    let (m, k) = run.dims[0];
    let lambdas = run.lambda_grids[0].clone();
    let (signal, noise) = run.scenario.distributions_at(run.snr_points_db[0]);
    let (sigma_x2, sigma_n2) = (signal.implied_variance(), noise.implied_variance());
    let spec = build_correlation(&CorrelationSpec::new(
        run.scenario.correlation,
        m,
        run.master_seed,
    ))?;
    let wbar = sample_wbar(&mut rng_stream(run.master_seed, FIXED_DESIGN_STREAM), m, k);
    let w = spec.apply_sqrt(&wbar)?;
    let gram = w.gram();
    let factors: Vec<Cholesky> = lambdas
        .iter()
        .map(|&l| {
            let mut a = gram.clone();
            for i in 0..k {
                a[(i, i)] += l;
            }
            Cholesky::factor(&a)
        })
        .collect::<Result<_>>()?;
    let coeffs: Vec<DeterministicEquivalents> = lambdas
        .iter()
        .map(|&l| coefficients(&spec, k, l))
        .collect::<Result<_>>()?;

    let pool = thread_pool(run.parallelism)?;
    let per_draw: Vec<Vec<f64>> = pool.install(|| {
        (0..run.trials)
            .into_par_iter()
            .map(|d| -> Result<Vec<f64>> {
                let mut rng = rng_stream(run.master_seed, d as u64);
                let truth = sample_truth(&signal, &noise, m, k, &mut rng)?;
                let mut y = w.matvec(&truth.x0)?;
                for (yi, ni) in y.iter_mut().zip(&truth.n) {
                    *yi += ni;
                }
                let wty = w.t_matvec(&y)?;
                lambdas
                    .iter()
                    .zip(&factors)
                    .map(|(&l, chol)| ridge_cost(&w, &y, &chol.solve(&wty)?, l))
                    .collect()
            })
            .collect::<Result<_>>()
    })?;

    let n = run.trials as f64;
    let rows = lambdas
        .iter()
        .zip(&coeffs)
        .enumerate()
        .map(|(j, (&lambda, c))| {
            let mean = per_draw.iter().map(|v| v[j]).sum::<f64>() / n;
            let var = if run.trials > 1 {
                per_draw.iter().map(|v| (v[j] - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            let alpha = c.alpha(sigma_x2, sigma_n2);
            let rel_error = if alpha == 0.0 && mean == 0.0 {
                0.0
            } else {
                (mean - alpha).abs() / alpha.abs()
            };
            TheoremRow {
                lambda,
                t: c.t,
                delta: c.delta,
                xi1: c.xi1,
                xi2: c.xi2,
                mc_mean_phi: mean,
                mc_std_err: (var / n).sqrt(),
                alpha,
                rel_error,
            }
        })
        .collect();
    Ok(TheoremReport {
        run,
        sigma_x2,
        sigma_n2,
        draws: per_draw.len(),
        rows,
    })
}

/// `(||y - W x||^2 + lambda ||x||^2) / K`.
fn ridge_cost(w: &DenseMatrix, y: &[f64], x: &[f64], lambda: f64) -> Result<f64> {
    let fit = w.matvec(x)?;
    let rss: f64 = y.iter().zip(&fit).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((rss + lambda * norm2_sq(x)) / x.len() as f64)
}

/// Reads `y`, `Wbar` and `Psi` and checks that their dimensions agree.
pub fn load_model(y_path: &Path, wbar_path: &Path, psi_path: &Path) -> Result<LinearModel> {
    let name = |p: &Path| p.display().to_string();
    let y = parse_vector(&read_text(y_path)?, &name(y_path))?;
    let wbar = parse_matrix(&read_text(wbar_path)?, &name(wbar_path))?;
    let psi = parse_psi(&read_text(psi_path)?, &name(psi_path))?;
    if y.len() != wbar.rows() {
        return Err(Error::Dimension(format!(
            "y has {} entries but Wbar is {}x{}",
            y.len(),
            wbar.rows(),
            wbar.cols()
        )));
    }
    if psi.dim() != wbar.rows() {
        return Err(Error::Dimension(format!(
            "Psi is {d}x{d} but Wbar has {} rows",
            wbar.rows(),
            d = psi.dim()
        )));
    }
    LinearModel::new(wbar, Arc::new(psi.into_spectrum()?), y)
}

pub fn estimate_from_files(
    y_path: &Path,
    wbar_path: &Path,
    psi_path: &Path,
    lambdas: &[f64],
) -> Result<SnrEstimate> {
    estimate_snr(&load_model(y_path, wbar_path, psi_path)?, lambdas)
}

/// Machine-readable form of an [`SnrEstimate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateReport {
    pub sigma_x2_hat: f64,
    pub sigma_n2_hat: f64,
    /// `finite`, `infinite` (zero noise) or `undefined` (both zero).
    pub status: &'static str,
    pub snr_linear: Option<f64>,
    pub snr_db: Option<f64>,
    pub lambdas: Vec<f64>,
    pub fit_residual_norm: f64,
    pub residual: Vec<f64>,
    pub fixed_point_iters: Vec<usize>,
}

impl EstimateReport {
    pub fn new(est: &SnrEstimate, lambdas: &[f64]) -> Self {
        use crate::estimator::Snr;
        let status = match est.snr {
            Snr::Finite(_) => "finite",
            Snr::Infinite => "infinite",
            Snr::Undefined => "undefined",
        };
        let finite = est.snr_linear().filter(|v| v.is_finite());
        Self {
            sigma_x2_hat: est.sigma_x2,
            sigma_n2_hat: est.sigma_n2,
            status,
            snr_linear: finite,
            snr_db: finite.map(|v| 10.0 * v.log10()),
            lambdas: lambdas.to_vec(),
            fit_residual_norm: est.diagnostics.fit_residual_norm,
            residual: est.diagnostics.residual.clone(),
            fixed_point_iters: est.diagnostics.fixed_point_iters.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| self.status.to_string(), |v| format!("{v:.6}"));
        let mut out = String::new();
        let _ = writeln!(out, "sigma_x2_hat  {:.6e}", self.sigma_x2_hat);
        let _ = writeln!(out, "sigma_n2_hat  {:.6e}", self.sigma_n2_hat);
        let _ = writeln!(out, "snr_linear    {}", opt(self.snr_linear));
        let _ = writeln!(out, "snr_db        {}", opt(self.snr_db));
        let _ = writeln!(out, "fit_residual  {:.3e}", self.fit_residual_norm);
        let iters: Vec<String> = self
            .fixed_point_iters
            .iter()
            .map(|i| i.to_string())
            .collect();
        let _ = writeln!(out, "fp_iterations {}", iters.join(" "));
        out
    }
}

/// Ground truth and expected estimate written next to a dumped instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DumpManifest {
    pub scenario: String,
    pub m: usize,
    pub k: usize,
    pub snr_db: f64,
    pub master_seed: u64,
    pub sigma_x2_true: f64,
    pub sigma_n2_true: f64,
    pub estimate: EstimateReport,
}

pub const DUMP_FILES: [&str; 4] = ["y.csv", "wbar.csv", "psi.csv", "expected.json"];

/// Writes the first trial of the first SNR point and `(M, K)` of a run as
/// `y.csv`, `wbar.csv`, `psi.csv`, plus `expected.json` with the estimate
/// for the first grid.
pub fn dump_instance(config: &RunConfig, dir: &Path) -> Result<(DumpManifest, Vec<PathBuf>)> {
    let run = config.resolve()?;
    let (m, k) = run.dims[0];
    let snr_db = run.snr_points_db[0];
    let spec = Arc::new(build_correlation(&CorrelationSpec::new(
        run.scenario.correlation,
        m,
        run.master_seed,
    ))?);
    let (truth, model) = draw_instance(
        &run.scenario,
        &spec,
        k,
        snr_db,
        run.master_seed,
        trial_stream(0, 0, 0),
    )?;
    let psi = if spec.is_diagonal() {
        PsiInput::Diagonal(spec.eigenvalues().to_vec())
    } else {
        PsiInput::Dense(correlation_matrix(run.scenario.correlation, m)?)
    };
    let lambdas = &run.lambda_grids[0];
    let estimate = estimate_snr(&model, lambdas)?;
    let manifest = DumpManifest {
        scenario: run.scenario.name.clone(),
        m,
        k,
        snr_db,
        master_seed: run.master_seed,
        sigma_x2_true: truth.sigma_x2,
        sigma_n2_true: truth.sigma_n2,
        estimate: EstimateReport::new(&estimate, lambdas),
    };
    let paths: Vec<PathBuf> = DUMP_FILES.iter().map(|f| dir.join(f)).collect();
    write_text(&paths[0], &format_vector(model.y()))?;
    write_text(&paths[1], &format_matrix(model.wbar()))?;
    write_text(&paths[2], &format_psi(&psi))?;
    write_text(
        &paths[3],
        &serde_json::to_string_pretty(&manifest).expect("plain data serializes"),
    )?;
    Ok((manifest, paths))
}
