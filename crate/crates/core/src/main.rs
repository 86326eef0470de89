use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use rmt_snr::harness::io::{read_text, write_text};
use rmt_snr::harness::{
    dim_sweep, dump_instance, estimate_from_files, lambda_sensitivity, parse_list, parse_snr_range,
    run_scenario, summarize, verify_theorem, EstimateReport, Method, Parallelism, RunConfig,
    RunReport, ScenarioRef,
};
use rmt_snr::scenarios::DEFAULT_LAMBDAS;
use rmt_snr::{Error, Result};

/// Blind SNR estimation for correlated linear models.
#[derive(Parser)]
#[command(name = "rmt-snr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the SNR of one observation stored in CSV files.
    Estimate {
        /// Observation vector y.
        #[arg(long)]
        y: PathBuf,
        /// Design matrix Wbar (M rows, K columns).
        #[arg(long)]
        wbar: PathBuf,
        /// Correlation matrix Psi, dense or as a `diag:` row.
        #[arg(long)]
        psi: PathBuf,
        /// Regularization grid, comma-separated.
        #[arg(long)]
        lambdas: Option<String>,
        /// Print JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Monte-Carlo run of a catalog scenario.
    Scenario {
        /// Catalog name (a, b, c, d, g, h, i, fig1).
        name: Option<String>,
        #[command(flatten)]
        run: RunArgs,
        /// Write one instance (y, Wbar, Psi, expected estimate) to DIR and exit.
        #[arg(long, value_name = "DIR")]
        dump: Option<PathBuf>,
    },
    /// Compare the Monte-Carlo mean of the ridge cost with its deterministic equivalent.
    VerifyTheorem {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run one scenario over several (M, K).
    DimSweep {
        #[command(flatten)]
        run: RunArgs,
        /// Dimensions as MxK, comma-separated.
        #[arg(long)]
        dims: Option<String>,
    },
    /// Run one scenario under each of its regularization grids.
    LambdaSensitivity {
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Regularization grid, comma-separated.
    #[arg(long)]
    lambdas: Option<String>,
    /// SNR points as start:stop:step or a comma list.
    #[arg(long = "snr-db", allow_hyphen_values = true)]
    snr_db: Option<String>,
    /// Output CSV path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads: a count or `auto`.
    #[arg(long)]
    parallelism: Option<String>,
    /// Also write per-trial estimates next to the output.
    #[arg(long)]
    dump_trials: bool,
}

impl RunArgs {
    fn config(&self, default_scenario: &str, name: Option<&str>) -> Result<RunConfig> {
        let mut config = match &self.config {
            Some(path) => RunConfig::from_json(&read_text(path)?)?,
            None => RunConfig::for_scenario(default_scenario),
        };
        if let Some(name) = name {
            config.scenario = ScenarioRef::Name(name.to_string());
        }
        if let Some(t) = self.trials {
            config.trials = t;
        }
        if let Some(s) = self.seed {
            config.master_seed = s;
        }
        if let Some(l) = &self.lambdas {
            config.lambda_grid = Some(parse_list(l)?);
        }
        if let Some(s) = &self.snr_db {
            config.snr_points_db = Some(parse_snr_range(s)?);
        }
        if let Some(out) = &self.out {
            config.output_path = Some(out.clone());
        }
        if let Some(p) = &self.parallelism {
            config.parallelism = p.parse::<Parallelism>()?;
        }
        config.dump_trials |= self.dump_trials;
        Ok(config)
    }
}

fn parse_dims(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .map(|d| {
            let (m, k) = d
                .trim()
                .split_once(['x', 'X'])
                .ok_or_else(|| Error::Config(format!("dimension '{d}' is not MxK")))?;
            let parse = |v: &str| {
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Config(format!("dimension '{d}' is not MxK")))
            };
            Ok((parse(m)?, parse(k)?))
        })
        .collect()
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn trials_path(out: &Path) -> PathBuf {
    let mut name = out.file_stem().unwrap_or_default().to_os_string();
    name.push(".trials.csv");
    out.with_file_name(name)
}

fn finish_run(config: &RunConfig, report: &RunReport) -> Result<()> {
    let out = config.output_path.as_deref();
    emit(&report.to_csv(), out)?;
    if config.dump_trials {
        match out {
            Some(p) => write_text(&trials_path(p), &report.trials_csv())?,
            None => print!("{}", report.trials_csv()),
        }
    }
    let mut shapes: Vec<(usize, usize, Vec<f64>)> = Vec::new();
    for r in report.rows.iter().filter(|r| r.method == Method::Proposed) {
        if !shapes
            .iter()
            .any(|(m, k, l)| (*m, *k, l) == (r.m, r.k, &r.lambdas))
        {
            shapes.push((r.m, r.k, r.lambdas.clone()));
        }
    }
    let fmt = |v: Option<f64>| v.map_or("NA".to_string(), |v| format!("{v:.4}"));
    for (m, k, lambdas) in &shapes {
        let rows: Vec<_> = report
            .select(*m, *k, Method::Proposed, lambdas)
            .into_iter()
            .chain(report.select(*m, *k, Method::Ml, &[]))
            .cloned()
            .collect();
        for method in [Method::Proposed, Method::Ml] {
            let s = summarize(&rows, method);
            eprintln!(
                "{m}x{k} lambdas={:?} {:<8} var={} mean_err={} max|bias|dB={} degenerate={}",
                lambdas,
                method.as_str(),
                fmt(s.avg_norm_err_var),
                fmt(s.avg_norm_err_mean),
                fmt(s.max_abs_bias_db),
                s.trials_degenerate
            );
        }
    }
    if report.estimator_errors > 0 {
        eprintln!("estimator errors: {}", report.estimator_errors);
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Estimate {
            y,
            wbar,
            psi,
            lambdas,
            json,
        } => {
            let grid = match lambdas {
                Some(l) => parse_list(&l)?,
                None => DEFAULT_LAMBDAS.to_vec(),
            };
            let est = estimate_from_files(&y, &wbar, &psi, &grid)?;
            let report = EstimateReport::new(&est, &grid);
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{}", report.to_text());
            }
            Ok(())
        }
        Command::Scenario { name, run, dump } => {
            let config = run.config("a", name.as_deref())?;
            if let Some(dir) = dump {
                let (manifest, paths) = dump_instance(&config, &dir)?;
                for p in paths {
                    eprintln!("wrote {}", p.display());
                }
                print!("{}", manifest.estimate.to_text());
                return Ok(());
            }
            finish_run(&config, &run_scenario(&config)?)
        }
        Command::VerifyTheorem { run } => {
            let config = run.config("fig1", None)?;
            let report = verify_theorem(&config)?;
            emit(&report.to_csv(), config.output_path.as_deref())?;
            eprintln!(
                "draws={} max relative error={:.3e}",
                report.draws,
                report.max_rel_error()
            );
            Ok(())
        }
        Command::DimSweep { run, dims } => {
            let mut config = run.config("a", None)?;
            if let Some(d) = dims {
                config.dims = Some(parse_dims(&d)?);
            }
            finish_run(&config, &dim_sweep(&config)?)
        }
        Command::LambdaSensitivity { run } => {
            let config = run.config("i", None)?;
            finish_run(&config, &lambda_sensitivity(&config)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
