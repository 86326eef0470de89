//! Run configuration shared by the CLI and the JSON config file.

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::validate_lambdas;
use crate::scenarios::{scenario_catalog, Scenario};

/// A catalog name or a fully spelled-out scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Name(String),
    Inline(Box<Scenario>),
}

impl ScenarioRef {
    pub fn resolve(&self) -> Result<Scenario> {
        match self {
            ScenarioRef::Name(name) => scenario_catalog(name),
            ScenarioRef::Inline(s) => Ok((**s).clone()),
        }
    }
}

/// Worker-thread count; `Auto` lets the pool pick one per core.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Auto,
    Threads(usize),
}

impl Parallelism {
    /// Thread count as understood by rayon (0 = automatic).
    pub fn num_threads(self) -> usize {
        match self {
            Parallelism::Auto => 0,
            Parallelism::Threads(n) => n,
        }
    }
}

impl FromStr for Parallelism {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Parallelism::Auto);
        }
        match s.parse::<usize>() {
            Ok(n) if n > 0 => Ok(Parallelism::Threads(n)),
            _ => Err(Error::Config(format!(
                "parallelism must be a positive integer or 'auto', got '{s}'"
            ))),
        }
    }
}

impl Serialize for Parallelism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Parallelism::Auto => s.serialize_str("auto"),
            Parallelism::Threads(n) => s.serialize_u64(*n as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Parallelism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Count(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Count(0) => Err(serde::de::Error::custom("parallelism must be positive")),
            Raw::Count(n) => Ok(Parallelism::Threads(n as usize)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Everything a Monte-Carlo run needs. Unset optional fields fall back to
/// the scenario's catalog values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioRef,
    pub trials: usize,
    pub master_seed: u64,
    pub lambda_grid: Option<Vec<f64>>,
    pub snr_points_db: Option<Vec<f64>>,
    pub dims: Option<Vec<(usize, usize)>>,
    pub output_path: Option<PathBuf>,
    pub parallelism: Parallelism,
    pub dump_trials: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioRef::Name("a".into()),
            trials: 1000,
            master_seed: 1,
            lambda_grid: None,
            snr_points_db: None,
            dims: None,
            output_path: None,
            parallelism: Parallelism::Auto,
            dump_trials: false,
        }
    }
}

/// A [`RunConfig`] with every default filled in from its scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedRun {
    pub scenario: Scenario,
    pub trials: usize,
    pub master_seed: u64,
    pub dims: Vec<(usize, usize)>,
    pub lambda_grids: Vec<Vec<f64>>,
    pub snr_points_db: Vec<f64>,
    pub parallelism: Parallelism,
    pub dump_trials: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config: {e}")))
    }

    pub fn for_scenario(name: &str) -> Self {
        Self {
            scenario: ScenarioRef::Name(name.to_string()),
            ..Self::default()
        }
    }

    /// Validates the config and applies scenario defaults. An explicit
    /// `lambda_grid` replaces all of the scenario's grids.
    pub fn resolve(&self) -> Result<ResolvedRun> {
        let scenario = self.scenario.resolve()?;
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        scenario.signal.validate()?;
        scenario.noise.validate()?;
        let lambda_grids = match &self.lambda_grid {
            Some(grid) => vec![grid.clone()],
            None => scenario.lambda_grids.clone(),
        };
        if lambda_grids.is_empty() {
            return Err(Error::Config("no regularization grid".into()));
        }
        for grid in &lambda_grids {
            validate_lambdas(grid).map_err(|e| Error::Config(e.to_string()))?;
        }
        let snr_points_db = self
            .snr_points_db
            .clone()
            .unwrap_or_else(|| scenario.snr_points_db.clone());
        if snr_points_db.is_empty() || snr_points_db.iter().any(|v| !v.is_finite()) {
            return Err(Error::Config(
                "SNR points must be a nonempty list of finite values".into(),
            ));
        }
        let dims = self.dims.clone().unwrap_or_else(|| scenario.dims.clone());
        if dims.is_empty() {
            return Err(Error::Config("dimension list is empty".into()));
        }
        if let Some(&(m, k)) = dims.iter().find(|(m, k)| *m == 0 || *k == 0) {
            return Err(Error::Config(format!("invalid dimensions {m}x{k}")));
        }
        Ok(ResolvedRun {
            scenario,
            trials: self.trials,
            master_seed: self.master_seed,
            dims,
            lambda_grids,
            snr_points_db,
            parallelism: self.parallelism,
            dump_trials: self.dump_trials,
        })
    }
}

/// Parses `a:b:step` (inclusive of `b` up to rounding) or a comma list.
pub fn parse_snr_range(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse SNR range '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 1 {
        return parse_list(s);
    }
    if parts.len() != 3 {
        return Err(bad());
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    let (a, b, step) = (nums[0], nums[1], nums[2]);
    if !(step.is_finite() && step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
        return Err(bad());
    }
    let n = ((b - a) / step + 1e-9).floor() as usize + 1;
    if n > 100_000 {
        return Err(bad());
    }
    Ok((0..n).map(|i| a + step * i as f64).collect())
}

/// Comma-separated floats.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|p| {
            let p = p.trim();
            p.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Config(format!("'{p}' is not a finite number")))
        })
        .collect()
}
