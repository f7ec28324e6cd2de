//! Command-line front end: radius sweeps, check suites, refinement ladders.
//!
//! Configuration is a flat `key = value` file; command-line flags override it.

mod args;
mod checks;
mod sweep;

use std::path::PathBuf;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::solver::GridSpec;

pub use args::{run, Cli, Command};
pub use checks::{run_checks, CheckEntry, CheckReport};
pub use sweep::{
    compute_rows, render, run_sweep, write_atomic, RowDiagnostics, StabilityFlag, SweepOutput, SweepRow,
};

/// Process exit statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    CheckFailure = 1,
    ConfigError = 2,
    SolverNonConvergence = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn for_error(e: &Error) -> Self {
        match e {
            Error::EigenNonConvergence { .. } | Error::QuadratureNonConvergence { .. } => {
                ExitStatus::SolverNonConvergence
            }
            _ => ExitStatus::ConfigError,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Identities,
    Hardy,
    Instability,
    Weyl,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Identities, Check::Hardy, Check::Instability, Check::Weyl];

    pub fn name(self) -> &'static str {
        match self {
            Check::Identities => "identities",
            Check::Hardy => "hardy",
            Check::Instability => "instability",
            Check::Weyl => "weyl",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "identities" => Ok(Check::Identities),
            "hardy" => Ok(Check::Hardy),
            "instability" => Ok(Check::Instability),
            "weyl" => Ok(Check::Weyl),
            other => Err(Error::Config(format!("unknown check suite `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

/// Grids used for `Z >= 1` rows: nested geometric ladders ending at each `r_min`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderConfig {
    pub r_mins: Vec<f64>,
    pub r_max: f64,
    pub log_step: f64,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig {
            r_mins: vec![1e-2, 1e-3, 1e-4, 1e-5],
            r_max: 30.0,
            log_step: 0.15,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    /// Compact radii in units of `a0`, ascending.
    pub r_values: Vec<f64>,
    pub grid: GridSpec,
    pub l_max: u32,
    pub checks: Vec<Check>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub seed: u64,
    /// Concurrent sweep points; `None` uses every core. Not echoed in output,
    /// which is independent of it.
    #[serde(skip)]
    pub workers: Option<usize>,
    pub ladder: LadderConfig,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            r_values: vec![0.05, 0.1, 0.2],
            grid: GridSpec::new(1e-3, 40.0, 600, 32).expect("reference grid is valid"),
            l_max: 2,
            checks: Vec::new(),
            output_path: None,
            output_format: OutputFormat::Csv,
            seed: 0,
            workers: None,
            ladder: LadderConfig::default(),
        }
    }
}

/// `steps` equally spaced values from `lo` to `hi` inclusive.
pub fn radius_range(lo: f64, hi: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::Config("steps must be at least 1".into()));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..steps)
        .map(|i| lo + (hi - lo) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn parse_list<T>(value: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(f).collect()
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{}`", value.trim())))
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.r_values.is_empty() {
            return Err(Error::Config("r_values must not be empty".into()));
        }
        if self.r_values.iter().any(|&r| !(r > 0.0 && r.is_finite())) {
            return Err(Error::Config("r_values must be positive and finite".into()));
        }
        if self.r_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("r_values must be strictly ascending".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::Config("workers must be at least 1".into()));
        }
        if self.ladder.r_mins.is_empty() || !(self.ladder.log_step > 0.0) {
            return Err(Error::Config("ladder needs r_min levels and a positive log step".into()));
        }
        self.grid.validated().map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    /// Applies `key = value` lines. Blank lines, `#`/`;` comments and `[section]`
    /// headers are ignored; `r_min`/`r_max`/`steps` describe the radius range.
    pub fn apply_ini(&mut self, text: &str) -> Result<()> {
        let mut range: (Option<f64>, Option<f64>, Option<usize>) = (None, None, None);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') || line.starts_with('[') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim().replace('-', "_");
            let value = value.trim();
            match key.as_str() {
                "r_values" => self.r_values = parse_list(value, |s| parse_num("r_values", s))?,
                "r_min" => range.0 = Some(parse_num(&key, value)?),
                "r_max" => range.1 = Some(parse_num(&key, value)?),
                "steps" => range.2 = Some(parse_num(&key, value)?),
                "grid_r_min" => self.grid.r_min = parse_num(&key, value)?,
                "grid_r_max" => self.grid.r_max = parse_num(&key, value)?,
                "grid_nr" => self.grid.n_r = parse_num(&key, value)?,
                "grid_nx4" => self.grid.n_x4 = parse_num(&key, value)?,
                "grid_stretch" => self.grid.stretch = parse_num(&key, value)?,
                "l_max" => self.l_max = parse_num(&key, value)?,
                "checks" | "check" => self.checks = parse_list(value, Check::parse)?,
                "out" | "output" => self.output_path = Some(PathBuf::from(value)),
                "format" => self.output_format = OutputFormat::parse(value)?,
                "seed" => self.seed = parse_num(&key, value)?,
                "workers" => self.workers = Some(parse_num(&key, value)?),
                "ladder_r_min" => self.ladder.r_mins = parse_list(value, |s| parse_num("ladder_r_min", s))?,
                "ladder_r_max" => self.ladder.r_max = parse_num(&key, value)?,
                "ladder_log_step" => self.ladder.log_step = parse_num(&key, value)?,
                other => return Err(Error::Config(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        self.apply_range(range.0, range.1, range.2)
    }

    pub(crate) fn apply_range(&mut self, lo: Option<f64>, hi: Option<f64>, steps: Option<usize>) -> Result<()> {
        match (lo, hi, steps) {
            (None, None, None) => Ok(()),
            (Some(lo), Some(hi), steps) => {
                self.r_values = radius_range(lo, hi, steps.unwrap_or(2))?;
                Ok(())
            }
            (Some(lo), None, None | Some(1)) => {
                self.r_values = vec![lo];
                Ok(())
            }
            _ => Err(Error::Config("radius range needs r_min and r_max".into())),
        }
    }

    pub fn from_ini(text: &str) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        cfg.apply_ini(text)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ini_overrides_defaults() {
        let cfg = SweepConfig::from_ini(
            "# sweep\n[sweep]\nr_min = 0.05\nr_max = 0.2\nsteps = 4\ngrid_nr = 100\ngrid-nx4 = 16\nformat = json\nchecks = hardy, weyl\nseed = 7\n",
        )
        .unwrap();
        assert_eq!(cfg.r_values.len(), 4);
        assert!((cfg.r_values[3] - 0.2).abs() < 1e-15);
        assert_eq!(cfg.grid.n_r, 100);
        assert_eq!(cfg.grid.n_x4, 16);
        assert_eq!(cfg.output_format, OutputFormat::Json);
        assert_eq!(cfg.checks, vec![Check::Hardy, Check::Weyl]);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(SweepConfig::from_ini("r_values = 0.2, 0.1").is_err());
        assert!(SweepConfig::from_ini("r_values = -0.1").is_err());
        assert!(SweepConfig::from_ini("r_values =").is_err());
        assert!(SweepConfig::from_ini("grid_nx4 = 9").is_err());
        assert!(SweepConfig::from_ini("colour = blue").is_err());
        assert!(SweepConfig::from_ini("just text").is_err());
        assert!(SweepConfig::from_ini("format = xml").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(ExitStatus::Success.code(), 0);
        assert_eq!(ExitStatus::CheckFailure.code(), 1);
        assert_eq!(ExitStatus::ConfigError.code(), 2);
        assert_eq!(ExitStatus::SolverNonConvergence.code(), 3);
        let e = Error::EigenNonConvergence {
            residual: 1.0,
            tolerance: 0.1,
        };
        assert_eq!(ExitStatus::for_error(&e), ExitStatus::SolverNonConvergence);
    }
}
