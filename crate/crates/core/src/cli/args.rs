//! Flag parsing and subcommand dispatch.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::{run_checks, run_sweep, Check, ExitStatus, OutputFormat, SweepConfig};
use crate::error::{Error, Result};
use crate::potential::{critical_radius_physical, PotentialSpec, BOHR_RADIUS_M, CRITICAL_RADIUS};
use crate::solver::{instability_refinement, refinement_ladder};

#[derive(Debug, Parser)]
#[command(name = "compact-hydrogen", version, about = "Hydrogen on R^3 x S^1: sweeps, checks and refinement ladders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ground energies and bound-state counts over a range of compact radii.
    Sweep(ConfigArgs),
    /// Identity and property suites; exits with status 1 on any failure.
    Check(ConfigArgs),
    /// Ground energies on nested grids with shrinking inner cutoff.
    Ladder(LadderArgs),
    /// Physical constants and the critical radius.
    Constants,
}

#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// Flat `key = value` configuration file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Smallest compact radius of the sweep (a0).
    #[arg(long)]
    pub r_min: Option<f64>,
    /// Largest compact radius of the sweep (a0).
    #[arg(long)]
    pub r_max: Option<f64>,
    /// Number of radii from r-min to r-max inclusive.
    #[arg(long)]
    pub steps: Option<usize>,
    /// Explicit comma-separated radii; replaces the range.
    #[arg(long, value_delimiter = ',')]
    pub r_values: Option<Vec<f64>>,
    #[arg(long)]
    pub grid_r_min: Option<f64>,
    #[arg(long)]
    pub grid_r_max: Option<f64>,
    #[arg(long)]
    pub grid_nr: Option<usize>,
    #[arg(long)]
    pub grid_nx4: Option<usize>,
    #[arg(long)]
    pub l_max: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check suites: identities, hardy, instability, weyl.
    #[arg(long, value_delimiter = ',')]
    pub check: Option<Vec<String>>,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Args)]
pub struct LadderArgs {
    /// Compact radius (a0).
    #[arg(long)]
    pub radius: f64,
    /// Inner cutoffs, one per level.
    #[arg(long, value_delimiter = ',', default_value = "1e-2,1e-3,1e-4,1e-5")]
    pub r_mins: Vec<f64>,
    #[arg(long, default_value_t = 30.0)]
    pub grid_r_max: f64,
    #[arg(long, default_value_t = 0.15)]
    pub log_step: f64,
}

impl ConfigArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<SweepConfig> {
        let mut cfg = SweepConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read `{}`: {e}", path.display())))?;
            cfg.apply_ini(&text)?;
        }
        cfg.apply_range(self.r_min, self.r_max, self.steps)?;
        if let Some(v) = &self.r_values {
            cfg.r_values = v.clone();
        }
        if let Some(v) = self.grid_r_min {
            cfg.grid.r_min = v;
        }
        if let Some(v) = self.grid_r_max {
            cfg.grid.r_max = v;
        }
        if let Some(v) = self.grid_nr {
            cfg.grid.n_r = v;
        }
        if let Some(v) = self.grid_nx4 {
            cfg.grid.n_x4 = v;
        }
        if let Some(v) = self.l_max {
            cfg.l_max = v;
        }
        if let Some(v) = &self.out {
            cfg.output_path = Some(v.clone());
        }
        if let Some(v) = &self.format {
            cfg.output_format = OutputFormat::parse(v)?;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = &self.check {
            cfg.checks = v.iter().map(|s| Check::parse(s)).collect::<Result<_>>()?;
        }
        if self.workers.is_some() {
            cfg.workers = self.workers;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn sweep(args: &ConfigArgs) -> Result<ExitStatus> {
    let cfg = args.resolve()?;
    let out = run_sweep(&cfg)?;
    if cfg.output_path.is_none() {
        print!("{}", out.rendered);
    }
    if let Some(e) = out.write_error {
        eprintln!("error: {e}");
        return Ok(ExitStatus::ConfigError);
    }
    for r in out.rows.iter().filter(|r| r.error.is_some()) {
        eprintln!("R = {}: {}", r.radius, r.error.as_deref().unwrap_or_default());
    }
    if out.has_solver_failure() {
        return Ok(ExitStatus::SolverNonConvergence);
    }
    if !cfg.checks.is_empty() {
        let report = run_checks(&cfg)?;
        eprint!("{}", report.render());
        if !report.passed() {
            return Ok(ExitStatus::CheckFailure);
        }
    }
    Ok(ExitStatus::Success)
}

fn check(args: &ConfigArgs) -> Result<ExitStatus> {
    let cfg = args.resolve()?;
    let report = run_checks(&cfg)?;
    print!("{}", report.render());
    Ok(if report.passed() { ExitStatus::Success } else { ExitStatus::CheckFailure })
}

fn ladder(args: &LadderArgs) -> Result<ExitStatus> {
    let spec = PotentialSpec::physical(args.radius)?;
    let grids = refinement_ladder(args.radius, &args.r_mins, args.grid_r_max, args.log_step)?;
    let l = instability_refinement(&spec, &grids)?;
    let mut s = format!("R = {}  Z = {}\nr_min        n_r  n_x4  ground                   ratio\n", l.radius, l.coupling);
    let mut prev: Option<f64> = None;
    for v in &l.levels {
        let ratio = prev.map(|p| format!("{:.4}", v.ground / p)).unwrap_or_default();
        let _ = writeln!(s, "{:<12.4e} {:<4} {:<5} {:<24.16e} {}", v.r_min, v.n_r, v.n_x4, v.ground, ratio);
        prev = Some(v.ground);
    }
    print!("{s}");
    Ok(ExitStatus::Success)
}

fn constants() -> ExitStatus {
    println!("bohr_radius_m          {BOHR_RADIUS_M:.11e}");
    println!("critical_radius_a0     {CRITICAL_RADIUS}");
    println!("critical_radius_m      {:.11e}", critical_radius_physical());
    ExitStatus::Success
}

/// Parses `argv`, runs the command and returns the process exit status.
pub fn run<I, T>(argv: I) -> ExitStatus
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitStatus::ConfigError } else { ExitStatus::Success };
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Check(a) => check(a),
        Command::Ladder(a) => ladder(a),
        Command::Constants => Ok(constants()),
    };
    let _ = std::io::stdout().flush();
    match result {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            ExitStatus::for_error(&e)
        }
    }
}
