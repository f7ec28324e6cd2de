//! Radius sweeps: one row per `R`, computed concurrently, emitted in order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{OutputFormat, SweepConfig};
use crate::error::{Error, Result};
use crate::potential::{PotentialSpec, BOHR_RADIUS_M, CRITICAL_RADIUS};
use crate::solver::{
    assemble_compactified, count_bound_states, discrete_rayleigh, instability_refinement, lowest_eigenvalues,
    refinement_ladder, RefinementLadder, TOL_NEG,
};
use crate::variational::{ground_state_bound, hydrogen_eigenfunction, HydrogenQuantumNumbers};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilityFlag {
    Stable,
    Critical,
    Unstable,
}

impl StabilityFlag {
    /// Declared from the coupling alone: stable for `Z < 1`, critical at `Z = 1`.
    pub fn from_coupling(z: f64) -> Self {
        if z < 1.0 {
            StabilityFlag::Stable
        } else if z == 1.0 {
            StabilityFlag::Critical
        } else {
            StabilityFlag::Unstable
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StabilityFlag::Stable => "stable",
            StabilityFlag::Critical => "critical",
            StabilityFlag::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "R")]
    pub radius: f64,
    #[serde(rename = "Z")]
    pub coupling: f64,
    /// Ground energy on the sweep grid; for `Z >= 1`, on the finest ladder level.
    pub ground_energy: f64,
    /// `-1` (the hydrogen trial) unless the form is unbounded below.
    pub variational_bound: f64,
    pub n_bound_states: usize,
    pub stability_flag: StabilityFlag,
    pub max_residual: f64,
    /// Solver failure for this row, if any.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowDiagnostics {
    /// Lowest `l = 0` eigenvalues on the sweep grid.
    pub grid_eigenvalues: Vec<f64>,
    pub grid_residuals: Vec<f64>,
    /// `|q - q_cont|` for the hydrogen ground state sampled on the sweep grid, where
    /// `q` is its discrete Rayleigh quotient (an upper bound on the grid ground energy).
    pub grid_tolerance: Option<f64>,
    pub ladder: Option<RefinementLadder>,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub rows: Vec<SweepRow>,
    pub diagnostics: Vec<RowDiagnostics>,
    pub rendered: String,
    /// Set when writing the output file failed; rows are still available.
    pub write_error: Option<Error>,
}

impl SweepOutput {
    pub fn has_solver_failure(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }
}

const GRID_EIGENVALUES: usize = 3;

fn solve_row(cfg: &SweepConfig, radius: f64) -> Result<(SweepRow, RowDiagnostics)> {
    let spec = PotentialSpec::physical(radius)?;
    let z = spec.coupling();
    let flag = StabilityFlag::from_coupling(z);
    let a = assemble_compactified(&spec, 0, &cfg.grid)?;
    let s = lowest_eigenvalues(&a, GRID_EIGENVALUES.min(a.dim()))?;
    let n_bound_states = count_bound_states(&spec, cfg.l_max, &cfg.grid, TOL_NEG)?;
    let phi = hydrogen_eigenfunction(HydrogenQuantumNumbers::new(1, 0, 0)?)?.lift(radius)?;
    let continuum = ground_state_bound(radius)?.quotient;
    let grid_tolerance = discrete_rayleigh(&a, &phi, Some(continuum))?.interpolation_error;
    let ladder = if flag == StabilityFlag::Stable {
        None
    } else {
        let grids = refinement_ladder(radius, &cfg.ladder.r_mins, cfg.ladder.r_max, cfg.ladder.log_step)?;
        Some(instability_refinement(&spec, &grids)?)
    };
    let mut max_residual = s.max_residual();
    let mut ground = s.ground;
    if let Some(l) = &ladder {
        max_residual = l.levels.iter().map(|v| v.residual).fold(max_residual, f64::max);
        ground = l.levels.last().map(|v| v.ground).unwrap_or(ground);
    }
    let variational_bound = if flag == StabilityFlag::Unstable {
        f64::NEG_INFINITY
    } else {
        -1.0
    };
    Ok((
        SweepRow {
            radius,
            coupling: z,
            ground_energy: ground,
            variational_bound,
            n_bound_states,
            stability_flag: flag,
            max_residual,
            error: None,
        },
        RowDiagnostics {
            grid_eigenvalues: s.eigenvalues,
            grid_residuals: s.residuals,
            grid_tolerance,
            ladder,
        },
    ))
}

fn failed_row(radius: f64, e: &Error) -> (SweepRow, RowDiagnostics) {
    let z = 4.0 * radius;
    let flag = StabilityFlag::from_coupling(z);
    (
        SweepRow {
            radius,
            coupling: z,
            ground_energy: f64::NAN,
            variational_bound: if flag == StabilityFlag::Unstable { f64::NEG_INFINITY } else { -1.0 },
            n_bound_states: 0,
            stability_flag: flag,
            max_residual: f64::NAN,
            error: Some(e.to_string()),
        },
        RowDiagnostics {
            grid_eigenvalues: Vec::new(),
            grid_residuals: Vec::new(),
            grid_tolerance: None,
            ladder: None,
        },
    )
}

/// Rows in the order of `cfg.r_values`, computed on up to `cfg.workers` threads.
pub fn compute_rows(cfg: &SweepConfig) -> Result<(Vec<SweepRow>, Vec<RowDiagnostics>)> {
    cfg.validate()?;
    let work = || -> Vec<(SweepRow, RowDiagnostics)> {
        cfg.r_values
            .par_iter()
            .map(|&r| solve_row(cfg, r).unwrap_or_else(|e| failed_row(r, &e)))
            .collect()
    };
    let pairs = match cfg.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(pairs.into_iter().unzip())
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn render_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("R,Z,ground_energy,variational_bound,n_bound_states,stability_flag,max_residual,error\n");
    for r in rows {
        let err = r.error.as_deref().unwrap_or("").replace(['"', ',', '\n'], " ");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            csv_float(r.radius),
            csv_float(r.coupling),
            csv_float(r.ground_energy),
            csv_float(r.variational_bound),
            r.n_bound_states,
            r.stability_flag.name(),
            csv_float(r.max_residual),
            err
        );
    }
    out
}

#[derive(Serialize)]
struct JsonRow<'a> {
    #[serde(flatten)]
    row: &'a SweepRow,
    diagnostics: &'a RowDiagnostics,
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    units: &'static str,
    bohr_radius_m: f64,
    critical_radius_a0: f64,
    config: &'a SweepConfig,
    rows: Vec<JsonRow<'a>>,
}

const UNITS_NOTE: &str = "hbar^2/2m = 1 and lengths in Bohr radii a0; energies in Rydberg units (hydrogen ground state = -1); Z = 4R; non-finite values are written as null";

/// Serializes rows in the requested format.
pub fn render(cfg: &SweepConfig, rows: &[SweepRow], diagnostics: &[RowDiagnostics], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => Ok(render_csv(rows)),
        OutputFormat::Json => {
            let doc = JsonDocument {
                units: UNITS_NOTE,
                bohr_radius_m: BOHR_RADIUS_M,
                critical_radius_a0: CRITICAL_RADIUS,
                config: cfg,
                rows: rows.iter().zip(diagnostics).map(|(row, diagnostics)| JsonRow { row, diagnostics }).collect(),
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// Writes through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Io(format!("`{}` is not a file path", path.display())))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(".tmp");
    let tmp = path.with_file_name(tmp_name);
    if let Err(e) = fs::write(&tmp, contents).and_then(|_| fs::rename(&tmp, path)) {
        let _ = fs::remove_file(&tmp);
        return Err(e.into());
    }
    Ok(())
}

/// Computes every row, renders them, and writes the output file if one is configured.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    let (rows, diagnostics) = compute_rows(cfg)?;
    let rendered = render(cfg, &rows, &diagnostics, cfg.output_format)?;
    let write_error = match &cfg.output_path {
        Some(p) => write_atomic(p, &rendered).err(),
        None => None,
    };
    Ok(SweepOutput {
        rows,
        diagnostics,
        rendered,
        write_error,
    })
}
