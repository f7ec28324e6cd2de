//! Ground energies along a ladder of grids with shrinking inner cutoff.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::eigen::lowest_eigenvalues;
use super::{assemble_compactified, GridSpec};
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderLevel {
    pub r_min: f64,
    pub n_r: usize,
    pub n_x4: usize,
    pub ground: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefinementLadder {
    pub radius: f64,
    pub coupling: f64,
    pub levels: Vec<LadderLevel>,
}

impl RefinementLadder {
    pub fn grounds(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.ground).collect()
    }

    /// `E_{k+1} / E_k` for consecutive levels.
    pub fn ratios(&self) -> Vec<f64> {
        self.levels.windows(2).map(|w| w[1].ground / w[0].ground).collect()
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.levels.windows(2).all(|w| w[1].ground < w[0].ground)
    }

    /// `|E_last - E_{last-1}|`.
    pub fn last_gap(&self) -> Option<f64> {
        let n = self.levels.len();
        (n >= 2).then(|| (self.levels[n - 1].ground - self.levels[n - 2].ground).abs())
    }

    /// Smallest ratio among consecutive pairs whose first member lies below `-1`.
    pub fn min_ratio_below_minus_one(&self) -> Option<f64> {
        self.levels
            .windows(2)
            .filter(|w| w[0].ground < -1.0)
            .map(|w| w[1].ground / w[0].ground)
            .reduce(f64::min)
    }
}

/// Nested grids sharing `r_max` (rounded up onto the lattice `e^(k log_step)`):
/// geometric radial steps down to each `r_min`, and a circle graded
/// geometrically with the same ratio from `pi R` toward `x4 = 0` until the step
/// reaches `r_min`.
pub fn refinement_ladder(radius: f64, r_mins: &[f64], r_max: f64, log_step: f64) -> Result<Vec<GridSpec>> {
    if r_mins.is_empty() {
        return Err(Error::invalid("r_min", "ladder needs at least one level"));
    }
    r_mins
        .iter()
        .map(|&r_min| {
            let g = GridSpec::geometric(r_min, r_max, log_step, 8)?;
            let levels = ((PI * radius / r_min).ln() / log_step).ceil().max(3.0) as usize;
            let min_spacing = PI * radius * (-(levels as f64) * log_step).exp();
            g.with_graded_x4(min_spacing, levels)
        })
        .collect()
}

/// `l = 0` ground energy at every level, levels computed concurrently.
pub fn instability_refinement(spec: &PotentialSpec, grids: &[GridSpec]) -> Result<RefinementLadder> {
    let levels: Result<Vec<LadderLevel>> = grids
        .par_iter()
        .map(|g| {
            let a = assemble_compactified(spec, 0, g)?;
            let s = lowest_eigenvalues(&a, 1)?;
            Ok(LadderLevel {
                r_min: g.r_min,
                n_r: g.n_r,
                n_x4: g.n_x4,
                ground: s.ground,
                residual: s.residuals[0],
            })
        })
        .collect();
    Ok(RefinementLadder {
        radius: spec.radius(),
        coupling: spec.coupling(),
        levels: levels?,
    })
}
