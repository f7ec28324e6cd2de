//! Lowest eigenpairs by inertia bisection followed by shifted inverse
//! iteration, and bound-state counting by inertia alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::band::SymBand;
use super::{assemble_compactified, GridSpec, OperatorAssembly};
use crate::error::{Error, Result};
use crate::potential::PotentialSpec;
use crate::variational::{TrialFunction, TrialKind};

/// Default threshold separating bound states from the continuum edge.
pub const TOL_NEG: f64 = 1e-6;

const RESIDUAL_SCALE: f64 = 1e-8;
const BRACKET_REL: f64 = 1e-7;
const MAX_BISECTIONS: usize = 200;
const MAX_INVERSE_STEPS: usize = 30;
const START_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Clone, Serialize)]
pub struct SpectralResult {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvalues of the whole matrix below `-TOL_NEG`.
    pub n_negative: usize,
    pub ground: f64,
    /// `||A v - lambda v||` with `||v|| = 1`.
    pub residuals: Vec<f64>,
    /// Acceptance threshold `1e-8 ||A||_inf`.
    pub tolerance: f64,
    #[serde(skip)]
    pub vectors: Vec<Vec<f64>>,
}

impl SpectralResult {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

fn to_t(x: f64) -> f64 {
    x.asinh()
}

fn from_t(t: f64) -> f64 {
    t.sinh()
}

/// Smallest `x` in `[lo, hi]` (to bracket precision) with more than `index`
/// eigenvalues below it. Bisection runs in `asinh` space so that deep
/// eigenvalues get relative and shallow ones absolute resolution.
fn bracket(a: &SymBand, index: usize, mut lo: f64, mut hi: f64) -> (f64, f64) {
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= BRACKET_REL * (1.0 + lo.abs().max(hi.abs())) {
            break;
        }
        let mid = from_t(0.5 * (to_t(lo) + to_t(hi)));
        let mid = if mid > lo && mid < hi { mid } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if a.count_below(mid) > index {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn orthonormalize(v: &mut [f64], basis: &[Vec<f64>]) -> bool {
    for _ in 0..2 {
        for b in basis {
            let c = dot(v, b);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= c * bi;
            }
        }
    }
    let n = dot(v, v).sqrt();
    if !(n > 0.0 && n.is_finite()) {
        return false;
    }
    for vi in v.iter_mut() {
        *vi /= n;
    }
    true
}

fn inverse_iteration(a: &SymBand, sigma: f64, basis: &[Vec<f64>], seed: u64) -> (f64, Vec<f64>, f64) {
    let n = a.dim();
    let factor = a.factor_shifted(sigma);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    orthonormalize(&mut v, basis);
    let mut best = (f64::NAN, v.clone(), f64::INFINITY);
    for _ in 0..MAX_INVERSE_STEPS {
        let mut w = factor.solve(&v);
        if !orthonormalize(&mut w, basis) {
            break;
        }
        v = w;
        let av = a.matvec(&v);
        let theta = dot(&v, &av);
        let res = av.iter().zip(&v).map(|(x, y)| (x - theta * y).powi(2)).sum::<f64>().sqrt();
        let improved = res < 0.5 * best.2;
        if res < best.2 {
            best = (theta, v.clone(), res);
        }
        if res <= 1e-3 * RESIDUAL_SCALE * (1.0 + theta.abs()) || !improved && res <= RESIDUAL_SCALE * (1.0 + theta.abs()) {
            break;
        }
    }
    best
}

/// The `k` smallest eigenpairs of `A`.
pub fn lowest_eigenvalues(a: &OperatorAssembly, k: usize) -> Result<SpectralResult> {
    let m = &a.matrix;
    let n = m.dim();
    if k < 1 || k > n {
        return Err(Error::invalid("k", format!("need 1 <= k <= {n}, got {k}")));
    }
    let (glo, ghi) = m.gershgorin();
    let pad = 1e-12 * (1.0 + glo.abs().max(ghi.abs()));
    let (glo, ghi) = (glo - pad, ghi + pad);
    let tolerance = RESIDUAL_SCALE * m.norm_inf();

    let mut eigenvalues = Vec::with_capacity(k);
    let mut residuals = Vec::with_capacity(k);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut lower = glo;
    for i in 0..k {
        let (lo, hi) = bracket(m, i, lower, ghi);
        lower = lo;
        let sigma = 0.5 * (lo + hi);
        let (theta, v, res) = inverse_iteration(m, sigma, &vectors, START_SEED + i as u64);
        if !(res <= tolerance) {
            return Err(Error::EigenNonConvergence { residual: res, tolerance });
        }
        eigenvalues.push(theta);
        residuals.push(res);
        vectors.push(v);
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&x, &y| eigenvalues[x].total_cmp(&eigenvalues[y]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigenvalues[i]).collect();
    let residuals = order.iter().map(|&i| residuals[i]).collect();
    let vectors = order.iter().map(|&i| vectors[i].clone()).collect();
    Ok(SpectralResult {
        ground: eigenvalues[0],
        eigenvalues,
        n_negative: m.count_below(-TOL_NEG),
        residuals,
        tolerance,
        vectors,
    })
}

/// `sum_{l <= l_max} (2l + 1) #{lambda < -tol_neg}` over the compactified sectors.
pub fn count_bound_states(spec: &PotentialSpec, l_max: u32, grid: &GridSpec, tol_neg: f64) -> Result<usize> {
    if !(tol_neg >= 0.0) {
        return Err(Error::invalid("tol_neg", "threshold must be non-negative"));
    }
    let counts: Result<Vec<usize>> = (0..=l_max)
        .into_par_iter()
        .map(|l| {
            let a = assemble_compactified(spec, l, grid)?;
            Ok((2 * l as usize + 1) * a.matrix.count_below(-tol_neg))
        })
        .collect();
    Ok(counts?.into_iter().sum())
}

/// Discrete Rayleigh quotient of a trial function sampled at the grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscreteRayleigh {
    pub quotient: f64,
    /// Continuum quotient of the same trial, when known in closed form.
    pub continuum: Option<f64>,
    /// `|quotient - continuum|`, the interpolation error.
    pub interpolation_error: Option<f64>,
}

/// Samples an `s`-wave trial `psi(r, x4)` as `u = (r - r_min) psi` on the nodes
/// of an `l = 0` compactified assembly and returns `v^T A v / v^T v` with
/// `v = sqrt(mass) u`. The shift makes `u` vanish at the Dirichlet end; without
/// it the jump there costs kinetic energy `~ u(r_min)^2 / h_0`, which grows
/// under refinement. By the discrete min-max principle the ground eigenvalue
/// of `A` lies at or below this quotient.
pub fn discrete_rayleigh(a: &OperatorAssembly, trial: &TrialFunction, continuum: Option<f64>) -> Result<DiscreteRayleigh> {
    let unsupported = Err(Error::UnsupportedTrial {
        kind: trial.kind().name(),
        domain: "grid interpolation",
    });
    if a.l != 0 || a.x4_nodes.is_empty() {
        return unsupported;
    }
    match trial.kind() {
        TrialKind::Shell => {}
        TrialKind::Hydrogen3d if trial.is_s_wave() => {}
        _ => return unsupported,
    }
    let nr = a.r_nodes.len() - 2;
    let r0 = a.r_nodes[0];
    let nx = a.x4_nodes.len();
    let mut v = Vec::with_capacity(nr * nx);
    for j in 0..nr {
        let r = a.r_nodes[j + 1];
        for (m, &x4) in a.x4_nodes.iter().enumerate() {
            let psi = if trial.dimension() == 3 {
                trial.value(&[r, 0.0, 0.0]).re
            } else {
                trial.value(&[r, 0.0, 0.0, x4]).re
            };
            v.push(a.mass[j * nx + m].sqrt() * (r - r0) * psi);
        }
    }
    let av = a.matrix.matvec(&v);
    let norm = dot(&v, &v);
    if !(norm > 0.0) {
        return Err(Error::invalid("trial", "trial vanishes on every grid node"));
    }
    let quotient = dot(&v, &av) / norm;
    Ok(DiscreteRayleigh {
        quotient,
        continuum,
        interpolation_error: continuum.map(|c| (quotient - c).abs()),
    })
}
