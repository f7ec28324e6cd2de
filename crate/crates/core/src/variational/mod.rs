//! Trial-function families and quadratic-form evaluation.
//!
//! Forms follow `h = h0 + Z v` with `h0[psi] = ||grad psi||^2` and
//! `v[psi] = <psi, V psi>`. On `R^4` the potential is `-1/|x|^2`; on the
//! cylinder it is the compactified `V_c`.

mod hardy;
mod hydrogen;
mod rayleigh;
mod shell;
mod weyl;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use hardy::{
    cutoff, hardy_quotient, instability_rayleigh, optimizing_sequence, sequence_diagnostics,
    SequenceDiagnostics,
};
pub use hydrogen::{ground_state_bound, hydrogen_eigenfunction, hydrogen_radial};
pub use rayleigh::{gram_matrix, inner_product, rayleigh, Domain};
pub use shell::{shell_bump, shell_constants, shell_trial, ShellConstants};
pub use weyl::{weyl_residual, weyl_residual_with, weyl_sup_potential, weyl_trial, WeylReport, WEYL_SEED_CENTRE};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialKind {
    Radial4d,
    Hydrogen3d,
    Shell,
    Weyl,
}

impl TrialKind {
    pub fn name(self) -> &'static str {
        match self {
            TrialKind::Radial4d => "radial-4d",
            TrialKind::Hydrogen3d => "hydrogen-3d",
            TrialKind::Shell => "shell",
            TrialKind::Weyl => "weyl",
        }
    }
}

/// Bounding region of a trial function's support, in the three- or
/// four-dimensional radial variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Support {
    Ball { radius: f64 },
    Annulus { inner: f64, outer: f64 },
    /// Ball of `radius` around `centre` in `(x1, x2, x3)`, times the circle.
    Cube { centre: [f64; 3], radius: f64 },
    Unbounded,
}

impl Support {
    pub fn is_bounded(&self) -> bool {
        !matches!(self, Support::Unbounded)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizingSequenceSpec {
    pub n: u32,
    pub delta: f64,
}

impl OptimizingSequenceSpec {
    pub fn new(n: u32, delta: f64) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("n", "sequence index starts at 1"));
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::invalid("delta", format!("cutoff scale must lie in (0, 1/2), got {delta}")));
        }
        Ok(OptimizingSequenceSpec { n, delta })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HydrogenQuantumNumbers {
    pub n: u32,
    pub l: u32,
    pub m: i32,
}

impl HydrogenQuantumNumbers {
    pub fn new(n: u32, l: u32, m: i32) -> Result<Self> {
        if n < 1 {
            return Err(Error::invalid("N", "principal quantum number starts at 1"));
        }
        if l >= n {
            return Err(Error::invalid("l", format!("need l < N, got l = {l}, N = {n}")));
        }
        if m.unsigned_abs() > l {
            return Err(Error::invalid("m", format!("need |m| <= l, got m = {m}, l = {l}")));
        }
        Ok(HydrogenQuantumNumbers { n, l, m })
    }
}

/// Radial profile `f(|x|)` of a four-dimensional radial trial function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialProfile {
    /// `exp(-|x|^2 / (2 w^2))`.
    Gaussian { width: f64 },
    /// `|x|^(-1 + 1/n) eta(|x|)`.
    Optimizing(OptimizingSequenceSpec),
}

impl RadialProfile {
    /// `(f, f')` at `rho > 0`.
    pub fn eval(&self, rho: f64) -> (f64, f64) {
        match *self {
            RadialProfile::Gaussian { width } => {
                let g = (-0.5 * rho * rho / (width * width)).exp();
                (g, -rho / (width * width) * g)
            }
            RadialProfile::Optimizing(spec) => {
                let (eta, deta) = cutoff(rho, spec.delta);
                if eta == 0.0 && deta == 0.0 {
                    return (0.0, 0.0);
                }
                let e = -1.0 + 1.0 / spec.n as f64;
                let pw = rho.powf(e);
                (pw * eta, e * pw / rho * eta + pw * deta)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Params {
    Radial(RadialProfile),
    /// `lift = Some(R)` places `(2 pi R)^(-1/2) phi(x1, x2, x3)` on the cylinder.
    Hydrogen { q: HydrogenQuantumNumbers, lift: Option<f64> },
    Shell { rho: f64, radius: f64, norm: f64 },
    Weyl { k: f64, n: u32, radius: f64, norm: f64 },
}

/// An evaluable wavefunction with its support and derivative availability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialFunction {
    pub(crate) params: Params,
    support: Support,
    analytic_gradient: bool,
}

impl TrialFunction {
    pub(crate) fn new(params: Params, support: Support) -> Self {
        TrialFunction {
            params,
            support,
            analytic_gradient: true,
        }
    }

    /// Four-dimensional radial trial `f(|x|)`.
    pub fn radial_4d(profile: RadialProfile) -> Result<Self> {
        let support = match profile {
            RadialProfile::Gaussian { width } => {
                if !(width > 0.0) {
                    return Err(Error::invalid("width", "Gaussian width must be positive"));
                }
                Support::Unbounded
            }
            RadialProfile::Optimizing(spec) => Support::Ball {
                radius: 1.5 * spec.delta,
            },
        };
        Ok(Self::new(Params::Radial(profile), support))
    }

    pub fn kind(&self) -> TrialKind {
        match self.params {
            Params::Radial(_) => TrialKind::Radial4d,
            Params::Hydrogen { .. } => TrialKind::Hydrogen3d,
            Params::Shell { .. } => TrialKind::Shell,
            Params::Weyl { .. } => TrialKind::Weyl,
        }
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn analytic_gradient(&self) -> bool {
        self.analytic_gradient
    }

    /// True for hydrogen functions with `l = 0`.
    pub fn is_s_wave(&self) -> bool {
        matches!(self.params, Params::Hydrogen { q, .. } if q.l == 0)
    }

    /// Natural domain of the trial function.
    pub fn domain(&self) -> Domain {
        match self.params {
            Params::Radial(_) => Domain::R4,
            Params::Hydrogen { lift: None, .. } => Domain::R3,
            _ => Domain::Cylinder,
        }
    }

    /// Number of coordinates taken by `value` and `gradient`.
    pub fn dimension(&self) -> usize {
        match self.domain() {
            Domain::R3 => 3,
            _ => 4,
        }
    }

    /// Radius of the compact dimension, for cylinder trials.
    pub fn compact_radius(&self) -> Option<f64> {
        match self.params {
            Params::Radial(_) => None,
            Params::Hydrogen { lift, .. } => lift,
            Params::Shell { radius, .. } | Params::Weyl { radius, .. } => Some(radius),
        }
    }

    /// Places a three-dimensional hydrogen function on the cylinder of radius `R`,
    /// constant in `x4` and normalized over the circle.
    pub fn lift(&self, radius: f64) -> Result<Self> {
        match self.params {
            Params::Hydrogen { q, lift: None } => {
                if !(radius > 0.0) {
                    return Err(Error::invalid("R", "radius must be positive"));
                }
                Ok(Self::new(Params::Hydrogen { q, lift: Some(radius) }, self.support))
            }
            _ => Err(Error::UnsupportedTrial {
                kind: self.kind().name(),
                domain: "lift to the cylinder",
            }),
        }
    }

    fn check_dim(&self, x: &[f64]) {
        assert_eq!(x.len(), self.dimension(), "coordinate count must match the trial's domain");
    }

    pub fn value(&self, x: &[f64]) -> Complex64 {
        self.check_dim(x);
        match self.params {
            Params::Radial(profile) => Complex64::new(profile.eval(norm(x)).0, 0.0),
            Params::Hydrogen { q, lift } => {
                let v = hydrogen::value(q, &x[..3]);
                v * axial_factor(lift)
            }
            Params::Shell { rho, radius, norm: c } => {
                let (b, _) = shell::scaled_bump(norm(&x[..3]), rho, c);
                Complex64::new(b * axial_factor(Some(radius)), 0.0)
            }
            Params::Weyl { k, n, radius, norm: c } => weyl::value(&x[..3], k, n, c) * axial_factor(Some(radius)),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Vec<Complex64> {
        self.check_dim(x);
        let mut g = vec![Complex64::new(0.0, 0.0); x.len()];
        match self.params {
            Params::Radial(profile) => {
                let rho = norm(x);
                let (_, d) = profile.eval(rho);
                for (gi, xi) in g.iter_mut().zip(x) {
                    *gi = Complex64::new(d * xi / rho, 0.0);
                }
            }
            Params::Hydrogen { q, lift } => {
                let g3 = hydrogen::gradient(q, &x[..3]);
                for i in 0..3 {
                    g[i] = g3[i] * axial_factor(lift);
                }
            }
            Params::Shell { rho, radius, norm: c } => {
                let r = norm(&x[..3]);
                let (_, d) = shell::scaled_bump(r, rho, c);
                for i in 0..3 {
                    g[i] = Complex64::new(d * x[i] / r * axial_factor(Some(radius)), 0.0);
                }
            }
            Params::Weyl { k, n, radius, norm: c } => {
                let g3 = weyl::gradient(&x[..3], k, n, c);
                for i in 0..3 {
                    g[i] = g3[i] * axial_factor(Some(radius));
                }
            }
        }
        g
    }
}

fn axial_factor(lift: Option<f64>) -> f64 {
    match lift {
        Some(radius) => 1.0 / (2.0 * std::f64::consts::PI * radius).sqrt(),
        None => 1.0,
    }
}

pub(crate) fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Quadratic-form values of one trial function.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct RayleighReport {
    /// `h0[psi] = ||grad psi||^2`.
    pub kinetic: f64,
    /// `v[psi] = <psi, V psi>`.
    pub potential: f64,
    /// `h[psi] = kinetic + Z potential`.
    pub total: f64,
    pub norm_sq: f64,
    /// `total / norm_sq`.
    pub quotient: f64,
    pub quadrature_error: f64,
}

impl RayleighReport {
    pub(crate) fn assemble(kinetic: f64, potential: f64, coupling: f64, norm_sq: f64, error: f64) -> Self {
        let total = kinetic + coupling * potential;
        RayleighReport {
            kinetic,
            potential,
            total,
            norm_sq,
            quotient: total / norm_sq,
            quadrature_error: error,
        }
    }
}
