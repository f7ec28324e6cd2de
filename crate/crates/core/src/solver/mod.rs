//! Finite-volume discretizations of the Schrodinger forms and a banded
//! eigensolver.
//!
//! On a non-uniform grid the form `int |u'|^2` gives a stiffness matrix `K` and
//! lumped masses `w`; the symmetric operator is `W^-1/2 K W^-1/2 + diag(V)`.
//! On the cylinder unknowns are ordered `i = j * n_x4 + m` (x4 inner), so the
//! half-bandwidth is `n_x4`.

mod band;
mod eigen;
mod ladder;

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{closed_form_unchecked, PotentialSpec};

pub use band::{LdlFactor, SymBand};
pub use eigen::{count_bound_states, discrete_rayleigh, lowest_eigenvalues, DiscreteRayleigh, SpectralResult, TOL_NEG};
pub use ladder::{instability_refinement, refinement_ladder, LadderLevel, RefinementLadder};

/// Radial node layout between `r_min` and `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RadialSpacing {
    /// `r_j = r_min (r_max / r_min)^((j / (n_r + 1))^stretch)`.
    Graded,
    Uniform,
}

/// Node layout on the circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum X4Spacing {
    /// `n_x4` equal steps of `2 pi R / n_x4`.
    Uniform,
    /// Nodes `-pi R`, `0` and `+-pi R q^i`, `i = 1..m`, with `n_x4 = 2m + 2` and
    /// `q` chosen so the smallest step next to `x4 = 0` is `min_spacing`.
    Graded { min_spacing: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    /// Interior radial unknowns; `r_min` and `r_max` carry Dirichlet values.
    pub n_r: usize,
    pub n_x4: usize,
    pub stretch: f64,
    pub radial: RadialSpacing,
    pub x4: X4Spacing,
}

impl GridSpec {
    /// Graded radial grid and uniform circle grid.
    pub fn new(r_min: f64, r_max: f64, n_r: usize, n_x4: usize) -> Result<Self> {
        GridSpec {
            r_min,
            r_max,
            n_r,
            n_x4,
            stretch: 1.0,
            radial: RadialSpacing::Graded,
            x4: X4Spacing::Uniform,
        }
        .validated()
    }

    /// Geometric radial grid on the lattice `e^(k step)`, `k` integer: `r_min`
    /// is rounded down and `r_max` up onto it, so any two grids with the same
    /// step are nested.
    pub fn geometric(r_min: f64, r_max: f64, log_step: f64, n_x4: usize) -> Result<Self> {
        if !(log_step > 0.0) || !(r_min > 0.0) || !(r_max > r_min) {
            return Err(Error::invalid("grid", "need 0 < r_min < r_max and a positive log step"));
        }
        let lo = (r_min.ln() / log_step + 1e-9).floor();
        let hi = (r_max.ln() / log_step - 1e-9).ceil().max(lo + 17.0);
        GridSpec {
            r_min: (lo * log_step).exp(),
            r_max: (hi * log_step).exp(),
            n_r: (hi - lo) as usize - 1,
            n_x4,
            stretch: 1.0,
            radial: RadialSpacing::Graded,
            x4: X4Spacing::Uniform,
        }
        .validated()
    }

    /// Switches the circle to the graded layout with `levels` geometric steps on
    /// each side of `x4 = 0` down to `min_spacing`.
    pub fn with_graded_x4(mut self, min_spacing: f64, levels: usize) -> Result<Self> {
        self.x4 = X4Spacing::Graded { min_spacing };
        self.n_x4 = 2 * levels + 2;
        self.validated()
    }

    pub fn with_uniform_radial(mut self) -> Result<Self> {
        self.radial = RadialSpacing::Uniform;
        self.validated()
    }

    pub fn with_stretch(mut self, stretch: f64) -> Result<Self> {
        self.stretch = stretch;
        self.validated()
    }

    pub fn validated(self) -> Result<Self> {
        if !(self.r_min > 0.0 && self.r_min.is_finite()) {
            return Err(Error::invalid("r_min", format!("inner cutoff must be positive, got {}", self.r_min)));
        }
        if !(self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(Error::invalid("r_max", format!("need r_min < r_max, got {} and {}", self.r_min, self.r_max)));
        }
        if self.n_r < 16 {
            return Err(Error::invalid("n_r", format!("need at least 16 radial points, got {}", self.n_r)));
        }
        if self.n_x4 < 8 || !self.n_x4.is_multiple_of(2) {
            return Err(Error::invalid("n_x4", format!("need an even count >= 8, got {}", self.n_x4)));
        }
        if !(self.stretch > 0.0 && self.stretch.is_finite()) {
            return Err(Error::invalid("stretch", "grading exponent must be positive"));
        }
        if let X4Spacing::Graded { min_spacing } = self.x4 {
            if !(min_spacing > 0.0) {
                return Err(Error::invalid("min_spacing", "graded circle needs a positive smallest step"));
            }
        }
        Ok(self)
    }

    /// Radial nodes including both Dirichlet ends (`n_r + 2` values).
    pub fn radial_nodes(&self) -> Vec<f64> {
        let n = self.n_r + 1;
        (0..=n)
            .map(|j| {
                if j == 0 {
                    return self.r_min;
                }
                if j == n {
                    return self.r_max;
                }
                let t = j as f64 / n as f64;
                match self.radial {
                    RadialSpacing::Graded => self.r_min * (self.r_max / self.r_min).powf(t.powf(self.stretch)),
                    RadialSpacing::Uniform => self.r_min + (self.r_max - self.r_min) * t,
                }
            })
            .collect()
    }

    /// Circle nodes in `[-pi R, pi R)`, ascending.
    pub fn x4_nodes(&self, radius: f64) -> Result<Vec<f64>> {
        let half = PI * radius;
        match self.x4 {
            X4Spacing::Uniform => {
                let h = 2.0 * half / self.n_x4 as f64;
                Ok((0..self.n_x4).map(|m| -half + h * m as f64).collect())
            }
            X4Spacing::Graded { min_spacing } => {
                let levels = (self.n_x4 - 2) / 2;
                if min_spacing >= half {
                    return Err(Error::invalid("min_spacing", "smallest step must be below pi R"));
                }
                let q = (min_spacing / half).powf(1.0 / levels as f64);
                let mut nodes = Vec::with_capacity(self.n_x4);
                nodes.push(-half);
                for i in 1..=levels {
                    nodes.push(-half * q.powi(i as i32));
                }
                nodes.push(0.0);
                for i in (1..=levels).rev() {
                    nodes.push(half * q.powi(i as i32));
                }
                Ok(nodes)
            }
        }
    }
}

/// One-dimensional stiffness and lumped mass on interior nodes of a Dirichlet grid.
fn dirichlet_1d(nodes: &[f64]) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = nodes.len() - 2;
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut mass = vec![0.0; n];
    for j in 0..n {
        let hl = nodes[j + 1] - nodes[j];
        let hr = nodes[j + 2] - nodes[j + 1];
        diag[j] = 1.0 / hl + 1.0 / hr;
        mass[j] = 0.5 * (hl + hr);
        if j + 1 < n {
            off[j] = -1.0 / hr;
        }
    }
    (diag, off, mass)
}

/// Periodic stiffness and lumped mass; `off[m]` couples `m` and `m + 1 (mod n)`.
fn periodic_1d(nodes: &[f64], period: f64) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let n = nodes.len();
    let step = |m: usize| {
        if m + 1 < n {
            nodes[m + 1] - nodes[m]
        } else {
            nodes[0] + period - nodes[m]
        }
    };
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n];
    let mut mass = vec![0.0; n];
    for m in 0..n {
        let hl = step((m + n - 1) % n);
        let hr = step(m);
        diag[m] = 1.0 / hl + 1.0 / hr;
        mass[m] = 0.5 * (hl + hr);
        off[m] = -1.0 / hr;
    }
    (diag, off, mass)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryConditions {
    /// Dirichlet at `r_min` and `r_max`.
    DirichletRadial,
    /// Dirichlet at `r_min` and `r_max`, periodic on the circle.
    DirichletRadialPeriodicX4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialOperatorSpec {
    pub coupling: f64,
    pub l: u32,
    /// `gamma = Z - 3/4 - l (l + 2)`.
    pub gamma: f64,
}

impl RadialOperatorSpec {
    pub fn new(coupling: f64, l: u32) -> Result<Self> {
        if !coupling.is_finite() {
            return Err(Error::invalid("Z", "coupling must be finite"));
        }
        let lf = l as f64;
        Ok(RadialOperatorSpec {
            coupling,
            l,
            gamma: coupling - 0.75 - lf * (lf + 2.0),
        })
    }
}

/// A symmetric discretization with its grid metadata.
#[derive(Debug, Clone)]
pub struct OperatorAssembly {
    pub matrix: SymBand,
    pub grid: GridSpec,
    pub bc: BoundaryConditions,
    pub potential_ref: Option<PotentialSpec>,
    pub l: u32,
    /// Radial nodes including the Dirichlet ends.
    pub r_nodes: Vec<f64>,
    /// Circle nodes (empty for the four-dimensional radial operator).
    pub x4_nodes: Vec<f64>,
    /// Lumped mass per unknown; eigenvectors `v` map to nodal values `v / sqrt(mass)`.
    pub mass: Vec<f64>,
}

impl OperatorAssembly {
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Smallest node value of `Z V` used in the assembly.
    pub fn potential_floor(&self) -> f64 {
        let n = self.dim();
        let k = self.kinetic_diagonal();
        (0..n).map(|i| self.matrix.get(i, i) - k[i]).fold(f64::INFINITY, f64::min)
    }

    fn kinetic_diagonal(&self) -> Vec<f64> {
        let (rd, _, rm) = dirichlet_1d(&self.r_nodes);
        if self.x4_nodes.is_empty() {
            return rd.iter().zip(&rm).map(|(d, m)| d / m).collect();
        }
        let radius = self.potential_ref.map(|p| p.radius()).unwrap_or(1.0);
        let (xd, _, xm) = periodic_1d(&self.x4_nodes, 2.0 * PI * radius);
        let lf = self.l as f64;
        let nx = self.x4_nodes.len();
        let mut out = Vec::with_capacity(self.dim());
        for j in 0..rd.len() {
            let r = self.r_nodes[j + 1];
            for m in 0..nx {
                out.push(rd[j] / rm[j] + xd[m] / xm[m] + lf * (lf + 1.0) / (r * r));
            }
        }
        out
    }
}

/// `-d^2/drho^2 - gamma / rho^2` on `[r_min, r_max]` with Dirichlet ends.
pub fn assemble_radial_4d(spec: RadialOperatorSpec, grid: &GridSpec) -> Result<OperatorAssembly> {
    let grid = grid.validated()?;
    let nodes = grid.radial_nodes();
    let (diag, off, mass) = dirichlet_1d(&nodes);
    let n = diag.len();
    let mut a = SymBand::zeros(n, 1);
    for j in 0..n {
        let rho = nodes[j + 1];
        a.add(j, j, diag[j] / mass[j] - spec.gamma / (rho * rho));
        if j + 1 < n {
            a.add(j + 1, j, off[j] / (mass[j] * mass[j + 1]).sqrt());
        }
    }
    Ok(OperatorAssembly {
        matrix: a,
        grid,
        bc: BoundaryConditions::DirichletRadial,
        potential_ref: None,
        l: spec.l,
        r_nodes: nodes,
        x4_nodes: Vec::new(),
        mass,
    })
}

/// `-d^2/dr^2 - d^2/dx4^2 + l(l+1)/r^2 + Z V_c(r, x4)` for `u = r f` in the
/// `l` sector, Dirichlet in `r`, periodic in `x4`, potential at nodes.
pub fn assemble_compactified(spec: &PotentialSpec, l: u32, grid: &GridSpec) -> Result<OperatorAssembly> {
    let grid = grid.validated()?;
    let radius = spec.radius();
    let z = spec.coupling();
    let r_nodes = grid.radial_nodes();
    let x_nodes = grid.x4_nodes(radius)?;
    let (rd, ro, rm) = dirichlet_1d(&r_nodes);
    let (xd, xo, xm) = periodic_1d(&x_nodes, 2.0 * PI * radius);
    let nr = rd.len();
    let nx = x_nodes.len();
    let lf = l as f64;
    let mut a = SymBand::zeros(nr * nx, nx);
    let mut mass = Vec::with_capacity(nr * nx);
    for j in 0..nr {
        let r = r_nodes[j + 1];
        for m in 0..nx {
            let i = j * nx + m;
            let v = z * closed_form_unchecked(r, x_nodes[m], radius);
            a.add(i, i, rd[j] / rm[j] + xd[m] / xm[m] + lf * (lf + 1.0) / (r * r) + v);
            let mn = (m + 1) % nx;
            a.add(j * nx + mn, i, xo[m] / (xm[m] * xm[mn]).sqrt());
            if j + 1 < nr {
                a.add(i + nx, i, ro[j] / (rm[j] * rm[j + 1]).sqrt());
            }
            mass.push(rm[j] * xm[m]);
        }
    }
    Ok(OperatorAssembly {
        matrix: a,
        grid,
        bc: BoundaryConditions::DirichletRadialPeriodicX4,
        potential_ref: Some(*spec),
        l,
        r_nodes,
        x4_nodes: x_nodes,
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_formula() {
        assert_eq!(RadialOperatorSpec::new(1.0, 0).unwrap().gamma, 0.25);
        assert_eq!(RadialOperatorSpec::new(0.0, 1).unwrap().gamma, -3.75);
        assert_eq!(RadialOperatorSpec::new(0.5, 0).unwrap().gamma, -0.25);
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1e-3, 40.0, 15, 32).is_err());
        assert!(GridSpec::new(1e-3, 40.0, 16, 7).is_err());
        assert!(GridSpec::new(1e-3, 40.0, 16, 9).is_err());
        assert!(GridSpec::new(1.0, 0.5, 16, 8).is_err());
        assert!(GridSpec::new(1e-3, 40.0, 16, 8).is_ok());
    }

    #[test]
    fn radial_nodes_are_geometric() {
        let g = GridSpec::new(1e-3, 10.0, 99, 8).unwrap();
        let r = g.radial_nodes();
        assert_eq!(r.len(), 101);
        assert_eq!(r[0], 1e-3);
        assert_eq!(r[100], 10.0);
        assert_relative_eq!(r[50], 0.1, max_relative = 1e-12);
    }

    #[test]
    fn geometric_grids_are_nested() {
        let a = GridSpec::geometric(1e-2, 30.0, 0.15, 8).unwrap().radial_nodes();
        let b = GridSpec::geometric(1e-3, 60.0, 0.15, 8).unwrap().radial_nodes();
        assert!(b[0] <= 1e-3 && a[0] <= 1e-2 && a[a.len() - 1] >= 30.0);
        let offset = b.iter().position(|&y| (y / a[0] - 1.0).abs() < 1e-9).expect("shared node");
        for (x, y) in a.iter().zip(&b[offset..]) {
            assert_relative_eq!(x, y, max_relative = 1e-9);
        }
    }

    #[test]
    fn graded_circle_nodes() {
        let g = GridSpec::new(1e-4, 10.0, 16, 8).unwrap().with_graded_x4(1e-4, 20).unwrap();
        let x = g.x4_nodes(0.2).unwrap();
        assert_eq!(x.len(), 42);
        assert_eq!(x[21], 0.0);
        assert_relative_eq!(x[22], 1e-4, max_relative = 1e-10);
        assert_relative_eq!(x[20], -1e-4, max_relative = 1e-10);
        assert!(x.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(x[0], -PI * 0.2);
    }

    #[test]
    fn assemblies_are_exactly_symmetric() {
        let spec = PotentialSpec::physical(0.1).unwrap();
        let g = GridSpec::new(1e-2, 5.0, 20, 8).unwrap();
        let a = assemble_compactified(&spec, 1, &g).unwrap();
        let d = a.matrix.to_dense();
        for i in 0..d.len() {
            for j in 0..d.len() {
                assert_eq!(d[i][j], d[j][i]);
            }
        }
        assert_eq!(a.dim(), 160);
        assert_eq!(a.matrix.bandwidth(), 8);
        assert!(a.potential_floor() < 0.0);
    }
}
