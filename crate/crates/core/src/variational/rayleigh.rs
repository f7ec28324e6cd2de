//! Shared quadrature engine for `h0`, `v` and the norm.
//!
//! Every cylinder trial here is independent of `x4`, so `v` reduces to a
//! three-dimensional integral against the axial mean of `V_c`, taken with the
//! periodic trapezoid rule.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::hardy::radial_forms;
use super::hydrogen::hydrogen_radial;
use super::shell::scaled_bump;
use super::shell::bump;
use super::{Params, RayleighReport, Support, TrialFunction};
use crate::error::{Error, Result};
use crate::potential::{closed_form_unchecked, PotentialSpec};
use crate::quadrature::{
    gauss_legendre_on, integrate, integrate_breakpoints, integrate_to_infinity, periodic_trapezoid, Integral,
    QuadOptions,
};

/// Trapezoid nodes per unit `R/r`; 40 keeps the aliasing error near `e^-40`.
const AXIAL_NODES_PER_RATIO: f64 = 40.0;
const AXIAL_MIN_NODES: usize = 16;
const AXIAL_MAX_NODES: usize = 65_536;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// `R^4` with `V = -1/|x|^2`.
    R4,
    /// `R^3` with the axial mean `-1/(2 R r)` of `V_c`; `Z = 4R` gives `-2/r`.
    R3,
    /// `R^3 x S^1` with `V_c`.
    Cylinder,
}

impl Domain {
    pub fn name(self) -> &'static str {
        match self {
            Domain::R4 => "R^4",
            Domain::R3 => "R^3",
            Domain::Cylinder => "R^3 x S^1",
        }
    }
}

/// Axial means `(<V_c>, <V_c^2>)` over `x4` at radial distance `r > 0`.
pub(crate) fn axial_moments(r: f64, radius: f64) -> Result<(f64, f64)> {
    let period = 2.0 * PI * radius;
    let want = (AXIAL_NODES_PER_RATIO * radius / r).ceil();
    if want <= AXIAL_MAX_NODES as f64 {
        let n = (want as usize).max(AXIAL_MIN_NODES);
        let mut m2 = 0.0;
        let m1 = periodic_trapezoid(
            |x| {
                let v = closed_form_unchecked(r, x, radius);
                m2 += v * v;
                v
            },
            -PI * radius,
            period,
            n,
        ) / period;
        return Ok((m1, m2 / n as f64));
    }
    // Sharply peaked at x4 = 0: adaptive quadrature with breakpoints at +-r.
    let opts = QuadOptions::with_tolerances(0.0, 1e-12);
    let pts = [-PI * radius, -r, 0.0, r, PI * radius];
    let m1 = integrate_breakpoints(|x| closed_form_unchecked(r, x, radius), &pts, &opts).require(&opts)?;
    let m2 = integrate_breakpoints(|x| closed_form_unchecked(r, x, radius).powi(2), &pts, &opts).require(&opts)?;
    Ok((m1.value / period, m2.value / period))
}

fn unsupported(psi: &TrialFunction, domain: Domain) -> Error {
    Error::UnsupportedTrial {
        kind: psi.kind().name(),
        domain: domain.name(),
    }
}

/// Integral of a radial integrand over the trial's support in `r`.
fn radial_span<F: FnMut(f64) -> f64>(f: F, support: Support, opts: &QuadOptions) -> Integral {
    match support {
        Support::Annulus { inner, outer } => integrate(f, inner, outer, opts),
        Support::Ball { radius } => integrate(f, 0.0, radius, opts),
        _ => integrate_to_infinity(f, 0.0, opts),
    }
}

/// Quadratic forms of `psi` with the potential of `domain` and coupling `spec.coupling()`.
pub fn rayleigh(psi: &TrialFunction, spec: &PotentialSpec, domain: Domain) -> Result<RayleighReport> {
    let z = spec.coupling();
    let opts = QuadOptions::with_tolerances(0.0, 1e-11);
    match (psi.params, domain) {
        (Params::Radial(profile), Domain::R4) => {
            let (kin, sing, nrm, err) = radial_forms(&profile)?;
            Ok(RayleighReport::assemble(kin, -sing, z, nrm, err))
        }
        (Params::Hydrogen { q, lift: None }, Domain::R3) | (Params::Hydrogen { q, lift: Some(_) }, Domain::Cylinder) => {
            if domain == Domain::Cylinder {
                check_radius(psi, spec)?;
            }
            let l = q.l as f64;
            let kin = integrate_to_infinity(
                |r| {
                    let (v, d) = hydrogen_radial(q, r);
                    (d * d + l * (l + 1.0) * v * v / (r * r)) * r * r
                },
                0.0,
                &opts,
            )
            .require(&opts)?;
            let nrm = integrate_to_infinity(|r| hydrogen_radial(q, r).0.powi(2) * r * r, 0.0, &opts).require(&opts)?;
            let pot = radial_potential(|r| hydrogen_radial(q, r).0.powi(2) * r * r, psi.support(), spec, domain, &opts)?;
            Ok(RayleighReport::assemble(kin.value, pot.value, z, nrm.value, kin.error + nrm.error + z.abs() * pot.error))
        }
        (Params::Shell { rho, norm: c, .. }, Domain::Cylinder) => {
            check_radius(psi, spec)?;
            let support = psi.support();
            let kin = radial_span(|r| 4.0 * PI * r * r * scaled_bump(r, rho, c).1.powi(2), support, &opts).require(&opts)?;
            let nrm = radial_span(|r| 4.0 * PI * r * r * scaled_bump(r, rho, c).0.powi(2), support, &opts).require(&opts)?;
            let pot = radial_potential(|r| 4.0 * PI * r * r * scaled_bump(r, rho, c).0.powi(2), support, spec, domain, &opts)?;
            Ok(RayleighReport::assemble(kin.value, pot.value, z, nrm.value, kin.error + nrm.error + z.abs() * pot.error))
        }
        (Params::Weyl { k, n, norm: c, .. }, Domain::Cylinder) => {
            check_radius(psi, spec)?;
            weyl_forms(k, n, c, spec)
        }
        _ => Err(unsupported(psi, domain)),
    }
}

fn check_radius(psi: &TrialFunction, spec: &PotentialSpec) -> Result<()> {
    match psi.compact_radius() {
        Some(r) if (r - spec.radius()).abs() <= 1e-14 * r => Ok(()),
        Some(r) => Err(Error::invalid(
            "R",
            format!("trial lives on a circle of radius {r}, potential has {}", spec.radius()),
        )),
        None => Err(unsupported(psi, Domain::Cylinder)),
    }
}

/// `int density(r) <V>(r) dr` where `density` already carries the `r^2` weight.
fn radial_potential<F: Fn(f64) -> f64>(
    density: F,
    support: Support,
    spec: &PotentialSpec,
    domain: Domain,
    opts: &QuadOptions,
) -> Result<Integral> {
    let radius = spec.radius();
    let mut failure = None;
    let out = radial_span(
        |r| {
            let d = density(r);
            if d == 0.0 {
                return 0.0;
            }
            let mean = match domain {
                Domain::R3 => -1.0 / (2.0 * radius * r),
                _ => match axial_moments(r, radius) {
                    Ok((m1, _)) => m1,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                },
            };
            d * mean
        },
        support,
        opts,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    out.require(opts)
}

/// Weyl trial forms: `h0 = ||grad phi_n||^2 + 3 k^2` and `v` by the product rule.
fn weyl_forms(k: f64, n: u32, c: f64, spec: &PotentialSpec) -> Result<RayleighReport> {
    let nf = n as f64;
    let (sn, sw) = gauss_legendre_on(96, 0.0, 1.0);
    let (tn, tw) = gauss_legendre_on(24, -1.0, 1.0);
    let n_phi = 48;
    let dphi = 2.0 * PI / n_phi as f64;
    let (mut kin, mut pot, mut nrm) = (0.0, 0.0, 0.0);
    for (&s, &ws) in sn.iter().zip(&sw) {
        let (b, d1, _) = bump(s);
        if b == 0.0 {
            continue;
        }
        for (&ct, &wt) in tn.iter().zip(&tw) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let ph = dphi * j as f64;
                let w = [st * ph.cos(), st * ph.sin(), ct];
                let r = (0..3)
                    .map(|i| (nf * (super::WEYL_SEED_CENTRE[i] + nf + s * w[i])).powi(2))
                    .sum::<f64>()
                    .sqrt();
                let (m1, _) = axial_moments(r, spec.radius())?;
                let wgt = ws * wt * dphi * s * s * c * c;
                nrm += wgt * b * b;
                kin += wgt * (d1 * d1 / (nf * nf) + 3.0 * k * k * b * b);
                pot += wgt * b * b * m1;
            }
        }
    }
    Ok(RayleighReport::assemble(kin, pot, spec.coupling(), nrm, 1e-10 * (kin.abs() + pot.abs())))
}

/// `<a, b>` on the common domain (both trials independent of `x4` on the cylinder).
/// Three-dimensional product rule: adaptive in `r` over the common support,
/// Gauss-Legendre in `cos theta`, trapezoid in the azimuth.
pub fn inner_product(a: &TrialFunction, b: &TrialFunction) -> Result<Complex64> {
    if a.domain() != b.domain() || a.compact_radius() != b.compact_radius() {
        return Err(Error::invalid("trial", "inner product needs trials on the same domain"));
    }
    let opts = QuadOptions::with_tolerances(1e-15, 1e-13);
    if let (Params::Radial(pa), Params::Radial(pb)) = (a.params, b.params) {
        let re = radial_span(
            |r| super::hardy::S3_AREA * pa.eval(r).0 * pb.eval(r).0 * r.powi(3),
            common_support(a.support(), b.support()).unwrap_or(Support::Unbounded),
            &opts,
        );
        return Ok(Complex64::new(re.value, 0.0));
    }
    for t in [a, b] {
        if matches!(t.params, Params::Weyl { .. } | Params::Radial(_)) {
            return Err(Error::UnsupportedTrial {
                kind: t.kind().name(),
                domain: "three-dimensional product rule",
            });
        }
    }
    let support = match common_support(a.support(), b.support()) {
        Some(s) => s,
        None => return Ok(Complex64::new(0.0, 0.0)),
    };
    let (tn, tw) = gauss_legendre_on(24, -1.0, 1.0);
    let n_phi = 48;
    let dphi = 2.0 * PI / n_phi as f64;
    let axial = a.compact_radius().map(|r| 2.0 * PI * r).unwrap_or(1.0);
    let dim = a.dimension();
    let integrand = |r: f64, part: usize| {
        let mut acc = 0.0;
        for (&ct, &wt) in tn.iter().zip(&tw) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let ph = dphi * (j as f64 + 0.5);
                let mut x = [0.0; 4];
                x[0] = r * st * ph.cos();
                x[1] = r * st * ph.sin();
                x[2] = r * ct;
                let p = a.value(&x[..dim]).conj() * b.value(&x[..dim]);
                acc += wt * dphi * if part == 0 { p.re } else { p.im };
            }
        }
        acc * r * r * axial
    };
    let re = radial_span(|r| integrand(r, 0), support, &opts);
    let im = radial_span(|r| integrand(r, 1), support, &opts);
    Ok(Complex64::new(re.value, im.value))
}

/// Radial intersection of two supports; `None` when they are disjoint.
fn common_support(a: Support, b: Support) -> Option<Support> {
    let bounds = |s: Support| match s {
        Support::Annulus { inner, outer } => (inner, outer),
        Support::Ball { radius } => (0.0, radius),
        _ => (0.0, f64::INFINITY),
    };
    let (a0, a1) = bounds(a);
    let (b0, b1) = bounds(b);
    let lo = a0.max(b0);
    let hi = a1.min(b1);
    if lo >= hi {
        None
    } else if hi.is_infinite() {
        Some(Support::Unbounded)
    } else {
        Some(Support::Annulus { inner: lo, outer: hi })
    }
}

pub fn gram_matrix(trials: &[TrialFunction]) -> Result<Vec<Vec<Complex64>>> {
    let n = trials.len();
    let mut g = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in i..n {
            let v = inner_product(&trials[i], &trials[j])?;
            g[i][j] = v;
            g[j][i] = v.conj();
        }
    }
    Ok(g)
}
