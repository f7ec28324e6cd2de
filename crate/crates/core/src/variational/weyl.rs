//! Weyl sequences `psi_n = phi_n(x) e^{i k (x1 + x2 + x3)}` pushed out to
//! infinity along the diagonal of the positive octant.
//!
//! `phi_n(x) = n^(-3/2) phi(x/n - n)` with `phi = c b(|y - y0|)`, so `phi_n`
//! is a ball of radius `n` centred at `n (n + 2) (1, 1, 1)` and lies in
//! `Omega_n = (n, inf)^3 x S^1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::rayleigh::axial_moments;
use super::shell::bump;
use super::{Params, Support, TrialFunction};
use crate::error::{Error, Result};
use crate::potential::{closed_form_unchecked, PotentialSpec};
use crate::quadrature::{gauss_legendre_on, integrate, QuadOptions};

/// Centre `y0` of the seed bump; the unit ball around it lies in the open octant.
pub const WEYL_SEED_CENTRE: [f64; 3] = [2.0, 2.0, 2.0];

const ANGULAR_THETA: usize = 24;
const ANGULAR_PHI: usize = 48;

fn seed_norm() -> f64 {
    let opts = QuadOptions::with_tolerances(0.0, 1e-14);
    let m = integrate(|s| 4.0 * PI * s * s * bump(s).0.powi(2), 0.0, 1.0, &opts).value;
    1.0 / m.sqrt()
}

fn local(x: &[f64], n: u32) -> ([f64; 3], f64) {
    let nf = n as f64;
    let mut d = [0.0; 3];
    for i in 0..3 {
        d[i] = x[i] / nf - nf - WEYL_SEED_CENTRE[i];
    }
    (d, super::norm(&d))
}

pub(crate) fn value(x: &[f64], k: f64, n: u32, c: f64) -> Complex64 {
    let (_, s) = local(x, n);
    let amp = c * (n as f64).powf(-1.5) * bump(s).0;
    Complex64::from_polar(amp, k * (x[0] + x[1] + x[2]))
}

pub(crate) fn gradient(x: &[f64], k: f64, n: u32, c: f64) -> [Complex64; 3] {
    let nf = n as f64;
    let (d, s) = local(x, n);
    let (b, db, _) = bump(s);
    let amp = c * nf.powf(-1.5);
    let phase = Complex64::from_polar(1.0, k * (x[0] + x[1] + x[2]));
    let mut g = [Complex64::new(0.0, 0.0); 3];
    for i in 0..3 {
        let radial = if s > 0.0 { db * d[i] / (s * nf) } else { 0.0 };
        g[i] = phase * Complex64::new(amp * radial, amp * k * b);
    }
    g
}

/// Normalized Weyl trial on the cylinder of radius `R`.
pub fn weyl_trial(k: f64, n: u32, radius: f64) -> Result<TrialFunction> {
    if n < 1 {
        return Err(Error::invalid("n", "Weyl index starts at 1"));
    }
    if !(k >= 0.0 && k.is_finite()) {
        return Err(Error::invalid("k", "wavenumber must be finite and non-negative"));
    }
    if !(radius > 0.0) {
        return Err(Error::invalid("R", "radius must be positive"));
    }
    let nf = n as f64;
    let centre = WEYL_SEED_CENTRE.map(|y| nf * (y + nf));
    Ok(TrialFunction::new(
        Params::Weyl {
            k,
            n,
            radius,
            norm: seed_norm(),
        },
        Support::Cube { centre, radius: nf },
    ))
}

/// `sup |V_c|` over `Omega_n = (n, inf)^3 x S^1`, attained at `r = sqrt(3) n`, `x4 = 0`.
pub fn weyl_sup_potential(n: u32, spec: &PotentialSpec) -> f64 {
    closed_form_unchecked(3f64.sqrt() * n as f64, 0.0, spec.radius()).abs()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct WeylReport {
    pub n: u32,
    pub k: f64,
    /// `||-Delta psi_n + Z V psi_n - 3 k^2 psi_n||`.
    pub residual: f64,
    /// `sqrt(||Delta phi_n||^2 + 12 k^2 ||grad phi_n||^2) + Z sup |V|`.
    pub bound: f64,
    pub laplacian_norm: f64,
    pub gradient_norm: f64,
    pub sup_potential: f64,
    /// Difference between the residual on the full and a halved product rule.
    pub quadrature_error: f64,
}

/// Residual of the `n`-th Weyl function for `-Delta + Z V_c` at energy `3 k^2`
/// with the physical coupling `Z = 4R`.
pub fn weyl_residual(k: f64, n: u32, radius: f64) -> Result<WeylReport> {
    let spec = PotentialSpec::physical(radius)?;
    weyl_residual_with(k, n, &spec)
}

/// As [`weyl_residual`] with an explicit coupling.
pub fn weyl_residual_with(k: f64, n: u32, spec: &PotentialSpec) -> Result<WeylReport> {
    let trial = weyl_trial(k, n, spec.radius())?;
    let c = match trial.params {
        Params::Weyl { norm, .. } => norm,
        _ => unreachable!(),
    };
    let nf = n as f64;
    let z = spec.coupling();
    let opts = QuadOptions::with_tolerances(0.0, 1e-13);
    let lap2 = integrate(
        |s| {
            let (_, d1, d2) = bump(s);
            let lb = if s > 0.0 { d2 + 2.0 * d1 / s } else { 3.0 * d2 };
            4.0 * PI * s * s * lb * lb
        },
        0.0,
        1.0,
        &opts,
    )
    .value;
    let grad2 = integrate(|s| 4.0 * PI * s * s * bump(s).1.powi(2), 0.0, 1.0, &opts).value;
    let laplacian_norm = c * lap2.sqrt() / (nf * nf);
    let gradient_norm = c * grad2.sqrt() / nf;

    let full = residual_product_rule(k, n, c, z, spec, 96, ANGULAR_THETA, ANGULAR_PHI)?;
    let half = residual_product_rule(k, n, c, z, spec, 64, ANGULAR_THETA / 2 + 2, ANGULAR_PHI / 2 + 4)?;
    let sup_potential = weyl_sup_potential(n, spec);
    let bound = (laplacian_norm.powi(2) + 12.0 * k * k * gradient_norm.powi(2)).sqrt() + z.abs() * sup_potential;
    Ok(WeylReport {
        n,
        k,
        residual: full,
        bound,
        laplacian_norm,
        gradient_norm,
        sup_potential,
        quadrature_error: (full - half).abs(),
    })
}

/// `||-Delta phi_n - 2 i k . grad phi_n + Z V phi_n||` on the ball
/// `|y - y0| < 1` in local coordinates, Gauss-Legendre in `s` and `cos theta`,
/// trapezoid in the azimuth and in `x4`.
#[allow(clippy::too_many_arguments)]
fn residual_product_rule(
    k: f64,
    n: u32,
    c: f64,
    z: f64,
    spec: &PotentialSpec,
    n_s: usize,
    n_theta: usize,
    n_phi: usize,
) -> Result<f64> {
    let nf = n as f64;
    let (sn, sw) = gauss_legendre_on(n_s, 0.0, 1.0);
    let (tn, tw) = gauss_legendre_on(n_theta, -1.0, 1.0);
    let dphi = 2.0 * PI / n_phi as f64;
    let radius = spec.radius();
    let mut acc = 0.0;
    for (&s, &ws) in sn.iter().zip(&sw) {
        let (b, d1, d2) = bump(s);
        if b == 0.0 {
            continue;
        }
        let lap = (d2 + 2.0 * d1 / s) / (nf * nf);
        for (&ct, &wt) in tn.iter().zip(&tw) {
            let st = (1.0 - ct * ct).max(0.0).sqrt();
            for j in 0..n_phi {
                let ph = dphi * j as f64;
                let w = [st * ph.cos(), st * ph.sin(), ct];
                let dot = w[0] + w[1] + w[2];
                let mut r2 = 0.0;
                for i in 0..3 {
                    let xi = nf * (WEYL_SEED_CENTRE[i] + nf + s * w[i]);
                    r2 += xi * xi;
                }
                let r = r2.sqrt();
                let (m1, m2) = if z == 0.0 {
                    (0.0, 0.0)
                } else {
                    axial_moments(r, radius)?
                };
                // <(-lap + Z V b)^2> over x4 plus the cross-free gradient term.
                let real = lap * lap - 2.0 * lap * z * b * m1 + z * z * b * b * m2;
                let imag = 4.0 * k * k * (d1 * dot / nf).powi(2);
                acc += ws * wt * dphi * s * s * (real + imag);
            }
        }
    }
    Ok(c * acc.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn free_residual_is_the_scaled_laplacian() {
        let spec = PotentialSpec::with_coupling(0.1, 0.0).unwrap();
        let r1 = weyl_residual_with(0.0, 1, &spec).unwrap();
        let r4 = weyl_residual_with(0.0, 4, &spec).unwrap();
        assert_relative_eq!(r1.residual, r1.laplacian_norm, max_relative = 1e-8);
        assert_relative_eq!(r4.residual, r1.laplacian_norm / 16.0, max_relative = 1e-8);
    }

    #[test]
    fn gradient_term_matches_the_isotropic_average() {
        // The mean of (w1 + w2 + w3)^2 over the sphere is 1, so the k-term is 4 k^2 ||grad phi_n||^2.
        let spec = PotentialSpec::with_coupling(0.1, 0.0).unwrap();
        let r = weyl_residual_with(1.0, 3, &spec).unwrap();
        let expect = (r.laplacian_norm.powi(2) + 4.0 * r.gradient_norm.powi(2)).sqrt();
        assert_relative_eq!(r.residual, expect, max_relative = 1e-8);
    }

    #[test]
    fn residual_respects_the_bound_and_decays() {
        let mut prev = f64::INFINITY;
        for &n in &[2, 4, 8, 16] {
            let rep = weyl_residual(1.0, n, 0.1).unwrap();
            assert!(rep.residual <= rep.bound);
            assert!(rep.residual < prev);
            assert!(rep.quadrature_error < 1e-6 * rep.residual);
            prev = rep.residual;
        }
    }

    #[test]
    fn sup_potential_is_the_far_field() {
        let spec = PotentialSpec::physical(0.1).unwrap();
        for &n in &[4, 16, 64] {
            let r = 3f64.sqrt() * n as f64;
            let sup = weyl_sup_potential(n, &spec);
            assert_relative_eq!(sup, 1.0 / (2.0 * 0.1 * r), max_relative = 1e-10);
        }
    }

    #[test]
    fn trial_is_supported_in_the_shifted_octant() {
        let t = weyl_trial(0.5, 3, 0.1).unwrap();
        match t.support() {
            Support::Cube { centre, radius } => {
                assert_eq!(centre, [15.0, 15.0, 15.0]);
                assert!(centre.iter().all(|&c| c - radius > 3.0));
            }
            other => panic!("unexpected support {other:?}"),
        }
        assert_eq!(t.value(&[0.0, 0.0, 0.0, 0.0]), Complex64::new(0.0, 0.0));
        assert!(t.value(&[15.0, 15.0, 15.0, 0.0]).norm() > 0.0);
    }
}
