//! Three-dimensional hydrogen eigenfunctions and the ground-state bound on
//! the cylinder.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{HydrogenQuantumNumbers, Params, RayleighReport, Support, TrialFunction};
use crate::error::Result;
use crate::potential::{axial_integral, PotentialSpec};
use crate::quadrature::{integrate_to_infinity, QuadOptions};
use crate::special::{assoc_legendre, assoc_legendre_dtheta, factorial, laguerre};

/// Radial factor `R_Nl(r)` (normalized with weight `r^2`) and its derivative.
pub fn hydrogen_radial(q: HydrogenQuantumNumbers, r: f64) -> (f64, f64) {
    let n = q.n as f64;
    let l = q.l;
    let k = q.n - l - 1;
    let norm = ((2.0 / n).powi(3) * factorial(k) / (2.0 * n * factorial(q.n + l))).sqrt();
    let rho = 2.0 * r / n;
    let (lag, dlag) = laguerre(k, 2.0 * l as f64 + 1.0, rho);
    let e = (-0.5 * rho).exp();
    let pw = rho.powi(l as i32);
    let value = norm * e * pw * lag;
    // d/drho [e^{-rho/2} rho^l L] = e^{-rho/2} rho^l (L' + (l/rho - 1/2) L)
    let dpw = if l == 0 { 0.0 } else { l as f64 * rho.powi(l as i32 - 1) };
    let drho = norm * e * (pw * dlag + (dpw - 0.5 * pw) * lag);
    (value, drho * 2.0 / n)
}

fn ylm_norm(l: u32, m: i32) -> f64 {
    let am = m.unsigned_abs();
    let ratio = if m >= 0 {
        factorial(l - am) / factorial(l + am)
    } else {
        factorial(l + am) / factorial(l - am)
    };
    ((2.0 * l as f64 + 1.0) / (4.0 * PI) * ratio).sqrt()
}

fn spherical(x: &[f64]) -> (f64, f64, f64) {
    let r = super::norm(x);
    let theta = if r == 0.0 { 0.0 } else { (x[2] / r).clamp(-1.0, 1.0).acos() };
    let phi = x[1].atan2(x[0]);
    (r, theta, phi)
}

pub(crate) fn value(q: HydrogenQuantumNumbers, x: &[f64]) -> Complex64 {
    let (r, theta, phi) = spherical(x);
    let (rad, _) = hydrogen_radial(q, r);
    let y = ylm_norm(q.l, q.m) * assoc_legendre(q.l, q.m, theta.cos());
    Complex64::from_polar(rad * y, q.m as f64 * phi)
}

/// Cartesian gradient from the spherical components; valid off the `x3` axis.
pub(crate) fn gradient(q: HydrogenQuantumNumbers, x: &[f64]) -> [Complex64; 3] {
    let (r, theta, phi) = spherical(x);
    let (rad, drad) = hydrogen_radial(q, r);
    let c = ylm_norm(q.l, q.m);
    let p = c * assoc_legendre(q.l, q.m, theta.cos());
    let dp = c * assoc_legendre_dtheta(q.l, q.m, theta);
    let phase = Complex64::from_polar(1.0, q.m as f64 * phi);
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let g_r = phase * (drad * p);
    let g_t = phase * (rad / r * dp);
    let g_p = if q.m == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        phase * Complex64::new(0.0, q.m as f64) * (rad / (r * st) * p)
    };
    [
        g_r * (st * cp) + g_t * (ct * cp) - g_p * sp,
        g_r * (st * sp) + g_t * (ct * sp) + g_p * cp,
        g_r * ct - g_t * st,
    ]
}

/// Normalized three-dimensional hydrogen eigenfunction `phi_Nlm` (Condon-Shortley
/// phase, `a0 = 1`). Eigenvalue `-1/N^2` of `-Delta - 2/r`.
pub fn hydrogen_eigenfunction(q: HydrogenQuantumNumbers) -> Result<TrialFunction> {
    let q = HydrogenQuantumNumbers::new(q.n, q.l, q.m)?;
    Ok(TrialFunction::new(Params::Hydrogen { q, lift: None }, Support::Unbounded))
}

/// `h[psi]` for `psi = (2 pi R)^(-1/2) phi_100` on the cylinder with `Z = 4R`.
/// The axial integral reduces `v` to a three-dimensional radial integral.
pub fn ground_state_bound(radius: f64) -> Result<RayleighReport> {
    let spec = PotentialSpec::physical(radius)?;
    let q = HydrogenQuantumNumbers::new(1, 0, 0)?;
    let opts = QuadOptions::with_tolerances(0.0, 1e-12);
    let weight = |r: f64| 4.0 * PI * r * r;
    let kin = integrate_to_infinity(
        |r| {
            let (_, d) = hydrogen_radial(q, r);
            d * d * r * r
        },
        0.0,
        &opts,
    )
    .require(&opts)?;
    let nrm = integrate_to_infinity(
        |r| {
            let (v, _) = hydrogen_radial(q, r);
            v * v * r * r
        },
        0.0,
        &opts,
    )
    .require(&opts)?;
    let mut failure = None;
    let pot = integrate_to_infinity(
        |r| {
            let (v, _) = hydrogen_radial(q, r);
            let phi2 = v * v / (4.0 * PI);
            if phi2 == 0.0 {
                return 0.0;
            }
            match axial_integral(r, &spec) {
                Ok(ax) => weight(r) * phi2 * ax.value / (2.0 * PI * radius),
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        &opts,
    )
    .require(&opts)?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(RayleighReport::assemble(
        kin.value,
        pot.value,
        spec.coupling(),
        nrm.value,
        kin.error + pot.error * spec.coupling() + nrm.error,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(n: u32, l: u32, m: i32) -> HydrogenQuantumNumbers {
        HydrogenQuantumNumbers::new(n, l, m).unwrap()
    }

    #[test]
    fn ground_state_closed_form() {
        let phi = hydrogen_eigenfunction(q(1, 0, 0)).unwrap();
        let x = [0.3, -0.4, 1.2];
        let r = super::super::norm(&x);
        assert_relative_eq!(phi.value(&x).re, (-r).exp() / PI.sqrt(), max_relative = 1e-14);
        assert_eq!(phi.value(&x).im, 0.0);
    }

    #[test]
    fn radial_closed_forms() {
        let r = 0.9;
        // R_20 = (1/sqrt 2) (1 - r/2) e^{-r/2}, R_21 = r e^{-r/2} / (2 sqrt 6).
        assert_relative_eq!(hydrogen_radial(q(2, 0, 0), r).0, (1.0 - r / 2.0) * (-r / 2.0).exp() / 2f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(hydrogen_radial(q(2, 1, 0), r).0, r * (-r / 2.0).exp() / (2.0 * 6f64.sqrt()), max_relative = 1e-14);
        let h = 1e-6;
        for &qq in &[q(1, 0, 0), q(3, 1, 1), q(4, 3, -2)] {
            let fd = (hydrogen_radial(qq, r + h).0 - hydrogen_radial(qq, r - h).0) / (2.0 * h);
            assert_relative_eq!(hydrogen_radial(qq, r).1, fd, max_relative = 1e-8);
        }
    }

    #[test]
    fn invalid_quantum_numbers() {
        assert!(HydrogenQuantumNumbers::new(0, 0, 0).is_err());
        assert!(HydrogenQuantumNumbers::new(2, 2, 0).is_err());
        assert!(HydrogenQuantumNumbers::new(3, 1, -2).is_err());
        let bad = HydrogenQuantumNumbers { n: 2, l: 2, m: 0 };
        assert!(hydrogen_eigenfunction(bad).is_err());
    }

    #[test]
    fn ground_state_bound_is_minus_one() {
        let rep = ground_state_bound(0.1).unwrap();
        assert_relative_eq!(rep.kinetic, 1.0, max_relative = 1e-10);
        assert_relative_eq!(rep.norm_sq, 1.0, max_relative = 1e-10);
        assert!((rep.total + 1.0).abs() <= 1e-8);
        // v = -(1/(2R)) <1/r> = -5 at R = 0.1.
        assert_relative_eq!(rep.potential, -5.0, max_relative = 1e-9);
    }
}
