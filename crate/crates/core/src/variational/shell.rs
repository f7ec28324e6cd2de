//! Shell trial functions `(2 pi R)^(-1/2) rho^(-3/2) phi(x / rho)` with a radial
//! bump `phi` supported in `1 < r < 2`.

use std::f64::consts::PI;

use super::{Params, Support, TrialFunction};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions};

/// Bump `exp(-1/(1 - u^2))` on `|u| < 1` with its first two derivatives in `u`.
pub(crate) fn bump(u: f64) -> (f64, f64, f64) {
    if u.abs() >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let q = 1.0 - u * u;
    let b = (-1.0 / q).exp();
    if b == 0.0 {
        return (0.0, 0.0, 0.0);
    }
    let g1 = -2.0 * u / (q * q);
    let g2 = -2.0 / (q * q) - 8.0 * u * u / (q * q * q);
    (b, b * g1, b * (g1 * g1 + g2))
}

/// Unnormalized shell bump `exp(-1/(1 - (2r - 3)^2))` and its `r`-derivative.
pub fn shell_bump(r: f64) -> (f64, f64) {
    let (b, db, _) = bump(2.0 * r - 3.0);
    (b, 2.0 * db)
}

/// Shell constants of the unit-scale profile `phi`, normalized in `L^2(R^3)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ShellConstants {
    /// `c` with `||c b||_{L^2(R^3)} = 1`.
    pub norm: f64,
    /// `K_1 = ||grad phi||^2`.
    pub kinetic: f64,
    /// `<phi, r^-1 phi>`.
    pub inverse_r: f64,
    /// `rho* = K_1 / (2 <1/r>)`: with `Z = 4R` on the cylinder,
    /// `h[psi_rho] = K_1 / rho^2 - 2 <1/r> / rho`, negative exactly for `rho > rho*`.
    pub threshold: f64,
}

pub fn shell_constants() -> ShellConstants {
    let opts = QuadOptions::with_tolerances(0.0, 1e-14);
    let m2 = integrate(|r| 4.0 * PI * r * r * shell_bump(r).0.powi(2), 1.0, 2.0, &opts).value;
    let k = integrate(|r| 4.0 * PI * r * r * shell_bump(r).1.powi(2), 1.0, 2.0, &opts).value;
    let m1 = integrate(|r| 4.0 * PI * r * shell_bump(r).0.powi(2), 1.0, 2.0, &opts).value;
    let kinetic = k / m2;
    let inverse_r = m1 / m2;
    ShellConstants {
        norm: 1.0 / m2.sqrt(),
        kinetic,
        inverse_r,
        threshold: kinetic / (2.0 * inverse_r),
    }
}

/// `rho^(-3/2) c b(r / rho)` and its `r`-derivative.
pub(crate) fn scaled_bump(r: f64, rho: f64, c: f64) -> (f64, f64) {
    let (b, db) = shell_bump(r / rho);
    let s = c * rho.powf(-1.5);
    (s * b, s * db / rho)
}

/// Normalized shell trial on the cylinder of radius `R`, supported in `rho < r < 2 rho`.
pub fn shell_trial(rho: f64, radius: f64) -> Result<TrialFunction> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::invalid("rho", format!("shell scale must be positive, got {rho}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("R", format!("radius must be positive, got {radius}")));
    }
    let c = shell_constants().norm;
    Ok(TrialFunction::new(
        Params::Shell { rho, radius, norm: c },
        Support::Annulus {
            inner: rho,
            outer: 2.0 * rho,
        },
    ))
}
