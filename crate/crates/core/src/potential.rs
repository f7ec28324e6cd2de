//! The Gauss-law potential of a point charge on `R^3 x S^1`.
//!
//! Internal units: `hbar^2 / 2m = 1` and the Bohr radius `a0 = 1`. Lengths are
//! in Bohr radii and energies in units of `hbar^2 / (2 m a0^2)` (one Rydberg),
//! so the three-dimensional hydrogen ground state sits at `-1`.
//!
//! Unrolling the circle of radius `R` gives a chain of four-dimensional charges
//! at `x4 = 2 pi n R`. Summing their `-1/|x|^2` potentials yields
//!
//! ```text
//! V_c(r, x4) = -sum_n 1 / (r^2 + (x4 - 2 pi n R)^2)
//!            = -(1 / (2 R r)) sinh(r/R) / (cosh(r/R) - cos(x4/R)).
//! ```

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_breakpoints, QuadOptions};

/// CODATA 2018 Bohr radius in meters.
pub const BOHR_RADIUS_M: f64 = 5.291_772_109_03e-11;

/// Critical compactification radius in Bohr radii.
pub const CRITICAL_RADIUS: f64 = 0.25;

/// Image count used by the oracle checks.
pub const ORACLE_IMAGES: usize = 10_000;

/// Image count for interactive evaluation.
pub const DEFAULT_IMAGES: usize = 100;

/// Below this value of `r/R` the prefactor `sinh(r/R)/r` uses its Taylor series.
pub const SERIES_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSpec {
    radius: f64,
    coupling: f64,
    n_images: usize,
}

impl PotentialSpec {
    /// Physical configuration: the coupling follows the charge relation `Z = 4R`.
    pub fn physical(radius: f64) -> Result<Self> {
        let coupling = charge_to_z(radius)?;
        Self::with_coupling(radius, coupling)
    }

    /// Free coupling, decoupled from the radius.
    pub fn with_coupling(radius: f64, coupling: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("R", format!("radius must be positive, got {radius}")));
        }
        if !coupling.is_finite() {
            return Err(Error::invalid("Z", "coupling must be finite"));
        }
        Ok(PotentialSpec {
            radius,
            coupling,
            n_images: DEFAULT_IMAGES,
        })
    }

    pub fn with_images(mut self, n_images: usize) -> Result<Self> {
        if n_images < 1 {
            return Err(Error::invalid("n_images", "need at least one image"));
        }
        self.n_images = n_images;
        Ok(self)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn n_images(&self) -> usize {
        self.n_images
    }

    /// Half the circumference, `pi R`.
    pub fn half_period(&self) -> f64 {
        PI * self.radius
    }
}

/// A point of the cylinder, `r = |(x1, x2, x3)|` and `x4` in `[-pi R, pi R]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint {
    pub r: f64,
    pub x4: f64,
}

impl SpacePoint {
    pub fn new(r: f64, x4: f64) -> Self {
        SpacePoint { r, x4 }
    }

    /// Wraps an arbitrary `x4` into the fundamental cell `[-pi R, pi R]`.
    pub fn reduced(r: f64, x4: f64, radius: f64) -> Self {
        let period = 2.0 * PI * radius;
        let mut y = (x4 + PI * radius).rem_euclid(period) - PI * radius;
        if y < -PI * radius {
            y = -PI * radius;
        }
        SpacePoint { r, x4: y }
    }

    fn check(&self, spec: &PotentialSpec) -> Result<()> {
        if !(self.r >= 0.0) {
            return Err(Error::invalid("r", format!("radial distance must be >= 0, got {}", self.r)));
        }
        let half = spec.half_period();
        if !(self.x4.abs() <= half * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(Error::OutsideFundamentalCell {
                x4: self.x4,
                half_period: half,
            });
        }
        if self.r == 0.0 && self.x4 == 0.0 {
            return Err(Error::SingularPoint);
        }
        Ok(())
    }
}

/// `sinh(a) / a` with a Taylor series for small `a`.
fn sinhc(a: f64) -> f64 {
    if a < SERIES_THRESHOLD {
        let a2 = a * a;
        1.0 + a2 / 6.0 * (1.0 + a2 / 20.0 * (1.0 + a2 / 42.0))
    } else {
        a.sinh() / a
    }
}

/// Closed form of the compactified potential.
pub fn closed_form(p: SpacePoint, spec: &PotentialSpec) -> Result<f64> {
    p.check(spec)?;
    Ok(closed_form_unchecked(p.r, p.x4, spec.radius))
}

pub(crate) fn closed_form_unchecked(r: f64, x4: f64, radius: f64) -> f64 {
    let a = r / radius;
    let b = x4 / radius;
    if a > 20.0 {
        // sinh/(cosh - cos) written in e^{-a} to stay finite for huge r/R.
        let e1 = (-a).exp();
        let e2 = e1 * e1;
        let ratio = (1.0 - e2) / (1.0 + e2 - 2.0 * b.cos() * e1);
        return -ratio / (2.0 * radius * r);
    }
    // cosh a - cos b = 2 sinh^2(a/2) + 2 sin^2(b/2), free of cancellation.
    let sh = (0.5 * a).sinh();
    let sn = (0.5 * b).sin();
    let denom = 2.0 * (sh * sh + sn * sn);
    -sinhc(a) / (2.0 * radius * radius * denom)
}

/// Truncated image sum with rigorous error bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageSum {
    /// `-sum_{|n| <= N} 1 / (r^2 + (x4 - 2 pi n R)^2)`.
    pub partial: f64,
    /// Partial sum plus the integral estimate of both tails (equal to
    /// `partial` when `N = 0`).
    pub value: f64,
    /// Bound on `|exact - value|`, including a floating-point allowance.
    pub tail_bound: f64,
    /// Comparison bound `sum_{|n| > N} 1 / (2 pi R |n| - pi R)^2` on
    /// `|exact - partial|`.
    pub comparison_bound: f64,
}

/// Neumaier-compensated sum of `1/(r^2 + (x4 - 2 pi n R)^2)` over `|n| <= n_max`,
/// smallest terms first. Returns the sum and the sum of magnitudes.
fn image_terms(r: f64, x4: f64, radius: f64, n_max: usize, skip_zero: bool) -> (f64, f64) {
    let r2 = r * r;
    let step = 2.0 * PI * radius;
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    let add = |t: f64, sum: &mut f64, comp: &mut f64| {
        let s = *sum + t;
        if sum.abs() >= t.abs() {
            *comp += (*sum - s) + t;
        } else {
            *comp += (t - s) + *sum;
        }
        *sum = s;
    };
    for n in (1..=n_max).rev() {
        let nf = n as f64;
        let dp = x4 - step * nf;
        let dm = x4 + step * nf;
        add(1.0 / (r2 + dp * dp), &mut sum, &mut comp);
        add(1.0 / (r2 + dm * dm), &mut sum, &mut comp);
    }
    if !skip_zero {
        add(1.0 / (r2 + x4 * x4), &mut sum, &mut comp);
    }
    let total = sum + comp;
    (total, total.abs())
}

/// `int_{y0}^inf dy / (r^2 + y^2)` for `y0 > 0`.
fn lorentz_tail(r: f64, y0: f64) -> f64 {
    let q = r / y0;
    if q < 1e-4 {
        (1.0 - q * q / 3.0) / y0
    } else {
        q.atan() / r
    }
}

/// Bound on `sup |d/dy (r^2 + y^2)^-1|` variation over `[y0, inf)`.
fn derivative_variation(r: f64, y0: f64) -> f64 {
    let h1 = |y: f64| 2.0 * y / (r * r + y * y).powi(2);
    let y_star = r / 3f64.sqrt();
    if y0 >= y_star {
        h1(y0)
    } else {
        2.0 * h1(y_star) - h1(y0)
    }
}

/// Tails `sum_{|n| > N}` of the image series: midpoint-rule integral estimate
/// and its remainder bound (Peano kernel of the midpoint rule, `<= 1/8`).
fn image_tails(r: f64, x4: f64, radius: f64, n_max: usize) -> (f64, f64) {
    let step = 2.0 * PI * radius;
    let a = n_max as f64 + 0.5;
    let y_plus = step * a - x4;
    let y_minus = step * a + x4;
    let estimate = (lorentz_tail(r, y_plus) + lorentz_tail(r, y_minus)) / step;
    let bound = step / 8.0 * (derivative_variation(r, y_plus) + derivative_variation(r, y_minus));
    (estimate, bound)
}

/// Image sum truncated at `|n| <= spec.n_images()`.
pub fn image_sum(p: SpacePoint, spec: &PotentialSpec) -> Result<ImageSum> {
    p.check(spec)?;
    Ok(image_sum_unchecked(p.r, p.x4, spec.radius, spec.n_images, false))
}

fn image_sum_unchecked(r: f64, x4: f64, radius: f64, n_max: usize, skip_zero: bool) -> ImageSum {
    let (partial, abs_sum) = image_terms(r, x4, radius, n_max, skip_zero);
    let comparison = trigamma_tail(n_max, radius);
    let rounding = 8.0 * f64::EPSILON * abs_sum;
    if n_max == 0 {
        return ImageSum {
            partial: -partial,
            value: -partial,
            tail_bound: comparison + rounding,
            comparison_bound: comparison + rounding,
        };
    }
    let (tail, tail_err) = image_tails(r, x4, radius, n_max);
    let value = partial + tail;
    ImageSum {
        partial: -partial,
        value: -value,
        tail_bound: tail_err + rounding + 8.0 * f64::EPSILON * value.abs(),
        comparison_bound: comparison + rounding,
    }
}

/// `sum_{|n| > N} 1 / (pi R (2|n| - 1))^2 = psi_1(N + 1/2) / (2 pi^2 R^2)`.
fn trigamma_tail(n_max: usize, radius: f64) -> f64 {
    crate::special::trigamma(n_max as f64 + 0.5) / (2.0 * PI * PI * radius * radius)
}

/// `W = V_c + 1/(r^2 + x4^2)`, the contribution of all images except the
/// charge itself. Finite at the charge position.
pub fn remainder_w(p: SpacePoint, spec: &PotentialSpec) -> Result<f64> {
    match p.check(spec) {
        Ok(()) | Err(Error::SingularPoint) => {}
        Err(e) => return Err(e),
    }
    let rho2 = p.r * p.r + p.x4 * p.x4;
    if rho2 < 1e-4 * spec.radius * spec.radius {
        // Direct sum over n != 0: the closed form loses digits to cancellation here.
        Ok(image_sum_unchecked(p.r, p.x4, spec.radius, 4096, true).value)
    } else {
        Ok(closed_form_unchecked(p.r, p.x4, spec.radius) + 1.0 / rho2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxialIntegral {
    /// Adaptive quadrature of `V_c` over the circle.
    pub value: f64,
    /// Estimated quadrature error.
    pub error: f64,
    /// Same integral from the arctan antiderivative.
    pub antiderivative: f64,
}

/// `int_{-pi R}^{pi R} V_c(r, x4) dx4`, which equals `-pi / r` for every `R`.
pub fn axial_integral(r: f64, spec: &PotentialSpec) -> Result<AxialIntegral> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::invalid("r", format!("axial integral needs r > 0, got {r}")));
    }
    let half = spec.half_period();
    let radius = spec.radius;
    let opts = QuadOptions::with_tolerances(0.0, 1e-13);
    // The integrand peaks at x4 = 0 with width ~ r.
    let w = r.min(half);
    let mut points = vec![-half, 0.0, half];
    if w < half {
        points = vec![-half, -w, 0.0, w, half];
    }
    let quad = integrate_breakpoints(|x| closed_form_unchecked(r, x, radius), &points, &opts);
    Ok(AxialIntegral {
        value: quad.value,
        error: quad.error,
        antiderivative: axial_segment(r, -half, half, spec),
    })
}

/// Antiderivative route: for `|x4| <= pi R`,
/// `sinh(a)/(2R) int dx4 / (cosh a - cos(x4/R)) = atan(coth(a/2) tan(x4/2R))`,
/// so `int_lo^hi V_c dx4 = -(F(hi) - F(lo)) / r`.
pub fn axial_segment(r: f64, lo: f64, hi: f64, spec: &PotentialSpec) -> f64 {
    let radius = spec.radius;
    let a = r / radius;
    let coth = 1.0 / (0.5 * a).tanh();
    let f = |x: f64| {
        let t = x / (2.0 * radius);
        (coth * t.sin()).atan2(t.cos())
    };
    -(f(hi) - f(lo)) / r
}

/// `Z = 4 R / a0` from the relation between the three- and four-dimensional charges.
pub fn charge_to_z(radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::invalid("R", format!("radius must be positive, got {radius}")));
    }
    Ok(4.0 * radius)
}

/// Critical compactification radius `a0 / 4` in meters.
pub fn critical_radius_physical() -> f64 {
    bohr_to_meters(CRITICAL_RADIUS)
}

pub fn meters_to_bohr(length_m: f64) -> f64 {
    length_m / BOHR_RADIUS_M
}

pub fn bohr_to_meters(length_a0: f64) -> f64 {
    length_a0 * BOHR_RADIUS_M
}
