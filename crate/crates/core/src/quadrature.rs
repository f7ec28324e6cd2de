//! One-dimensional quadrature.
//!
//! Adaptive Gauss-Kronrod (10/21 points) with a global error heap, the
//! semi-infinite and log-substituted variants used for radial integrals with
//! power-law behaviour at the origin, Gauss-Legendre rules and the periodic
//! trapezoid rule.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_351_996,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl QuadOptions {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        QuadOptions {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Result of a quadrature: value, estimated absolute error and whether the
/// requested tolerance was met.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl Integral {
    fn zero() -> Self {
        Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }

    fn combine(self, other: Integral) -> Integral {
        Integral {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }

    /// Turns a non-converged result into an error carrying the achieved bound.
    pub fn require(self, opts: &QuadOptions) -> Result<Integral> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNonConvergence {
                achieved: self.error,
                requested: opts.target(self.value),
            })
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// 21-point Kronrod rule on `[a, b]` with the QUADPACK error heuristic.
fn gk21<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (1.0_f64).min((200.0 * err / res_asc).powf(1.5));
    }
    let round_floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(round_floor);
    }
    (value, err)
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Integral {
    if a == b {
        return Integral::zero();
    }
    let (v0, e0) = gk21(&mut f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut converged = total_err <= opts.target(total);
    let mut splits = 0;
    while !converged && splits < opts.max_subdivisions {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            // Interval cannot be split further in floating point.
            heap.push(seg);
            break;
        }
        let (vl, el) = gk21(&mut f, seg.a, mid);
        let (vr, er) = gk21(&mut f, mid, seg.b);
        evaluations += 42;
        total += vl + vr - seg.value;
        total_err += el + er - seg.error;
        heap.push(Segment {
            a: seg.a,
            b: mid,
            value: vl,
            error: el,
        });
        heap.push(Segment {
            a: mid,
            b: seg.b,
            value: vr,
            error: er,
        });
        splits += 1;
        converged = total_err <= opts.target(total);
    }
    // Resum to shed accumulated cancellation in the running totals.
    let mut value = 0.0;
    let mut error = 0.0;
    for seg in heap.iter() {
        value += seg.value;
        error += seg.error;
    }
    Integral {
        value,
        error,
        evaluations,
        converged: error <= opts.target(value),
    }
}

/// Integrates over consecutive segments `points[0]..points[1]..` so that
/// kinks and support boundaries fall on segment ends.
pub fn integrate_breakpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Integral {
    let mut out = Integral::zero();
    for w in points.windows(2) {
        out = out.combine(integrate(&mut f, w[0], w[1], opts));
    }
    out
}

/// Integral over `[a, inf)` through `x = a + t / (1 - t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, opts: &QuadOptions) -> Integral {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let x = a + t / s;
            let v = f(x);
            if v == 0.0 {
                0.0
            } else {
                v / (s * s)
            }
        },
        0.0,
        1.0,
        opts,
    )
}

/// Integral over `(0, b]` for integrands that behave like a power `x^p`,
/// `p > -1`, near the origin.
///
/// The substitution `x = e^u` resolves the singular end on `[lo, b]` with
/// `lo = b * e^-span`; the remaining piece `(0, lo)` is the power-law tail
/// `f(lo) lo / (p + 1)` with `p` measured from two samples.
pub fn integrate_near_zero<F: FnMut(f64) -> f64>(
    mut f: F,
    b: f64,
    span: f64,
    opts: &QuadOptions,
) -> Result<Integral> {
    let lo = b * (-span).exp();
    let body = integrate(
        |u| {
            let x = u.exp();
            f(x) * x
        },
        lo.ln(),
        b.ln(),
        opts,
    );
    let f_lo = f(lo);
    let tail = if f_lo == 0.0 {
        0.0
    } else {
        let lo2 = lo * 0.5;
        let f_lo2 = f(lo2);
        if f_lo2 == 0.0 || f_lo2.signum() != f_lo.signum() {
            return Err(Error::UnboundedQuotient { exponent: f64::NAN });
        }
        let p = (f_lo / f_lo2).ln() / 2f64.ln();
        if p <= -1.0 + 1e-9 {
            return Err(Error::UnboundedQuotient { exponent: p });
        }
        f_lo * lo / (p + 1.0)
    };
    Ok(Integral {
        value: body.value + tail,
        error: body.error + 1e-12 * tail.abs(),
        evaluations: body.evaluations + 2,
        converged: body.converged,
    })
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss-Legendre rule mapped onto `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    (
        x.iter().map(|t| c + h * t).collect(),
        w.iter().map(|v| v * h).collect(),
    )
}

/// Trapezoid rule with `n` equally spaced samples over one period starting
/// at `start`; spectrally accurate for smooth periodic integrands.
pub fn periodic_trapezoid<F: FnMut(f64) -> f64>(mut f: F, start: f64, period: f64, n: usize) -> f64 {
    let h = period / n as f64;
    (0..n).map(|k| f(start + h * k as f64)).sum::<f64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, &QuadOptions::default());
        assert_relative_eq!(r.value, 64.0 / 6.0 - 4.0, max_relative = 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn adaptive_handles_sqrt_endpoint() {
        let r = integrate(f64::sqrt, 0.0, 1.0, &QuadOptions::default());
        assert_relative_eq!(r.value, 2.0 / 3.0, max_relative = 1e-11);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let r = integrate_to_infinity(|x| (-x * x).exp(), 0.0, &QuadOptions::default());
        assert_relative_eq!(r.value, 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn near_zero_power_law() {
        // x^{-1 + 2/n} with n = 256: integral over (0, 0.4) is (n/2) 0.4^{2/n}.
        let n = 256.0;
        let r = integrate_near_zero(|x| x.powf(-1.0 + 2.0 / n), 0.4, 40.0, &QuadOptions::default())
            .unwrap();
        assert_relative_eq!(r.value, n / 2.0 * 0.4f64.powf(2.0 / n), max_relative = 1e-10);
    }

    #[test]
    fn near_zero_rejects_non_integrable() {
        let r = integrate_near_zero(|x| 1.0 / x, 1.0, 30.0, &QuadOptions::default());
        assert!(matches!(r, Err(Error::UnboundedQuotient { .. })));
    }

    #[test]
    fn gauss_legendre_integrates_degree_2n_minus_1() {
        let (x, w) = gauss_legendre(7);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(12)).sum();
        assert_relative_eq!(s, 2.0 / 13.0, max_relative = 1e-13);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
    }

    #[test]
    fn trapezoid_periodic() {
        let s = periodic_trapezoid(|t| 1.0 / (2.0 - t.cos()), 0.0, 2.0 * std::f64::consts::PI, 64);
        assert_relative_eq!(s, 2.0 * std::f64::consts::PI / 3f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn non_convergence_is_reported() {
        let opts = QuadOptions {
            abs_tol: 1e-15,
            rel_tol: 1e-15,
            max_subdivisions: 2,
        };
        let r = integrate(|x| (1.0 / x).sin(), 1e-4, 1.0, &opts);
        assert!(!r.converged);
        assert!(matches!(r.require(&opts), Err(Error::QuadratureNonConvergence { .. })));
    }
}
