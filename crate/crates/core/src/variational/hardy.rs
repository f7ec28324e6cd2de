//! Hardy quotients and the optimizing sequence `|x|^(-1 + 1/n) eta(|x|)`.

use std::f64::consts::PI;

use super::{OptimizingSequenceSpec, Params, RadialProfile, RayleighReport, TrialFunction};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_near_zero, integrate_to_infinity, Integral, QuadOptions};

/// Area of the unit three-sphere.
pub(crate) const S3_AREA: f64 = 2.0 * PI * PI;

/// Logarithmic span used below the plateau of the cutoff.
const LOG_SPAN: f64 = 60.0;

/// Cutoff `eta` and its derivative: `1` on `[0, delta]`, the bridge
/// `exp(1 - 1/(1 - s^2))` with `s = (2t - 2 delta)/delta` on `(delta, 3 delta/2)`,
/// `0` beyond. `C^1` at `t = delta`, smooth at `t = 3 delta / 2`.
pub fn cutoff(t: f64, delta: f64) -> (f64, f64) {
    let t = t.abs();
    if t <= delta {
        return (1.0, 0.0);
    }
    if t >= 1.5 * delta {
        return (0.0, 0.0);
    }
    let s = (2.0 * t - 2.0 * delta) / delta;
    let q = 1.0 - s * s;
    let eta = (1.0 - 1.0 / q).exp();
    let deta = eta * (-2.0 * s / (q * q)) * (2.0 / delta);
    (eta, deta)
}

/// The `n`-th member of the Hardy optimizing sequence.
pub fn optimizing_sequence(spec: OptimizingSequenceSpec) -> Result<TrialFunction> {
    let spec = OptimizingSequenceSpec::new(spec.n, spec.delta)?;
    TrialFunction::radial_4d(RadialProfile::Optimizing(spec))
}

/// `int_0^inf g(rho) d rho` for a radial integrand built from the profile,
/// split at the profile's kinks and with the singular end resolved.
pub(crate) fn radial_integral<G: Fn(f64) -> f64>(profile: &RadialProfile, g: G, opts: &QuadOptions) -> Result<Integral> {
    match *profile {
        RadialProfile::Gaussian { width } => {
            let body = integrate_near_zero(&g, width, LOG_SPAN, opts)?;
            let tail = integrate_to_infinity(&g, width, opts);
            Ok(sum(body, tail))
        }
        RadialProfile::Optimizing(spec) => {
            let d = spec.delta;
            let core = integrate_near_zero(&g, d, LOG_SPAN, opts)?;
            let bridge = integrate(&g, d, 1.5 * d, opts);
            Ok(sum(core, bridge))
        }
    }
}

fn sum(a: Integral, b: Integral) -> Integral {
    Integral {
        value: a.value + b.value,
        error: a.error + b.error,
        evaluations: a.evaluations + b.evaluations,
        converged: a.converged && b.converged,
    }
}

fn profile_of(psi: &TrialFunction) -> Result<RadialProfile> {
    match psi.params {
        Params::Radial(p) => Ok(p),
        _ => Err(Error::UnsupportedTrial {
            kind: psi.kind().name(),
            domain: "radial Hardy quotient",
        }),
    }
}

/// `int |grad psi|^2 / (((d-2)^2/4) int |psi|^2/|x|^2)` for a radial profile
/// read as a function on `R^d`.
pub fn hardy_quotient(psi: &TrialFunction, d: u32) -> Result<f64> {
    if d < 3 {
        return Err(Error::invalid("d", format!("Hardy inequality needs d >= 3, got {d}")));
    }
    let profile = profile_of(psi)?;
    let opts = QuadOptions::with_tolerances(0.0, 1e-12);
    let dm1 = d as i32 - 1;
    let num = radial_integral(
        &profile,
        |rho| {
            let (_, df) = profile.eval(rho);
            df * df * rho.powi(dm1)
        },
        &opts,
    )?
    .require(&opts)?;
    let den = radial_integral(
        &profile,
        |rho| {
            let (f, _) = profile.eval(rho);
            f * f * rho.powi(dm1 - 2)
        },
        &opts,
    )?
    .require(&opts)?;
    let c = ((d - 2) * (d - 2)) as f64 / 4.0;
    Ok(num.value / (c * den.value))
}

/// Four-dimensional forms of a radial profile: kinetic, singular
/// `int |psi|^2/|x|^2`, norm, and the summed quadrature error.
pub(crate) fn radial_forms(profile: &RadialProfile) -> Result<(f64, f64, f64, f64)> {
    let opts = QuadOptions::with_tolerances(0.0, 1e-12);
    let kin = radial_integral(
        profile,
        |rho| {
            let (_, df) = profile.eval(rho);
            df * df * rho.powi(3)
        },
        &opts,
    )?
    .require(&opts)?;
    let sing = radial_integral(
        profile,
        |rho| {
            let (f, _) = profile.eval(rho);
            f * f * rho
        },
        &opts,
    )?
    .require(&opts)?;
    let nrm = radial_integral(
        profile,
        |rho| {
            let (f, _) = profile.eval(rho);
            f * f * rho.powi(3)
        },
        &opts,
    )?
    .require(&opts)?;
    Ok((
        S3_AREA * kin.value,
        S3_AREA * sing.value,
        S3_AREA * nrm.value,
        S3_AREA * (kin.error + sing.error + nrm.error),
    ))
}

/// Rayleigh report of `psi_n` for `-Delta - Z/|x|^2` on `R^4`, evaluated on
/// `psi_n` itself (no smoothing near the origin).
pub fn instability_rayleigh(coupling: f64, spec: OptimizingSequenceSpec) -> Result<RayleighReport> {
    if !(coupling >= 0.0 && coupling.is_finite()) {
        return Err(Error::invalid("Z", "coupling must be finite and non-negative"));
    }
    let spec = OptimizingSequenceSpec::new(spec.n, spec.delta)?;
    let (kin, sing, nrm, err) = radial_forms(&RadialProfile::Optimizing(spec))?;
    Ok(RayleighReport::assemble(kin, -sing, coupling, nrm, err * (1.0 + coupling)))
}

/// Computed counterparts of the constants in the optimizing-sequence argument.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SequenceDiagnostics {
    pub n: u32,
    /// `||psi_n||^2`; bounded above and below uniformly in `n`.
    pub norm_sq: f64,
    pub kinetic: f64,
    /// `int |psi_n|^2 / |x|^2`.
    pub singular: f64,
    /// `|kinetic - singular|`; bounded uniformly in `n`.
    pub form_gap: f64,
    /// `singular / n`; bounded below uniformly in `n`.
    pub singular_per_n: f64,
    /// `kinetic / singular - 1`.
    pub hardy_gap: f64,
}

pub fn sequence_diagnostics(spec: OptimizingSequenceSpec) -> Result<SequenceDiagnostics> {
    let spec = OptimizingSequenceSpec::new(spec.n, spec.delta)?;
    let (kin, sing, nrm, _) = radial_forms(&RadialProfile::Optimizing(spec))?;
    Ok(SequenceDiagnostics {
        n: spec.n,
        norm_sq: nrm,
        kinetic: kin,
        singular: sing,
        form_gap: (kin - sing).abs(),
        singular_per_n: sing / spec.n as f64,
        hardy_gap: kin / sing - 1.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn seq(n: u32) -> OptimizingSequenceSpec {
        OptimizingSequenceSpec::new(n, 0.4).unwrap()
    }

    #[test]
    fn cutoff_properties() {
        let d = 0.4;
        assert_eq!(cutoff(0.0, d), (1.0, 0.0));
        assert_eq!(cutoff(d, d), (1.0, 0.0));
        assert_eq!(cutoff(0.6, d), (0.0, 0.0));
        assert_eq!(cutoff(-0.1, d).0, 1.0);
        let mut prev = 1.0;
        for i in 1..100 {
            let t = d + 0.5 * d * i as f64 / 100.0;
            let (e, de) = cutoff(t, d);
            assert!((0.0..=1.0).contains(&e) && e <= prev && de <= 0.0);
            prev = e;
            let h = 1e-7;
            let fd = (cutoff(t + h, d).0 - cutoff(t - h, d).0) / (2.0 * h);
            assert!((fd - de).abs() <= 1e-5 * (1.0 + de.abs()));
        }
    }

    #[test]
    fn gaussian_quotients() {
        let g = TrialFunction::radial_4d(RadialProfile::Gaussian { width: 1.0 }).unwrap();
        // d = 4: int rho^5 e^{-rho^2} = 1, int rho e^{-rho^2} = 1/2.
        assert_relative_eq!(hardy_quotient(&g, 4).unwrap(), 2.0, max_relative = 1e-10);
        // d = 3: int rho^4 e^{-rho^2} = 3 sqrt(pi)/8 over (1/4) sqrt(pi)/2.
        assert_relative_eq!(hardy_quotient(&g, 3).unwrap(), 3.0, max_relative = 1e-10);
        assert!(hardy_quotient(&g, 2).is_err());
    }

    #[test]
    fn first_member_is_the_cutoff() {
        let psi = optimizing_sequence(seq(1)).unwrap();
        assert_relative_eq!(psi.value(&[0.1, 0.0, 0.2, 0.0]).re, 1.0);
        let x = [0.3, 0.2, 0.1, 0.15];
        let r = super::super::norm(&x);
        assert_relative_eq!(psi.value(&x).re, cutoff(r, 0.4).0, max_relative = 1e-14);
    }

    #[test]
    fn optimizing_sequence_singular_part_is_closed_form() {
        // Below delta: int rho^(-1+2/n) = delta^(2/n) n/2 and the kinetic piece
        // carries the extra factor (1 - 1/n)^2.
        let spec = seq(16);
        let p = RadialProfile::Optimizing(spec);
        let opts = QuadOptions::with_tolerances(0.0, 1e-13);
        let core = integrate_near_zero(|r| p.eval(r).0.powi(2) * r, 0.4, LOG_SPAN, &opts).unwrap();
        assert_relative_eq!(core.value, 0.4f64.powf(2.0 / 16.0) * 8.0, max_relative = 1e-11);
        let core = integrate_near_zero(|r| p.eval(r).1.powi(2) * r.powi(3), 0.4, LOG_SPAN, &opts).unwrap();
        assert_relative_eq!(core.value, (15.0f64 / 16.0).powi(2) * 0.4f64.powf(0.125) * 8.0, max_relative = 1e-11);
    }

    #[test]
    fn divergent_denominator_is_reported() {
        let psi = optimizing_sequence(seq(4)).unwrap();
        assert!(matches!(hardy_quotient(&psi, 3), Err(Error::UnboundedQuotient { .. })));
    }

    #[test]
    fn hardy_gap_shrinks_like_one_over_n() {
        let mut prev = f64::INFINITY;
        for &n in &[8, 16, 32, 64, 128] {
            let q = hardy_quotient(&optimizing_sequence(seq(n)).unwrap(), 4).unwrap();
            assert!(q > 1.0 && q < prev);
            // n * gap tends to 2 int rho eta'^2, about 8.05 for delta = 0.4.
            assert!((q - 1.0) * n as f64 > 7.0 && (q - 1.0) * (n as f64) < 9.0);
            prev = q;
        }
    }

    #[test]
    fn subcritical_coupling_is_non_negative() {
        for &n in &[1, 8, 64, 256] {
            assert!(instability_rayleigh(0.5, seq(n)).unwrap().quotient >= 0.0);
        }
    }

    #[test]
    fn diagnostics_track_the_constants() {
        let a = sequence_diagnostics(seq(8)).unwrap();
        let b = sequence_diagnostics(seq(16)).unwrap();
        assert!(b.singular / a.singular >= 1.8);
        assert!(a.norm_sq > 0.0 && (b.norm_sq / a.norm_sq - 1.0).abs() < 0.2);
        assert!(b.form_gap.is_finite());
    }
}
