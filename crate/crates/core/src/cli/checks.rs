//! Check suites run from the command line, each entry with its tolerance and
//! achieved value.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Check, SweepConfig};
use crate::error::Result;
use crate::potential::{
    axial_integral, closed_form, image_sum, remainder_w, PotentialSpec, SpacePoint, ORACLE_IMAGES,
};
use crate::variational::{
    hardy_quotient, instability_rayleigh, optimizing_sequence, weyl_residual, OptimizingSequenceSpec, RadialProfile,
    TrialFunction,
};

pub const MAGIC_RADII: [f64; 5] = [1e-2, 1e-1, 1.0, 10.0, 1e2];
const ORACLE_SAMPLES: usize = 200;
const INSTABILITY_COUPLING: f64 = 2.0;
const INSTABILITY_DELTA: f64 = 0.4;
pub const INSTABILITY_LADDER: [u32; 5] = [8, 16, 32, 64, 128];
pub const WEYL_LADDER: [u32; 4] = [4, 8, 16, 32];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckEntry {
    pub suite: &'static str,
    pub name: String,
    pub tolerance: f64,
    pub achieved: f64,
    pub passed: bool,
    /// Extra lines printed under the entry (tables).
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub seed: u64,
    pub entries: Vec<CheckEntry>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let _ = writeln!(
                s,
                "{} {}/{} tolerance={:.3e} achieved={:.6e}",
                if e.passed { "PASS" } else { "FAIL" },
                e.suite,
                e.name,
                e.tolerance,
                e.achieved
            );
            for line in e.detail.lines() {
                let _ = writeln!(s, "    {line}");
            }
        }
        s
    }
}

fn entry(suite: &'static str, name: impl Into<String>, tolerance: f64, achieved: f64, passed: bool) -> CheckEntry {
    CheckEntry {
        suite,
        name: name.into(),
        tolerance,
        achieved,
        passed,
        detail: String::new(),
    }
}

fn failed(suite: &'static str, name: &str, e: crate::error::Error) -> CheckEntry {
    CheckEntry {
        detail: e.to_string(),
        ..entry(suite, name, f64::NAN, f64::NAN, false)
    }
}

fn identities(cfg: &SweepConfig, rng: &mut ChaCha8Rng) -> Vec<CheckEntry> {
    let mut out = Vec::new();
    for &radius in &cfg.r_values {
        let spec = match PotentialSpec::physical(radius) {
            Ok(s) => s,
            Err(e) => {
                out.push(failed("identities", "potential", e));
                continue;
            }
        };
        let magic = MAGIC_RADII.iter().try_fold(0.0_f64, |m, &r| {
            axial_integral(r, &spec).map(|a| m.max((a.value * r / PI + 1.0).abs()))
        });
        match magic {
            Ok(m) => out.push(entry("identities", format!("magic-formula R={radius}"), 1e-8, m, m <= 1e-8)),
            Err(e) => out.push(failed("identities", "magic-formula", e)),
        }

        let oracle = spec.with_images(ORACLE_IMAGES).expect("positive image count");
        let mut worst_ratio = 0.0_f64;
        let mut worst_tail = 0.0_f64;
        let mut worst_w = 0.0_f64;
        let mut error = None;
        for _ in 0..ORACLE_SAMPLES {
            let r = radius * 10f64.powf(rng.gen_range(-3.0..2.0));
            let x4 = PI * radius * rng.gen_range(-1.0..1.0);
            let p = SpacePoint::new(r, x4);
            match (image_sum(p, &oracle), closed_form(p, &spec), remainder_w(p, &spec)) {
                (Ok(s), Ok(c), Ok(w)) => {
                    worst_ratio = worst_ratio.max((s.value - c).abs() / s.tail_bound);
                    worst_tail = worst_tail.max(s.tail_bound);
                    worst_w = worst_w.max(w.abs() * 4.0 * radius * radius);
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
                    error = Some(e);
                    break;
                }
            }
        }
        if let Some(e) = error {
            out.push(failed("identities", "closed-form-vs-image-sum", e));
            continue;
        }
        out.push(entry(
            "identities",
            format!("closed-form-vs-image-sum R={radius} (|diff|/tail_bound)"),
            1.0,
            worst_ratio,
            worst_ratio <= 1.0,
        ));
        out.push(entry("identities", format!("tail-bound R={radius}"), 1e-7, worst_tail, worst_tail <= 1e-7));
        out.push(entry(
            "identities",
            format!("remainder-bound R={radius} (4R^2 |W|)"),
            1.0,
            worst_w,
            worst_w <= 1.0,
        ));
    }
    out
}

fn hardy() -> Vec<CheckEntry> {
    let mut out = Vec::new();
    match TrialFunction::radial_4d(RadialProfile::Gaussian { width: 1.0 }).and_then(|t| hardy_quotient(&t, 4)) {
        Ok(q) => out.push(entry("hardy", "gaussian-d4 |q - 2|", 1e-6, (q - 2.0).abs(), (q - 2.0).abs() <= 1e-6)),
        Err(e) => out.push(failed("hardy", "gaussian-d4", e)),
    }
    let gap = OptimizingSequenceSpec::new(64, INSTABILITY_DELTA)
        .and_then(optimizing_sequence)
        .and_then(|t| hardy_quotient(&t, 4));
    match gap {
        Ok(q) => out.push(entry("hardy", "optimizing-gap n=64", 0.15, q - 1.0, q >= 1.0 && q - 1.0 <= 0.15)),
        Err(e) => out.push(failed("hardy", "optimizing-gap", e)),
    }
    out
}

fn instability() -> Vec<CheckEntry> {
    let mut table = String::from("n  quotient\n");
    let mut quotients = Vec::new();
    for &n in &INSTABILITY_LADDER {
        match OptimizingSequenceSpec::new(n, INSTABILITY_DELTA).and_then(|s| instability_rayleigh(INSTABILITY_COUPLING, s)) {
            Ok(r) => {
                let _ = writeln!(table, "{n:<3} {:.6e}", r.quotient);
                quotients.push(r.quotient);
            }
            Err(e) => return vec![failed("instability", "divergence", e)],
        }
    }
    let last = *quotients.last().expect("non-empty ladder");
    let decreasing = quotients.windows(2).all(|w| w[1] < w[0]);
    let mut e = entry("instability", "final-quotient Z=2 n=128", -10.0, last, decreasing && last < -10.0);
    e.detail = table;
    vec![e]
}

fn weyl(cfg: &SweepConfig) -> Vec<CheckEntry> {
    let radius = cfg.r_values[0];
    let mut out = Vec::new();
    for &k in &[0.5, 1.0] {
        let mut residuals = Vec::new();
        for &n in &WEYL_LADDER {
            match weyl_residual(k, n, radius) {
                Ok(r) => residuals.push(r.residual),
                Err(e) => {
                    out.push(failed("weyl", "residual", e));
                    return out;
                }
            }
        }
        let worst = residuals.windows(2).map(|w| w[0] / w[1]).fold(f64::INFINITY, f64::min);
        let mut e = entry("weyl", format!("decay-per-doubling k={k} R={radius}"), 1.4, worst, worst >= 1.4);
        e.detail = WEYL_LADDER
            .iter()
            .zip(&residuals)
            .map(|(n, r)| format!("n={n:<3} residual={r:.6e}\n"))
            .collect();
        out.push(e);
    }
    out
}

/// Runs the suites in `cfg.checks` (all of them when empty) with `cfg.seed`.
pub fn run_checks(cfg: &SweepConfig) -> Result<CheckReport> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let suites: Vec<Check> = if cfg.checks.is_empty() { Check::ALL.to_vec() } else { cfg.checks.clone() };
    let mut entries = Vec::new();
    for s in suites {
        entries.extend(match s {
            Check::Identities => identities(cfg, &mut rng),
            Check::Hardy => hardy(),
            Check::Instability => instability(),
            Check::Weyl => weyl(cfg),
        });
    }
    Ok(CheckReport { seed: cfg.seed, entries })
}
