use approx::assert_relative_eq;
use compact_hydrogen::potential::PotentialSpec;
use compact_hydrogen::variational::{
    ground_state_bound, hardy_quotient, hydrogen_eigenfunction, instability_rayleigh, optimizing_sequence, rayleigh,
    shell_constants, shell_trial, weyl_trial, Domain, HydrogenQuantumNumbers, OptimizingSequenceSpec, RadialProfile,
    TrialFunction,
};
use proptest::prelude::*;

/// Central differences of `value` against `gradient`, componentwise.
fn check_gradient(t: &TrialFunction, x: &[f64]) {
    let g = t.gradient(x);
    let h = 1e-6;
    let scale = t.value(x).norm().max(1e-12);
    for i in 0..x.len() {
        let mut p = x.to_vec();
        let mut m = x.to_vec();
        p[i] += h;
        m[i] -= h;
        let fd = (t.value(&p) - t.value(&m)) / (2.0 * h);
        assert!((fd - g[i]).norm() <= 1e-6 * (scale + g[i].norm()), "component {i}: fd {fd} analytic {}", g[i]);
    }
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let h211 = hydrogen_eigenfunction(HydrogenQuantumNumbers::new(2, 1, 1).unwrap()).unwrap();
    check_gradient(&h211, &[0.7, -0.4, 1.1]);
    let h32m = hydrogen_eigenfunction(HydrogenQuantumNumbers::new(3, 2, -1).unwrap()).unwrap();
    check_gradient(&h32m, &[1.3, 0.9, -2.0]);
    check_gradient(&h211.lift(0.1).unwrap(), &[0.7, -0.4, 1.1, 0.2]);
    check_gradient(&shell_trial(5.0, 0.1).unwrap(), &[4.0, 3.5, 2.0, -0.1]);
    check_gradient(&weyl_trial(1.0, 2, 0.1).unwrap(), &[8.3, 7.9, 8.2, 0.1]);
    let gauss = TrialFunction::radial_4d(RadialProfile::Gaussian { width: 0.8 }).unwrap();
    check_gradient(&gauss, &[0.3, -0.2, 0.5, 0.1]);
    let opt = optimizing_sequence(OptimizingSequenceSpec::new(4, 0.4).unwrap()).unwrap();
    check_gradient(&opt, &[0.1, 0.2, -0.15, 0.05]);
    check_gradient(&opt, &[0.3, 0.2, -0.25, 0.1]);
}

#[test]
fn shell_form_is_independent_of_the_radius() {
    // The x4 mean of V_c is exactly -1/(2 R r), so Z = 4R cancels R.
    let c = shell_constants();
    for &(rho, radius) in &[(2.0, 0.05), (6.0, 0.1), (20.0, 0.2)] {
        let spec = PotentialSpec::physical(radius).unwrap();
        let rep = rayleigh(&shell_trial(rho, radius).unwrap(), &spec, Domain::Cylinder).unwrap();
        let expect = c.kinetic / (rho * rho) - 2.0 * c.inverse_r / rho;
        assert_relative_eq!(rep.quotient, expect, epsilon = 1e-9);
    }
}

#[test]
fn instability_quotients_diverge_linearly() {
    let q: Vec<f64> = [16u32, 32, 64, 128]
        .iter()
        .map(|&n| instability_rayleigh(2.0, OptimizingSequenceSpec::new(n, 0.4).unwrap()).unwrap().quotient)
        .collect();
    for w in q.windows(2) {
        let ratio = w[1] / w[0];
        assert!(ratio > 1.5 && ratio < 3.0, "ratio {ratio}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hardy_quotients_never_fall_below_one(n in 1u32..200, delta in 0.05f64..0.49) {
        let t = optimizing_sequence(OptimizingSequenceSpec::new(n, delta).unwrap()).unwrap();
        prop_assert!(hardy_quotient(&t, 4).unwrap() >= 1.0 - 1e-10);
    }

    #[test]
    fn subcritical_forms_are_non_negative(z in 0.0f64..1.0, n in 1u32..100) {
        let r = instability_rayleigh(z, OptimizingSequenceSpec::new(n, 0.4).unwrap()).unwrap();
        prop_assert!(r.total >= -1e-9 * r.kinetic);
    }

    #[test]
    fn forms_decrease_with_the_coupling(z in 0.0f64..3.0, dz in 0.01f64..1.0, n in 1u32..64) {
        let s = OptimizingSequenceSpec::new(n, 0.3).unwrap();
        let a = instability_rayleigh(z, s).unwrap();
        let b = instability_rayleigh(z + dz, s).unwrap();
        prop_assert!(b.total < a.total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn hydrogen_trial_energy_is_radius_independent(radius in 0.01f64..0.25) {
        let r = ground_state_bound(radius).unwrap();
        prop_assert!((r.total + 1.0).abs() <= 1e-6);
    }
}
