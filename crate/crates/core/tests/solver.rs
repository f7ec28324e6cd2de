use compact_hydrogen::potential::{closed_form, PotentialSpec, SpacePoint};
use compact_hydrogen::solver::{
    assemble_compactified, assemble_radial_4d, count_bound_states, discrete_rayleigh, instability_refinement,
    lowest_eigenvalues, refinement_ladder, GridSpec, OperatorAssembly, RadialOperatorSpec, SymBand, TOL_NEG,
};
use compact_hydrogen::variational::{ground_state_bound, hydrogen_eigenfunction, shell_trial, HydrogenQuantumNumbers};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn dense_spectrum(a: &SymBand) -> Vec<f64> {
    let d = a.to_dense();
    let n = d.len();
    let m = DMatrix::from_fn(n, n, |i, j| d[i][j]);
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

fn ground(a: &OperatorAssembly) -> f64 {
    lowest_eigenvalues(a, 1).unwrap().ground
}

fn reference_grid() -> GridSpec {
    GridSpec::new(1e-3, 40.0, 600, 32).unwrap()
}

#[test]
fn banded_solver_agrees_with_a_dense_oracle() {
    let spec = PotentialSpec::physical(0.15).unwrap();
    let g = GridSpec::new(1e-2, 12.0, 40, 8).unwrap();
    for l in [0, 1] {
        let a = assemble_compactified(&spec, l, &g).unwrap();
        let dense = dense_spectrum(&a.matrix);
        let s = lowest_eigenvalues(&a, 6).unwrap();
        for (x, y) in s.eigenvalues.iter().zip(&dense) {
            assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()), "{x} vs {y}");
        }
        assert_eq!(s.n_negative, dense.iter().filter(|&&e| e < -TOL_NEG).count());
        for (lam, r) in s.eigenvalues.iter().zip(&s.residuals) {
            assert!(*r <= 1e-8 * (1.0 + lam.abs()));
        }
    }
}

#[test]
fn radial_operator_agrees_with_a_dense_oracle() {
    let g = GridSpec::new(1e-3, 5.0, 80, 8).unwrap();
    let a = assemble_radial_4d(RadialOperatorSpec::new(2.0, 0).unwrap(), &g).unwrap();
    let dense = dense_spectrum(&a.matrix);
    let s = lowest_eigenvalues(&a, 3).unwrap();
    for (x, y) in s.eigenvalues.iter().zip(&dense) {
        assert!((x - y).abs() <= 1e-9 * (1.0 + y.abs()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn spectrum_is_invariant_under_permutation(seed in 0u64..1000) {
        // P A P^T for the reversal permutation keeps the band structure.
        let spec = PotentialSpec::with_coupling(0.2, 0.3 + (seed % 7) as f64 * 0.1).unwrap();
        let g = GridSpec::new(1e-2, 8.0, 16, 8).unwrap();
        let a = assemble_compactified(&spec, (seed % 3) as u32, &g).unwrap();
        let n = a.dim();
        let bw = a.matrix.bandwidth();
        let mut p = SymBand::zeros(n, bw);
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                p.add(n - 1 - i, n - 1 - j, a.matrix.get(i, j));
            }
        }
        let mut b = a.clone();
        b.matrix = p;
        let x = lowest_eigenvalues(&a, 4).unwrap().eigenvalues;
        let y = lowest_eigenvalues(&b, 4).unwrap().eigenvalues;
        for (u, v) in x.iter().zip(&y) {
            prop_assert!((u - v).abs() <= 1e-10 * (1.0 + u.abs()));
        }
    }
}

#[test]
fn subcritical_radial_operator_is_non_negative() {
    for r_min in [1e-3, 1e-4] {
        let g = GridSpec::new(r_min, 50.0, 400, 8).unwrap();
        let a = assemble_radial_4d(RadialOperatorSpec::new(0.5, 0).unwrap(), &g).unwrap();
        assert!(ground(&a) >= -1e-6);
    }
}

#[test]
fn borderline_radial_ground_converges_from_above() {
    let levels: Vec<f64> = [100, 200, 400, 800]
        .iter()
        .map(|&n| {
            let g = GridSpec::new(1e-4, 10.0, n, 8).unwrap();
            ground(&assemble_radial_4d(RadialOperatorSpec::new(1.0, 0).unwrap(), &g).unwrap())
        })
        .collect();
    assert!(levels.iter().all(|&e| e >= 0.0));
    let gaps: Vec<f64> = levels.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]));
}

#[test]
fn free_compactified_operator_is_non_negative() {
    let spec = PotentialSpec::with_coupling(0.1, 0.0).unwrap();
    let a = assemble_compactified(&spec, 0, &GridSpec::new(1e-3, 20.0, 100, 16).unwrap()).unwrap();
    assert!(ground(&a) >= -1e-8);
}

#[test]
fn reference_grid_ground_state() {
    let spec = PotentialSpec::physical(0.1).unwrap();
    let a0 = assemble_compactified(&spec, 0, &reference_grid()).unwrap();
    let a2 = assemble_compactified(&spec, 2, &reference_grid()).unwrap();
    let g0 = ground(&a0);
    assert!(g0 <= -1.0 + 0.05);
    assert!(ground(&a2) > g0);
}

#[test]
fn ground_state_lies_below_interpolated_trials() {
    for radius in [0.05, 0.1, 0.2] {
        let spec = PotentialSpec::physical(radius).unwrap();
        let a = assemble_compactified(&spec, 0, &GridSpec::new(1e-3, 40.0, 300, 16).unwrap()).unwrap();
        let g = ground(&a);
        let phi = hydrogen_eigenfunction(HydrogenQuantumNumbers::new(1, 0, 0).unwrap()).unwrap();
        let q = discrete_rayleigh(&a, &phi.lift(radius).unwrap(), Some(ground_state_bound(radius).unwrap().quotient))
            .unwrap();
        assert!(g <= q.quotient);
        assert!(g <= -1.0 + q.interpolation_error.unwrap());
        let shell = discrete_rayleigh(&a, &shell_trial(12.0, radius).unwrap(), None).unwrap();
        assert!(g <= shell.quotient);
    }
}

#[test]
fn stable_ground_energy_is_cauchy_under_doubling() {
    let spec = PotentialSpec::physical(0.1).unwrap();
    let levels: Vec<f64> = [(150, 8), (300, 16), (600, 32), (1200, 64)]
        .iter()
        .map(|&(nr, nx)| ground(&assemble_compactified(&spec, 0, &GridSpec::new(1e-3, 40.0, nr, nx).unwrap()).unwrap()))
        .collect();
    let gaps: Vec<f64> = levels.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{levels:?}");
    assert!(*gaps.last().unwrap() <= 1e-3);
}

#[test]
fn enlarging_the_box_never_raises_the_ground_energy() {
    let spec = PotentialSpec::physical(0.1).unwrap();
    let levels: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
        .iter()
        .map(|&r_max| ground(&assemble_compactified(&spec, 0, &GridSpec::geometric(1e-3, r_max, 0.03, 16).unwrap()).unwrap()))
        .collect();
    for w in levels.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{levels:?}");
    }
}

#[test]
fn eigenvalues_respect_the_potential_floor() {
    let spec = PotentialSpec::physical(0.2).unwrap();
    let g = GridSpec::new(1e-3, 30.0, 200, 16).unwrap();
    let a = assemble_compactified(&spec, 0, &g).unwrap();
    let sup = g
        .radial_nodes()
        .iter()
        .skip(1)
        .take(g.n_r)
        .flat_map(|&r| g.x4_nodes(0.2).unwrap().into_iter().map(move |x| (r, x)))
        .map(|(r, x)| closed_form(SpacePoint::new(r, x), &spec).unwrap().abs())
        .fold(0.0, f64::max);
    let s = lowest_eigenvalues(&a, 4).unwrap();
    assert!(s.eigenvalues.iter().all(|&e| e >= -spec.coupling() * sup));
}

#[test]
fn bound_state_counts() {
    let spec = PotentialSpec::physical(0.1).unwrap();
    let g = GridSpec::new(1e-3, 50.0, 500, 8).unwrap().with_uniform_radial().unwrap();
    let c0 = count_bound_states(&spec, 0, &g, TOL_NEG).unwrap();
    let c2 = count_bound_states(&spec, 2, &g, TOL_NEG).unwrap();
    assert!(c0 >= 1 && c2 >= c0);
    let free = PotentialSpec::with_coupling(0.1, 0.0).unwrap();
    assert_eq!(count_bound_states(&free, 2, &g, TOL_NEG).unwrap(), 0);
}

#[test]
fn subcritical_ladder_settles_and_supercritical_ladder_runs_away() {
    let r_mins = [1e-2, 1e-3, 1e-4];
    let stable = PotentialSpec::physical(0.2).unwrap();
    let s = instability_refinement(&stable, &refinement_ladder(0.2, &r_mins, 30.0, 0.15).unwrap()).unwrap();
    let unstable = PotentialSpec::physical(0.3).unwrap();
    let u = instability_refinement(&unstable, &refinement_ladder(0.3, &r_mins, 30.0, 0.15).unwrap()).unwrap();
    assert!(s.strictly_decreasing() && u.strictly_decreasing());
    let gs = s.grounds();
    assert!((gs[2] - gs[1]).abs() < (gs[1] - gs[0]).abs() / 5.0);
    // Past the first refinement the depth grows by an order of magnitude per decade.
    assert!(u.ratios()[1] > 5.0);
}
