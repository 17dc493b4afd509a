use proptest::prelude::*;
use surfcrack::fredholm::{
    assemble_fredholm, solve_nystrom_with, solve_with_convergence, tip_slope_max, SolveOptions,
};
use surfcrack::{nondimensionalize, solve_galerkin_oracle, solve_nystrom, CrackParams, Error, PhysicalInputs};

fn p(alpha: f64, beta: f64, gamma: f64) -> CrackParams {
    CrackParams::new(alpha, beta, gamma).unwrap()
}

#[test]
fn rejects_bad_parameters_and_grids() {
    assert!(matches!(CrackParams::new(-1.0, 1.0, 1.0), Err(Error::Parameter { .. })));
    assert!(matches!(CrackParams::new(1.0, 0.0, 1.0), Err(Error::Parameter { .. })));
    assert!(solve_nystrom(&p(1.0, 1.0, 1.0), 64).is_err());
    assert!(solve_nystrom(&p(1.0, 1.0, 1.0), 17).is_err());
}

#[test]
fn zero_load_gives_zero_profile() {
    let r = solve_nystrom(&p(1.0, 1.0, 0.0), 129).unwrap();
    assert!(r.profile.values().iter().all(|v| *v == 0.0));
    assert_eq!(r.energy, 0.0);
}

#[test]
fn unit_problem_reference_value_and_diagnostics() {
    let r = solve_nystrom(&p(1.0, 1.0, 1.0), 513).unwrap();
    let centre = r.profile.values()[256];
    assert!((centre - 0.0363667).abs() < 2e-5, "{centre}");
    assert!(r.strong_residual_max < 1e-3);
    assert!(r.weak_residual_max < 1e-4);
    assert!(!r.flagged);
    assert!(r.profile.condition.unwrap() < 1e12);
    // at the minimiser the energy is -gamma/2 int f
    let h = 2.0 / 512.0;
    let area: f64 = r.profile.values().iter().sum::<f64>() * h;
    assert!((r.energy + 0.5 * area).abs() < 1e-4 * area, "{} {}", r.energy, area);
}

#[test]
fn opening_is_positive_in_figure_regimes() {
    for (b, a, g) in [(1.0, 1.0, 1.0), (5.0, 1.0, 5.0), (1e-2, 1e-1, 1.0), (1e-5, 1e-2, 1.0)] {
        let r = solve_nystrom(&p(a, b, g), 257).unwrap();
        let v = r.profile.values();
        assert!(v[1..v.len() - 1].iter().all(|x| *x > 0.0), "({b}, {a}, {g})");
    }
}

#[test]
fn galerkin_refinement_approaches_nystrom() {
    let params = p(1.0, 1.0, 1.0);
    let ny = solve_nystrom(&params, 257).unwrap();
    let d = |m| {
        let g = solve_galerkin_oracle(&params, m, 257).unwrap();
        g.profile
            .values()
            .iter()
            .zip(ny.profile.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    };
    assert!(d(32) < 1e-4);
}

#[test]
fn convergence_table_is_attached() {
    let r = solve_with_convergence(&p(1.0, 1.0, 1.0), &[65, 129, 257]).unwrap();
    assert_eq!(r.profile.n, 257);
    assert_eq!(r.convergence.len(), 3);
    assert!(r.convergence[1].observed_order.unwrap() > 1.8);
}

#[test]
fn strong_residual_does_not_grow_on_fine_grids() {
    let params = p(0.1, 0.1, 1.0);
    let coarse = solve_nystrom(&params, 513).unwrap().strong_residual_max;
    let fine = solve_nystrom(&params, 2049).unwrap().strong_residual_max;
    assert!(fine < 1e-4 && fine < 2.0 * coarse, "{coarse} {fine}");
}

#[test]
fn tight_tolerance_flags_the_run() {
    let opts = SolveOptions {
        residual_tol: 1e-12,
        ..SolveOptions::default()
    };
    let r = solve_nystrom_with(&p(1.0, 1.0, 1.0), 129, &opts).unwrap();
    assert!(r.flagged);
}

#[test]
fn physical_inputs_map_to_dimensionless_triple() {
    let inputs = PhysicalInputs {
        mu: 2.0,
        mu_s: 1.0,
        zeta: 0.5,
        eta: 0.25,
        ell: 1.0,
        sigma: 0.1,
    };
    let c = nondimensionalize(&inputs).unwrap();
    assert!((c.alpha - 0.5).abs() < 1e-15);
    assert!((c.beta - 0.5).abs() < 1e-15);
    assert!((c.gamma - 0.05).abs() < 1e-15);
    assert_eq!(c.physical, Some(inputs));
}

#[test]
fn system_rows_are_deterministic() {
    let a = assemble_fredholm(&p(1.0, 2.0, 1.0), 65).unwrap();
    let b = assemble_fredholm(&p(1.0, 2.0, 1.0), 65).unwrap();
    assert_eq!(a.rhs, b.rhs);
    for i in 0..65 {
        assert_eq!(a.matrix.row(i), b.matrix.row(i));
    }
}

#[test]
fn smaller_bending_steepens_the_tip() {
    let s = |beta| tip_slope_max(&solve_nystrom(&p(1e-2, beta, 1.0), 257).unwrap().profile, 0.9);
    assert!(s(1e-4) > s(1e-2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn linear_in_gamma(alpha in 0.1f64..5.0, beta in 0.1f64..5.0, gamma in -4.0f64..4.0) {
        let one = solve_nystrom(&p(alpha, beta, 1.0), 65).unwrap();
        let g = solve_nystrom(&p(alpha, beta, gamma), 65).unwrap();
        let scale = one.max_f.max(1e-300);
        for (a, b) in one.profile.values().iter().zip(g.profile.values()) {
            prop_assert!((gamma * a - b).abs() <= 1e-12 * scale * gamma.abs().max(1.0));
        }
    }

    #[test]
    fn even_profiles(alpha in 0.01f64..5.0, beta in 0.001f64..5.0) {
        let r = solve_nystrom(&p(alpha, beta, 1.0), 129).unwrap();
        prop_assert!(r.profile.f.asymmetry() <= 1e-12 * r.max_f);
    }
}
