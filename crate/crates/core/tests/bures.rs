use std::f64::consts::PI;

use burescone::bures::*;
use burescone::linalg::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_sum_matches_bloch_closed_form(r in 0.05..0.95_f64, theta in 0.2..2.9_f64, phi in 0.0..std::f64::consts::TAU) {
        let fd = bures_metric_spectral(&bloch_family(), &[r, theta, phi]).unwrap();
        let cf = bloch_metric_closed_form(r, theta, phi).unwrap();
        prop_assert!(fd.max_abs_diff(&cf) < 1e-6);
        prop_assert!(fd.asymmetry() < 1e-14);
    }

    #[test]
    fn fubini_study_is_gauge_invariant(theta in 0.2..2.9_f64, phi in 0.0..std::f64::consts::TAU, a in -2.0..2.0_f64, b in -2.0..2.0_f64) {
        let plain = KetFamily::new(&["theta", "phi"], bloch_ket);
        let phased = KetFamily::new(&["theta", "phi"], move |x| {
            bloch_ket(x) * Complex64::from_polar(1.0, a * x[0] + b * x[1].sin())
        });
        let g0 = fubini_study_metric(&plain, &[theta, phi]).unwrap();
        let g1 = fubini_study_metric(&phased, &[theta, phi]).unwrap();
        prop_assert!(g0.max_abs_diff(&g1) < 1e-8);
    }

    #[test]
    fn spectral_rep_agrees_with_double_sum(zeta in 0.1..0.9_f64, eps in 1e-3..0.3_f64, theta in 0.2..1.3_f64) {
        let fam = evr_family_2d(zeta);
        let direct = bures_metric_spectral(&fam, &[eps, theta]).unwrap();
        let rep = bures_metric_spectral_rep(&evr_differentials(zeta, eps, theta, None).unwrap()).unwrap();
        let scale = direct.g.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        prop_assert!((&direct.g - rep).amax() < 1e-5 * scale);
    }
}

use num_complex::Complex64;

#[test]
fn pure_bloch_family_gives_round_sphere() {
    let g = bures_metric_spectral(&pure_bloch_family(), &[1.0, 0.3]).unwrap();
    assert!((g.component(0, 0) - 0.25).abs() < 1e-8);
    assert!((g.component(1, 1) - 0.25 * 1.0_f64.sin().powi(2)).abs() < 1e-8);
    let fs = fubini_study_metric(&KetFamily::new(&["theta", "phi"], bloch_ket), &[1.0, 0.3]).unwrap();
    assert!(g.max_abs_diff(&fs) < 1e-8);
}

#[test]
fn constant_family_has_zero_metric() {
    let fam = ParametrizedFamily::new(&["a"], |_| Ok(DensityMatrix::maximally_mixed(3)));
    let g = bures_metric_spectral(&fam, &[0.2]).unwrap();
    assert_eq!(g.component(0, 0), 0.0);
}

#[test]
fn radial_derivative_at_pure_state_is_singular() {
    let fam = bloch_family();
    assert!(bures_metric_spectral(&fam, &[1.0, 1.0, 0.0]).is_err());
    assert!(bloch_metric_closed_form(1.0, 1.0, 0.0).is_err());
}

#[test]
fn u_chart_is_regular_at_the_boundary() {
    let g = bloch_metric_u_chart(0.0, 1.0, 0.0);
    assert!((g.component(0, 0) - 0.25).abs() < 1e-15);
    assert!((g.component(1, 1) - 0.25).abs() < 1e-15);
}

#[test]
fn qubit_curvature_is_24_with_five_point_metric() {
    let fam = bloch_u_family()
        .with_stencil(Stencil::Central5)
        .with_all_steps(FdStep::Absolute(3e-3));
    let field = move |x: &[f64]| Ok(bures_metric_spectral(&fam, x)?.g);
    for &(u, th) in &[(0.05, 1.0), (0.7, 0.5), (1.4, 2.0)] {
        let r = numeric_scalar_curvature(&field, &[u, th, 0.3], &[3e-3; 3]).unwrap().r;
        assert!((r - 24.0).abs() < 1e-4, "R({u}, {th}) = {r}");
    }
}

#[test]
fn curvature_refuses_poles() {
    assert!(check_away_from_pole(0.01).is_err());
    assert!(check_away_from_pole(PI - 0.01).is_err());
    assert!(check_away_from_pole(1.0).is_ok());
}

#[test]
fn induced_metric_of_asymptotic_purification() {
    use burescone::lindblad::*;
    let model = asymptotic_purification_model(2.0).unwrap();
    let rho0 = analytic_asymptotic_purification(0.7, 2.0, 0.0).unwrap();
    let grid: Vec<f64> = (0..=100).map(|k| 0.02 * k as f64).collect();
    let traj = integrate(&model, &rho0, &grid).unwrap();
    let samples = induced_metric_along_trajectory(&traj).unwrap();
    assert_eq!(samples.len(), grid.len() - 2);
    assert!(samples.iter().all(|s| s.g_tt >= 0.0 && s.r < 1.0));
}
