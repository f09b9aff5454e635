use std::f64::consts::PI;

use burescone::bures::{christoffel_fd, evr_family_2d};
use burescone::cone::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn geodesics_conserve_energy_and_angular_momentum(
        kappa in 0.2..1.0_f64,
        u0 in 0.3..2.0_f64,
        th in 0.5..2.6_f64,
        ph in 0.0..6.0_f64,
        du in -1.0..1.0_f64,
        dth in -0.5..0.5_f64,
        dph in -0.5..0.5_f64,
    ) {
        let chart = ConeChart::sphere(kappa).unwrap();
        let start = ConeState::new(u0, vec![th, ph], du, vec![dth, dph]);
        let grid: Vec<f64> = (0..=40).map(|k| 0.05 * k as f64).collect();
        let run = integrate_geodesic(&chart, &start, &grid).unwrap();
        let (e0, l0) = (start.energy(&chart), start.angular_momentum(&chart));
        for s in &run.states {
            prop_assert!((s.energy(&chart) - e0).abs() < 1e-8);
            prop_assert!((s.angular_momentum(&chart) - l0).abs() < 1e-8);
        }
    }
}

#[test]
fn analytic_christoffels_match_finite_differences() {
    let chart = ConeChart::sphere(0.7).unwrap();
    let field = |x: &[f64]| Ok(chart.metric(x));
    for &x in &[[0.5, 1.0, 0.2], [1.3, 2.0, 4.0], [0.2, 0.7, 1.0]] {
        let exact = chart.christoffel(&x);
        let fd = christoffel_fd(&field, &x, &[1e-5; 3]).unwrap();
        for (a, b) in exact.iter().zip(&fd) {
            assert!((a - b).amax() < 1e-6);
        }
    }
}

#[test]
fn flat_cone_has_zero_curvature() {
    let chart = ConeChart::sphere(1.0).unwrap();
    assert!(chart.scalar_curvature(0.3, &[1.0, 0.0]).unwrap().abs() < 1e-12);
}

#[test]
fn sphere_cone_curvature_formula() {
    let chart = ConeChart::sphere(0.6).unwrap();
    let r = chart.scalar_curvature(0.1, &[1.0, 0.0]).unwrap();
    assert!((r - (2.0 / 0.36 - 2.0) / 0.01).abs() < 1e-9);
}

#[test]
fn circle_cone_curvature_is_a_delta() {
    let chart = ConeChart::circle(0.6).unwrap();
    assert!(chart.scalar_curvature(0.1, &[0.0]).is_err());
    assert!((deficit_angle(0.6) - 2.0 * PI * 0.4).abs() < 1e-15);
    let a = integrated_curvature_disk(0.6, 0.1).unwrap();
    let b = integrated_curvature_disk(0.6, 1.0).unwrap();
    assert!((a - b).abs() < 1e-12);
}

#[test]
fn radial_launch_from_tip_is_linear() {
    let chart = ConeChart::sphere(0.8).unwrap();
    let grid: Vec<f64> = (0..=20).map(|k| 0.1 * k as f64).collect();
    let run = integrate_geodesic(&chart, &ConeState::new(0.0, vec![1.0, 0.0], 1.0, vec![0.0, 0.0]), &grid).unwrap();
    for s in &run.states {
        assert!((s.u - s.s).abs() < 1e-10);
    }
}

#[test]
fn inbound_geodesic_turns_at_predicted_radius() {
    let chart = ConeChart::circle(0.5).unwrap();
    let start = ConeState::new(1.0, vec![0.0], -1.0, vec![0.2]);
    let grid: Vec<f64> = (0..=400).map(|k| 0.005 * k as f64).collect();
    let run = integrate_geodesic(&chart, &start, &grid).unwrap();
    assert!(matches!(run.outcome, GeodesicOutcome::Completed));
    let umin = run.states.iter().map(|s| s.u).fold(f64::INFINITY, f64::min);
    let predicted = turning_radius(&start, &chart);
    assert!(umin > 0.0);
    assert!((umin - predicted).abs() < 1e-4);
}

#[test]
fn geodesics_entering_the_tip_region_are_radial() {
    let chart = ConeChart::sphere(0.6).unwrap();
    let start = ConeState::new(1.0, vec![1.0, 0.5], -1.0, vec![1e-8, 0.0]);
    let speed = (2.0 * start.energy(&chart)).sqrt();
    let mut grid: Vec<f64> = (0..=100).map(|k| 0.0099 * k as f64).collect();
    grid.extend((1..=400).map(|k| 0.99 + 5e-5 * k as f64));
    let run = integrate_geodesic(&chart, &start, &grid).unwrap();
    let mut states: Vec<&ConeState> = run.states.iter().collect();
    if let GeodesicOutcome::TipReached { state, .. } = &run.outcome {
        states.push(state);
    }
    let close: Vec<&&ConeState> = states.iter().filter(|s| s.u < 1e-6).collect();
    assert!(!close.is_empty());
    for s in close {
        assert!(s.angular_momentum(&chart) <= 1e-6 * speed);
    }
}

#[test]
fn bures_limit_gives_cone_slope() {
    let lim = cone_from_bures_limit(0.5, true).unwrap();
    assert!((lim.kappa - kappa_of_zeta(0.5)).abs() < 1e-15);
    let fit = fit_cone_to_bures(&evr_family_2d(0.5), (1e-6, 1e-3), &[0.7]).unwrap();
    assert!((fit.kappa - kappa_of_zeta(0.5)).abs() < 1e-3 * kappa_of_zeta(0.5));
}

#[test]
fn unreachable_kappa_has_no_zeta() {
    assert!(zeta_for_kappa(0.6).is_none());
    let z = zeta_for_kappa(0.25).unwrap();
    assert!((kappa_of_zeta(z) - 0.25).abs() < 1e-12);
}
