use burescone::linalg::*;
use burescone::lindblad::*;
use proptest::prelude::*;

fn random_state(n: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(-1.0..1.0_f64, 2 * n * n).prop_map(move |v| {
        let a = ComplexMatrix::from_fn(n, n, |i, j| c(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]));
        let m = &a * a.adjoint() + identity(n) * c(1e-3, 0.0);
        let tr = trace(&m).re;
        DensityMatrix::new(m / c(tr, 0.0)).unwrap()
    })
}

proptest! {
    #[test]
    fn rhs_is_hermitian_and_traceless(rho in random_state(3), g in 0.1..3.0_f64) {
        let model = LindbladModel::new(
            pauli_like(3),
            vec![
                JumpOperator::constant(unit(3, 1, 0), g),
                JumpOperator::constant(unit(3, 2, 1), 0.5 * g),
            ],
        ).unwrap();
        let d = lindblad_rhs(&model, 0.0, &rho).unwrap();
        prop_assert!(hermitian_deviation(&d) < 1e-14);
        prop_assert!(trace(&d).norm() < 1e-14);
    }

    #[test]
    fn trajectories_stay_physical(rho in random_state(2), g1 in 0.2..2.0_f64, g2 in 0.0..1.0_f64) {
        let model = pure_to_mixed_model(g1, g2).unwrap();
        let grid: Vec<f64> = (0..=20).map(|k| 0.25 * k as f64).collect();
        let traj = integrate(&model, &rho, &grid).unwrap();
        prop_assert!(traj.max_trace_error() < 1e-12);
        prop_assert!(traj.min_eigenvalue() > -1e-9);
    }
}

fn pauli_like(n: usize) -> ComplexMatrix {
    let mut h = zeros(n);
    for i in 0..n - 1 {
        h[(i, i + 1)] = c(0.3, 0.1);
        h[(i + 1, i)] = c(0.3, -0.1);
    }
    h
}

#[test]
fn asymptotic_purification_matches_closed_form() {
    let model = asymptotic_purification_model(2.0).unwrap();
    let rho0 = analytic_asymptotic_purification(0.7, 2.0, 0.0).unwrap();
    let grid: Vec<f64> = (0..=50).map(|k| 0.1 * k as f64).collect();
    let traj = integrate(&model, &rho0, &grid).unwrap();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let exact = analytic_asymptotic_purification(0.7, 2.0, *t).unwrap();
        assert!(max_abs(&(s.matrix() - exact.matrix())) < 1e-8);
    }
}

#[test]
fn finite_time_rate_blows_up_at_t_final() {
    let model = finite_time_purification_model(2.0, 1.0).unwrap();
    let rho0 = analytic_finite_time_purification(0.7, 2.0, 1.0, 0.0).unwrap();
    assert!(integrate(&model, &rho0, &[0.0, 1.0]).is_err());
    let late = analytic_finite_time_purification(0.7, 2.0, 1.0, 1.0 - 1e-6).unwrap();
    assert!(late.min_eigenvalue() < 1e-5);
}

#[test]
fn n3_shooting_stays_diagonal() {
    let model = n3_shooting_model(1.0).unwrap();
    let rho0 = DensityMatrix::pure(&basis(3, 0)).unwrap();
    let grid: Vec<f64> = (0..=30).map(|k| 0.1 * k as f64).collect();
    let traj = integrate(&model, &rho0, &grid).unwrap();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        assert!(s.max_off_diagonal() < 1e-12);
        let exact = analytic_n3_shooting(1.0, *t).unwrap();
        assert!(max_abs(&(s.matrix() - exact.matrix())) < 1e-8);
    }
}

#[test]
fn escape_matrix_of_n3_model_is_gamma_identity() {
    let model = n3_shooting_model(1.5).unwrap();
    let e = escape_law(&model, &basis(3, 0)).unwrap();
    assert!((e.c_max - 1.5).abs() < 1e-12);
    assert!((e.c_min - 1.5).abs() < 1e-12);
}

#[test]
fn steady_state_is_stationary() {
    let model = cone_steady_state_model(0.5, 0.01, 1.0, 0.4, 1.0).unwrap();
    let ss = its_steady_state(0.5, 0.01, 1.0, 0.4).unwrap();
    assert!(max_abs(&lindblad_rhs(&model, 0.0, &ss).unwrap()) < 1e-12);
}

#[test]
fn bad_spectrum_is_rejected() {
    assert!(cone_spectrum(0.5, 0.9).is_err());
    assert!(cone_spectrum(0.5, -0.1).is_err());
}
