//! Qutrit scenarios: shooting out of a pure state and the steady state on a
//! prescribed spectrum.

use crate::error::Result;
use crate::fitting::{linear_fit, log_log_slope};
use crate::linalg::{basis, c, max_abs, DensityMatrix};
use crate::lindblad::{
    analytic_n3_shooting, cone_steady_state_model, escape_law, integrate, its_steady_state, lindblad_rhs,
    n3_shooting_model, off_diagonal_in_basis, rotation_u3, Trajectory,
};

use super::{linspace, logspace, Check, ScenarioConfig, ScenarioResult, Table};

fn invariants(checks: &mut Vec<Check>, label: &str, traj: &Trajectory) {
    checks.push(Check::at_most(
        &format!("{label}trace_preserved"),
        traj.max_trace_error(),
        1e-9,
        "unit trace along the integrated trajectory",
    ));
    checks.push(Check::exceeds(
        &format!("{label}positivity"),
        traj.min_eigenvalue(),
        -1e-9,
        "minimum eigenvalue ≥ −1e−9 along the integrated trajectory",
    ));
}

pub fn run_n3_shooting(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let gamma = cfg.param("gamma")?;
    let t_max = cfg.param("t_max")?;
    let model = n3_shooting_model(gamma)?;
    let psi = basis(3, 0);
    let rho0 = DensityMatrix::pure(&psi)?;
    let times = linspace(0.0, t_max, cfg.grid.linear_points);
    let traj = integrate(&model, &rho0, &times)?;
    let mut checks = Vec::new();

    let mut table = Table::new(
        "trajectory",
        "qutrit leaving |0> through two equal channels: populations and eigenvalues vs t",
        &[
            "t",
            "rho00",
            "rho11",
            "rho22",
            "rho00_exact",
            "rho11_exact",
            "max_off_diagonal",
        ],
    );
    let mut oracle = 0.0_f64;
    let mut offd = 0.0_f64;
    let mut frozen = 0.0_f64;
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let e = analytic_n3_shooting(gamma, t)?;
        oracle = oracle.max(max_abs(&(s.matrix() - e.matrix())));
        let o = s.max_off_diagonal();
        offd = offd.max(o);
        // eigenvector carrying |0⟩ stays |0⟩
        let spec = s.spectral();
        let best = (0..3).map(|k| spec.eigenvectors[(0, k)].norm_sqr()).fold(0.0, f64::max);
        frozen = frozen.max(1.0 - best);
        table.push(vec![
            t,
            s.population(0),
            s.population(1),
            s.population(2),
            e.population(0),
            e.population(1),
            o,
        ]);
    }
    checks.push(Check::at_most(
        "oracle_max_error",
        oracle,
        1e-6,
        "closed form rho00 = exp(-2 gamma t), rho11 = rho22 = (1 - exp(-2 gamma t))/2",
    ));
    invariants(&mut checks, "", &traj);
    checks.push(Check::at_most(
        "stays_diagonal",
        offd,
        1e-12,
        "the state remains diagonal for all t",
    ));
    checks.push(Check::at_most(
        "basis_frozen",
        frozen,
        1e-12,
        "eigenbasis is fixed, so the angular velocity vanishes",
    ));
    let t_half = std::f64::consts::LN_2 / (2.0 * gamma);
    let half = integrate(&model, &rho0, &[0.0, t_half])?;
    checks.push(Check::absolute(
        "rho00_half_life",
        half.states[1].population(0),
        0.5,
        1e-6,
        "rho00(ln 2/(2 gamma)) = 1/2",
    ));

    let esc = escape_law(&model, &psi)?;
    checks.push(Check::at_most(
        "escape_matrix_is_gamma_identity",
        max_abs(&(&esc.m - crate::linalg::identity(2) * c(gamma, 0.0))),
        1e-12,
        "M = gamma I on the complement of |0>",
    ));
    let probe = integrate(&model, &rho0, &[0.0, super::qubit::ESCAPE_PROBE_TIME])?;
    let ev = probe.states[1].eigenvalues();
    let t = super::qubit::ESCAPE_PROBE_TIME;
    checks.push(Check::relative(
        "lambda_1_over_t",
        ev[1] / t,
        esc.c_max,
        0.01,
        "lambda_1 = lambda_2 ~ gamma t",
    ));
    checks.push(Check::relative(
        "lambda_min_over_t",
        ev[2] / t,
        esc.c_min,
        0.01,
        "lambda_min(t) ~ C_min t",
    ));

    let (lo, hi) = (1e-4, 1e-2);
    let mut grid = vec![0.0];
    grid.extend(logspace(lo, hi, cfg.grid.log_points));
    let scan = integrate(&model, &rho0, &grid)?;
    let mut scaling = Table::new(
        "radial_growth",
        "growth of the cone radius u = sqrt(epsilon) after leaving the pure state",
        &["t", "epsilon", "u"],
    );
    let (mut xs, mut us) = (Vec::new(), Vec::new());
    for (&t, s) in scan.times.iter().zip(&scan.states).skip(1) {
        let eps = s.population(1);
        scaling.push(vec![t, eps, eps.sqrt()]);
        xs.push(t);
        us.push(eps.sqrt());
    }
    let fit = log_log_slope(&xs, &us)?;
    checks.push(Check::absolute("u_slope", fit.slope, 0.5, 0.02, "u = sqrt(epsilon) ~ sqrt(t)").on_window(lo, hi));

    let mut tables = Vec::new();
    for t in [table, scaling] {
        if cfg.wants(&t.name) {
            tables.push(t);
        }
    }
    Ok(ScenarioResult {
        name: cfg.name,
        parameters: cfg.parameters.clone(),
        tables,
        checks,
    })
}

pub fn run_cone_steady_state(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let zeta = cfg.param("zeta")?;
    let eps = cfg.param("epsilon")?;
    let theta = cfg.param("theta")?;
    let phi = cfg.param("phi")?;
    let big_gamma = cfg.param("Gamma")?;
    let model = cone_steady_state_model(zeta, eps, theta, phi, big_gamma)?;
    let ss = its_steady_state(zeta, eps, theta, phi)?;
    let u = rotation_u3(theta, phi);
    let mut checks = Vec::new();

    let residual = max_abs(&lindblad_rhs(&model, 0.0, &ss)?);
    checks.push(Check::at_most(
        "steady_state_residual",
        residual,
        1e-12,
        "p = (epsilon, zeta epsilon, 1-(1+zeta)epsilon) annihilates the rate equations",
    ));

    let t_end = 20.0 / big_gamma;
    let times = linspace(0.0, t_end, cfg.grid.linear_points);
    let rho0 = DensityMatrix::diagonal(&[0.0, 0.0, 1.0])?;
    let traj = integrate(&model, &rho0, &times)?;
    invariants(&mut checks, "", &traj);
    let mut conv = Table::new(
        "convergence",
        "relaxation from |2><2| toward the constructed steady state",
        &["t", "p0", "p1", "p2", "distance"],
    );
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let rot = u.adjoint() * s.matrix() * &u;
        conv.push(vec![
            t,
            rot[(0, 0)].re,
            rot[(1, 1)].re,
            rot[(2, 2)].re,
            max_abs(&(s.matrix() - ss.matrix())),
        ]);
    }
    let final_dist = max_abs(&(traj.states.last().expect("non-empty").matrix() - ss.matrix()));
    checks.push(Check::at_most(
        "converged_by_20_over_Gamma",
        final_dist,
        1e-8,
        "unique steady state reached from |2><2|",
    ));

    // coherent start in the rotated basis
    let s3 = 1.0 / 3.0_f64.sqrt();
    let chi = crate::linalg::ComplexVector::from_vec(vec![c(s3, 0.0), c(s3, 0.0), c(s3, 0.0)]);
    let rho_c = DensityMatrix::pure(&(&u * chi))?;
    let coh = integrate(&model, &rho_c, &times)?;
    invariants(&mut checks, "coherent_", &coh);
    let mut decay = Table::new(
        "coherence_decay",
        "off-diagonal elements in the rotated eigenbasis decay exponentially",
        &["t", "max_off_diagonal"],
    );
    let mut monotone = true;
    let mut prev = f64::INFINITY;
    let (mut ts, mut logs) = (Vec::new(), Vec::new());
    for (&t, s) in coh.times.iter().zip(&coh.states) {
        let o = off_diagonal_in_basis(s, &u);
        monotone &= o <= prev * (1.0 + 1e-9);
        prev = o;
        decay.push(vec![t, o]);
        if t >= 0.25 * t_end && o > 0.0 {
            ts.push(t);
            logs.push(o.ln());
        }
    }
    checks.push(Check::at_most(
        "coherences_monotone",
        if monotone { 0.0 } else { 1.0 },
        0.0,
        "off-diagonal elements decrease monotonically",
    ));
    let p2 = 1.0 - (1.0 + zeta) * eps;
    let rate = 0.5 * (big_gamma + big_gamma * (1.0 + zeta) * eps / p2);
    let fit = linear_fit(&ts, &logs)?;
    checks.push(
        Check::relative(
            "coherence_decay_rate",
            -fit.slope,
            rate,
            1e-4,
            "slowest coherence decays at (Gamma_out(0) + Gamma_out(2))/2",
        )
        .on_window(0.25 * t_end, t_end),
    );

    let mut tables = Vec::new();
    for t in [conv, decay] {
        if cfg.wants(&t.name) {
            tables.push(t);
        }
    }
    Ok(ScenarioResult {
        name: cfg.name,
        parameters: cfg.parameters.clone(),
        tables,
        checks,
    })
}
