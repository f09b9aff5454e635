//! Qubit scenarios: asymptotic and finite-time purification, and the
//! escape from a pure state into the mixed interior.

use crate::bures::{bloch_family, bures_metric_spectral, bures_speed_sq, induced_metric_along_trajectory};
use crate::error::Result;
use crate::fitting::{fit_sine, linear_fit, log_log_slope};
use crate::linalg::{c, max_abs, to_bloch, ComplexVector, DensityMatrix};
use crate::lindblad::{
    analytic_asymptotic_purification, analytic_finite_time_purification, analytic_pure_to_mixed,
    asymptotic_purification_model, escape_constant, escape_law, finite_time_purification_model, integrate,
    integrate_to_singularity, lindblad_rhs, pure_to_mixed_model, Trajectory,
};

use super::{linspace, logspace, Check, ScenarioConfig, ScenarioResult, Table};

/// Bloch-coordinate metric components at ρ with 1 − r² = 4 det ρ.
pub(crate) struct QubitMetric {
    pub r: f64,
    pub g_rr: f64,
    pub g_thth: f64,
    pub g_phph: f64,
}

pub(crate) fn qubit_metric(rho: &DensityMatrix) -> Result<QubitMetric> {
    let b = to_bloch(rho)?;
    let eig = rho.eigenvalues();
    let one_minus_r2 = 4.0 * eig[0].max(0.0) * eig[1].max(0.0);
    let r = b.r();
    let rho_perp_sq = b.x * b.x + b.y * b.y;
    Ok(QubitMetric {
        r,
        g_rr: 0.25 / one_minus_r2,
        g_thth: 0.25 * r * r,
        g_phph: 0.25 * rho_perp_sq,
    })
}

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

pub fn run_asymptotic_purification(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let p = cfg.param("p")?;
    let gamma = cfg.param("gamma")?;
    let t_max = cfg.param("t_max")?;
    let model = asymptotic_purification_model(gamma)?;
    let rho0 = analytic_asymptotic_purification(p, gamma, 0.0)?;
    let times = linspace(0.0, t_max, cfg.grid.linear_points);
    let traj = integrate(&model, &rho0, &times)?;

    let mut checks = Vec::new();
    let mut table = Table::new(
        "trajectory",
        "purification toward |0> at constant rate: populations, Bloch radius and metric components vs t",
        &[
            "t",
            "rho00",
            "rho11",
            "rho11_exact",
            "r",
            "g_rr",
            "g_thth",
            "g_phph",
            "u_flat",
            "speed_ratio",
        ],
    );
    let mut oracle_err = 0.0_f64;
    let mut speed_err = 0.0_f64;
    let mut monotone = true;
    let mut g_phph_max = 0.0_f64;
    let mut prev: Option<(f64, f64)> = None;
    // asymptotic regime: ρ11 ≤ 0.01, where 1 − r² ≈ 2(1 − r) holds to 1%
    let t_rate = ((100.0 * (1.0 - p)).ln() / gamma).max(0.0);
    let mut semilog_t = Vec::new();
    let mut semilog_g = Vec::new();
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let exact = analytic_asymptotic_purification(p, gamma, t)?;
        oracle_err = oracle_err.max(max_abs(&(s.matrix() - exact.matrix())));
        let m = qubit_metric(s)?;
        let (p0, p1) = (s.population(0), s.population(1));
        if let Some((q0, q1)) = prev {
            monotone &= p0 >= q0 - 1e-15 && p1 <= q1 + 1e-15;
        }
        prev = Some((p0, p1));
        g_phph_max = g_phph_max.max(m.g_phph.abs());

        // flattened coordinate u = arcsin √η, η = ρ11
        let eta = p1;
        let u = eta.sqrt().asin();
        let drho = lindblad_rhs(&model, t, s)?;
        let ds = bures_speed_sq(s, &drho)?.sqrt();
        let du = drho[(1, 1)].re / (2.0 * (eta * (1.0 - eta)).sqrt());
        let ratio = du.abs() / ds;
        speed_err = speed_err.max((ratio - 1.0).abs());
        if (t_rate..=t_max).contains(&t) {
            semilog_t.push(t);
            semilog_g.push(m.g_rr.ln());
        }
        table.push(vec![
            t,
            p0,
            p1,
            exact.population(1),
            m.r,
            m.g_rr,
            m.g_thth,
            m.g_phph,
            u,
            ratio,
        ]);
    }
    checks.push(Check::at_most(
        "oracle_max_error",
        oracle_err,
        1e-6,
        "closed form rho11 = (1-p) exp(-gamma t)",
    ));
    invariants(&mut checks, "", &traj);
    checks.push(Check::at_most(
        "populations_monotone",
        if monotone { 0.0 } else { 1.0 },
        0.0,
        "rho00 non-decreasing and rho11 non-increasing for p > 1/2",
    ));
    let last = qubit_metric(traj.states.last().expect("non-empty"))?;
    let x = 2.0 * (1.0 - p) * (-gamma * t_max).exp();
    checks.push(Check::absolute(
        "g_thth_limit",
        0.25 - last.g_thth,
        0.25 * x * (2.0 - x),
        1e-9,
        "1/4 - g_thth = (1 - r^2)/4 with 1 - r = 2(1-p)exp(-gamma t), so g_thth -> 1/4",
    ));
    checks.push(Check::at_most(
        "g_phph_vanishes",
        g_phph_max,
        1e-12,
        "motion along the z axis: g_phph = 0",
    ));
    if semilog_t.len() >= 2 {
        let fit = linear_fit(&semilog_t, &semilog_g)?;
        checks.push(
            Check::absolute(
                "g_rr_exponential_rate",
                fit.slope,
                gamma,
                0.05,
                "1 - r^2 ~ 4(1-p) exp(-gamma t), so ln g_rr grows at rate gamma",
            )
            .on_window(t_rate, t_max),
        );
    } else {
        checks.push(
            Check::absolute(
                "g_rr_exponential_rate",
                f64::NAN,
                gamma,
                0.05,
                "no samples with rho11 <= 0.01 before t_max; increase t_max",
            )
            .on_window(t_rate, t_max),
        );
    }
    // g_rr at t = 1 from the finite-difference Bures metric
    let t1 = 1.0_f64.min(t_max);
    let r1 = 1.0 - 2.0 * (1.0 - p) * (-gamma * t1).exp();
    let fd = bures_metric_spectral(&bloch_family(), &[r1, 0.5, 0.0])?;
    checks.push(Check::relative(
        "g_rr_fd_vs_closed_form",
        fd.g[(0, 0)],
        0.25 / (1.0 - r1 * r1),
        1e-6,
        "finite-difference spectral metric against g_rr = 1/(4(1-r^2))",
    ));
    checks.push(Check::at_most(
        "flat_chart_unit_speed",
        speed_err,
        1e-6,
        "ds^2 = du^2 with u = arcsin sqrt(eta), eta = (1-p) exp(-gamma t)",
    ));

    let mut tables = Vec::new();
    if cfg.wants("trajectory") {
        tables.push(table);
    }
    Ok(ScenarioResult {
        name: cfg.name,
        parameters: cfg.parameters.clone(),
        tables,
        checks,
    })
}

/// Relative integration cut-off before the singular time.
pub const FINITE_TIME_DELTA: f64 = 1e-6;
/// Oracle comparison stops this far before T.
pub const FINITE_TIME_ORACLE_MARGIN: f64 = 1e-3;
/// Window of T − t used for the scaling fits.
pub const FINITE_TIME_WINDOW: (f64, f64) = (1e-3, 1e-1);

pub struct FiniteTimeRun {
    pub alpha: f64,
    pub checks: Vec<Check>,
    pub trajectory: Table,
    pub scaling: Table,
    pub sine_rms: f64,
}

pub fn finite_time_single(
    p: f64,
    alpha: f64,
    t_final: f64,
    linear_points: usize,
    log_points: usize,
) -> Result<FiniteTimeRun> {
    let model = finite_time_purification_model(alpha, t_final)?;
    let rho0 = analytic_finite_time_purification(p, alpha, t_final, 0.0)?;
    let endpoint = analytic_finite_time_purification(p, alpha, t_final, t_final)?;
    let label = format!("alpha_{}_", alpha);
    let mut checks = Vec::new();

    // figure curve on [0, T]
    let times = linspace(0.0, t_final, linear_points);
    let traj = integrate_to_singularity(&model, &rho0, &times, t_final, FINITE_TIME_DELTA, endpoint.clone())?;
    let mut trajectory = Table::new(
        &format!("alpha_{}_trajectory", alpha),
        "purification at finite time T with rate alpha/(T-t): populations, Bloch radius, metric components vs t",
        &["t", "rho11", "rho11_exact", "r", "g_rr", "g_thth"],
    );
    let mut oracle_err = 0.0_f64;
    let mut fit_t = Vec::new();
    let mut fit_r = Vec::new();
    let oracle_end = t_final - FINITE_TIME_ORACLE_MARGIN * t_final;
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let exact = analytic_finite_time_purification(p, alpha, t_final, t)?;
        let r = to_bloch(s)?.r();
        if t <= oracle_end {
            oracle_err = oracle_err.max(max_abs(&(s.matrix() - exact.matrix())));
            fit_t.push(t);
            fit_r.push(r);
        }
        let m = qubit_metric(s)?;
        trajectory.push(vec![t, s.population(1), exact.population(1), r, m.g_rr, m.g_thth]);
    }
    checks.push(
        Check::at_most(
            &format!("{label}oracle_max_error"),
            oracle_err,
            1e-6,
            "closed form rho11 = (1-p)((T-t)/T)^alpha",
        )
        .on_window(0.0, oracle_end),
    );
    invariants(&mut checks, &label, &traj);
    let half = integrate(&model, &rho0, &[0.0, 0.5 * t_final])?;
    checks.push(Check::absolute(
        &format!("{label}rho11_half_time"),
        half.states[1].population(1),
        (1.0 - p) * 0.5_f64.powf(alpha),
        1e-6,
        "rho11(T/2) = (1-p) 2^-alpha",
    ));
    let r_end = to_bloch(traj.states.last().expect("non-empty"))?.r();
    checks.push(Check::absolute(
        &format!("{label}purified_at_T"),
        r_end,
        1.0,
        1e-12,
        "the state is pure at t = T",
    ));

    // scaling window in T − t
    let (lo, hi) = FINITE_TIME_WINDOW;
    let mut taus = logspace(lo / 1.05, hi * 1.05, log_points);
    taus.reverse();
    let mut grid = vec![0.0];
    grid.extend(taus.iter().map(|tau| t_final - tau * t_final));
    let scan = integrate(&model, &rho0, &grid)?;
    let induced = induced_metric_along_trajectory(&Trajectory {
        times: scan.times[1..].to_vec(),
        states: scan.states[1..].to_vec(),
    })?;
    let mut scaling = Table::new(
        &format!("alpha_{}_scaling", alpha),
        "approach to the pure-state boundary at finite time: metric components vs T - t",
        &["tau", "one_minus_r", "g_rr", "g_tt"],
    );
    let (mut xs, mut grr, mut gtt) = (Vec::new(), Vec::new(), Vec::new());
    for smp in &induced {
        let tau = (t_final - smp.t) / t_final;
        let idx = scan.times.iter().position(|&t| t == smp.t).expect("sample time");
        let m = qubit_metric(&scan.states[idx])?;
        scaling.push(vec![tau, smp.one_minus_r, m.g_rr, smp.g_tt]);
        if tau >= lo * (1.0 - 1e-12) && tau <= hi * (1.0 + 1e-12) {
            xs.push(tau);
            grr.push(m.g_rr);
            gtt.push(smp.g_tt);
        }
    }
    let s_rr = log_log_slope(&xs, &grr)?;
    checks.push(
        Check::absolute(
            &format!("{label}g_rr_slope"),
            s_rr.slope,
            -alpha,
            0.05,
            "g_rr ~ (T/(T-t))^alpha",
        )
        .on_window(lo, hi),
    );
    let s_tt = log_log_slope(&xs, &gtt)?;
    checks.push(
        Check::absolute(
            &format!("{label}g_tt_slope"),
            s_tt.slope,
            alpha - 2.0,
            0.05,
            "g_tt = g_rr rdot^2 ~ (T-t)^(alpha-2)",
        )
        .on_window(lo, hi),
    );
    if (alpha - 2.0).abs() < 1e-12 {
        let max = gtt.iter().cloned().fold(f64::MIN, f64::max);
        let min = gtt.iter().cloned().fold(f64::MAX, f64::min);
        checks.push(
            Check::at_most(
                &format!("{label}g_tt_constant"),
                max / min - 1.0,
                0.01,
                "alpha = 2: g_tt tends to a constant",
            )
            .on_window(lo, hi),
        );
    }
    let sine = fit_sine(&fit_t, &fit_r)?;
    if (alpha - 2.0).abs() > 1e-12 {
        checks.push(
            Check::exceeds(
                &format!("{label}non_geodesic_residual"),
                sine.rms,
                1e-3,
                "radial Bures geodesics are r = sin(omega t + delta); best fit residual",
            )
            .on_window(0.0, oracle_end),
        );
    }
    Ok(FiniteTimeRun {
        alpha,
        checks,
        trajectory,
        scaling,
        sine_rms: sine.rms,
    })
}

pub fn run_finite_time_purification(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let p = cfg.param("p")?;
    let t_final = cfg.param("T")?;
    let alphas = match cfg.optional("alpha") {
        Some(a) => vec![a],
        None => vec![1.0, 2.0, 3.0],
    };
    let mut tables = Vec::new();
    let mut checks = Vec::new();
    let mut sine = Table::new(
        "sine_fit",
        "best fit of r(t) by the radial geodesic family sin(omega t + delta) on [0, T - 1e-3]",
        &["alpha", "rms_residual"],
    );
    for alpha in alphas {
        let run = finite_time_single(p, alpha, t_final, cfg.grid.linear_points, cfg.grid.log_points)?;
        checks.extend(run.checks);
        sine.push(vec![alpha, run.sine_rms]);
        for t in [run.trajectory, run.scaling] {
            if cfg.wants(&t.name) {
                tables.push(t);
            }
        }
    }
    if cfg.wants("sine_fit") {
        tables.push(sine);
    }
    Ok(ScenarioResult {
        name: cfg.name,
        parameters: cfg.parameters.clone(),
        tables,
        checks,
    })
}

/// |+⟩ = (|0⟩ + |1⟩)/√2.
pub fn plus_state() -> ComplexVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexVector::from_vec(vec![c(s, 0.0), c(s, 0.0)])
}

/// Time at which the escape rate is read off from λ_min(t)/t.
pub const ESCAPE_PROBE_TIME: f64 = 1e-4;

pub fn run_pure_to_mixed(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let g1 = cfg.param("gamma1")?;
    let g2 = cfg.param("gamma2")?;
    let t_max = cfg.param("t_max")?;
    let model = pure_to_mixed_model(g1, g2)?;
    let psi = plus_state();
    let rho0 = DensityMatrix::pure(&psi)?;
    let times = linspace(0.0, t_max, cfg.grid.linear_points);
    let traj = integrate(&model, &rho0, &times)?;
    let mut checks = Vec::new();

    let mut table = Table::new(
        "trajectory",
        "escape from the pure state |+> under damping and sigma_x dephasing: Bloch path and metric components vs t",
        &[
            "t", "x", "y", "z", "x_exact", "z_exact", "r", "g_rr", "g_thth", "g_phph",
        ],
    );
    let mut oracle_err = 0.0_f64;
    let mut gphph_err = 0.0_f64;
    for (&t, s) in traj.times.iter().zip(&traj.states) {
        let b = to_bloch(s)?;
        let e = analytic_pure_to_mixed(g1, g2, t)?;
        oracle_err = oracle_err.max(b.max_abs_diff(&e));
        let m = qubit_metric(s)?;
        gphph_err = gphph_err.max((m.g_phph - 0.25 * (-g1 * t).exp()).abs());
        table.push(vec![t, b.x, b.y, b.z, e.x, e.z, m.r, m.g_rr, m.g_thth, m.g_phph]);
    }
    checks.push(Check::at_most(
        "oracle_max_error",
        oracle_err,
        1e-6,
        "closed form x = exp(-gamma1 t/2), z = gamma1/(gamma1+2gamma2)(1 - exp(-(gamma1+2gamma2)t))",
    ));
    invariants(&mut checks, "", &traj);
    checks.push(Check::absolute(
        "starts_pure",
        to_bloch(&traj.states[0])?.r(),
        1.0,
        1e-12,
        "the evolution starts on the pure-state boundary",
    ));
    checks.push(Check::at_most(
        "g_phph_closed_form",
        gphph_err,
        1e-8,
        "g_phph = x^2/4 = exp(-gamma1 t)/4 on the equatorial plane",
    ));
    let long = integrate(&model, &rho0, &[0.0, 40.0 / g1.min(g1 + 2.0 * g2)])?;
    checks.push(Check::absolute(
        "z_asymptote",
        to_bloch(&long.states[1])?.z,
        g1 / (g1 + 2.0 * g2),
        1e-6,
        "Bloch vector ends at z = gamma1/(gamma1+2gamma2)",
    ));

    // escape law
    let esc = escape_law(&model, &psi)?;
    let cst = escape_constant(&model, &psi)?;
    checks.push(Check::absolute(
        "escape_matrix_matches_constant",
        esc.c_min,
        cst,
        1e-12,
        "for a qubit the 1x1 escape matrix equals sum_k <L^dag L> - |<L>|^2",
    ));
    let probe = integrate(&model, &rho0, &[0.0, ESCAPE_PROBE_TIME])?;
    let lmin = *probe.states[1].eigenvalues().last().expect("non-empty");
    checks.push(Check::relative(
        "escape_rate_from_lambda_min",
        lmin / ESCAPE_PROBE_TIME,
        esc.c_min,
        0.01,
        "lambda_min(t) = C t + O(t^2)",
    ));
    let m_probe = qubit_metric(&probe.states[1])?;
    checks.push(Check::relative(
        "g_rr_times_t",
        m_probe.g_rr * ESCAPE_PROBE_TIME,
        1.0 / (16.0 * esc.c_min),
        0.01,
        "1 - r^2 = 4 lambda_min lambda_max ~ 4 C t, so g_rr t -> 1/(16 C)",
    ));

    // g_rr ~ 1/t on [1e-4, 1e-2]
    let (lo, hi) = (1e-4, 1e-2);
    let mut grid = vec![0.0];
    grid.extend(logspace(lo, hi, cfg.grid.log_points));
    let scan = integrate(&model, &rho0, &grid)?;
    let mut scaling = Table::new(
        "short_time",
        "short-time divergence of the radial metric component after leaving the pure state",
        &["t", "lambda_min", "g_rr"],
    );
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (&t, s) in scan.times.iter().zip(&scan.states).skip(1) {
        let m = qubit_metric(s)?;
        scaling.push(vec![t, *s.eigenvalues().last().expect("non-empty"), m.g_rr]);
        xs.push(t);
        ys.push(m.g_rr);
    }
    let fit = log_log_slope(&xs, &ys)?;
    checks.push(Check::absolute("g_rr_slope", fit.slope, -1.0, 0.05, "g_rr ~ 1/t").on_window(lo, hi));

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
