//! Cone scenarios built from the (ε, ζε, 1−(1+ζ)ε) family.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::bures::{bures_metric_spectral, evr_family_2d, evr_family_3d, numeric_scalar_curvature};
use crate::cone::{
    bures_metric_u_prime, cone_from_bures_limit, deficit_angle, fit_cone_to_bures, integrated_curvature_disk,
    u_prime_exact_curvature, zeta_for_kappa, ConeChart, ConeFit,
};
use crate::error::Result;
use crate::fitting::{fixed_slope_prefactor, log_log_slope};

use super::{logspace, Check, ScenarioConfig, ScenarioResult, Table};

pub const CONE_EPS_WINDOW: (f64, f64) = (1e-6, 1e-3);
pub const CURVATURE_U_WINDOW: (f64, f64) = (1e-2, 1e-1);

fn fit_table(name: &str, fit: &ConeFit) -> Table {
    let mut t = Table::new(
        name,
        "small-eigenvalue asymptotics of the Bures metric: radial and angular components vs epsilon",
        &["epsilon", "g_ee", "g_thth", "g_ee_times_eps", "g_thth_over_eps"],
    );
    for s in &fit.samples {
        t.push(vec![s.eps, s.g_ee, s.g_tt, s.g_ee * s.eps, s.g_tt / s.eps]);
    }
    t
}

fn fit_checks(checks: &mut Vec<Check>, zeta: f64, fit: &ConeFit) -> Result<()> {
    let limit = cone_from_bures_limit(zeta, false)?;
    let (lo, hi) = CONE_EPS_WINDOW;
    checks.push(
        Check::relative(
            "kappa_fit",
            fit.kappa,
            limit.kappa,
            0.01,
            "kappa = |1-zeta|/(2(1+zeta)) from the eigenvalue-pair weight of the full double sum",
        )
        .on_window(lo, hi),
    );
    checks.push(
        Check::relative(
            "radial_coefficient",
            fit.radial_coefficient,
            (1.0 + zeta) / 4.0,
            0.01,
            "g_ee ~ (1+zeta)/(4 epsilon)",
        )
        .on_window(lo, hi),
    );
    Ok(())
}

/// Scalar curvature samples of a metric field along u with fixed angles.
fn curvature_curve(field: &dyn Fn(&[f64]) -> Result<DMatrix<f64>>, us: &[f64], angles: &[f64]) -> Result<Vec<f64>> {
    us.iter()
        .map(|&u| {
            let mut x = vec![u];
            x.extend_from_slice(angles);
            let mut h = vec![1e-3 * u];
            h.extend(std::iter::repeat_n(1e-3, angles.len()));
            Ok(numeric_scalar_curvature(&field, &x, &h)?.r)
        })
        .collect()
}

pub fn run_cone_2d(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let zeta = cfg.param("zeta")?;
    let theta = cfg.param("theta")?;
    let kappa = cfg.param("kappa")?;
    let mut checks = Vec::new();
    let fit = fit_cone_to_bures(&evr_family_2d(zeta), CONE_EPS_WINDOW, &[theta])?;
    fit_checks(&mut checks, zeta, &fit)?;
    checks.push(Check::absolute(
        "deficit_from_fit",
        deficit_angle(fit.kappa),
        deficit_angle(cone_from_bures_limit(zeta, false)?.kappa),
        2.0 * PI * 0.01 * fit.kappa,
        "deficit angle 2 pi (1 - kappa) of the fitted cone",
    ));

    let mut deficit = Table::new(
        "deficit",
        "two-dimensional cone: deficit angle and tip-integrated curvature over disks of several radii",
        &["kappa", "zeta", "deficit", "disk_0.1", "disk_0.5", "disk_1.0"],
    );
    let mut row = |k: f64| -> Result<f64> {
        let d = deficit_angle(k);
        let disks: Vec<f64> = [0.1, 0.5, 1.0]
            .iter()
            .map(|&r| integrated_curvature_disk(k, r))
            .collect::<Result<_>>()?;
        deficit.push(vec![
            k,
            zeta_for_kappa(k).unwrap_or(f64::NAN),
            d,
            disks[0],
            disks[1],
            disks[2],
        ]);
        Ok(disks.iter().map(|v| (v - d).abs()).fold(0.0, f64::max))
    };
    let spread_fit = row(fit.kappa)?;
    let spread = row(kappa)?;
    checks.push(Check::at_most(
        "disk_independence",
        spread.max(spread_fit),
        1e-12,
        "integrated curvature over any tip-containing disk equals the deficit",
    ));
    checks.push(Check::absolute(
        "deficit_angle",
        deficit_angle(kappa),
        2.0 * PI * (1.0 - kappa),
        1e-12,
        "deficit 2 pi (1 - kappa)",
    ));

    let mut tables = Vec::new();
    for t in [fit_table("fit", &fit), deficit] {
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

pub fn run_cone_3d(cfg: &ScenarioConfig) -> Result<ScenarioResult> {
    let zeta = cfg.param("zeta")?;
    let theta = cfg.param("theta")?;
    let phi = cfg.param("phi")?;
    let kappa_chart = cfg.param("kappa")?;
    crate::bures::check_away_from_pole(theta)?;
    let mut checks = Vec::new();

    let fit = fit_cone_to_bures(&evr_family_3d(zeta), CONE_EPS_WINDOW, &[theta, phi])?;
    fit_checks(&mut checks, zeta, &fit)?;

    // φ = 0 slice against the single-angle family
    let eps = 1e-4;
    let g3 = bures_metric_spectral(&evr_family_3d(zeta), &[eps, theta, 0.0])?.g;
    let g2 = bures_metric_spectral(&evr_family_2d(zeta), &[eps, theta])?.g;
    let slice = (0..2)
        .flat_map(|a| (0..2).map(move |b| (a, b)))
        .map(|(a, b)| (g3[(a, b)] - g2[(a, b)]).abs() / g2[(a, a)].abs().max(g2[(b, b)].abs()))
        .fold(0.0, f64::max);
    checks.push(Check::at_most(
        "phi_zero_slice",
        slice,
        1e-8,
        "setting phi = 0 reduces the full rotation to the single-angle family",
    ));

    let kappa = cone_from_bures_limit(zeta, true)?.kappa;
    let (lo, hi) = CURVATURE_U_WINDOW;
    let us = logspace(lo, hi, cfg.grid.log_points);
    let field = move |x: &[f64]| bures_metric_u_prime(zeta, x);
    let rs = curvature_curve(&field, &us, &[theta, phi])?;
    let mut curv = Table::new(
        "curvature",
        "three-dimensional cone: scalar curvature of the Bures metric vs u' (1/u'^2 divergence)",
        &["u", "R_numeric", "R_cone", "R_exact"],
    );
    for (&u, &r) in us.iter().zip(&rs) {
        curv.push(vec![
            u,
            r,
            (2.0 / (kappa * kappa) - 2.0) / (u * u),
            u_prime_exact_curvature(kappa, u),
        ]);
    }
    let slope = log_log_slope(&us, &rs)?;
    checks.push(Check::absolute("curvature_slope", slope.slope, -2.0, 0.02, "R ~ 1/u'^2").on_window(lo, hi));
    let pref = fixed_slope_prefactor(&us, &rs, -2.0)?;
    checks.push(
        Check::relative(
            "curvature_prefactor",
            pref,
            2.0 / (kappa * kappa) - 2.0,
            0.02,
            "R = (2/kappa^2 - 2)/u'^2 near the tip",
        )
        .on_window(lo, hi),
    );

    // cone over a round sphere of radius κ, for κ outside the reachable range
    let chart = ConeChart::sphere(kappa_chart)?;
    let chart_field = |x: &[f64]| -> Result<DMatrix<f64>> { Ok(chart.metric(x)) };
    let rc = curvature_curve(&chart_field, &us, &[theta, phi])?;
    let mut ctab = Table::new(
        "chart_curvature",
        "scalar curvature of the cone over a sphere of radius kappa vs u",
        &["u", "R_numeric", "R_exact"],
    );
    for (&u, &r) in us.iter().zip(&rc) {
        ctab.push(vec![u, r, chart.scalar_curvature(u, &[theta, phi])?]);
    }
    let cs = log_log_slope(&us, &rc)?;
    checks.push(Check::absolute("chart_curvature_slope", cs.slope, -2.0, 0.02, "R ~ 1/u^2").on_window(lo, hi));
    checks.push(
        Check::relative(
            "chart_curvature_prefactor",
            fixed_slope_prefactor(&us, &rc, -2.0)?,
            2.0 / (kappa_chart * kappa_chart) - 2.0,
            0.02,
            "R = (R_h - d(d-1))/u^2 with R_h = 2/kappa^2",
        )
        .on_window(lo, hi),
    );

    let mut tables = Vec::new();
    for t in [fit_table("fit", &fit), curv, ctab] {
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
