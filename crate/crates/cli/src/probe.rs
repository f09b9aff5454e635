//! `metric` and `geodesic` subcommands.

use burescone::acceptance::{QUBIT_CURVATURE_STEP, QUBIT_METRIC_STEP};
use burescone::bures::{
    bloch_family, bloch_metric_closed_form, bloch_metric_u_chart, bloch_u_family, bures_metric_spectral, evr_family_2d,
    evr_family_3d, numeric_scalar_curvature, pure_bloch_family, FdStep, ParametrizedFamily, Stencil,
};
use burescone::cone::{
    bures_metric_u_prime, integrate_geodesic, kappa_of_zeta, u_prime_exact_curvature, ConeChart, ConeState,
    GeodesicOutcome,
};
use burescone::{Error, Result};
use clap::{Args, ValueEnum};
use nalgebra::DMatrix;

use crate::output::sci;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Qubit in (r, θ, φ)
    Bloch,
    /// Qubit in (ũ, θ, φ) with r = cos ũ
    BlochU,
    /// Pure qubit states in (θ, φ)
    Pure,
    /// Qutrit spectrum (ε, ζε, 1 − (1+ζ)ε) rotated by θ
    Evr2d,
    /// Same spectrum rotated by (θ, φ)
    Evr3d,
    /// Three-dimensional family in the cone radius u′ = √((1+ζ)ε)
    Cone3d,
}

#[derive(Debug, Clone, Args)]
pub struct MetricArgs {
    #[arg(value_enum)]
    pub family: Family,
    #[arg(long, default_value_t = 0.5)]
    pub r: f64,
    #[arg(long, default_value_t = 1.0)]
    pub theta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub phi: f64,
    #[arg(long, default_value_t = 0.5)]
    pub zeta: f64,
    #[arg(long, default_value_t = 0.1)]
    pub u: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub eps: f64,
    /// Cone over a round sphere of this radius instead of the Bures family (cone3d only)
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Use the finite-difference spectral sum even where a closed form exists
    #[arg(long)]
    pub fd: bool,
    /// Also report the numeric scalar curvature
    #[arg(long)]
    pub curvature: bool,
}

type Field = Box<dyn Fn(&[f64]) -> Result<DMatrix<f64>>>;

fn spectral_field(fam: ParametrizedFamily) -> Field {
    Box::new(move |x: &[f64]| Ok(bures_metric_spectral(&fam, x)?.g))
}

fn qubit_curvature_family(fam: ParametrizedFamily) -> Field {
    spectral_field(
        fam.with_stencil(Stencil::Central5)
            .with_all_steps(FdStep::Absolute(QUBIT_METRIC_STEP)),
    )
}

struct Probe {
    labels: Vec<&'static str>,
    point: Vec<f64>,
    metric: Field,
    curvature_field: Option<Field>,
    curvature_step: Vec<f64>,
    exact_curvature: Option<f64>,
}

fn probe_for(a: &MetricArgs) -> Result<Probe> {
    let rel = |x: f64| 1e-3 * x.abs().max(1e-6);
    let p = match a.family {
        Family::Bloch => Probe {
            labels: vec!["r", "theta", "phi"],
            point: vec![a.r, a.theta, a.phi],
            metric: if a.fd {
                spectral_field(bloch_family())
            } else {
                Box::new(|x: &[f64]| Ok(bloch_metric_closed_form(x[0], x[1], x[2])?.g))
            },
            curvature_field: Some(qubit_curvature_family(bloch_family())),
            curvature_step: vec![QUBIT_CURVATURE_STEP; 3],
            exact_curvature: Some(24.0),
        },
        Family::BlochU => Probe {
            labels: vec!["u", "theta", "phi"],
            point: vec![a.u, a.theta, a.phi],
            metric: if a.fd {
                spectral_field(bloch_u_family())
            } else {
                Box::new(|x: &[f64]| Ok(bloch_metric_u_chart(x[0], x[1], x[2]).g))
            },
            curvature_field: Some(qubit_curvature_family(bloch_u_family())),
            curvature_step: vec![QUBIT_CURVATURE_STEP; 3],
            exact_curvature: Some(24.0),
        },
        Family::Pure => Probe {
            labels: vec!["theta", "phi"],
            point: vec![a.theta, a.phi],
            metric: spectral_field(pure_bloch_family()),
            curvature_field: Some(spectral_field(pure_bloch_family())),
            curvature_step: vec![1e-3; 2],
            exact_curvature: Some(8.0),
        },
        Family::Evr2d => Probe {
            labels: vec!["eps", "theta"],
            point: vec![a.eps, a.theta],
            metric: spectral_field(evr_family_2d(a.zeta)),
            curvature_field: Some(spectral_field(evr_family_2d(a.zeta))),
            curvature_step: vec![rel(a.eps), 1e-3],
            exact_curvature: None,
        },
        Family::Evr3d => Probe {
            labels: vec!["eps", "theta", "phi"],
            point: vec![a.eps, a.theta, a.phi],
            metric: spectral_field(evr_family_3d(a.zeta)),
            curvature_field: Some(spectral_field(evr_family_3d(a.zeta))),
            curvature_step: vec![rel(a.eps), 1e-3, 1e-3],
            exact_curvature: None,
        },
        Family::Cone3d => {
            let point = vec![a.u, a.theta, a.phi];
            let step = vec![rel(a.u), 1e-3, 1e-3];
            match a.kappa {
                Some(k) => {
                    let chart = ConeChart::sphere(k)?;
                    let exact = chart.scalar_curvature(a.u, &[a.theta, a.phi])?;
                    let c2 = chart.clone();
                    Probe {
                        labels: vec!["u", "theta", "phi"],
                        point,
                        metric: Box::new(move |x: &[f64]| Ok(chart.metric(x))),
                        curvature_field: Some(Box::new(move |x: &[f64]| Ok(c2.metric(x)))),
                        curvature_step: step,
                        exact_curvature: Some(exact),
                    }
                }
                None => {
                    let z = a.zeta;
                    Probe {
                        labels: vec!["u", "theta", "phi"],
                        point,
                        metric: Box::new(move |x: &[f64]| bures_metric_u_prime(z, x)),
                        curvature_field: Some(Box::new(move |x: &[f64]| bures_metric_u_prime(z, x))),
                        curvature_step: step,
                        exact_curvature: Some(u_prime_exact_curvature(kappa_of_zeta(z), a.u)),
                    }
                }
            }
        }
    };
    Ok(p)
}

/// Long-format CSV: one `quantity,value` row per metric component (i ≤ j),
/// followed by curvature rows when requested.
pub fn metric_csv(a: &MetricArgs) -> Result<String> {
    let probe = probe_for(a)?;
    let g = (probe.metric)(&probe.point)?;
    let mut out = String::new();
    let name = a
        .family
        .to_possible_value()
        .map(|v| v.get_name().to_string())
        .unwrap_or_default();
    out.push_str(&format!("# source: Bures metric of the `{name}` family\n"));
    let coords: Vec<String> = probe
        .labels
        .iter()
        .zip(&probe.point)
        .map(|(l, v)| format!("{l}={}", sci(*v)))
        .collect();
    out.push_str(&format!("# point: {}\n", coords.join(" ")));
    out.push_str("quantity,value\n");
    for i in 0..g.nrows() {
        for j in i..g.ncols() {
            out.push_str(&format!(
                "g_{}_{},{}\n",
                probe.labels[i],
                probe.labels[j],
                sci(g[(i, j)])
            ));
        }
    }
    if a.curvature {
        let field = probe.curvature_field.as_ref().ok_or(Error::DegenerateBase)?;
        let r = numeric_scalar_curvature(field, &probe.point, &probe.curvature_step)?.r;
        out.push_str(&format!("R,{}\n", sci(r)));
        if let Some(exact) = probe.exact_curvature {
            out.push_str(&format!("R_exact,{}\n", sci(exact)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Args)]
pub struct GeodesicArgs {
    #[arg(long)]
    pub u0: f64,
    #[arg(long)]
    pub du0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub dtheta0: f64,
    #[arg(long)]
    pub kappa: f64,
    #[arg(long, default_value_t = 0.0)]
    pub theta0: f64,
    /// Give a φ velocity to integrate on the cone over a sphere instead of a circle
    #[arg(long)]
    pub dphi0: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub phi0: f64,
    #[arg(long, default_value_t = 5.0)]
    pub s_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
}

pub fn geodesic_csv(a: &GeodesicArgs) -> Result<String> {
    if a.points < 2 || a.s_max.is_nan() || a.s_max <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "s_max/points".into(),
            reason: "need s_max > 0 and at least two points".into(),
        });
    }
    let (chart, start, names): (ConeChart, ConeState, &[&str]) = match a.dphi0 {
        None => (
            ConeChart::circle(a.kappa)?,
            ConeState::new(a.u0, vec![a.theta0], a.du0, vec![a.dtheta0]),
            &["theta", "dtheta"],
        ),
        Some(dphi) => (
            ConeChart::sphere(a.kappa)?,
            ConeState::new(a.u0, vec![a.theta0, a.phi0], a.du0, vec![a.dtheta0, dphi]),
            &["theta", "phi", "dtheta", "dphi"],
        ),
    };
    let grid: Vec<f64> = (0..a.points)
        .map(|k| a.s_max * k as f64 / (a.points - 1) as f64)
        .collect();
    let run = integrate_geodesic(&chart, &start, &grid)?;
    let mut out = String::new();
    out.push_str(&format!(
        "# source: geodesic on a metric cone with kappa={}\n",
        sci(a.kappa)
    ));
    match &run.outcome {
        GeodesicOutcome::Completed => out.push_str("# outcome: completed\n"),
        GeodesicOutcome::TipReached { s, .. } => out.push_str(&format!("# outcome: tip reached at s={}\n", sci(*s))),
    }
    out.push_str("s,u,du,");
    out.push_str(&names.join(","));
    out.push_str(",energy,angular_momentum\n");
    for st in &run.states {
        let mut cells = vec![sci(st.s), sci(st.u), sci(st.du)];
        cells.extend(st.theta.iter().chain(&st.dtheta).map(|v| sci(*v)));
        cells.push(sci(st.energy(&chart)));
        cells.push(sci(st.angular_momentum(&chart)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}
