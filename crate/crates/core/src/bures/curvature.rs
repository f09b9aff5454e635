//! Scalar curvature of a metric field by finite differences of g.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Stencil points with det g below this are rejected.
pub const DET_TOL: f64 = 1e-14;
pub const DEFAULT_CURVATURE_STEP: f64 = 1e-3;
/// Curvature evaluations closer than this to θ ∈ {0, π} are refused.
pub const POLE_EXCLUSION: f64 = 0.05;

/// Smooth assignment of a symmetric metric matrix to each point.
pub trait MetricField {
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>>;
}

impl<F> MetricField for F
where
    F: Fn(&[f64]) -> Result<DMatrix<f64>>,
{
    fn metric(&self, x: &[f64]) -> Result<DMatrix<f64>> {
        self(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureSample {
    pub point: Vec<f64>,
    pub r: f64,
}

/// Γ^a_bc as `gamma[a][(b, c)]`.
pub type Christoffel = Vec<DMatrix<f64>>;

fn checked(field: &dyn MetricField, x: &[f64]) -> Result<DMatrix<f64>> {
    let g = field.metric(x)?;
    let det = g.determinant();
    if !(det >= DET_TOL) {
        return Err(Error::DegenerateMetric { det });
    }
    Ok(g)
}

struct Derivatives {
    g: DMatrix<f64>,
    dg: Vec<DMatrix<f64>>,
    ddg: Vec<Vec<DMatrix<f64>>>,
}

fn shifted(x: &[f64], moves: &[(usize, f64)]) -> Vec<f64> {
    let mut y = x.to_vec();
    for &(k, d) in moves {
        y[k] += d;
    }
    y
}

fn derivatives(field: &dyn MetricField, x: &[f64], h: &[f64], second: bool) -> Result<Derivatives> {
    let p = x.len();
    let g = checked(field, x)?;
    let mut plus = Vec::with_capacity(p);
    let mut minus = Vec::with_capacity(p);
    for a in 0..p {
        plus.push(checked(field, &shifted(x, &[(a, h[a])]))?);
        minus.push(checked(field, &shifted(x, &[(a, -h[a])]))?);
    }
    let dg: Vec<_> = (0..p).map(|a| (&plus[a] - &minus[a]) / (2.0 * h[a])).collect();
    let mut ddg = vec![vec![DMatrix::zeros(p, p); p]; p];
    if second {
        for a in 0..p {
            ddg[a][a] = (&plus[a] - &g * 2.0 + &minus[a]) / (h[a] * h[a]);
            for b in (a + 1)..p {
                let pp = checked(field, &shifted(x, &[(a, h[a]), (b, h[b])]))?;
                let pm = checked(field, &shifted(x, &[(a, h[a]), (b, -h[b])]))?;
                let mp = checked(field, &shifted(x, &[(a, -h[a]), (b, h[b])]))?;
                let mm = checked(field, &shifted(x, &[(a, -h[a]), (b, -h[b])]))?;
                let m = (pp - pm - mp + mm) / (4.0 * h[a] * h[b]);
                ddg[a][b] = m.clone();
                ddg[b][a] = m;
            }
        }
    }
    Ok(Derivatives { g, dg, ddg })
}

fn christoffel_from(ginv: &DMatrix<f64>, dg: &[DMatrix<f64>]) -> Christoffel {
    let p = ginv.nrows();
    (0..p)
        .map(|a| {
            DMatrix::from_fn(p, p, |b, c| {
                0.5 * (0..p)
                    .map(|d| ginv[(a, d)] * (dg[b][(d, c)] + dg[c][(d, b)] - dg[d][(b, c)]))
                    .sum::<f64>()
            })
        })
        .collect()
}

/// Christoffel symbols by central differences of the metric.
pub fn christoffel_fd(field: &dyn MetricField, x: &[f64], h: &[f64]) -> Result<Christoffel> {
    let d = derivatives(field, x, h, false)?;
    let ginv = d.g.clone().try_inverse().ok_or(Error::DegenerateMetric { det: 0.0 })?;
    Ok(christoffel_from(&ginv, &d.dg))
}

fn scalar_curvature_once(field: &dyn MetricField, x: &[f64], h: &[f64]) -> Result<f64> {
    let p = x.len();
    let d = derivatives(field, x, h, true)?;
    let ginv =
        d.g.clone()
            .try_inverse()
            .ok_or(Error::DegenerateMetric { det: d.g.determinant() })?;
    let gamma = christoffel_from(&ginv, &d.dg);
    // ∂_e g^{ad} = −g^{af} ∂_e g_{fk} g^{kd}
    let dginv: Vec<DMatrix<f64>> = d.dg.iter().map(|dge| -(&ginv * dge * &ginv)).collect();
    // dgamma[e][a][(b, c)] = ∂_e Γ^a_bc
    let dgamma: Vec<Christoffel> = (0..p)
        .map(|e| {
            (0..p)
                .map(|a| {
                    DMatrix::from_fn(p, p, |b, c| {
                        let mut s = 0.0;
                        for dd in 0..p {
                            let bracket = d.dg[b][(dd, c)] + d.dg[c][(dd, b)] - d.dg[dd][(b, c)];
                            let dbracket = d.ddg[e][b][(dd, c)] + d.ddg[e][c][(dd, b)] - d.ddg[e][dd][(b, c)];
                            s += dginv[e][(a, dd)] * bracket + ginv[(a, dd)] * dbracket;
                        }
                        0.5 * s
                    })
                })
                .collect()
        })
        .collect();
    // Ricci R_bd = ∂_a Γ^a_bd − ∂_d Γ^a_ab + Γ^a_ae Γ^e_bd − Γ^a_de Γ^e_ab
    let mut r = 0.0;
    for b in 0..p {
        for dd in 0..p {
            if ginv[(b, dd)] == 0.0 {
                continue;
            }
            let mut ric = 0.0;
            for a in 0..p {
                ric += dgamma[a][a][(b, dd)] - dgamma[dd][a][(a, b)];
                for e in 0..p {
                    ric += gamma[a][(a, e)] * gamma[e][(b, dd)] - gamma[a][(dd, e)] * gamma[e][(a, b)];
                }
            }
            r += ginv[(b, dd)] * ric;
        }
    }
    Ok(r)
}

/// Scalar curvature at `x` with per-coordinate steps `h`, Richardson
/// extrapolated from steps h and h/2.
pub fn numeric_scalar_curvature(field: &dyn MetricField, x: &[f64], h: &[f64]) -> Result<CurvatureSample> {
    if h.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: h.len(),
        });
    }
    if h.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::param("h_step", "steps must be positive"));
    }
    let coarse = scalar_curvature_once(field, x, h)?;
    let half: Vec<f64> = h.iter().map(|s| 0.5 * s).collect();
    let fine = scalar_curvature_once(field, x, &half)?;
    Ok(CurvatureSample {
        point: x.to_vec(),
        r: (4.0 * fine - coarse) / 3.0,
    })
}

/// Refuses polar angles within [`POLE_EXCLUSION`] of 0 or π.
pub fn check_away_from_pole(theta: f64) -> Result<()> {
    let t = theta.rem_euclid(std::f64::consts::PI);
    if t < POLE_EXCLUSION || std::f64::consts::PI - t < POLE_EXCLUSION {
        return Err(Error::param(
            "theta",
            format!("{theta} lies within {POLE_EXCLUSION} rad of a coordinate pole"),
        ));
    }
    Ok(())
}
