//! Metric cones ds² = du² + u² h over a base (Σ, h): charts, curvature,
//! deficit angle, geodesics, and the cone limit of the Bures metric.

mod fit;
mod geodesic;

pub use fit::*;
pub use geodesic::*;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::bures::{numeric_scalar_curvature, Christoffel};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Step used for Christoffel symbols of a user-supplied base metric.
pub const GENERAL_BASE_STEP: f64 = 1e-5;

type BaseMetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

#[derive(Clone)]
pub enum BaseKind {
    /// κ² dθ²
    Circle {
        kappa: f64,
    },
    /// κ² (dθ² + sin²θ dφ²)
    Sphere {
        kappa: f64,
    },
    General {
        dim: usize,
        h: Arc<BaseMetricFn>,
    },
}

impl fmt::Debug for BaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseKind::Circle { kappa } => write!(f, "Circle {{ kappa: {kappa} }}"),
            BaseKind::Sphere { kappa } => write!(f, "Sphere {{ kappa: {kappa} }}"),
            BaseKind::General { dim, .. } => write!(f, "General {{ dim: {dim}, .. }}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ConeChart {
    kind: BaseKind,
}

fn check_kappa(kappa: f64) -> Result<()> {
    if kappa.is_finite() && kappa > 0.0 {
        Ok(())
    } else {
        Err(Error::param("kappa", format!("must be positive, got {kappa}")))
    }
}

impl ConeChart {
    pub fn circle(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(Self {
            kind: BaseKind::Circle { kappa },
        })
    }

    pub fn sphere(kappa: f64) -> Result<Self> {
        check_kappa(kappa)?;
        Ok(Self {
            kind: BaseKind::Sphere { kappa },
        })
    }

    pub fn general<F>(dim: usize, h: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    {
        if dim == 0 {
            return Err(Error::param("base_dim", "must be at least 1"));
        }
        Ok(Self {
            kind: BaseKind::General { dim, h: Arc::new(h) },
        })
    }

    pub fn kind(&self) -> &BaseKind {
        &self.kind
    }

    pub fn kappa(&self) -> Option<f64> {
        match self.kind {
            BaseKind::Circle { kappa } | BaseKind::Sphere { kappa } => Some(kappa),
            BaseKind::General { .. } => None,
        }
    }

    pub fn base_dim(&self) -> usize {
        match &self.kind {
            BaseKind::Circle { .. } => 1,
            BaseKind::Sphere { .. } => 2,
            BaseKind::General { dim, .. } => *dim,
        }
    }

    pub fn base_metric(&self, theta: &[f64]) -> DMatrix<f64> {
        match &self.kind {
            BaseKind::Circle { kappa } => DMatrix::from_element(1, 1, kappa * kappa),
            BaseKind::Sphere { kappa } => {
                let k2 = kappa * kappa;
                let s = theta[0].sin();
                DMatrix::from_diagonal(&DVector::from_vec(vec![k2, k2 * s * s]))
            }
            BaseKind::General { h, .. } => h(theta),
        }
    }

    /// |θ̇|²_h
    pub fn base_norm_sq(&self, theta: &[f64], dtheta: &[f64]) -> f64 {
        let h = self.base_metric(theta);
        let v = DVector::from_column_slice(dtheta);
        (v.transpose() * h * &v)[(0, 0)]
    }

    /// Γ^a_bc(h)
    pub fn base_christoffel(&self, theta: &[f64]) -> Christoffel {
        match &self.kind {
            BaseKind::Circle { .. } => vec![DMatrix::zeros(1, 1)],
            BaseKind::Sphere { .. } => {
                let (s, c) = theta[0].sin_cos();
                let mut g0 = DMatrix::zeros(2, 2);
                g0[(1, 1)] = -s * c;
                let mut g1 = DMatrix::zeros(2, 2);
                g1[(0, 1)] = c / s;
                g1[(1, 0)] = c / s;
                vec![g0, g1]
            }
            BaseKind::General { dim, h } => {
                let d = *dim;
                let ginv = h(theta).try_inverse().unwrap_or_else(|| DMatrix::zeros(d, d));
                let dh: Vec<DMatrix<f64>> = (0..d)
                    .map(|k| {
                        let mut p = theta.to_vec();
                        let mut m = theta.to_vec();
                        p[k] += GENERAL_BASE_STEP;
                        m[k] -= GENERAL_BASE_STEP;
                        (h(&p) - h(&m)) / (2.0 * GENERAL_BASE_STEP)
                    })
                    .collect();
                (0..d)
                    .map(|a| {
                        DMatrix::from_fn(d, d, |b, c| {
                            0.5 * (0..d)
                                .map(|e| ginv[(a, e)] * (dh[b][(e, c)] + dh[c][(e, b)] - dh[e][(b, c)]))
                                .sum::<f64>()
                        })
                    })
                    .collect()
            }
        }
    }

    /// Full metric diag(1, u² h) at x = (u, θ).
    pub fn metric(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.base_dim();
        let u = x[0];
        let h = self.base_metric(&x[1..]);
        let mut g = DMatrix::zeros(d + 1, d + 1);
        g[(0, 0)] = 1.0;
        g.view_mut((1, 1), (d, d)).copy_from(&(h * (u * u)));
        g
    }

    /// Γ^u_ab = −u h_ab, Γ^a_ub = δ^a_b/u, Γ^a_bc = Γ^a_bc(h); index 0 is u.
    pub fn christoffel(&self, x: &[f64]) -> Christoffel {
        let d = self.base_dim();
        let u = x[0];
        let h = self.base_metric(&x[1..]);
        let gh = self.base_christoffel(&x[1..]);
        let mut out = vec![DMatrix::zeros(d + 1, d + 1); d + 1];
        for a in 0..d {
            for b in 0..d {
                out[0][(a + 1, b + 1)] = -u * h[(a, b)];
            }
            out[a + 1][(0, a + 1)] = 1.0 / u;
            out[a + 1][(a + 1, 0)] = 1.0 / u;
            for b in 0..d {
                for c in 0..d {
                    out[a + 1][(b + 1, c + 1)] = gh[a][(b, c)];
                }
            }
        }
        out
    }

    /// Scalar curvature R_h of the base at θ.
    pub fn base_scalar_curvature(&self, theta: &[f64]) -> Result<f64> {
        match &self.kind {
            BaseKind::Circle { .. } => Ok(0.0),
            BaseKind::Sphere { kappa } => Ok(2.0 / (kappa * kappa)),
            BaseKind::General { dim, h } => {
                if *dim == 1 {
                    return Ok(0.0);
                }
                let field = |p: &[f64]| -> Result<DMatrix<f64>> { Ok(h(p)) };
                Ok(numeric_scalar_curvature(&field, theta, &vec![1e-3; *dim])?.r)
            }
        }
    }

    /// R = (R_h − d(d−1))/u² for d ≥ 2.
    pub fn scalar_curvature(&self, u: f64, theta: &[f64]) -> Result<f64> {
        let d = self.base_dim();
        if d == 1 {
            return Err(Error::TwoDimensionalCone);
        }
        if !(u > 0.0) {
            return Err(Error::param("u", format!("must be positive, got {u}")));
        }
        let rh = self.base_scalar_curvature(theta)?;
        Ok((rh - (d * (d - 1)) as f64) / (u * u))
    }
}

/// 2π(1 − κ)
pub fn deficit_angle(kappa: f64) -> f64 {
    2.0 * PI * (1.0 - kappa)
}

/// Tip-concentrated curvature of a two-dimensional cone, R = strength·δ(u)/u.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaCurvature {
    pub strength: f64,
    pub support: f64,
}

pub fn delta_curvature(kappa: f64) -> DeltaCurvature {
    DeltaCurvature {
        strength: 2.0 * (1.0 - kappa),
        support: 0.0,
    }
}

/// ∫_D K dA over the disk u ≤ radius of du² + κ²u²dθ², by Gauss–Bonnet:
/// 2π minus the boundary term ∮ k_g ds, with profile f(u) = κu.
pub fn integrated_curvature_disk(kappa: f64, radius: f64) -> Result<f64> {
    check_kappa(kappa)?;
    if !(radius > 0.0) {
        return Err(Error::param("radius", "must be positive"));
    }
    let f = kappa * radius;
    let df = kappa;
    let boundary_length = 2.0 * PI * f;
    let geodesic_curvature = df / f;
    Ok(2.0 * PI - geodesic_curvature * boundary_length)
}

/// h = Σ_{a<b} (μ_a−μ_b)²/(μ_a+μ_b) Re(⟨a|∂_μ b⟩* ⟨a|∂_ν b⟩).
pub fn base_metric_from_spectrum(mu: &[f64], overlaps: &[ComplexMatrix]) -> Result<DMatrix<f64>> {
    if mu.is_empty() || mu.iter().any(|&m| !(m > 0.0)) {
        return Err(Error::param("mu", "weights must be positive"));
    }
    let total: f64 = mu.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::param("mu", format!("weights sum to {total}, not 1")));
    }
    let hi = mu.iter().cloned().fold(f64::MIN, f64::max);
    let lo = mu.iter().cloned().fold(f64::MAX, f64::min);
    if hi - lo < 1e-12 {
        return Err(Error::DegenerateBase);
    }
    let p = overlaps.len();
    let n = mu.len();
    let mut h = DMatrix::zeros(p, p);
    for a in 0..n {
        for b in (a + 1)..n {
            let w = (mu[a] - mu[b]).powi(2) / (mu[a] + mu[b]);
            for x in 0..p {
                for y in 0..p {
                    h[(x, y)] += w * (overlaps[x][(a, b)].conj() * overlaps[y][(a, b)]).re;
                }
            }
        }
    }
    Ok(h)
}

/// κ(ζ) = |1 − ζ| / (2(1 + ζ)) for the small-eigenvalue pair (ε, ζε).
pub fn kappa_of_zeta(zeta: f64) -> f64 {
    (1.0 - zeta).abs() / (2.0 * (1.0 + zeta))
}

/// Inverse of [`kappa_of_zeta`] on ζ ∈ (0, 1); `None` outside κ ∈ (0, ½).
pub fn zeta_for_kappa(kappa: f64) -> Option<f64> {
    if kappa > 0.0 && kappa < 0.5 {
        Some((1.0 - 2.0 * kappa) / (1.0 + 2.0 * kappa))
    } else {
        None
    }
}

/// Cone describing the Bures metric of the (ε, ζε, 1−(1+ζ)ε) family as
/// ε → 0, in the radial coordinate u′ = √((1+ζ)ε).
#[derive(Debug, Clone)]
pub struct ConeLimit {
    pub kappa: f64,
    /// κ = 0: the angular directions collapse at leading order.
    pub degenerate: bool,
    pub chart: Option<ConeChart>,
}

/// `full` selects the sphere base (rotation in θ and φ); otherwise the
/// single-angle circle base.
pub fn cone_from_bures_limit(zeta: f64, full: bool) -> Result<ConeLimit> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::param("zeta", "must be positive"));
    }
    let kappa = kappa_of_zeta(zeta);
    if kappa == 0.0 {
        return Ok(ConeLimit {
            kappa,
            degenerate: true,
            chart: None,
        });
    }
    let chart = if full {
        ConeChart::sphere(kappa)?
    } else {
        ConeChart::circle(kappa)?
    };
    Ok(ConeLimit {
        kappa,
        degenerate: false,
        chart: Some(chart),
    })
}
