//! Extraction of the cone parameters from sampled Bures metrics of the
//! (ε, ζε, 1−(1+ζ)ε) family.

use nalgebra::DMatrix;

use crate::bures::{bures_metric_spectral, bures_metric_spectral_rep, evr_differentials, ParametrizedFamily};
use crate::error::{Error, Result};

pub const FIT_RESIDUAL_LIMIT: f64 = 0.05;
pub const POINTS_PER_DECADE: usize = 20;

/// Geometric grid from `lo` to `hi` inclusive with `per_decade` points per decade.
pub fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * per_decade as f64).round() as usize).max(1);
    (0..=n)
        .map(|k| lo * 10f64.powf(decades * k as f64 / n as f64))
        .collect()
}

#[derive(Debug, Clone)]
pub struct FitSample {
    pub eps: f64,
    pub g_ee: f64,
    pub g_tt: f64,
}

#[derive(Debug, Clone)]
pub struct ConeFit {
    pub kappa: f64,
    /// a in g_εε ≈ a/ε
    pub radial_coefficient: f64,
    /// b in g_θθ ≈ b ε
    pub angular_coefficient: f64,
    /// Largest relative deviation of any sample from the fitted laws.
    pub residual: f64,
    pub samples: Vec<FitSample>,
}

/// Samples g_εε and g_θθ on a geometric ε grid and fits g_εε = a/ε,
/// g_θθ = bε, giving κ² = b/(4a). The coordinates of `family` are
/// (ε, θ[, φ]); `angles` fixes the remaining ones.
pub fn fit_cone_to_bures(family: &ParametrizedFamily, eps_window: (f64, f64), angles: &[f64]) -> Result<ConeFit> {
    let (lo, hi) = eps_window;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::param("eps_window", "needs 0 < lo < hi"));
    }
    if angles.len() + 1 != family.param_dim() {
        return Err(Error::DimensionMismatch {
            expected: family.param_dim() - 1,
            found: angles.len(),
        });
    }
    let mut samples = Vec::new();
    for eps in geometric_grid(lo, hi, POINTS_PER_DECADE) {
        let mut x = vec![eps];
        x.extend_from_slice(angles);
        let m = bures_metric_spectral(family, &x)?;
        samples.push(FitSample {
            eps,
            g_ee: m.g[(0, 0)],
            g_tt: m.g[(1, 1)],
        });
    }
    let n = samples.len() as f64;
    let a = samples.iter().map(|s| s.g_ee * s.eps).sum::<f64>() / n;
    let b = samples.iter().map(|s| s.g_tt / s.eps).sum::<f64>() / n;
    let mut residual = 0.0_f64;
    for s in &samples {
        residual = residual.max((s.g_ee * s.eps / a - 1.0).abs());
        if b.abs() > 1e-14 * a {
            residual = residual.max((s.g_tt / (s.eps * b) - 1.0).abs());
        }
    }
    if !(residual <= FIT_RESIDUAL_LIMIT) {
        return Err(Error::FitDiverged {
            residual,
            limit: FIT_RESIDUAL_LIMIT,
        });
    }
    Ok(ConeFit {
        kappa: (b.max(0.0) / (4.0 * a)).sqrt(),
        radial_coefficient: a,
        angular_coefficient: b,
        residual,
        samples,
    })
}

/// ε as a function of the cone radius u′ = √((1+ζ)ε).
pub fn eps_of_u_prime(zeta: f64, u: f64) -> f64 {
    u * u / (1.0 + zeta)
}

/// Bures metric of the full (ε, θ, φ) family in the chart (u′, θ, φ), from
/// exact eigenvalue and eigenvector differentials.
pub fn bures_metric_u_prime(zeta: f64, x: &[f64]) -> Result<DMatrix<f64>> {
    let u = x[0];
    let eps = eps_of_u_prime(zeta, u);
    let d = evr_differentials(zeta, eps, x[1], Some(x[2]))?;
    let mut g = bures_metric_spectral_rep(&d)?;
    let j = 2.0 * u / (1.0 + zeta);
    for k in 0..3 {
        g[(0, k)] *= j;
        g[(k, 0)] *= j;
    }
    Ok(g)
}

/// ds² = du′²/(1 − u′²) + κ²u′²(dθ² + sin²θ dφ²) has curvature
/// (2/κ² − 2)/u′² + 6.
pub fn u_prime_exact_curvature(kappa: f64, u: f64) -> f64 {
    (2.0 / (kappa * kappa) - 2.0) / (u * u) + 6.0
}
