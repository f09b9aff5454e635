//! Bures metric in the spectral representation
//! ¼ Σ_i dλ_i²/λ_i + Σ_{i<j} (λ_i−λ_j)²/(λ_i+λ_j) |⟨i|dj⟩|²,
//! with eigenvector differentials from either analytic input or a
//! continuity-tracked finite-difference sweep.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{ParametrizedFamily, ELEM_TOL, PAIR_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, eig_hermitian, ComplexMatrix, SpectralDecomposition};
use crate::lindblad::cone_spectrum;

/// Eigenvalues with their differentials along each coordinate.
#[derive(Debug, Clone)]
pub struct SpectralDifferential {
    pub lambda: Vec<f64>,
    /// `dlambda[μ][i]` = ∂_μ λ_i.
    pub dlambda: Vec<Vec<f64>>,
    /// `overlaps[μ][(i, j)]` = ⟨i|∂_μ j⟩.
    pub overlaps: Vec<ComplexMatrix>,
}

impl SpectralDifferential {
    pub fn coords(&self) -> usize {
        self.dlambda.len()
    }
}

/// Contribution of a single term: `i == j` is the eigenvalue (radial) part,
/// `i < j` an eigenvector pair.
#[derive(Debug, Clone)]
pub struct PairTerm {
    pub i: usize,
    pub j: usize,
    pub g: DMatrix<f64>,
}

fn validate(d: &SpectralDifferential) -> Result<()> {
    let n = d.lambda.len();
    for (mu, dl) in d.dlambda.iter().enumerate() {
        if dl.len() != n || d.overlaps[mu].nrows() != n || d.overlaps[mu].ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: dl.len(),
            });
        }
        let sum: f64 = dl.iter().sum();
        let scale = dl.iter().map(|x| x.abs()).fold(1.0, f64::max);
        if sum.abs() > 1e-8 * scale {
            return Err(Error::param(
                "dlambda",
                format!("eigenvalue differentials along coordinate {mu} sum to {sum:.3e}"),
            ));
        }
    }
    if d.overlaps.len() != d.dlambda.len() {
        return Err(Error::DimensionMismatch {
            expected: d.dlambda.len(),
            found: d.overlaps.len(),
        });
    }
    Ok(())
}

/// Individual terms of the spectral representation.
pub fn spectral_rep_terms(d: &SpectralDifferential) -> Result<Vec<PairTerm>> {
    validate(d)?;
    let n = d.lambda.len();
    let p = d.coords();
    let mut out = Vec::new();
    for i in 0..n {
        let l = d.lambda[i];
        let dmax = d.dlambda.iter().map(|dl| dl[i].abs()).fold(0.0, f64::max);
        if l < PAIR_TOL {
            if dmax > ELEM_TOL {
                return Err(Error::ZeroEigenvalue { index: i, value: l });
            }
            continue;
        }
        let g = DMatrix::from_fn(p, p, |mu, nu| 0.25 * d.dlambda[mu][i] * d.dlambda[nu][i] / l);
        out.push(PairTerm { i, j: i, g });
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let w = d.lambda[i] + d.lambda[j];
            if w < PAIR_TOL {
                continue;
            }
            let k = (d.lambda[i] - d.lambda[j]).powi(2) / w;
            let g = DMatrix::from_fn(p, p, |mu, nu| {
                k * (d.overlaps[mu][(i, j)].conj() * d.overlaps[nu][(i, j)]).re
            });
            out.push(PairTerm { i, j, g });
        }
    }
    Ok(out)
}

pub fn bures_metric_spectral_rep(d: &SpectralDifferential) -> Result<DMatrix<f64>> {
    let p = d.coords();
    let terms = spectral_rep_terms(d)?;
    Ok(terms.into_iter().fold(DMatrix::zeros(p, p), |acc, t| acc + t.g))
}

/// Keeps eigenvectors continuous along a sweep: columns are matched to a
/// reference basis by maximal overlap and rephased so that Re⟨old|new⟩ > 0.
#[derive(Debug, Clone)]
pub struct EigenTracker {
    reference: ComplexMatrix,
}

impl EigenTracker {
    pub fn new(start: &SpectralDecomposition) -> Self {
        Self {
            reference: start.eigenvectors.clone(),
        }
    }

    /// Aligns `spec` to the reference without updating it.
    pub fn align(&self, spec: &SpectralDecomposition) -> SpectralDecomposition {
        let n = spec.dim();
        let mut used = vec![false; n];
        let mut vectors = ComplexMatrix::zeros(n, n);
        let mut values = vec![0.0; n];
        for a in 0..n {
            let r = self.reference.column(a);
            let mut best = (usize::MAX, -1.0, Complex64::new(0.0, 0.0));
            for b in (0..n).filter(|&b| !used[b]) {
                let ov = r.dotc(&spec.eigenvectors.column(b));
                if ov.norm() > best.1 {
                    best = (b, ov.norm(), ov);
                }
            }
            let (b, norm, ov) = best;
            used[b] = true;
            let phase = if norm > 0.0 { ov.conj() / norm } else { c(1.0, 0.0) };
            vectors.set_column(a, &(spec.eigenvectors.column(b) * phase));
            values[a] = spec.eigenvalues[b];
        }
        SpectralDecomposition {
            eigenvalues: values,
            eigenvectors: vectors,
            rank: spec.rank,
        }
    }

    /// Aligns `spec` and makes it the new reference.
    pub fn track(&mut self, spec: &SpectralDecomposition) -> SpectralDecomposition {
        let out = self.align(spec);
        self.reference = out.eigenvectors.clone();
        out
    }
}

/// Eigenvalue and eigenvector differentials of a family by central
/// differences of tracked eigendecompositions.
pub fn spectral_differentials(family: &ParametrizedFamily, point: &[f64]) -> Result<SpectralDifferential> {
    let center = eig_hermitian(family.eval(point)?.matrix())?;
    let tracker = EigenTracker::new(&center);
    let n = center.dim();
    let mut dlambda = Vec::new();
    let mut overlaps = Vec::new();
    for k in 0..family.param_dim() {
        let h = family.step(k, point);
        let mut xp = point.to_vec();
        let mut xm = point.to_vec();
        xp[k] += h;
        xm[k] -= h;
        let sp = tracker.align(&eig_hermitian(family.eval(&xp)?.matrix())?);
        let sm = tracker.align(&eig_hermitian(family.eval(&xm)?.matrix())?);
        dlambda.push(
            (0..n)
                .map(|i| (sp.eigenvalues[i] - sm.eigenvalues[i]) / (2.0 * h))
                .collect(),
        );
        let dv = (&sp.eigenvectors - &sm.eigenvectors) / c(2.0 * h, 0.0);
        overlaps.push(center.eigenvectors.adjoint() * dv);
    }
    Ok(SpectralDifferential {
        lambda: center.eigenvalues.clone(),
        dlambda,
        overlaps,
    })
}

/// Exact differentials of the family U(θ,φ) diag(ε, ζε, 1−(1+ζ)ε) U(θ,φ)†
/// in coordinates (ε, θ) or (ε, θ, φ). Eigenvalues are listed in the order
/// (ε, ζε, 1−(1+ζ)ε) with eigenvectors |0(θ,φ)⟩, |1(θ,φ)⟩, |2⟩.
pub fn evr_differentials(zeta: f64, eps: f64, theta: f64, phi: Option<f64>) -> Result<SpectralDifferential> {
    let lambda = cone_spectrum(zeta, eps)?.to_vec();
    let ph = phi.unwrap_or(0.0);
    let (s, co) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, ph);
    let i = c(0.0, 1.0);
    let z = c(0.0, 0.0);
    let ket0 = [c(co, 0.0), -e.conj() * s, z];
    let ket1 = [e * s, c(co, 0.0), z];
    let ket2 = [z, z, c(1.0, 0.0)];
    let kets = [ket0, ket1, ket2];
    let dtheta = [
        [c(-0.5 * s, 0.0), -e.conj() * (0.5 * co), z],
        [e * (0.5 * co), c(-0.5 * s, 0.0), z],
        [z, z, z],
    ];
    let dphi = [[z, i * e.conj() * s, z], [i * e * s, z, z], [z, z, z]];
    let overlap = |d: &[[Complex64; 3]; 3]| {
        ComplexMatrix::from_fn(3, 3, |a, b| (0..3).map(|k| kets[a][k].conj() * d[b][k]).sum())
    };
    let mut dlambda = vec![vec![1.0, zeta, -(1.0 + zeta)], vec![0.0; 3]];
    let mut overlaps = vec![ComplexMatrix::zeros(3, 3), overlap(&dtheta)];
    if phi.is_some() {
        dlambda.push(vec![0.0; 3]);
        overlaps.push(overlap(&dphi));
    }
    Ok(SpectralDifferential {
        lambda,
        dlambda,
        overlaps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bures::{bures_metric_spectral, evr_family_2d, evr_family_3d};

    #[test]
    fn no_motion_gives_zero_form() {
        let d = SpectralDifferential {
            lambda: vec![0.5, 0.3, 0.2],
            dlambda: vec![vec![0.0; 3]],
            overlaps: vec![ComplexMatrix::zeros(3, 3)],
        };
        assert_eq!(bures_metric_spectral_rep(&d).unwrap()[(0, 0)], 0.0);
    }

    #[test]
    fn angular_coefficient_of_evr_family() {
        let (zeta, eps) = (0.5, 1e-3);
        let d = evr_differentials(zeta, eps, 0.7, None).unwrap();
        let g = bures_metric_spectral_rep(&d).unwrap();
        let expected = (1.0 - zeta).powi(2) * eps / (4.0 * (1.0 + zeta));
        assert!((g[(1, 1)] - expected).abs() < 1e-15);
        let radial = (1.0 + zeta) / (4.0 * eps);
        assert!((g[(0, 0)] / radial - 1.0).abs() < 2e-3);
    }

    #[test]
    fn pairs_with_the_large_eigenvalue_carry_no_angular_weight() {
        let d = evr_differentials(0.5, 1e-4, 0.7, Some(0.3)).unwrap();
        for t in spectral_rep_terms(&d).unwrap() {
            if t.j == 2 && t.i != 2 {
                assert!(t.g.amax() < 1e-15);
            }
        }
    }

    #[test]
    fn zero_eigenvalue_with_motion_is_an_error() {
        let d = SpectralDifferential {
            lambda: vec![1.0, 0.0],
            dlambda: vec![vec![-1.0, 1.0]],
            overlaps: vec![ComplexMatrix::zeros(2, 2)],
        };
        assert!(matches!(
            bures_metric_spectral_rep(&d),
            Err(Error::ZeroEigenvalue { index: 1, .. })
        ));
    }

    #[test]
    fn analytic_and_tracked_differentials_agree_with_double_sum() {
        let zeta = 0.3;
        let x = [2e-3, 0.9, 0.4];
        let fam = evr_family_3d(zeta);
        let g_fd = bures_metric_spectral(&fam, &x).unwrap().g;
        let g_an = bures_metric_spectral_rep(&evr_differentials(zeta, x[0], x[1], Some(x[2])).unwrap()).unwrap();
        let g_tr = bures_metric_spectral_rep(&spectral_differentials(&fam, &x).unwrap()).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let scale = g_an[(a, a)].abs().max(g_an[(b, b)].abs()).sqrt().max(1e-3);
                assert!((g_fd[(a, b)] - g_an[(a, b)]).abs() / scale.powi(2) < 1e-6, "fd {a}{b}");
                assert!((g_tr[(a, b)] - g_an[(a, b)]).abs() / scale.powi(2) < 1e-6, "tr {a}{b}");
            }
        }
        let fam2 = evr_family_2d(zeta);
        let g2 = bures_metric_spectral(&fam2, &x[..2]).unwrap().g;
        assert!((g2[(1, 1)] - g_an[(1, 1)]).abs() < 1e-10);
    }

    #[test]
    fn tracker_undoes_phase_and_order_changes() {
        let spec = eig_hermitian(&crate::linalg::pauli_x()).unwrap();
        let tracker = EigenTracker::new(&spec);
        let mut swapped = spec.clone();
        swapped.eigenvectors.swap_columns(0, 1);
        swapped.eigenvalues.swap(0, 1);
        let col = swapped.eigenvectors.column(0) * c(0.0, 1.0);
        swapped.eigenvectors.set_column(0, &col);
        let back = tracker.align(&swapped);
        assert!(crate::linalg::max_abs(&(&back.eigenvectors - &spec.eigenvectors)) < 1e-15);
        assert_eq!(back.eigenvalues, spec.eigenvalues);
    }
}
