//! Bures metric of parametrized density-matrix families.
//!
//! Three independent routes are provided: the spectral double sum over
//! eigenpairs with finite-difference derivatives of ρ, the spectral
//! representation in eigenvalue and eigenvector differentials, and closed
//! forms for the qubit. Scalar curvature is computed numerically from any
//! metric field.

mod closed_form;
mod curvature;
mod families;
mod induced;
mod spectral_rep;

pub use closed_form::*;
pub use curvature::*;
pub use families::*;
pub use induced::*;
pub use spectral_rep::*;

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, ComplexMatrix, DensityMatrix, SpectralDecomposition};

/// Pairs with λ_i + λ_j below this are candidates for removal.
pub const PAIR_TOL: f64 = 1e-12;
/// A candidate pair is dropped only if its matrix elements are below this.
pub const ELEM_TOL: f64 = 1e-9;
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Finite-difference step for one coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FdStep {
    Absolute(f64),
    /// h = rel · |x|, never below `rel · floor`.
    Relative {
        rel: f64,
        floor: f64,
    },
}

impl FdStep {
    pub fn at(&self, x: f64) -> f64 {
        match *self {
            FdStep::Absolute(h) => h,
            FdStep::Relative { rel, floor } => rel * x.abs().max(floor),
        }
    }
}

impl Default for FdStep {
    fn default() -> Self {
        FdStep::Absolute(DEFAULT_FD_STEP)
    }
}

/// Finite-difference stencil for ∂_k ρ.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Stencil {
    /// Three-point central difference, O(h²).
    #[default]
    Central3,
    /// Five-point central difference, O(h⁴).
    Central5,
}

type EvalFn = dyn Fn(&[f64]) -> Result<DensityMatrix> + Send + Sync;

/// Map from a parameter point in ℝ^P to a density matrix.
#[derive(Clone)]
pub struct ParametrizedFamily {
    labels: Vec<String>,
    eval: Arc<EvalFn>,
    steps: Vec<FdStep>,
    stencil: Stencil,
}

impl fmt::Debug for ParametrizedFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ParametrizedFamily")
            .field("labels", &self.labels)
            .field("steps", &self.steps)
            .field("stencil", &self.stencil)
            .finish_non_exhaustive()
    }
}

impl ParametrizedFamily {
    pub fn new<F>(labels: &[&str], eval: F) -> Self
    where
        F: Fn(&[f64]) -> Result<DensityMatrix> + Send + Sync + 'static,
    {
        Self {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            eval: Arc::new(eval),
            steps: vec![FdStep::default(); labels.len()],
            stencil: Stencil::Central3,
        }
    }

    pub fn with_stencil(mut self, stencil: Stencil) -> Self {
        self.stencil = stencil;
        self
    }

    pub fn with_step(mut self, coord: usize, step: FdStep) -> Self {
        self.steps[coord] = step;
        self
    }

    pub fn with_all_steps(mut self, step: FdStep) -> Self {
        self.steps.iter_mut().for_each(|s| *s = step);
        self
    }

    pub fn param_dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn step(&self, coord: usize, point: &[f64]) -> f64 {
        self.steps[coord].at(point[coord])
    }

    pub fn eval(&self, point: &[f64]) -> Result<DensityMatrix> {
        if point.len() != self.param_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.param_dim(),
                found: point.len(),
            });
        }
        (self.eval)(point)
    }

    /// Central-difference derivative ∂_k ρ at `point`.
    pub fn derivative(&self, point: &[f64], k: usize) -> Result<ComplexMatrix> {
        let h = self.step(k, point);
        let shifted = |d: f64| -> Result<ComplexMatrix> {
            let mut x = point.to_vec();
            x[k] += d;
            Ok(self.eval(&x)?.matrix().clone())
        };
        let d1 = shifted(h)? - shifted(-h)?;
        let out = match self.stencil {
            Stencil::Central3 => d1 / nalgebra::Complex::new(2.0 * h, 0.0),
            Stencil::Central5 => {
                let d2 = shifted(2.0 * h)? - shifted(-2.0 * h)?;
                (d1 * nalgebra::Complex::new(8.0, 0.0) - d2) / nalgebra::Complex::new(12.0 * h, 0.0)
            }
        };
        Ok(out)
    }
}

/// Metric components at a parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSample {
    pub point: Vec<f64>,
    pub g: DMatrix<f64>,
    pub labels: Vec<String>,
}

impl MetricSample {
    pub fn new(point: Vec<f64>, g: DMatrix<f64>, labels: Vec<String>) -> Self {
        Self { point, g, labels }
    }

    pub fn component(&self, i: usize, j: usize) -> f64 {
        self.g[(i, j)]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.g.nrows()).map(|i| self.g[(i, i)]).collect()
    }

    pub fn asymmetry(&self) -> f64 {
        (&self.g - self.g.transpose()).amax()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let sym = (&self.g + self.g.transpose()) * 0.5;
        sym.symmetric_eigen().eigenvalues.min()
    }

    pub fn max_abs_diff(&self, other: &MetricSample) -> f64 {
        (&self.g - &other.g).amax()
    }
}

/// Bilinear form ½ Σ_ij Re(⟨i|A|j⟩⟨j|B|i⟩)/(λ_i+λ_j) for every pair (A, B)
/// of tangent matrices, in the eigenbasis of ρ.
pub fn bures_form(spec: &SpectralDecomposition, tangents: &[ComplexMatrix]) -> Result<DMatrix<f64>> {
    let n = spec.dim();
    let p = tangents.len();
    let v = &spec.eigenvectors;
    let lam = spec.clamped_eigenvalues();
    let elements: Vec<ComplexMatrix> = tangents.iter().map(|t| v.adjoint() * t * v).collect();
    let mut g = DMatrix::<f64>::zeros(p, p);
    for i in 0..n {
        for j in 0..n {
            let w = lam[i] + lam[j];
            if w < PAIR_TOL {
                let worst = elements.iter().map(|e| e[(i, j)].norm()).fold(0.0, f64::max);
                if worst < ELEM_TOL {
                    continue;
                }
                return Err(Error::SingularPair {
                    i,
                    j,
                    weight: w,
                    element: worst,
                });
            }
            for mu in 0..p {
                for nu in mu..p {
                    let val = 0.5 * (elements[mu][(i, j)] * elements[nu][(j, i)]).re / w;
                    g[(mu, nu)] += val;
                }
            }
        }
    }
    for mu in 0..p {
        for nu in 0..mu {
            g[(mu, nu)] = g[(nu, mu)];
        }
    }
    Ok(g)
}

/// Squared Bures speed g(ρ̇, ρ̇) of a tangent matrix at ρ.
pub fn bures_speed_sq(rho: &DensityMatrix, drho: &ComplexMatrix) -> Result<f64> {
    let g = bures_form(&eig_hermitian(rho.matrix())?, std::slice::from_ref(drho))?;
    Ok(g[(0, 0)])
}

/// Bures metric tensor from the spectral double sum, with ∂_μρ by central
/// differences.
pub fn bures_metric_spectral(family: &ParametrizedFamily, point: &[f64]) -> Result<MetricSample> {
    let rho = family.eval(point)?;
    let spec = eig_hermitian(rho.matrix())?;
    let tangents = (0..family.param_dim())
        .map(|k| family.derivative(point, k))
        .collect::<Result<Vec<_>>>()?;
    let g = bures_form(&spec, &tangents)?;
    Ok(MetricSample::new(point.to_vec(), g, family.labels().to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, pauli_z, zeros};

    #[test]
    fn relative_step_scales_with_coordinate() {
        let s = FdStep::Relative { rel: 1e-3, floor: 1e-8 };
        assert!((s.at(2e-4) - 2e-7).abs() < 1e-20);
        assert!((s.at(0.0) - 1e-11).abs() < 1e-24);
    }

    #[test]
    fn maximally_mixed_radial_component() {
        let f = bloch_family();
        let m = bures_metric_spectral(&f, &[0.0, 1.0, 0.3]).unwrap();
        assert!((m.g[(0, 0)] - 0.25).abs() < 1e-9);
        assert!(m.g[(1, 1)].abs() < 1e-9);
        assert!(m.g[(2, 2)].abs() < 1e-9);
    }

    #[test]
    fn divergent_pair_is_reported() {
        // pure state pushed along its null direction
        let rho = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let mut t = zeros(2);
        t[(1, 1)] = c(1.0, 0.0);
        t[(0, 0)] = c(-1.0, 0.0);
        let err = bures_speed_sq(&rho, &t).unwrap_err();
        assert!(matches!(err, Error::SingularPair { i: 1, j: 1, .. }));
        // a tangent along the state's own diagonal at full rank is fine
        let mixed = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let v = bures_speed_sq(&mixed, &pauli_z()).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn wrong_point_length_is_rejected() {
        let f = bloch_family();
        assert!(f.eval(&[0.1, 0.2]).is_err());
    }
}
