//! Complex Hermitian linear algebra: density matrices, spectral decompositions
//! with a fixed phase gauge, and the qubit Bloch map.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;
pub type ComplexVector = DVector<Complex64>;

/// Tolerance on ‖ρ − ρ†‖_max, |tr ρ − 1| and negative eigenvalues of a density matrix.
pub const DENSITY_TOL: f64 = 1e-12;
/// Symmetry tolerance accepted by [`eig_hermitian`].
pub const EIG_HERMITIAN_TOL: f64 = 1e-10;
/// Default threshold separating nonzero eigenvalues in [`rank_of`].
pub const DEFAULT_RANK_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_GAP: f64 = 1e-9;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> ComplexMatrix {
    ComplexMatrix::zeros(n, n)
}

/// Standard basis vector |i⟩ of dimension n.
pub fn basis(n: usize, i: usize) -> ComplexVector {
    let mut v = ComplexVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

/// |a⟩⟨b|
pub fn ket_bra(a: &ComplexVector, b: &ComplexVector) -> ComplexMatrix {
    a * b.adjoint()
}

/// |i⟩⟨j| in the standard basis.
pub fn unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = zeros(n);
    m[(i, j)] = c(1.0, 0.0);
    m
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

/// σ₋ = |0⟩⟨1|, which lowers |1⟩ into |0⟩ (the z = +1 pole).
pub fn sigma_minus() -> ComplexMatrix {
    unit(2, 0, 1)
}

pub fn max_abs(m: &ComplexMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// ‖m − m†‖_max
pub fn hermitian_deviation(m: &ComplexMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// (m + m†)/2
pub fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

pub fn trace(m: &ComplexMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a * b + b * a
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
    pub rank: usize,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, i: usize) -> ComplexVector {
        self.eigenvectors.column(i).into_owned()
    }

    /// Eigenvalues with values in (−DENSITY_TOL, 0) set to zero.
    pub fn clamped_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .map(|&l| if l < 0.0 && l > -DENSITY_TOL { 0.0 } else { l })
            .collect()
    }

    /// Σ λ_i |i⟩⟨i|
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = zeros(n);
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            let v = self.vector(i);
            m += ket_bra(&v, &v) * c(l, 0.0);
        }
        m
    }

    /// ‖V†V − I‖_max
    pub fn orthonormality_error(&self) -> f64 {
        let v = &self.eigenvectors;
        max_abs(&(v.adjoint() * v - identity(self.dim())))
    }
}

/// Multiplies `v` by a unit phase so that its entry of largest modulus is
/// real and positive. Ties go to the lowest index.
pub fn gauge_phase(v: &mut ComplexVector) {
    let max = v.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-12)).unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    let rot = phase.conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    v[pivot] = c(v[pivot].re, 0.0);
}

/// Hermitian eigendecomposition with descending eigenvalues and gauged eigenvectors.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if !is_finite(m) {
        return Err(Error::NonFinite);
    }
    let scale = max_abs(m).max(1.0);
    let deviation = hermitian_deviation(m);
    if deviation > EIG_HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            deviation,
            tolerance: EIG_HERMITIAN_TOL,
        });
    }
    let n = m.nrows();
    let eig = hermitian_part(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let mut vectors = zeros(n);
    let mut values = Vec::with_capacity(n);
    for (k, &idx) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(idx).into_owned();
        let norm = v.norm();
        v /= c(norm, 0.0);
        gauge_phase(&mut v);
        vectors.set_column(k, &v);
        values.push(eig.eigenvalues[idx]);
    }
    let rank = values.iter().filter(|&&l| l > DEFAULT_RANK_TOL).count();
    Ok(SpectralDecomposition {
        eigenvalues: values,
        eigenvectors: vectors,
        rank,
    })
}

/// Hermitian, unit-trace, positive semidefinite N×N matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates all density-matrix invariants at [`DENSITY_TOL`].
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_psd_tolerance(mat, DENSITY_TOL)
    }

    /// Like [`DensityMatrix::new`] but accepts eigenvalues down to `-psd_tol`.
    pub fn with_psd_tolerance(mat: ComplexMatrix, psd_tol: f64) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch {
                expected: mat.nrows(),
                found: mat.ncols(),
            });
        }
        if !is_finite(&mat) {
            return Err(Error::NonFinite);
        }
        let dev = hermitian_deviation(&mat);
        if dev > DENSITY_TOL {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: DENSITY_TOL,
            });
        }
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {tr}")));
        }
        let spec = eig_hermitian(&mat)?;
        let min = spec.eigenvalues.last().copied().unwrap_or(0.0);
        if min < -psd_tol {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(Self { mat })
    }

    pub(crate) fn from_trusted(mat: ComplexMatrix) -> Self {
        Self { mat }
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &ComplexVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::param("psi", "state vector must be nonzero"));
        }
        let v = psi / c(norm, 0.0);
        Self::new(hermitian_part(&ket_bra(&v, &v)))
    }

    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let n = populations.len();
        let mut m = zeros(n);
        for (i, &p) in populations.iter().enumerate() {
            m[(i, i)] = c(p, 0.0);
        }
        Self::new(m)
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self::from_trusted(identity(n) * c(1.0 / n as f64, 0.0))
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn spectral(&self) -> SpectralDecomposition {
        // Hermiticity was validated on construction.
        eig_hermitian(&self.mat).expect("density matrix is Hermitian")
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectral().eigenvalues
    }

    pub fn min_eigenvalue(&self) -> f64 {
        *self.eigenvalues().last().expect("nonempty")
    }

    /// det ρ, real for Hermitian ρ.
    pub fn determinant(&self) -> f64 {
        self.mat.determinant().re
    }

    /// Largest off-diagonal modulus.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    m = m.max(self.mat[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn population(&self, i: usize) -> f64 {
        self.mat[(i, i)].re
    }

    /// U ρ U†
    pub fn conjugated(&self, u: &ComplexMatrix) -> Result<Self> {
        Self::new(hermitian_part(&(u * &self.mat * u.adjoint())))
    }
}

/// Qubit Bloch vector: ρ = (I + x σ_x + y σ_y + z σ_z)/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Point at radius r, polar angle θ (from +z) and azimuth φ.
    pub fn spherical(r: f64, theta: f64, phi: f64) -> Self {
        Self {
            x: r * theta.sin() * phi.cos(),
            y: r * theta.sin() * phi.sin(),
            z: r * theta.cos(),
        }
    }

    pub fn r(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.x - other.x)
            .abs()
            .max((self.y - other.y).abs())
            .max((self.z - other.z).abs())
    }
}

pub fn to_bloch(rho: &DensityMatrix) -> Result<BlochVector> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho.dim(),
        });
    }
    let m = rho.matrix();
    Ok(BlochVector {
        x: 2.0 * m[(0, 1)].re,
        y: -2.0 * m[(0, 1)].im,
        z: m[(0, 0)].re - m[(1, 1)].re,
    })
}

pub fn from_bloch(b: &BlochVector) -> Result<DensityMatrix> {
    let r = b.r();
    if !r.is_finite() || r > 1.0 + DENSITY_TOL {
        return Err(Error::InvalidBloch(r));
    }
    let m = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            c((1.0 + b.z) / 2.0, 0.0),
            c(b.x / 2.0, -b.y / 2.0),
            c(b.x / 2.0, b.y / 2.0),
            c((1.0 - b.z) / 2.0, 0.0),
        ],
    );
    DensityMatrix::new(m)
}

/// Number of eigenvalues above `rank_tol`.
pub fn rank_of(rho: &DensityMatrix, rank_tol: f64) -> usize {
    rho.eigenvalues().iter().filter(|&&l| l > rank_tol).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_already_diagonalized() {
        let rho = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        let s = rho.spectral();
        assert!((s.eigenvalues[0] - 0.7).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 0.3).abs() < 1e-15);
        assert!((s.vector(0) - basis(2, 0)).norm() < 1e-14);
        assert!((s.vector(1) - basis(2, 1)).norm() < 1e-14);
    }

    #[test]
    fn plus_projector_has_gauged_eigenvector() {
        let m = (identity(2) + pauli_x()) * c(0.5, 0.0);
        let s = eig_hermitian(&m).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(s.eigenvalues[1].abs() < 1e-14);
        let v = s.vector(0);
        let inv = 1.0 / 2f64.sqrt();
        assert!((v[0] - c(inv, 0.0)).norm() < 1e-14);
        assert!((v[1] - c(inv, 0.0)).norm() < 1e-14);
        assert_eq!(s.rank, 1);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let m = sigma_minus();
        assert!(matches!(eig_hermitian(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn bloch_of_maximally_mixed_and_plus() {
        let b = to_bloch(&DensityMatrix::maximally_mixed(2)).unwrap();
        assert_eq!(b, BlochVector::new(0.0, 0.0, 0.0));
        let plus = DensityMatrix::pure(&ComplexVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])).unwrap();
        let b = to_bloch(&plus).unwrap();
        assert!(b.max_abs_diff(&BlochVector::new(1.0, 0.0, 0.0)) < 1e-15);
    }

    #[test]
    fn bloch_eigenvalues_are_one_plus_minus_r_over_two() {
        let b = BlochVector::new(0.3, -0.2, 0.5);
        let rho = from_bloch(&b).unwrap();
        let r = 0.38f64.sqrt();
        let l = rho.eigenvalues();
        assert!((l[0] - (1.0 + r) / 2.0).abs() < 1e-14);
        assert!((l[1] - (1.0 - r) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn bloch_rejects_dimension_and_length() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!(matches!(to_bloch(&rho), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            from_bloch(&BlochVector::new(1.0, 0.1, 0.0)),
            Err(Error::InvalidBloch(_))
        ));
    }

    #[test]
    fn rank_counts_with_threshold() {
        let one = DensityMatrix::diagonal(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(rank_of(&one, DEFAULT_RANK_TOL), 1);
        let two = DensityMatrix::diagonal(&[0.7, 0.3]).unwrap();
        assert_eq!(rank_of(&two, DEFAULT_RANK_TOL), 2);
        let near = DensityMatrix::diagonal(&[1.0 - 2e-11, 2e-11, 0.0]).unwrap();
        assert_eq!(rank_of(&near, 1e-10), 1);
        assert_eq!(rank_of(&near, 1e-11), 2);
    }

    #[test]
    fn density_validation_catches_bad_trace_and_negativity() {
        assert!(DensityMatrix::diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::diagonal(&[1.1, -0.1]).is_err());
        assert!(DensityMatrix::diagonal(&[1.0 + 1e-13, -1e-13]).is_ok());
    }

    #[test]
    fn clamping_only_touches_tiny_negatives() {
        let s = SpectralDecomposition {
            eigenvalues: vec![1.0, -5e-13, -1e-6],
            eigenvectors: identity(3),
            rank: 1,
        };
        assert_eq!(s.clamped_eigenvalues(), vec![1.0, 0.0, -1e-6]);
    }
}
