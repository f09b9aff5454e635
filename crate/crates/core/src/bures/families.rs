//! Built-in parametrized families.

use std::sync::Arc;

use num_complex::Complex64;

use super::{FdStep, ParametrizedFamily};
use crate::error::Result;
use crate::linalg::{c, from_bloch, BlochVector, ComplexVector, DensityMatrix};
use crate::lindblad::{cone_spectrum, rotation_u3};

/// Qubit states in spherical Bloch coordinates (r, θ, φ).
pub fn bloch_family() -> ParametrizedFamily {
    ParametrizedFamily::new(&["r", "theta", "phi"], |x| {
        from_bloch(&BlochVector::spherical(x[0], x[1], x[2]))
    })
}

/// Qubit states in the regularized chart r = cos ũ, coordinates (ũ, θ, φ).
pub fn bloch_u_family() -> ParametrizedFamily {
    ParametrizedFamily::new(&["u", "theta", "phi"], |x| {
        from_bloch(&BlochVector::spherical(x[0].cos(), x[1], x[2]))
    })
}

/// |ψ(θ,φ)⟩ = (cos θ/2, e^{iφ} sin θ/2).
pub fn bloch_ket(x: &[f64]) -> ComplexVector {
    let (s, co) = (0.5 * x[0]).sin_cos();
    ComplexVector::from_vec(vec![c(co, 0.0), Complex64::from_polar(s, x[1])])
}

/// Pure qubit states |ψ(θ,φ)⟩⟨ψ(θ,φ)|.
pub fn pure_bloch_family() -> ParametrizedFamily {
    ParametrizedFamily::new(&["theta", "phi"], |x| DensityMatrix::pure(&bloch_ket(x)))
}

/// U(θ,φ)|0⟩ in a qutrit: (cos θ/2, −e^{−iφ} sin θ/2, 0).
pub fn cp2_ket(x: &[f64]) -> ComplexVector {
    rotation_u3(x[0], x[1]).column(0).into_owned()
}

/// Rank-one qutrit family |ψ⟩⟨ψ| with |ψ⟩ = U(θ,φ)|0⟩.
pub fn cp2_pure_family() -> ParametrizedFamily {
    ParametrizedFamily::new(&["theta", "phi"], |x| DensityMatrix::pure(&cp2_ket(x)))
}

fn evr_state(zeta: f64, eps: f64, theta: f64, phi: f64) -> Result<DensityMatrix> {
    let p = cone_spectrum(zeta, eps)?;
    DensityMatrix::diagonal(&p)?.conjugated(&rotation_u3(theta, phi))
}

/// Relative step used for the small eigenvalue coordinate ε.
pub const EPS_STEP: FdStep = FdStep::Relative {
    rel: 1e-4,
    floor: 1e-12,
};

/// U(θ) diag(ε, ζε, 1−(1+ζ)ε) U(θ)† with the single-angle rotation (φ = 0).
pub fn evr_family_2d(zeta: f64) -> ParametrizedFamily {
    ParametrizedFamily::new(&["epsilon", "theta"], move |x| evr_state(zeta, x[0], x[1], 0.0)).with_step(0, EPS_STEP)
}

/// U(θ,φ) diag(ε, ζε, 1−(1+ζ)ε) U(θ,φ)†.
pub fn evr_family_3d(zeta: f64) -> ParametrizedFamily {
    ParametrizedFamily::new(&["epsilon", "theta", "phi"], move |x| evr_state(zeta, x[0], x[1], x[2]))
        .with_step(0, EPS_STEP)
}

/// Parametrized unit vectors for Fubini–Study evaluations.
#[derive(Clone)]
pub struct KetFamily {
    pub labels: Vec<String>,
    pub eval: Arc<dyn Fn(&[f64]) -> ComplexVector + Send + Sync>,
    pub step: f64,
}

impl KetFamily {
    pub fn new<F>(labels: &[&str], eval: F) -> Self
    where
        F: Fn(&[f64]) -> ComplexVector + Send + Sync + 'static,
    {
        Self {
            labels: labels.iter().map(|s| s.to_string()).collect(),
            eval: Arc::new(eval),
            step: super::DEFAULT_FD_STEP,
        }
    }

    pub fn param_dim(&self) -> usize {
        self.labels.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, trace};

    #[test]
    fn u_chart_agrees_with_radial_chart() {
        let u = 0.4;
        let a = bloch_u_family().eval(&[u, 1.1, 0.3]).unwrap();
        let b = bloch_family().eval(&[u.cos(), 1.1, 0.3]).unwrap();
        assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-15);
    }

    #[test]
    fn kets_are_normalized() {
        for x in [[0.0, 0.0], [1.0, 2.0], [3.0, -1.0]] {
            assert!((bloch_ket(&x).norm() - 1.0).abs() < 1e-15);
            assert!((cp2_ket(&x).norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn evr_families_carry_the_cone_spectrum() {
        let rho = evr_family_3d(0.5).eval(&[0.01, 0.8, 0.2]).unwrap();
        let ev = rho.eigenvalues();
        assert!((ev[0] - 0.985).abs() < 1e-14);
        assert!((ev[1] - 0.01).abs() < 1e-14);
        assert!((ev[2] - 0.005).abs() < 1e-14);
        assert!((trace(rho.matrix()).re - 1.0).abs() < 1e-14);
        assert_eq!(evr_family_2d(0.5).step(0, &[1e-6, 0.0]), 1e-10);
    }

    #[test]
    fn out_of_range_epsilon_is_an_error() {
        assert!(evr_family_2d(0.5).eval(&[0.8, 0.1]).is_err());
    }
}
