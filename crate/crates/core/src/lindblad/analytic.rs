//! Closed-form solutions and the model constructors they belong to.

use num_complex::Complex64;

use super::{JumpOperator, LindbladModel, Rate};
use crate::error::{Error, Result};
use crate::linalg::{basis, c, ket_bra, pauli_x, sigma_minus, unit, BlochVector, ComplexMatrix, DensityMatrix};

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive and finite, got {v}")))
    }
}

fn probability(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::param(name, format!("must lie in [0, 1], got {v}")))
    }
}

/// L = √γ σ₋ acting on diag(p, 1 − p).
pub fn asymptotic_purification_model(gamma: f64) -> Result<LindbladModel> {
    positive("gamma", gamma)?;
    LindbladModel::dissipative(2, vec![JumpOperator::constant(sigma_minus(), gamma)])
}

/// ρ₀₀ = 1 − (1 − p)e^{−γt}, ρ₁₁ = (1 − p)e^{−γt}.
pub fn analytic_asymptotic_purification(p: f64, gamma: f64, t: f64) -> Result<DensityMatrix> {
    probability("p", p)?;
    positive("gamma", gamma)?;
    let excited = (1.0 - p) * (-gamma * t).exp();
    DensityMatrix::diagonal(&[1.0 - excited, excited])
}

/// L = √(α/(T − t)) σ₋.
pub fn finite_time_purification_model(alpha: f64, t_final: f64) -> Result<LindbladModel> {
    positive("alpha", alpha)?;
    positive("T", t_final)?;
    LindbladModel::dissipative(
        2,
        vec![JumpOperator::new(
            sigma_minus(),
            Rate::InverseDistance { alpha, t_final },
        )],
    )
}

/// ρ₁₁ = (1 − p)((T − t)/T)^α on [0, T].
pub fn analytic_finite_time_purification(p: f64, alpha: f64, t_final: f64, t: f64) -> Result<DensityMatrix> {
    probability("p", p)?;
    positive("alpha", alpha)?;
    positive("T", t_final)?;
    if !(0.0..=t_final).contains(&t) {
        return Err(Error::param("t", format!("must lie in [0, T], got {t}")));
    }
    let excited = (1.0 - p) * ((t_final - t) / t_final).powf(alpha);
    DensityMatrix::diagonal(&[1.0 - excited, excited])
}

/// Amplitude damping √γ₁ σ₋ together with σ_x dephasing √γ₂ σ_x.
pub fn pure_to_mixed_model(gamma1: f64, gamma2: f64) -> Result<LindbladModel> {
    positive("gamma1", gamma1)?;
    if !(gamma2.is_finite() && gamma2 >= 0.0) {
        return Err(Error::param("gamma2", "must be non-negative"));
    }
    LindbladModel::dissipative(
        2,
        vec![
            JumpOperator::constant(sigma_minus(), gamma1),
            JumpOperator::constant(pauli_x(), gamma2),
        ],
    )
}

/// Bloch vector of the pure→mixed model started at (1, 0, 0):
/// x = e^{−γ₁t/2}, y = 0, z = γ₁/(γ₁+2γ₂)(1 − e^{−(γ₁+2γ₂)t}).
pub fn analytic_pure_to_mixed(gamma1: f64, gamma2: f64, t: f64) -> Result<BlochVector> {
    positive("gamma1", gamma1)?;
    if !(gamma2.is_finite() && gamma2 >= 0.0) {
        return Err(Error::param("gamma2", "must be non-negative"));
    }
    let k = gamma1 + 2.0 * gamma2;
    Ok(BlochVector::new(
        (-0.5 * gamma1 * t).exp(),
        0.0,
        gamma1 / k * (1.0 - (-k * t).exp()),
    ))
}

/// Two channels √γ|1⟩⟨0| and √γ|2⟩⟨0| emptying level 0 of a qutrit.
pub fn n3_shooting_model(gamma: f64) -> Result<LindbladModel> {
    positive("gamma", gamma)?;
    LindbladModel::dissipative(
        3,
        vec![
            JumpOperator::constant(unit(3, 1, 0), gamma),
            JumpOperator::constant(unit(3, 2, 0), gamma),
        ],
    )
}

/// diag(e^{−2γt}, ½(1 − e^{−2γt}), ½(1 − e^{−2γt})).
pub fn analytic_n3_shooting(gamma: f64, t: f64) -> Result<DensityMatrix> {
    positive("gamma", gamma)?;
    let a = (-2.0 * gamma * t).exp();
    let b = 0.5 * (1.0 - a);
    DensityMatrix::diagonal(&[a, b, b])
}

/// Unitary whose columns are |0(θ,φ)⟩, |1(θ,φ)⟩, |2⟩:
/// |0⟩ = (cos θ/2, −e^{−iφ} sin θ/2, 0), |1⟩ = (e^{iφ} sin θ/2, cos θ/2, 0).
pub fn rotation_u3(theta: f64, phi: f64) -> ComplexMatrix {
    let (s, co) = (0.5 * theta).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    let mut u = ComplexMatrix::zeros(3, 3);
    u[(0, 0)] = c(co, 0.0);
    u[(1, 0)] = -e.conj() * s;
    u[(0, 1)] = e * s;
    u[(1, 1)] = c(co, 0.0);
    u[(2, 2)] = c(1.0, 0.0);
    u
}

/// Spectrum (ε, ζε, 1 − (1+ζ)ε), checked for validity.
pub fn cone_spectrum(zeta: f64, eps: f64) -> Result<[f64; 3]> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::InvalidSpectrum(format!("zeta must be positive, got {zeta}")));
    }
    let upper = 1.0 / (1.0 + zeta);
    if !(eps > 0.0 && eps < upper) {
        return Err(Error::InvalidSpectrum(format!("epsilon = {eps} outside (0, {upper})")));
    }
    Ok([eps, zeta * eps, 1.0 - (1.0 + zeta) * eps])
}

/// Four jump operators L₂₀, L₂₁, L₀₂, L₁₂ between the rotated states that
/// make U diag(ε, ζε, 1 − (1+ζ)ε) U† the unique steady state.
pub fn cone_steady_state_model(zeta: f64, eps: f64, theta: f64, phi: f64, big_gamma: f64) -> Result<LindbladModel> {
    let p = cone_spectrum(zeta, eps)?;
    positive("Gamma", big_gamma)?;
    let u = rotation_u3(theta, phi);
    let k0 = u.column(0).into_owned();
    let k1 = u.column(1).into_owned();
    let k2 = basis(3, 2);
    let up = big_gamma / p[2];
    let jumps = vec![
        JumpOperator::constant(ket_bra(&k2, &k0), big_gamma),
        JumpOperator::constant(ket_bra(&k2, &k1), big_gamma),
        JumpOperator::constant(ket_bra(&k0, &k2), up * eps),
        JumpOperator::constant(ket_bra(&k1, &k2), up * zeta * eps),
    ];
    LindbladModel::dissipative(3, jumps)
}

/// U(θ,φ) diag(ε, ζε, 1 − (1+ζ)ε) U(θ,φ)†.
pub fn its_steady_state(zeta: f64, eps: f64, theta: f64, phi: f64) -> Result<DensityMatrix> {
    let p = cone_spectrum(zeta, eps)?;
    DensityMatrix::diagonal(&p)?.conjugated(&rotation_u3(theta, phi))
}
