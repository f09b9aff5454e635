//! Linear escape from a pure state: ρ_ab(t) = t M_ab + O(t²) on the
//! orthogonal complement of ψ.

use super::LindbladModel;
use crate::error::{Error, Result};
use crate::linalg::{basis, c, eig_hermitian, ComplexMatrix, ComplexVector};

#[derive(Debug, Clone)]
pub struct EscapeData {
    /// M_ab = Σ_k ⟨e_a|L_k|ψ⟩⟨ψ|L_k†|e_b⟩ with rates folded in.
    pub m: ComplexMatrix,
    pub c_max: f64,
    pub c_min: f64,
    /// Orthonormal completion {e_a} used to build `m`.
    pub complement: Vec<ComplexVector>,
}

fn check_normalized(psi: &ComplexVector, dim: usize) -> Result<()> {
    if psi.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: psi.len(),
        });
    }
    if (psi.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::param("psi", format!("norm {} is not 1", psi.norm())));
    }
    Ok(())
}

/// Gram–Schmidt over the standard basis, skipping the basis vector with the
/// largest overlap with ψ (lowest index on ties).
pub fn orthonormal_completion(psi: &ComplexVector) -> Vec<ComplexVector> {
    let n = psi.len();
    let overlaps: Vec<f64> = psi.iter().map(|z| z.norm()).collect();
    let max = overlaps.iter().cloned().fold(0.0, f64::max);
    let skip = overlaps.iter().position(|&o| o >= max * (1.0 - 1e-12)).unwrap_or(0);
    let mut frame: Vec<ComplexVector> = vec![psi.clone()];
    for i in (0..n).filter(|&i| i != skip) {
        let mut v = basis(n, i);
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for f in &frame {
                let proj = f.dotc(&v);
                v -= f * proj;
            }
        }
        let norm = v.norm();
        v /= c(norm, 0.0);
        frame.push(v);
    }
    frame.remove(0);
    frame
}

pub fn escape_law(model: &LindbladModel, psi: &ComplexVector) -> Result<EscapeData> {
    check_normalized(psi, model.dim())?;
    let complement = orthonormal_completion(psi);
    let k = complement.len();
    let mut m = ComplexMatrix::zeros(k, k);
    for j in model.jumps() {
        let g = j.rate.at(0.0);
        let lpsi = &j.op * psi;
        let v: Vec<_> = complement.iter().map(|e| e.dotc(&lpsi)).collect();
        for a in 0..k {
            for b in 0..k {
                m[(a, b)] += v[a] * v[b].conj() * g;
            }
        }
    }
    let (c_max, c_min) = if k == 0 {
        (0.0, 0.0)
    } else {
        let s = eig_hermitian(&m)?;
        (s.eigenvalues[0], s.eigenvalues[k - 1])
    };
    Ok(EscapeData {
        m,
        c_max,
        c_min,
        complement,
    })
}

/// Σ_k γ_k(⟨ψ|L_k†L_k|ψ⟩ − |⟨ψ|L_k|ψ⟩|²), the escape rate onto the
/// one-dimensional complement of a qubit state.
pub fn escape_constant(model: &LindbladModel, psi: &ComplexVector) -> Result<f64> {
    check_normalized(psi, model.dim())?;
    let mut total = 0.0;
    for j in model.jumps() {
        let g = j.rate.at(0.0);
        let lpsi = &j.op * psi;
        total += g * (lpsi.norm_squared() - psi.dotc(&lpsi).norm_sqr());
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, ket_bra, max_abs};
    use crate::lindblad::{n3_shooting_model, pure_to_mixed_model, JumpOperator};

    fn plus() -> ComplexVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        ComplexVector::from_vec(vec![c(s, 0.0), c(s, 0.0)])
    }

    #[test]
    fn completion_is_orthonormal() {
        let psi = ComplexVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)]);
        let e = orthonormal_completion(&psi);
        assert_eq!(e.len(), 2);
        for a in &e {
            assert!(psi.dotc(a).norm() < 1e-14);
            assert!((a.norm() - 1.0).abs() < 1e-14);
        }
        assert!(e[0].dotc(&e[1]).norm() < 1e-14);
    }

    #[test]
    fn qubit_eigenvalue_equals_single_complement_constant() {
        let model = pure_to_mixed_model(1.0, 0.5).unwrap();
        let d = escape_law(&model, &plus()).unwrap();
        let cst = escape_constant(&model, &plus()).unwrap();
        assert!((d.c_max - cst).abs() < 1e-12);
        assert!((d.c_min - cst).abs() < 1e-12);
        assert!((cst - 0.25).abs() < 1e-14);
    }

    #[test]
    fn n3_shooting_gives_gamma_identity() {
        let model = n3_shooting_model(1.3).unwrap();
        let d = escape_law(&model, &basis(3, 0)).unwrap();
        assert!(max_abs(&(&d.m - identity(2) * c(1.3, 0.0))) < 1e-14);
        assert!((d.c_min - 1.3).abs() < 1e-14);
    }

    #[test]
    fn dephasing_along_psi_does_not_escape() {
        let psi = plus();
        let model = LindbladModel::dissipative(2, vec![JumpOperator::constant(ket_bra(&psi, &psi), 0.8)]).unwrap();
        let d = escape_law(&model, &psi).unwrap();
        assert!(max_abs(&d.m) < 1e-15);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        let model = n3_shooting_model(1.0).unwrap();
        let psi = basis(3, 0) * c(2.0, 0.0);
        assert!(escape_law(&model, &psi).is_err());
    }
}
