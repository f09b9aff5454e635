//! Closed-form qubit metrics and the Fubini–Study metric of pure families.

use nalgebra::DMatrix;

use super::{KetFamily, MetricSample};
use crate::error::{Error, Result};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// ¼ diag(1/(1−r²), r², r² sin²θ) in (r, θ, φ).
pub fn bloch_metric_closed_form(r: f64, theta: f64, phi: f64) -> Result<MetricSample> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::InvalidBloch(r));
    }
    let s = theta.sin();
    let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        0.25 / (1.0 - r * r),
        0.25 * r * r,
        0.25 * r * r * s * s,
    ]));
    Ok(MetricSample::new(
        vec![r, theta, phi],
        g,
        labels(&["r", "theta", "phi"]),
    ))
}

/// ¼ diag(1, cos²ũ, cos²ũ sin²θ) in (ũ, θ, φ) with r = cos ũ; regular at ũ = 0.
pub fn bloch_metric_u_chart(u: f64, theta: f64, phi: f64) -> MetricSample {
    let cu = u.cos();
    let s = theta.sin();
    let g = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        0.25,
        0.25 * cu * cu,
        0.25 * cu * cu * s * s,
    ]));
    MetricSample::new(vec![u, theta, phi], g, labels(&["u", "theta", "phi"]))
}

/// g_rr (dr/dũ)² under r = cos ũ; identically ¼.
pub fn u_chart_pullback(u: f64) -> f64 {
    let r = u.cos();
    let drdu = -u.sin();
    0.25 / (1.0 - r * r) * drdu * drdu
}

/// Re(⟨∂_μψ|∂_νψ⟩ − ⟨∂_μψ|ψ⟩⟨ψ|∂_νψ⟩) with central differences.
pub fn fubini_study_metric(family: &KetFamily, point: &[f64]) -> Result<MetricSample> {
    let p = family.param_dim();
    if point.len() != p {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: point.len(),
        });
    }
    let psi = (family.eval)(point);
    let h = family.step;
    let d: Vec<_> = (0..p)
        .map(|k| {
            let mut xp = point.to_vec();
            let mut xm = point.to_vec();
            xp[k] += h;
            xm[k] -= h;
            ((family.eval)(&xp) - (family.eval)(&xm)) / nalgebra::Complex::new(2.0 * h, 0.0)
        })
        .collect();
    let mut g = DMatrix::zeros(p, p);
    for mu in 0..p {
        for nu in mu..p {
            let v = d[mu].dotc(&d[nu]) - d[mu].dotc(&psi) * psi.dotc(&d[nu]);
            g[(mu, nu)] = v.re;
            g[(nu, mu)] = v.re;
        }
    }
    Ok(MetricSample::new(point.to_vec(), g, family.labels.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bures::{bloch_ket, cp2_ket};
    use crate::linalg::ComplexVector;

    #[test]
    fn closed_form_values() {
        let m = bloch_metric_closed_form(0.99, 0.5, 0.0).unwrap();
        assert!((m.g[(0, 0)] - 12.562_814_070_351_76).abs() < 1e-9);
        let m = bloch_metric_closed_form(0.6, std::f64::consts::FRAC_PI_3, 0.0).unwrap();
        assert!((m.g[(0, 0)] - 1.0 / (4.0 * 0.64)).abs() < 1e-15);
        assert!((m.g[(1, 1)] - 0.09).abs() < 1e-15);
        assert!((m.g[(2, 2)] - 0.09 * 0.75).abs() < 1e-15);
        assert!(bloch_metric_closed_form(1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn boundary_of_u_chart_is_fubini_study() {
        let m = bloch_metric_u_chart(0.0, 1.1, 0.0);
        let s = 1.1f64.sin();
        assert_eq!(m.g[(1, 1)], 0.25);
        assert!((m.g[(2, 2)] - 0.25 * s * s).abs() < 1e-16);
    }

    #[test]
    fn pullback_is_a_quarter() {
        for &u in &[0.05, 0.4, 1.0, 1.5] {
            assert!((u_chart_pullback(u) - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn sphere_family_gives_round_metric() {
        let fam = KetFamily::new(&["theta", "phi"], bloch_ket);
        let m = fubini_study_metric(&fam, &[0.8, 0.3]).unwrap();
        let s = 0.8f64.sin();
        assert!((m.g[(0, 0)] - 0.25).abs() < 1e-9);
        assert!((m.g[(1, 1)] - 0.25 * s * s).abs() < 1e-9);
        assert!(m.g[(0, 1)].abs() < 1e-9);
    }

    #[test]
    fn constant_family_is_flat() {
        let fam = KetFamily::new(&["a", "b"], |_| ComplexVector::from_vec(vec![0.6.into(), 0.8.into()]));
        let m = fubini_study_metric(&fam, &[0.1, 0.2]).unwrap();
        assert!(m.g.amax() < 1e-15);
    }

    #[test]
    fn cp2_family_matches_round_metric() {
        let fam = KetFamily::new(&["theta", "phi"], cp2_ket);
        let m = fubini_study_metric(&fam, &[1.2, 0.4]).unwrap();
        let s = 1.2f64.sin();
        assert!((m.g[(0, 0)] - 0.25).abs() < 1e-9);
        assert!((m.g[(1, 1)] - 0.25 * s * s).abs() < 1e-9);
    }
}
