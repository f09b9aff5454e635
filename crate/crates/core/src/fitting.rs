//! Least-squares fits used by the scaling checks.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute residual of the fit.
    pub max_residual: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::param("fit", "needs at least two points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::param("fit", "abscissae are all equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let max_residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    Ok(LinearFit {
        slope,
        intercept,
        max_residual,
    })
}

fn logs(v: &[f64], name: &str) -> Result<Vec<f64>> {
    v.iter()
        .map(|&a| {
            if a > 0.0 && a.is_finite() {
                Ok(a.ln())
            } else {
                Err(Error::param(
                    name,
                    format!("log-log fit needs positive values, got {a}"),
                ))
            }
        })
        .collect()
}

/// Slope of ln y against ln x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    linear_fit(&logs(x, "x")?, &logs(y, "y")?)
}

/// Least-squares prefactor A of y = A x^slope in log space.
pub fn fixed_slope_prefactor(x: &[f64], y: &[f64], slope: f64) -> Result<f64> {
    let lx = logs(x, "x")?;
    let ly = logs(y, "y")?;
    let n = lx.len() as f64;
    Ok((ly.iter().zip(&lx).map(|(a, b)| a - slope * b).sum::<f64>() / n).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SineFit {
    pub omega: f64,
    pub delta: f64,
    /// Root-mean-square residual of r − sin(ωt + δ).
    pub rms: f64,
}

fn sine_rms(t: &[f64], r: &[f64], w: f64, d: f64) -> f64 {
    let s: f64 = t.iter().zip(r).map(|(a, b)| (b - (w * a + d).sin()).powi(2)).sum();
    (s / t.len() as f64).sqrt()
}

/// Levenberg–Marquardt fit of r(t) ≈ sin(ωt + δ), started from the linear
/// fit of arcsin r.
pub fn fit_sine(t: &[f64], r: &[f64]) -> Result<SineFit> {
    let asin: Vec<f64> = r.iter().map(|v| v.clamp(-1.0, 1.0).asin()).collect();
    let lin = linear_fit(t, &asin)?;
    let (mut w, mut d) = (lin.slope, lin.intercept);
    let mut cost = sine_rms(t, r, w, d);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        let mut jtj = Matrix2::zeros();
        let mut jtr = Vector2::zeros();
        for (&ti, &ri) in t.iter().zip(r) {
            let arg = w * ti + d;
            let res = ri - arg.sin();
            let c = arg.cos();
            let j = Vector2::new(c * ti, c);
            jtj += j * j.transpose();
            jtr += j * res;
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut a = jtj;
            a[(0, 0)] *= 1.0 + lambda;
            a[(1, 1)] *= 1.0 + lambda;
            let Some(step) = a.lu().solve(&jtr) else {
                lambda *= 10.0;
                continue;
            };
            let (nw, nd) = (w + step[0], d + step[1]);
            let nc = sine_rms(t, r, nw, nd);
            if nc < cost {
                let rel = (cost - nc) / cost.max(1e-300);
                w = nw;
                d = nd;
                cost = nc;
                lambda = (lambda * 0.3).max(1e-12);
                improved = rel > 1e-14;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Ok(SineFit {
        omega: w,
        delta: d,
        rms: cost,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_law_slope_is_recovered() {
        let x: Vec<f64> = (1..50).map(|k| k as f64 * 0.01).collect();
        let y: Vec<f64> = x.iter().map(|v| 3.0 * v.powf(-1.5)).collect();
        let f = log_log_slope(&x, &y).unwrap();
        assert!((f.slope + 1.5).abs() < 1e-12);
        assert!((fixed_slope_prefactor(&x, &y, -1.5).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn exact_sine_is_fitted_to_roundoff() {
        let t: Vec<f64> = (0..100).map(|k| k as f64 * 0.01).collect();
        let r: Vec<f64> = t.iter().map(|v| (1.2 * v + 0.3).sin()).collect();
        let f = fit_sine(&t, &r).unwrap();
        assert!(f.rms < 1e-12);
        assert!((f.omega - 1.2).abs() < 1e-9);
    }

    #[test]
    fn non_sine_curve_has_residual() {
        let t: Vec<f64> = (0..100).map(|k| k as f64 * 0.01).collect();
        let r: Vec<f64> = t.iter().map(|v| 1.0 - 0.6 * (1.0 - v)).collect();
        assert!(fit_sine(&t, &r).unwrap().rms > 1e-3);
    }

    #[test]
    fn nonpositive_values_rejected_in_log_fit() {
        assert!(log_log_slope(&[1.0, 2.0], &[1.0, 0.0]).is_err());
    }
}
