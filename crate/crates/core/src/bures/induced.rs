//! Bures metric induced on the time axis of a qubit trajectory.

use crate::error::{Error, Result};
use crate::linalg::{to_bloch, BlochVector};
use crate::lindblad::Trajectory;

/// 1 − r below this counts as touching the pure-state boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// g_tt(t) together with the pieces it is built from.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedSample {
    pub t: f64,
    pub r: f64,
    /// 1 − r, computed as 2λ_min to avoid cancellation.
    pub one_minus_r: f64,
    pub r_dot: f64,
    pub g_tt: f64,
}

/// Three-point derivative weights on a nonuniform grid at the middle node.
fn three_point(t0: f64, t1: f64, t2: f64, f0: f64, f1: f64, f2: f64) -> f64 {
    let h0 = t1 - t0;
    let h1 = t2 - t1;
    -h1 / (h0 * (h0 + h1)) * f0 + (h1 - h0) / (h0 * h1) * f1 + h0 / (h1 * (h0 + h1)) * f2
}

fn unit(b: &BlochVector) -> [f64; 3] {
    let r = b.r();
    if r == 0.0 {
        [0.0; 3]
    } else {
        [b.x / r, b.y / r, b.z / r]
    }
}

/// g_tt = ¼(ṙ²/(1 − r²) + r²|dn̂/dt|²) at every interior sample, with time
/// derivatives from nonuniform central differences.
pub fn induced_metric_along_trajectory(traj: &Trajectory) -> Result<Vec<InducedSample>> {
    if traj.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: traj.dim(),
        });
    }
    if traj.len() < 3 {
        return Err(Error::param("trajectory", "needs at least three samples"));
    }
    let mut omr = Vec::with_capacity(traj.len());
    let mut blochs = Vec::with_capacity(traj.len());
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let low = s.min_eigenvalue().max(0.0);
        let x = 2.0 * low;
        if x <= BOUNDARY_TOL {
            return Err(Error::BoundaryContact { t: *t });
        }
        omr.push(x);
        blochs.push(to_bloch(s)?);
    }
    let n: Vec<[f64; 3]> = blochs.iter().map(unit).collect();
    let t = &traj.times;
    let mut out = Vec::with_capacity(traj.len() - 2);
    for k in 1..traj.len() - 1 {
        let d_omr = three_point(t[k - 1], t[k], t[k + 1], omr[k - 1], omr[k], omr[k + 1]);
        let r_dot = -d_omr;
        let r = 1.0 - omr[k];
        let one_minus_r2 = omr[k] * (2.0 - omr[k]);
        let mut ang = 0.0;
        for c in 0..3 {
            let dn = three_point(t[k - 1], t[k], t[k + 1], n[k - 1][c], n[k][c], n[k + 1][c]);
            ang += dn * dn;
        }
        let g_tt = 0.25 * (r_dot * r_dot / one_minus_r2 + r * r * ang);
        out.push(InducedSample {
            t: t[k],
            r,
            one_minus_r: omr[k],
            r_dot,
            g_tt,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{from_bloch, DensityMatrix};

    #[test]
    fn three_point_is_exact_for_quadratics() {
        let f = |t: f64| 3.0 * t * t - t + 2.0;
        let (a, b, c) = (0.1, 0.25, 0.7);
        let d = three_point(a, b, c, f(a), f(b), f(c));
        assert!((d - (6.0 * b - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn radial_line_matches_closed_form() {
        // r(t) = 0.5 t along z.
        let times: Vec<f64> = (1..=20).map(|k| 0.05 * k as f64).collect();
        let states: Vec<DensityMatrix> = times
            .iter()
            .map(|&t| from_bloch(&BlochVector::new(0.0, 0.0, 0.5 * t)).unwrap())
            .collect();
        let traj = Trajectory { times, states };
        for s in induced_metric_along_trajectory(&traj).unwrap() {
            let expected = 0.25 * 0.25 / (1.0 - s.r * s.r);
            assert!((s.g_tt - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_sample_is_boundary_contact() {
        let times = vec![0.0, 0.5, 1.0];
        let states = vec![
            DensityMatrix::diagonal(&[0.6, 0.4]).unwrap(),
            DensityMatrix::diagonal(&[0.8, 0.2]).unwrap(),
            DensityMatrix::diagonal(&[1.0, 0.0]).unwrap(),
        ];
        let err = induced_metric_along_trajectory(&Trajectory { times, states }).unwrap_err();
        assert_eq!(err, Error::BoundaryContact { t: 1.0 });
    }
}
