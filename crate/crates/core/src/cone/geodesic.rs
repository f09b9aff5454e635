//! Geodesics on a metric cone:
//! ü = u|θ̇|²_h,  θ̈^a = −2(u̇/u)θ̇^a − Γ^a_bc(h)θ̇^bθ̇^c.

use super::ConeChart;
use crate::error::{Error, Result};
use crate::ode::{Advance, Dopri5, OdeSystem, Stats, StepperState};

/// Integration halts when u drops to this value.
pub const TIP_RADIUS: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct ConeState {
    pub s: f64,
    pub u: f64,
    pub theta: Vec<f64>,
    pub du: f64,
    pub dtheta: Vec<f64>,
}

impl ConeState {
    pub fn new(u: f64, theta: Vec<f64>, du: f64, dtheta: Vec<f64>) -> Self {
        Self {
            s: 0.0,
            u,
            theta,
            du,
            dtheta,
        }
    }

    /// ½(u̇² + u²|θ̇|²_h)
    pub fn energy(&self, chart: &ConeChart) -> f64 {
        0.5 * (self.du * self.du + self.u * self.u * chart.base_norm_sq(&self.theta, &self.dtheta))
    }

    /// u²|θ̇|_h; constant when the base motion is a geodesic of h.
    pub fn angular_momentum(&self, chart: &ConeChart) -> f64 {
        self.u * self.u * chart.base_norm_sq(&self.theta, &self.dtheta).sqrt()
    }

    /// u|θ̇|_h
    pub fn angular_speed(&self, chart: &ConeChart) -> f64 {
        self.u * chart.base_norm_sq(&self.theta, &self.dtheta).sqrt()
    }

    fn pack(&self) -> Vec<f64> {
        let mut y = vec![self.u];
        y.extend_from_slice(&self.theta);
        y.push(self.du);
        y.extend_from_slice(&self.dtheta);
        y
    }

    fn unpack(s: f64, y: &[f64]) -> Self {
        let d = y.len() / 2 - 1;
        Self {
            s,
            u: y[0],
            theta: y[1..=d].to_vec(),
            du: y[d + 1],
            dtheta: y[d + 2..].to_vec(),
        }
    }
}

/// Minimum radius L/√(2E) of a geodesic with angular momentum L and energy E.
pub fn turning_radius(state: &ConeState, chart: &ConeChart) -> f64 {
    state.angular_momentum(chart) / (2.0 * state.energy(chart)).sqrt()
}

struct GeodesicSystem<'a> {
    chart: &'a ConeChart,
}

impl OdeSystem for GeodesicSystem<'_> {
    fn dim(&self) -> usize {
        2 * (self.chart.base_dim() + 1)
    }

    fn rhs(&self, _s: f64, y: &[f64], dy: &mut [f64]) {
        let d = self.chart.base_dim();
        let u = y[0];
        let theta = &y[1..=d];
        let du = y[d + 1];
        let dtheta = &y[d + 2..];
        dy[0] = du;
        dy[1..=d].copy_from_slice(dtheta);
        let moving = dtheta.iter().any(|&v| v != 0.0);
        if !moving {
            dy[d + 1] = 0.0;
            dy[d + 2..].iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        dy[d + 1] = u * self.chart.base_norm_sq(theta, dtheta);
        let gamma = self.chart.base_christoffel(theta);
        for a in 0..d {
            let mut acc = -2.0 * du / u * dtheta[a];
            for b in 0..d {
                for c in 0..d {
                    acc -= gamma[a][(b, c)] * dtheta[b] * dtheta[c];
                }
            }
            dy[d + 2 + a] = acc;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeodesicOutcome {
    Completed,
    /// u fell to [`TIP_RADIUS`] at arc length `s`; sampling stopped there.
    TipReached {
        s: f64,
        state: ConeState,
    },
}

#[derive(Debug, Clone)]
pub struct GeodesicRun {
    pub states: Vec<ConeState>,
    pub outcome: GeodesicOutcome,
}

/// Integrates the geodesic from `start` (at arc length `s_grid[0]`) and
/// samples it on `s_grid`.
pub fn integrate_geodesic(chart: &ConeChart, start: &ConeState, s_grid: &[f64]) -> Result<GeodesicRun> {
    let d = chart.base_dim();
    if start.theta.len() != d || start.dtheta.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: start.theta.len(),
        });
    }
    if start.u < 0.0 {
        return Err(Error::param("u", "must be non-negative"));
    }
    if start.u == 0.0 && start.dtheta.iter().any(|&v| v != 0.0) {
        return Err(Error::param("dtheta", "launch from the tip must be purely radial"));
    }
    if s_grid.is_empty() || s_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("s_grid", "must be non-empty and strictly increasing"));
    }
    let sys = GeodesicSystem { chart };
    let solver = Dopri5::default();
    let mut st = StepperState::new(s_grid[0], start.pack());
    let mut stats = Stats::default();
    let event = |y: &[f64]| y[0] - TIP_RADIUS;
    let mut states = vec![ConeState {
        s: s_grid[0],
        ..start.clone()
    }];
    for &s in &s_grid[1..] {
        match solver.advance(&sys, &mut st, s, &mut |_| {}, Some(&event), &mut stats)? {
            Advance::Reached => states.push(ConeState::unpack(s, &st.y)),
            Advance::Event { t } => {
                return Ok(GeodesicRun {
                    states,
                    outcome: GeodesicOutcome::TipReached {
                        s: t,
                        state: ConeState::unpack(t, &st.y),
                    },
                })
            }
        }
    }
    Ok(GeodesicRun {
        states,
        outcome: GeodesicOutcome::Completed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, end: f64) -> Vec<f64> {
        (0..=n).map(|k| end * k as f64 / n as f64).collect()
    }

    #[test]
    fn radial_launch_from_tip_is_linear() {
        let ch = ConeChart::sphere(0.6).unwrap();
        let run = integrate_geodesic(
            &ch,
            &ConeState::new(0.0, vec![1.0, 0.5], 1.0, vec![0.0, 0.0]),
            &grid(50, 5.0),
        )
        .unwrap();
        assert_eq!(run.outcome, GeodesicOutcome::Completed);
        for s in &run.states {
            assert!((s.u - s.s).abs() < 1e-10);
        }
    }

    #[test]
    fn inbound_radial_geodesic_reaches_the_tip() {
        let ch = ConeChart::circle(0.5).unwrap();
        let run = integrate_geodesic(&ch, &ConeState::new(1.0, vec![0.0], -1.0, vec![0.0]), &grid(20, 2.0)).unwrap();
        match run.outcome {
            GeodesicOutcome::TipReached { s, ref state } => {
                assert!((s - 1.0).abs() < 1e-9);
                assert!(state.u <= TIP_RADIUS);
            }
            _ => panic!("tip not reached"),
        }
    }

    #[test]
    fn non_radial_tip_launch_is_rejected() {
        let ch = ConeChart::circle(0.5).unwrap();
        assert!(integrate_geodesic(&ch, &ConeState::new(0.0, vec![0.0], 1.0, vec![0.1]), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn flat_cone_geodesic_is_a_straight_line() {
        // κ = 1 sphere base: ℝ³ in spherical coordinates.
        let ch = ConeChart::sphere(1.0).unwrap();
        let start = ConeState::new(1.0, vec![1.0, 0.3], -0.4, vec![0.5, 0.7]);
        let to_xyz = |s: &ConeState| {
            let (st, ct) = s.theta[0].sin_cos();
            let (sp, cp) = s.theta[1].sin_cos();
            [s.u * st * cp, s.u * st * sp, s.u * ct]
        };
        // Cartesian velocity at s = 0
        let (st, ct) = start.theta[0].sin_cos();
        let (sp, cp) = start.theta[1].sin_cos();
        let (u, du, dt, dp) = (start.u, start.du, start.dtheta[0], start.dtheta[1]);
        let v = [
            du * st * cp + u * ct * cp * dt - u * st * sp * dp,
            du * st * sp + u * ct * sp * dt + u * st * cp * dp,
            du * ct - u * st * dt,
        ];
        let x0 = to_xyz(&start);
        let run = integrate_geodesic(&ch, &start, &grid(10, 1.0)).unwrap();
        for s in &run.states {
            let x = to_xyz(s);
            for k in 0..3 {
                assert!((x[k] - (x0[k] + v[k] * s.s)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn turning_point_matches_conserved_quantities() {
        let ch = ConeChart::circle(0.6).unwrap();
        let start = ConeState::new(1.0, vec![0.0], -1.0, vec![0.4]);
        let run = integrate_geodesic(&ch, &start, &grid(400, 3.0)).unwrap();
        assert_eq!(run.outcome, GeodesicOutcome::Completed);
        let umin = run.states.iter().map(|s| s.u).fold(f64::INFINITY, f64::min);
        assert!(umin > 0.0);
        assert!((umin - turning_radius(&start, &ch)).abs() < 1e-4);
    }
}
