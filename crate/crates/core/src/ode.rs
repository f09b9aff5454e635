//! Dormand–Prince 5(4) embedded Runge–Kutta integrator with adaptive step
//! control, an optional projection after every accepted step, and terminal
//! event detection by bisection.

use crate::error::{Error, Result};

/// System of ordinary differential equations dy/dt = f(t, y).
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]);
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Current integration point plus the step size suggested for the next step.
#[derive(Debug, Clone)]
pub struct StepperState {
    pub t: f64,
    pub y: Vec<f64>,
    /// Suggested next step; non-positive means "choose automatically".
    pub h: f64,
}

impl StepperState {
    pub fn new(t: f64, y: Vec<f64>) -> Self {
        Self { t, y, h: 0.0 }
    }
}

/// How an [`Dopri5::advance`] call ended.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Advance {
    Reached,
    /// The event function crossed from positive to non-positive at `t`.
    Event {
        t: f64,
    },
}

#[derive(Debug, Clone, Default)]
pub struct Stats {
    pub accepted: u64,
    pub rejected: u64,
}

#[derive(Debug, Clone)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub safety: f64,
    pub max_steps: u64,
    pub h_max: f64,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            safety: 0.9,
            max_steps: 20_000_000,
            h_max: f64::INFINITY,
        }
    }
}

struct Workspace {
    k: [Vec<f64>; 7],
    tmp: Vec<f64>,
    y_new: Vec<f64>,
}

impl Workspace {
    fn new(n: usize) -> Self {
        Self {
            k: std::array::from_fn(|_| vec![0.0; n]),
            tmp: vec![0.0; n],
            y_new: vec![0.0; n],
        }
    }
}

impl Dopri5 {
    pub fn with_tolerances(rtol: f64, atol: f64) -> Self {
        Self {
            rtol,
            atol,
            ..Self::default()
        }
    }

    /// Takes one trial step of size `h` from (t, y); `ws.k[0]` must hold f(t, y).
    /// Returns the scaled RMS error and leaves the candidate in `ws.y_new`.
    fn trial<S: OdeSystem>(&self, sys: &S, t: f64, y: &[f64], h: f64, ws: &mut Workspace) -> f64 {
        let n = y.len();
        let Workspace { k, tmp, y_new } = ws;

        for i in 0..n {
            tmp[i] = y[i] + h * A21 * k[0][i];
        }
        sys.rhs(t + C2 * h, tmp, &mut k[1]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A31 * k[0][i] + A32 * k[1][i]);
        }
        sys.rhs(t + C3 * h, tmp, &mut k[2]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        }
        sys.rhs(t + C4 * h, tmp, &mut k[3]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        }
        sys.rhs(t + C5 * h, tmp, &mut k[4]);
        for i in 0..n {
            tmp[i] = y[i] + h * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] + A65 * k[4][i]);
        }
        sys.rhs(t + h, tmp, &mut k[5]);
        for i in 0..n {
            y_new[i] = y[i] + h * (A71 * k[0][i] + A73 * k[2][i] + A74 * k[3][i] + A75 * k[4][i] + A76 * k[5][i]);
        }
        sys.rhs(t + h, y_new, &mut k[6]);

        let mut acc = 0.0;
        for i in 0..n {
            let e = h * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] + E6 * k[5][i] + E7 * k[6][i]);
            let scale = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
            acc += (e / scale).powi(2);
        }
        (acc / n.max(1) as f64).sqrt()
    }

    /// Integrates from `state.t` to `t_end`, calling `project` on the state after
    /// every accepted step. With an `event`, stops at the first crossing of
    /// event(y) from positive to non-positive.
    pub fn advance<S: OdeSystem>(
        &self,
        sys: &S,
        state: &mut StepperState,
        t_end: f64,
        project: &mut dyn FnMut(&mut [f64]),
        event: Option<&dyn Fn(&[f64]) -> f64>,
        stats: &mut Stats,
    ) -> Result<Advance> {
        let n = sys.dim();
        debug_assert_eq!(state.y.len(), n);
        if t_end <= state.t {
            return Ok(Advance::Reached);
        }
        let mut ws = Workspace::new(n);
        let span = t_end - state.t;
        let mut h = if state.h > 0.0 {
            state.h
        } else {
            (1e-3 * span).min(1e-3)
        };
        h = h.min(self.h_max);

        sys.rhs(state.t, &state.y, &mut ws.k[0]);
        let mut steps = 0u64;
        loop {
            if state.t >= t_end {
                return Ok(Advance::Reached);
            }
            steps += 1;
            if steps > self.max_steps {
                return Err(Error::StepFailure { t: state.t, h });
            }
            let remaining = t_end - state.t;
            let last = h >= remaining;
            let h_try = if last { remaining } else { h };
            let h_floor = 1e-15 * state.t.abs().max(span).max(1e-300);
            if h_try < h_floor && !last {
                return Err(Error::StepFailure { t: state.t, h: h_try });
            }

            let err = self.trial(sys, state.t, &state.y, h_try, &mut ws);
            if !err.is_finite() {
                stats.rejected += 1;
                h = h_try * 0.25;
                if h < h_floor {
                    return Err(Error::StepFailure { t: state.t, h });
                }
                continue;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (self.safety * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err > 1.0 {
                stats.rejected += 1;
                h = h_try * factor.min(1.0);
                continue;
            }
            stats.accepted += 1;

            if let Some(g) = event {
                if g(&state.y) > 0.0 && g(&ws.y_new) <= 0.0 {
                    let (t_hit, y_hit) = self.locate_event(sys, state.t, &state.y, h_try, g, &mut ws);
                    state.t = t_hit;
                    state.y = y_hit;
                    state.h = h;
                    return Ok(Advance::Event { t: t_hit });
                }
            }

            state.t = if last { t_end } else { state.t + h_try };
            std::mem::swap(&mut state.y, &mut ws.y_new);
            project(&mut state.y);
            sys.rhs(state.t, &state.y, &mut ws.k[0]);
            if !last {
                h = (h_try * factor).min(self.h_max);
            }
            state.h = h;
        }
    }

    /// Bisects the step size so that the returned point is the first one with
    /// event ≤ 0, to a relative precision of about 1e-14 of the step.
    fn locate_event<S: OdeSystem>(
        &self,
        sys: &S,
        t0: f64,
        y0: &[f64],
        h: f64,
        g: &dyn Fn(&[f64]) -> f64,
        ws: &mut Workspace,
    ) -> (f64, Vec<f64>) {
        let mut k0 = vec![0.0; y0.len()];
        sys.rhs(t0, y0, &mut k0);
        let mut lo = 0.0;
        let mut hi = h;
        let mut best = ws.y_new.clone();
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            ws.k[0].copy_from_slice(&k0);
            self.trial(sys, t0, y0, mid, ws);
            if g(&ws.y_new) <= 0.0 {
                hi = mid;
                best.copy_from_slice(&ws.y_new);
            } else {
                lo = mid;
            }
            if hi - lo <= 1e-14 * h {
                break;
            }
        }
        (t0 + hi, best)
    }
}
