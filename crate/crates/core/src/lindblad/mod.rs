//! Lindblad master equation: model definition, right-hand side, and
//! adaptive integration of density-matrix trajectories.

mod analytic;
mod escape;

pub use analytic::*;
pub use escape::*;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    anticommutator, c, commutator, eig_hermitian, hermitian_deviation, is_finite, to_bloch, trace, zeros, BlochVector,
    ComplexMatrix, DensityMatrix,
};
use crate::ode::{Dopri5, OdeSystem, Stats, StepperState};

/// PSD tolerance applied to integrated states.
pub const TRAJECTORY_PSD_TOL: f64 = 1e-9;

/// Time-dependent jump rate γ(t).
#[derive(Clone)]
pub enum Rate {
    Constant(f64),
    /// γ(t) = α/(T − t), divergent at `t_final`.
    InverseDistance {
        alpha: f64,
        t_final: f64,
    },
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl Rate {
    pub fn at(&self, t: f64) -> f64 {
        match self {
            Rate::Constant(g) => *g,
            Rate::InverseDistance { alpha, t_final } => {
                if t >= *t_final {
                    f64::INFINITY
                } else {
                    alpha / (t_final - t)
                }
            }
            Rate::Custom(f) => f(t),
        }
    }
}

impl fmt::Debug for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Constant(g) => write!(f, "Constant({g})"),
            Rate::InverseDistance { alpha, t_final } => {
                write!(f, "InverseDistance {{ alpha: {alpha}, t_final: {t_final} }}")
            }
            Rate::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

/// Jump operator whose effective form is √γ(t)·op.
#[derive(Debug, Clone)]
pub struct JumpOperator {
    pub op: ComplexMatrix,
    pub rate: Rate,
}

impl JumpOperator {
    pub fn new(op: ComplexMatrix, rate: Rate) -> Self {
        Self { op, rate }
    }

    pub fn constant(op: ComplexMatrix, gamma: f64) -> Self {
        Self::new(op, Rate::Constant(gamma))
    }
}

#[derive(Debug, Clone)]
pub struct LindbladModel {
    dim: usize,
    hamiltonian: ComplexMatrix,
    jumps: Vec<JumpOperator>,
    // L†L for each jump, cached
    ldl: Vec<ComplexMatrix>,
}

impl LindbladModel {
    pub fn new(hamiltonian: ComplexMatrix, jumps: Vec<JumpOperator>) -> Result<Self> {
        let dim = hamiltonian.nrows();
        if !hamiltonian.is_square() {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: hamiltonian.ncols(),
            });
        }
        if !is_finite(&hamiltonian) {
            return Err(Error::NonFinite);
        }
        let dev = hermitian_deviation(&hamiltonian);
        if dev > 1e-12 {
            return Err(Error::NotHermitian {
                deviation: dev,
                tolerance: 1e-12,
            });
        }
        for j in &jumps {
            if j.op.nrows() != dim || j.op.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: j.op.nrows().max(j.op.ncols()),
                });
            }
            if !is_finite(&j.op) {
                return Err(Error::NonFinite);
            }
        }
        let ldl = jumps.iter().map(|j| j.op.adjoint() * &j.op).collect();
        Ok(Self {
            dim,
            hamiltonian,
            jumps,
            ldl,
        })
    }

    /// Purely dissipative model (H = 0).
    pub fn dissipative(dim: usize, jumps: Vec<JumpOperator>) -> Result<Self> {
        Self::new(zeros(dim), jumps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }

    fn generator(&self, t: f64, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = commutator(&self.hamiltonian, rho) * c(0.0, -1.0);
        for (j, ldl) in self.jumps.iter().zip(&self.ldl) {
            let g = j.rate.at(t);
            if g == 0.0 {
                continue;
            }
            let l = &j.op;
            let term = l * rho * l.adjoint() - anticommutator(ldl, rho) * c(0.5, 0.0);
            out += term * c(g, 0.0);
        }
        out
    }
}

/// dρ/dt = −i[H, ρ] + Σ_k γ_k(t) (L_k ρ L_k† − ½{L_k†L_k, ρ}).
pub fn lindblad_rhs(model: &LindbladModel, t: f64, rho: &DensityMatrix) -> Result<ComplexMatrix> {
    if rho.dim() != model.dim {
        return Err(Error::DimensionMismatch {
            expected: model.dim,
            found: rho.dim(),
        });
    }
    Ok(model.generator(t, rho.matrix()))
}

/// Options for [`integrate_with`].
#[derive(Debug, Clone)]
pub struct IntegrationOptions {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for IntegrationOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

/// Sampled solution ρ(t_k).
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.states.first().map_or(0, |s| s.dim())
    }

    /// Descending eigenvalues at every sample.
    pub fn eigenvalue_curves(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(|s| s.eigenvalues()).collect()
    }

    pub fn bloch_curve(&self) -> Result<Vec<BlochVector>> {
        self.states.iter().map(to_bloch).collect()
    }

    pub fn population_curve(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s.population(i)).collect()
    }

    pub fn max_trace_error(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (trace(s.matrix()).re - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.min_eigenvalue())
            .fold(f64::INFINITY, f64::min)
    }

    /// Appends a sample; `t` must exceed the last time.
    pub fn push(&mut self, t: f64, state: DensityMatrix) {
        debug_assert!(self.times.last().is_none_or(|&last| t > last));
        self.times.push(t);
        self.states.push(state);
    }
}

struct Vectorized<'a> {
    model: &'a LindbladModel,
}

fn unpack(n: usize, y: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| {
        let k = i * n + j;
        Complex64::new(y[k], y[n * n + k])
    })
}

fn pack(m: &ComplexMatrix, out: &mut [f64]) {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..n {
            let k = i * n + j;
            out[k] = m[(i, j)].re;
            out[n * n + k] = m[(i, j)].im;
        }
    }
}

impl OdeSystem for Vectorized<'_> {
    fn dim(&self) -> usize {
        2 * self.model.dim * self.model.dim
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        let rho = unpack(self.model.dim, y);
        pack(&self.model.generator(t, &rho), dydt);
    }
}

fn project_state(n: usize, y: &mut [f64]) {
    let nn = n * n;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = i * n + j;
            let b = j * n + i;
            let re = 0.5 * (y[a] + y[b]);
            let im = 0.5 * (y[nn + a] - y[nn + b]);
            y[a] = re;
            y[b] = re;
            y[nn + a] = im;
            y[nn + b] = -im;
        }
        y[nn + i * n + i] = 0.0;
    }
    let tr: f64 = (0..n).map(|i| y[i * n + i]).sum();
    if tr.is_finite() && tr > 0.0 {
        for v in y.iter_mut() {
            *v /= tr;
        }
    }
}

pub fn integrate(model: &LindbladModel, rho0: &DensityMatrix, t_grid: &[f64]) -> Result<Trajectory> {
    integrate_with(model, rho0, t_grid, &IntegrationOptions::default())
}

/// Integrates from `rho0` at `t_grid[0]` and samples at every grid time.
pub fn integrate_with(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    opts: &IntegrationOptions,
) -> Result<Trajectory> {
    let n = model.dim;
    if rho0.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: rho0.dim(),
        });
    }
    if t_grid.is_empty() {
        return Err(Error::param("t_grid", "empty"));
    }
    if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::param("t_grid", "times must be strictly increasing"));
    }
    for &t in t_grid {
        for j in &model.jumps {
            let g = j.rate.at(t);
            if !g.is_finite() {
                return Err(Error::RateSingularityInsideWindow { t });
            }
            if g < 0.0 {
                return Err(Error::param("rate", format!("negative rate {g} at t = {t}")));
            }
        }
    }

    let sys = Vectorized { model };
    let solver = Dopri5::with_tolerances(opts.rtol, opts.atol);
    let mut y = vec![0.0; 2 * n * n];
    pack(rho0.matrix(), &mut y);
    let mut state = StepperState::new(t_grid[0], y);
    let mut stats = Stats::default();
    let mut traj = Trajectory {
        times: Vec::with_capacity(t_grid.len()),
        states: Vec::with_capacity(t_grid.len()),
    };
    traj.push(t_grid[0], rho0.clone());
    let mut project = |y: &mut [f64]| project_state(n, y);
    for &t in &t_grid[1..] {
        solver.advance(&sys, &mut state, t, &mut project, None, &mut stats)?;
        let rho = DensityMatrix::with_psd_tolerance(unpack(n, &state.y), TRAJECTORY_PSD_TOL)?;
        traj.push(t, rho);
    }
    Ok(traj)
}

/// Last time reached by the integrator for a rate singular at `t_final`:
/// T − δ with δ = `delta_rel`·T.
pub fn finite_time_window(t_final: f64, delta_rel: f64) -> f64 {
    t_final - delta_rel * t_final.abs()
}

/// Integrates a model with a rate singular at `t_final`. Grid points beyond
/// T − δ are dropped and, if the grid reaches `t_final`, the supplied exact
/// endpoint state is appended.
pub fn integrate_to_singularity(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    t_final: f64,
    delta_rel: f64,
    endpoint: DensityMatrix,
) -> Result<Trajectory> {
    let t_stop = finite_time_window(t_final, delta_rel);
    let mut inner: Vec<f64> = t_grid.iter().copied().filter(|&t| t <= t_stop).collect();
    let reaches_end = t_grid.last().is_some_and(|&t| t >= t_final);
    let beyond = t_grid.iter().any(|&t| t > t_stop && t < t_final);
    if beyond && inner.last().is_none_or(|&t| t < t_stop) {
        inner.push(t_stop);
    }
    let mut traj = integrate(model, rho0, &inner)?;
    if reaches_end {
        traj.push(t_final, endpoint);
    }
    Ok(traj)
}

/// Largest modulus of the off-diagonal entries of U†ρU, i.e. of ρ in the
/// basis given by the columns of `basis`.
pub fn off_diagonal_in_basis(rho: &DensityMatrix, basis: &ComplexMatrix) -> f64 {
    let m = basis.adjoint() * rho.matrix() * basis;
    let n = m.nrows();
    let mut best = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                best = best.max(m[(i, j)].norm());
            }
        }
    }
    best
}

/// Minimum eigenvalue, computed directly (without clamping).
pub fn raw_min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    let s = eig_hermitian(m)?;
    Ok(*s.eigenvalues.last().expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs, sigma_minus};

    #[test]
    fn rhs_for_amplitude_damping_populations() {
        let gamma = 2.0;
        let p = 0.7;
        let model = LindbladModel::dissipative(2, vec![JumpOperator::constant(sigma_minus(), gamma)]).unwrap();
        let rho = DensityMatrix::diagonal(&[p, 1.0 - p]).unwrap();
        let d = lindblad_rhs(&model, 0.0, &rho).unwrap();
        assert!((d[(0, 0)].re - gamma * (1.0 - p)).abs() < 1e-14);
        assert!((d[(1, 1)].re + gamma * (1.0 - p)).abs() < 1e-14);
        assert!(d[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let model = LindbladModel::dissipative(3, vec![]).unwrap();
        let rho = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            lindblad_rhs(&model, 0.0, &rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn zero_jump_model_is_stationary() {
        let model = LindbladModel::dissipative(2, vec![]).unwrap();
        let rho0 = crate::linalg::from_bloch(&BlochVector::new(0.2, -0.1, 0.4)).unwrap();
        let traj = integrate(&model, &rho0, &[0.0, 0.5, 1.0]).unwrap();
        for s in &traj.states {
            assert!(max_abs(&(s.matrix() - rho0.matrix())) < 1e-14);
        }
    }

    #[test]
    fn singular_rate_on_grid_is_rejected() {
        let model = LindbladModel::dissipative(
            2,
            vec![JumpOperator::new(
                sigma_minus(),
                Rate::InverseDistance {
                    alpha: 1.0,
                    t_final: 1.0,
                },
            )],
        )
        .unwrap();
        let rho0 = DensityMatrix::maximally_mixed(2);
        let err = integrate(&model, &rho0, &[0.0, 0.5, 1.0]).unwrap_err();
        assert_eq!(err, Error::RateSingularityInsideWindow { t: 1.0 });
    }

    #[test]
    fn non_increasing_grid_is_rejected() {
        let model = LindbladModel::dissipative(2, vec![]).unwrap();
        let rho0 = DensityMatrix::maximally_mixed(2);
        assert!(integrate(&model, &rho0, &[0.0, 0.5, 0.5]).is_err());
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        assert!(LindbladModel::new(sigma_minus(), vec![]).is_err());
    }

    #[test]
    fn projection_restores_hermiticity_and_trace() {
        let n = 2;
        let mut y = vec![0.6, 0.1, 0.3, 0.6, 0.0, 0.2, 0.0, 0.1];
        project_state(n, &mut y);
        let m = unpack(n, &y);
        assert!(hermitian_deviation(&m) < 1e-15);
        assert!((trace(&m).re - 1.0).abs() < 1e-15);
    }
}
