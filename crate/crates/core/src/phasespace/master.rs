//! Density-matrix evolution
//! `d rho / dt = -(i/hbar)[H, rho] - gamma (x - x') (d_x - d_x') rho
//!               - (D / hbar^2) (x - x')^2 rho`.
//!
//! The fluctuation term is written in its explicit quadratic form rather
//! than as a reciprocal decoherence time, which keeps it regular on the
//! diagonal where the decay factor is exactly one.
//!
//! One step is a Strang split: a unitary half-step on both indices
//! (split-step spectral kinetic plus pointwise potential), the friction
//! advection by first-order upwind differences, the exact pointwise
//! decoherence factor, and a second unitary half-step. The evolution modes
//! zero out the corresponding pieces.

use super::grid::{DensityMatrixGrid, SpatialGrid};
use super::state::Potential;
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvolutionMode {
    /// Unitary + friction + decoherence.
    Full,
    /// Only the pointwise decoherence factor.
    DecoherenceOnly,
    /// Only the unitary part.
    UnitaryOnly,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MasterEqParams {
    /// Friction (relaxation) rate.
    pub gamma: f64,
    /// Momentum-diffusion coefficient `D = 2 m gamma k_B T` in the thermal
    /// case; any nonnegative value is accepted.
    pub diffusion: f64,
    pub mode: EvolutionMode,
    pub dt: f64,
    pub potential: Potential,
    pub mass: f64,
    pub hbar: f64,
}

impl MasterEqParams {
    pub fn validate(&self, grid: &SpatialGrid) -> Result<()> {
        if !(self.gamma >= 0.0) {
            return Err(Error::Config(format!(
                "gamma must be nonnegative, got {}",
                self.gamma
            )));
        }
        if !(self.diffusion >= 0.0) {
            return Err(Error::Config(format!(
                "diffusion must be nonnegative, got {}",
                self.diffusion
            )));
        }
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.mass > 0.0) || !(self.hbar > 0.0) {
            return Err(Error::Config("mass and hbar must be positive".into()));
        }
        // Upwind advection stability: gamma * max|x - x'| * dt / dx <= 1.
        if matches!(self.mode, EvolutionMode::Full) && self.gamma > 0.0 {
            let span = (grid.len() - 1) as f64 * grid.dx();
            let cfl = self.gamma * span * self.dt / grid.dx();
            if cfl > 1.0 {
                return Err(Error::Config(format!(
                    "friction advection violates the CFL bound: \
                     gamma * span * dt / dx = {cfl:.3} > 1; shrink dt"
                )));
            }
        }
        Ok(())
    }
}

/// Snapshots of the evolving density matrix, always including the initial
/// state and the final step.
#[derive(Debug, Clone)]
pub struct MasterTrajectory {
    pub times: Vec<f64>,
    pub snapshots: Vec<DensityMatrixGrid>,
}

struct SplitStep {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    /// exp(-i p^2 h / 2 m hbar) for the half-step duration h = dt/2.
    kinetic: Vec<Complex64>,
    /// exp(-i V(x) h / 2 hbar), applied before and after the kinetic part.
    potential: Vec<Complex64>,
    col: Vec<Complex64>,
}

impl SplitStep {
    fn new(grid: &SpatialGrid, params: &MasterEqParams) -> Self {
        let n = grid.len();
        let mut planner = FftPlanner::new();
        let half = 0.5 * params.dt;
        let kinetic = (0..n)
            .map(|k| {
                let p = grid.fft_momentum(params.hbar, k);
                Complex64::from_polar(1.0, -p * p * half / (2.0 * params.mass * params.hbar))
            })
            .collect();
        let potential = (0..n)
            .map(|i| {
                let v = params.potential.value(params.mass, grid.point(i));
                Complex64::from_polar(1.0, -v * 0.5 * half / params.hbar)
            })
            .collect();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            kinetic,
            potential,
            col: vec![Complex64::ZERO; n],
        }
    }

    fn apply_potential_phases(&self, rho: &mut [Complex64]) {
        let n = self.n;
        for i in 0..n {
            let vi = self.potential[i];
            for j in 0..n {
                rho[i * n + j] *= vi * self.potential[j].conj();
            }
        }
    }

    /// One unitary half-step `rho -> U rho U^dagger` with
    /// `U = exp(-iV h/2) exp(-iT h) exp(-iV h/2)`.
    fn half_step(&mut self, rho: &mut [Complex64]) {
        let n = self.n;
        let scale = 1.0 / n as f64;
        self.apply_potential_phases(rho);
        // Left index: columns transform under U.
        for j in 0..n {
            for i in 0..n {
                self.col[i] = rho[i * n + j];
            }
            self.forward.process(&mut self.col);
            for (c, k) in self.col.iter_mut().zip(&self.kinetic) {
                *c *= k;
            }
            self.inverse.process(&mut self.col);
            for i in 0..n {
                rho[i * n + j] = self.col[i] * scale;
            }
        }
        // Right index: rows transform under conj(U); conjugate, apply U,
        // conjugate back.
        for i in 0..n {
            let row = &mut rho[i * n..(i + 1) * n];
            for (c, r) in self.col.iter_mut().zip(row.iter()) {
                *c = r.conj();
            }
            self.forward.process(&mut self.col);
            for (c, k) in self.col.iter_mut().zip(&self.kinetic) {
                *c *= k;
            }
            self.inverse.process(&mut self.col);
            for (r, c) in row.iter_mut().zip(&self.col) {
                *r = c.conj() * scale;
            }
        }
        self.apply_potential_phases(rho);
    }
}

/// First-order upwind step of the friction advection
/// `d rho / dt = -gamma (x - x') (d_x - d_x') rho`, duration `dt`.
/// Off-grid neighbors are taken as zero; the prefactor vanishes on the
/// diagonal, so diagonal entries are untouched.
fn friction_step(
    rho: &[Complex64],
    out: &mut [Complex64],
    grid: &SpatialGrid,
    gamma: f64,
    dt: f64,
) {
    let n = grid.len();
    let dx = grid.dx();
    let at = |i: isize, j: isize| -> Complex64 {
        if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
            Complex64::ZERO
        } else {
            rho[i as usize * n + j as usize]
        }
    };
    for i in 0..n {
        for j in 0..n {
            let d = (i as f64 - j as f64) * dx;
            if d == 0.0 {
                out[i * n + j] = rho[i * n + j];
                continue;
            }
            let (ii, jj) = (i as isize, j as isize);
            let here = rho[i * n + j];
            // x-characteristic speed is gamma * d.
            let ddx = if d > 0.0 {
                (here - at(ii - 1, jj)) / dx
            } else {
                (at(ii + 1, jj) - here) / dx
            };
            // x'-characteristic speed is -gamma * d.
            let ddxp = if d < 0.0 {
                (here - at(ii, jj - 1)) / dx
            } else {
                (at(ii, jj + 1) - here) / dx
            };
            out[i * n + j] = here - dt * gamma * d * (ddx - ddxp);
        }
    }
}

/// Evolve `steps` steps, recording every `record_stride` steps (the initial
/// state and the final step are always included).
pub fn evolve_master(
    rho0: &DensityMatrixGrid,
    params: &MasterEqParams,
    steps: usize,
    record_stride: usize,
) -> Result<MasterTrajectory> {
    let grid = *rho0.grid();
    params.validate(&grid)?;
    if record_stride == 0 {
        return Err(Error::Config("record_stride must be at least 1".into()));
    }
    let n = grid.len();
    let mut split = match params.mode {
        EvolutionMode::DecoherenceOnly => None,
        _ => Some(SplitStep::new(&grid, params)),
    };
    let decay: Option<Vec<f64>> = match params.mode {
        EvolutionMode::UnitaryOnly => None,
        _ => Some(
            (0..n * n)
                .map(|idx| {
                    let (i, j) = (idx / n, idx % n);
                    let d = (i as f64 - j as f64) * grid.dx();
                    (-params.diffusion * d * d * params.dt / (params.hbar * params.hbar)).exp()
                })
                .collect(),
        ),
    };
    let friction_active = matches!(params.mode, EvolutionMode::Full) && params.gamma > 0.0;
    let mut rho = rho0.values().to_vec();
    let mut scratch = vec![Complex64::ZERO; n * n];
    let mut traj = MasterTrajectory {
        times: vec![0.0],
        snapshots: vec![rho0.clone()],
    };
    for step in 1..=steps {
        if let Some(split) = split.as_mut() {
            split.half_step(&mut rho);
        }
        if friction_active {
            friction_step(&rho, &mut scratch, &grid, params.gamma, params.dt);
            std::mem::swap(&mut rho, &mut scratch);
        }
        if let Some(decay) = &decay {
            for (v, f) in rho.iter_mut().zip(decay) {
                *v *= *f;
            }
        }
        if let Some(split) = split.as_mut() {
            split.half_step(&mut rho);
        }
        if step % record_stride == 0 || step == steps {
            traj.times.push(step as f64 * params.dt);
            traj.snapshots
                .push(DensityMatrixGrid::new(grid, rho.clone())?);
        }
    }
    Ok(traj)
}

/// Fitted decay rate of `|rho(x_a, x_b, t)|`: the negated least-squares
/// slope of its logarithm. For a pure decoherence evolution this equals
/// `D (x_a - x_b)^2 / hbar^2`.
pub fn coherence_decay_rate(traj: &MasterTrajectory, x_a: f64, x_b: f64) -> Result<f64> {
    if traj.snapshots.len() < 5 {
        return Err(Error::Fit(format!(
            "need at least 5 snapshots, got {}",
            traj.snapshots.len()
        )));
    }
    let grid = traj.snapshots[0].grid();
    let ia = grid.nearest_index(x_a);
    let jb = grid.nearest_index(x_b);
    let initial = traj.snapshots[0].value(ia, jb).norm();
    if initial <= 1e-6 {
        return Err(Error::Domain(format!(
            "initial coherence |rho({x_a}, {x_b})| = {initial} is below 1e-6"
        )));
    }
    let mut ts = Vec::new();
    let mut logs = Vec::new();
    for (t, snap) in traj.times.iter().zip(&traj.snapshots) {
        let v = snap.value(ia, jb).norm();
        if v > 1e-15 {
            ts.push(*t);
            logs.push(v.ln());
        }
    }
    if ts.len() < 5 {
        return Err(Error::Fit(
            "coherence fell below the noise floor in fewer than 5 snapshots".into(),
        ));
    }
    let n = ts.len() as f64;
    let mean_t = ts.iter().sum::<f64>() / n;
    let mean_l = logs.iter().sum::<f64>() / n;
    let sxx: f64 = ts.iter().map(|t| (t - mean_t).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("snapshots share a single time".into()));
    }
    let sxy: f64 = ts
        .iter()
        .zip(&logs)
        .map(|(t, l)| (t - mean_t) * (l - mean_l))
        .sum();
    Ok(-(sxy / sxx))
}
