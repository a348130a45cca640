//! Fixed-step integration of the modified equation of motion
//! `m x'' = -d/dx [ V + (1 - lambda(t)) Q ]` for single particles and
//! quantile-sampled ensembles, plus crossing and spreading diagnostics.
//!
//! The quantum potential is frozen at its `lambda = 0` closed form while
//! `lambda(t)` evolves, so the force law interpolates exactly between the
//! guidance dynamics (`lambda = 0`) and Newtonian motion (`lambda = 1`).
//! For `t < 0` the coupling is clamped to its value at `t = 0`.
//!
//! Everything is deterministic: quantile sampling replaces randomness, and
//! identical inputs produce bit-identical records. Ensemble members are
//! independent and integrated in parallel, assembled in member order.

use crate::coupling::CouplingLaw;
use crate::error::{Error, Result};
use crate::scenario::Scenario;
use rayon::prelude::*;

/// Fixed-step integrator configuration. The method is classic fourth-order
/// Runge-Kutta; the tag exists so configurations remain self-describing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t0: f64,
    pub t1: f64,
    /// Record every this many steps (step 0 and the final step are always
    /// recorded).
    pub output_stride: usize,
    pub method: IntegrationMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationMethod {
    #[default]
    Rk4,
}

impl IntegratorConfig {
    pub fn new(dt: f64, t0: f64, t1: f64, output_stride: usize) -> Result<Self> {
        let cfg = Self {
            dt,
            t0,
            t1,
            output_stride,
            method: IntegrationMethod::Rk4,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Default step for a scenario: 1/2000 of the oscillator period, or
    /// 1/2000 of the free packet's natural spreading time `m sigma0^2 / hbar`.
    pub fn default_for(scn: &Scenario, t0: f64, t1: f64, output_stride: usize) -> Result<Self> {
        let p = scn.params();
        let dt = match scn {
            Scenario::HoStationary { .. } | Scenario::HoCoherent { .. } => {
                2.0 * std::f64::consts::PI / p.omega / 2000.0
            }
            Scenario::FreeGaussian { .. } => p.mass * p.sigma0.powi(2) / p.hbar / 2000.0,
        };
        Self::new(dt, t0, t1, output_stride)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t1 > self.t0) {
            return Err(Error::Config(format!(
                "t1 must exceed t0, got t0 = {}, t1 = {}",
                self.t0, self.t1
            )));
        }
        if self.output_stride == 0 {
            return Err(Error::Config("output_stride must be at least 1".into()));
        }
        Ok(())
    }

    fn n_steps(&self) -> usize {
        (((self.t1 - self.t0) / self.dt).round() as usize).max(1)
    }
}

/// Time series for one ensemble member.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub positions: Vec<f64>,
    pub velocities: Vec<f64>,
    pub lambdas: Vec<f64>,
    pub energies: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// How ensemble members are seeded at `t0`.
#[derive(Debug, Clone, PartialEq)]
pub enum Sampling {
    /// Deterministic mid-quantile positions `q_i = (i + 0.5) / n`.
    Quantile,
    /// Caller-provided initial positions.
    ExplicitList(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub n_members: usize,
    pub sampling: Sampling,
    pub coupling: CouplingLaw,
    pub integrator: IntegratorConfig,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_members == 0 {
            return Err(Error::Config("ensemble needs at least one member".into()));
        }
        if let Sampling::ExplicitList(xs) = &self.sampling {
            if xs.len() != self.n_members {
                return Err(Error::Config(format!(
                    "explicit list has {} positions for {} members",
                    xs.len(),
                    self.n_members
                )));
            }
        }
        self.coupling.validate()?;
        self.integrator.validate()
    }
}

/// Coupling clamped to its `t = 0` value for negative times.
fn lambda_clamped(law: &CouplingLaw, t: f64) -> f64 {
    law.lambda_at(t.max(0.0))
        .expect("clamped time is nonnegative")
}

/// Force of the modified equation of motion,
/// `-dV/dx - (1 - lambda(t)) dQ/dx`, with `Q` frozen at its closed
/// `lambda = 0` form.
pub fn total_force(scn: &Scenario, law: &CouplingLaw, x: f64, t: f64) -> f64 {
    scn.classical_force(x) + (1.0 - lambda_clamped(law, t)) * scn.quantum_force(x, t)
}

/// Energy along a trajectory: `m v^2 / 2 + V(x) + (1 - lambda(t)) Q(x, t)`.
pub fn bohm_energy(scn: &Scenario, law: &CouplingLaw, x: f64, v: f64, t: f64) -> f64 {
    let p = scn.params();
    0.5 * p.mass * v * v
        + scn.potential(x)
        + (1.0 - lambda_clamped(law, t)) * scn.quantum_potential(x, t)
}

fn rk4_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t: f64,
    y: &[f64; N],
    dt: f64,
) -> [f64; N] {
    let k1 = f(t, y);
    let mut y2 = *y;
    for i in 0..N {
        y2[i] = y[i] + 0.5 * dt * k1[i];
    }
    let k2 = f(t + 0.5 * dt, &y2);
    let mut y3 = *y;
    for i in 0..N {
        y3[i] = y[i] + 0.5 * dt * k2[i];
    }
    let k3 = f(t + 0.5 * dt, &y3);
    let mut y4 = *y;
    for i in 0..N {
        y4[i] = y[i] + dt * k3[i];
    }
    let k4 = f(t + dt, &y4);
    let mut out = *y;
    for i in 0..N {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Shared recording loop over RK4 steps of an N-dimensional state.
fn integrate<const N: usize>(
    cfg: &IntegratorConfig,
    y0: [f64; N],
    deriv: impl Fn(f64, &[f64; N]) -> [f64; N],
    mut record: impl FnMut(f64, &[f64; N]),
) -> Result<()> {
    let n_steps = cfg.n_steps();
    let mut y = y0;
    record(cfg.t0, &y);
    for k in 0..n_steps {
        let t = cfg.t0 + k as f64 * cfg.dt;
        y = rk4_step(&deriv, t, &y, cfg.dt);
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { last_good: t });
        }
        let k1 = k + 1;
        if k1 % cfg.output_stride == 0 || k1 == n_steps {
            record(cfg.t0 + k1 as f64 * cfg.dt, &y);
        }
    }
    Ok(())
}

/// Integrate the second-order equation of motion from `(x0, v0)`.
///
/// Conventionally `v0 = guidance_velocity(scn, x0, t0)`, which makes the
/// `lambda = 0` limit reproduce the first-order guidance flow.
pub fn integrate_trajectory(
    scn: &Scenario,
    law: &CouplingLaw,
    x0: f64,
    v0: f64,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    law.validate()?;
    let mass = scn.params().mass;
    let deriv = |t: f64, y: &[f64; 2]| [y[1], total_force(scn, law, y[0], t) / mass];
    let mut rec = TrajectoryRecord {
        times: Vec::new(),
        positions: Vec::new(),
        velocities: Vec::new(),
        lambdas: Vec::new(),
        energies: Vec::new(),
    };
    integrate(cfg, [x0, v0], deriv, |t, y| {
        rec.times.push(t);
        rec.positions.push(y[0]);
        rec.velocities.push(y[1]);
        rec.lambdas.push(lambda_clamped(law, t));
        rec.energies.push(bohm_energy(scn, law, y[0], y[1], t));
    })?;
    Ok(rec)
}

/// Integrate the first-order guidance flow `dx/dt = (1/m) dS/dx`.
///
/// This is the `lambda = 0` reference dynamics and serves as an independent
/// oracle for [`integrate_trajectory`] in the pure-quantum limit.
pub fn integrate_guidance(
    scn: &Scenario,
    x0: f64,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    cfg.validate()?;
    let law = CouplingLaw::PureQuantum;
    let deriv = |t: f64, y: &[f64; 1]| [scn.guidance_velocity(y[0], t)];
    let mut rec = TrajectoryRecord {
        times: Vec::new(),
        positions: Vec::new(),
        velocities: Vec::new(),
        lambdas: Vec::new(),
        energies: Vec::new(),
    };
    integrate(cfg, [x0], deriv, |t, y| {
        let v = scn.guidance_velocity(y[0], t);
        rec.times.push(t);
        rec.positions.push(y[0]);
        rec.velocities.push(v);
        rec.lambdas.push(0.0);
        rec.energies.push(bohm_energy(scn, &law, y[0], v, t));
    })?;
    Ok(rec)
}

/// Run every ensemble member. Initial positions come from mid-quantiles of
/// the density at `t0` (or the explicit list); initial velocities from the
/// guidance condition, which is the unique choice consistent with both the
/// quantum and classical limits since `lambda(t0) = 0` for the relaxation
/// law.
pub fn run_ensemble(scn: &Scenario, spec: &EnsembleSpec) -> Result<Vec<TrajectoryRecord>> {
    spec.validate()?;
    let t0 = spec.integrator.t0;
    let x0s: Vec<f64> = match &spec.sampling {
        Sampling::Quantile => (0..spec.n_members)
            .map(|i| {
                let q = (i as f64 + 0.5) / spec.n_members as f64;
                scn.density_quantile(q, t0)
            })
            .collect::<Result<_>>()?,
        Sampling::ExplicitList(xs) => xs.clone(),
    };
    let results: Vec<Result<TrajectoryRecord>> = x0s
        .par_iter()
        .enumerate()
        .map(|(i, &x0)| {
            let v0 = scn.guidance_velocity(x0, t0);
            integrate_trajectory(scn, &spec.coupling, x0, v0, &spec.integrator).map_err(|e| {
                Error::Member {
                    index: i,
                    source: Box::new(e),
                }
            })
        })
        .collect();
    results.into_iter().collect()
}

/// One sign change of the separation between two members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEvent {
    pub member_a: usize,
    pub member_b: usize,
    /// The crossing lies inside `(t_before, t_after)`.
    pub t_before: f64,
    pub t_after: f64,
}

fn check_common_grid(records: &[TrajectoryRecord]) -> Result<()> {
    if let Some(first) = records.first() {
        for r in &records[1..] {
            if r.times != first.times {
                return Err(Error::GridMismatch);
            }
        }
    }
    Ok(())
}

/// Report every pair of members whose separation changes sign between
/// adjacent samples. Detection is limited by the sampling resolution:
/// crossings that cancel within one output stride are invisible, so keep
/// the stride small when this diagnostic matters.
pub fn detect_crossings(records: &[TrajectoryRecord]) -> Result<Vec<CrossingEvent>> {
    check_common_grid(records)?;
    let mut events = Vec::new();
    for a in 0..records.len() {
        for b in a + 1..records.len() {
            let (ra, rb) = (&records[a], &records[b]);
            for k in 0..ra.len().saturating_sub(1) {
                let d0 = ra.positions[k] - rb.positions[k];
                let d1 = ra.positions[k + 1] - rb.positions[k + 1];
                if d0 * d1 < 0.0 {
                    events.push(CrossingEvent {
                        member_a: a,
                        member_b: b,
                        t_before: ra.times[k],
                        t_after: ra.times[k + 1],
                    });
                }
            }
        }
    }
    Ok(events)
}

/// Ensemble spreading and acceleration diagnostics on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpreadingMetrics {
    /// Sample times (shared across members).
    pub times: Vec<f64>,
    /// Sample standard deviation of positions at each time.
    pub spread: Vec<f64>,
    /// Right endpoints of the sample intervals.
    pub interval_times: Vec<f64>,
    /// Max over members of `|dv| / dt` on each interval; a proxy for the
    /// largest acceleration at the sampling resolution.
    pub max_accel: Vec<f64>,
}

pub fn spreading_metrics(records: &[TrajectoryRecord]) -> Result<SpreadingMetrics> {
    check_common_grid(records)?;
    if records.is_empty() {
        return Err(Error::DegenerateInput("no records".into()));
    }
    let times = records[0].times.clone();
    let n = records.len();
    let spread = (0..times.len())
        .map(|k| {
            if n < 2 {
                return 0.0;
            }
            let mean = records.iter().map(|r| r.positions[k]).sum::<f64>() / n as f64;
            let var = records
                .iter()
                .map(|r| (r.positions[k] - mean).powi(2))
                .sum::<f64>()
                / (n - 1) as f64;
            var.sqrt()
        })
        .collect();
    let mut interval_times = Vec::with_capacity(times.len().saturating_sub(1));
    let mut max_accel = Vec::with_capacity(times.len().saturating_sub(1));
    for k in 0..times.len().saturating_sub(1) {
        let dt = times[k + 1] - times[k];
        let a = records
            .iter()
            .map(|r| ((r.velocities[k + 1] - r.velocities[k]) / dt).abs())
            .fold(0.0, f64::max);
        interval_times.push(times[k + 1]);
        max_accel.push(a);
    }
    Ok(SpreadingMetrics {
        times,
        spread,
        interval_times,
        max_accel,
    })
}
