//! Simulation library for particle-trajectory dynamics that interpolate
//! smoothly between quantum (pilot-wave) and classical motion through a
//! time-dependent environment coupling, together with the density-matrix
//! and phase-space machinery used to study decoherence on grids.
//!
//! The trajectory side integrates `m x'' = -d/dx [V + (1 - lambda(t)) Q]`,
//! where `Q` is the closed-form quantum potential of a reference state and
//! `lambda(t)` sweeps from 0 (pure guidance dynamics) to 1 (Newtonian
//! motion). The grid side hosts the conventional decoherence picture the
//! trajectories are contrasted against: a master equation with friction and
//! fluctuation terms, Wigner transforms, and energy functionals.
//!
//! Modules:
//!
//! - [`scenario`]: closed-form wavefunction fields for the three reference
//!   systems (stationary oscillator states, the coherent oscillator packet,
//!   the spreading free Gaussian).
//! - [`coupling`]: coupling laws `lambda(t)` and thermal decoherence
//!   timescales.
//! - [`trajectories`]: fixed-step integration of single trajectories and
//!   quantile-sampled ensembles, with crossing and spreading diagnostics.
//! - [`phasespace`]: discretized states, master-equation evolution, Wigner
//!   transforms.
//!
//! All routines are deterministic: ensembles are seeded by quantiles, not
//! random draws, and identical inputs produce bit-identical outputs.

pub mod coupling;
pub mod error;
pub mod phasespace;
pub mod scenario;
pub mod trajectories;

pub use coupling::{BathParams, CouplingLaw, DecoherenceScales};
pub use error::{Error, Result};
pub use phasespace::{
    coherence_decay_rate, density_from_pure, discretize_state, evolve_master, mean_energy,
    momentum_variance, wigner_energy_field, wigner_transform, DensityMatrixGrid, EnergyField,
    EvolutionMode, MasterEqParams, MasterTrajectory, Potential, SpatialGrid, StateSpec,
    WignerGrid,
};
pub use scenario::{PhysParams, Scenario};
pub use trajectories::{
    bohm_energy, detect_crossings, integrate_guidance, integrate_trajectory, run_ensemble,
    spreading_metrics, total_force, CrossingEvent, EnsembleSpec, IntegrationMethod,
    IntegratorConfig, Sampling, SpreadingMetrics, TrajectoryRecord,
};
