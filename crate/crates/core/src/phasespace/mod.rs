//! Grid-based machinery for density matrices and phase-space functions:
//! discretized states, a Caldeira-Leggett-type master equation, the Wigner
//! transform, and energy functionals.
//!
//! This module hosts the conventional decoherence picture that the
//! trajectory dynamics is contrasted against: the off-diagonal elements of
//! the density matrix decay under the fluctuation term while the diagonal
//! stays intact, and the surviving diagonal keeps its quantum energy
//! content, which the Wigner-function energy field makes quantitative.

mod grid;
mod master;
mod state;
mod wigner;

pub use grid::{DensityMatrixGrid, SpatialGrid, WignerGrid};
pub use master::{
    coherence_decay_rate, evolve_master, EvolutionMode, MasterEqParams, MasterTrajectory,
};
pub use state::{density_from_pure, discretize_state, mean_energy, Potential, StateSpec};
pub use wigner::{momentum_variance, wigner_energy_field, wigner_transform, EnergyField};
