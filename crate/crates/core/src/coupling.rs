//! Environment-coupling laws `lambda(t)` and thermal decoherence timescales.
//!
//! `lambda = 0` is the fully quantum limit, `lambda = 1` the fully classical
//! one; the exponential-relaxation law `1 - exp(-b t)` sweeps between them.
//! [`BathParams`] works in SI units and is independent of the natural-unit
//! conventions used elsewhere.

use crate::error::{Error, Result};

/// Reduced Planck constant, J s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const BOLTZMANN_SI: f64 = 1.380_649e-23;

/// Time dependence of the environment coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CouplingLaw {
    /// `lambda = 0` for all times.
    PureQuantum,
    /// `lambda = 1` for all times.
    PureClassical,
    /// Constant `lambda` in `[0, 1]`.
    Fixed(f64),
    /// `lambda(t) = 1 - exp(-b t)` with relaxation rate `b >= 0`.
    ExponentialRelaxation(f64),
}

impl CouplingLaw {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Fixed(l) if !(0.0..=1.0).contains(&l) => Err(Error::Domain(format!(
                "fixed coupling must lie in [0, 1], got {l}"
            ))),
            Self::ExponentialRelaxation(b) if !(b >= 0.0) => Err(Error::Domain(format!(
                "relaxation rate must be nonnegative, got {b}"
            ))),
            _ => Ok(()),
        }
    }

    /// Coupling strength at `t >= 0`; monotone nondecreasing in `t` and
    /// confined to `[0, 1]` for every law.
    pub fn lambda_at(&self, t: f64) -> Result<f64> {
        if t < 0.0 {
            return Err(Error::Domain(format!(
                "coupling law evaluated at negative time {t}"
            )));
        }
        Ok(match *self {
            Self::PureQuantum => 0.0,
            Self::PureClassical => 1.0,
            Self::Fixed(l) => l,
            Self::ExponentialRelaxation(b) => -(-b * t).exp_m1(),
        })
    }
}

/// Heat-bath parameters in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    /// Relaxation rate `gamma = 1 / tau_R`, 1/s.
    pub gamma: f64,
    /// Bath temperature, K.
    pub temperature: f64,
    /// Particle mass, kg.
    pub mass: f64,
    /// Superposition separation `dx`, m.
    pub separation: f64,
}

/// Timescales and coefficients derived from a bath.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceScales {
    /// Decoherence time `tau_D = tau_R (lambda_T / dx)^2`, s.
    pub tau_d: f64,
    /// Relaxation time `tau_R = 1 / gamma`, s.
    pub tau_r: f64,
    /// Thermal de Broglie wavelength, m.
    pub thermal_wavelength: f64,
    /// Momentum-diffusion coefficient `D = 2 m gamma k_B T`, kg^2 m^2 / s^3.
    pub momentum_diffusion: f64,
}

impl BathParams {
    pub fn new(gamma: f64, temperature: f64, mass: f64, separation: f64) -> Result<Self> {
        for (name, v) in [
            ("gamma", gamma),
            ("temperature", temperature),
            ("mass", mass),
            ("separation", separation),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            gamma,
            temperature,
            mass,
            separation,
        })
    }

    /// Thermal de Broglie wavelength `hbar / sqrt(2 m k_B T)`.
    ///
    /// Conventions in the literature differ by factors of `sqrt(pi)` and
    /// `2 pi`; this one is fixed project-wide and reproduces the familiar
    /// orders of magnitude for macroscopic decoherence times.
    pub fn thermal_wavelength(&self) -> f64 {
        HBAR_SI / (2.0 * self.mass * BOLTZMANN_SI * self.temperature).sqrt()
    }

    pub fn decoherence_scales(&self) -> DecoherenceScales {
        let lambda_t = self.thermal_wavelength();
        let tau_r = 1.0 / self.gamma;
        DecoherenceScales {
            tau_d: tau_r * (lambda_t / self.separation).powi(2),
            tau_r,
            thermal_wavelength: lambda_t,
            momentum_diffusion: 2.0 * self.mass * self.gamma * BOLTZMANN_SI * self.temperature,
        }
    }
}
