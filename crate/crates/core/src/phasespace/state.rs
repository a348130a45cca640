//! Sampling closed-form states onto grids and grid expectation values.

use super::grid::{DensityMatrixGrid, SpatialGrid};
use crate::error::{Error, Result};
use crate::scenario::{PhysParams, Scenario};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// Potential entering grid evolution and energy expectations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Free,
    Harmonic { omega: f64 },
}

impl Potential {
    pub fn value(&self, mass: f64, x: f64) -> f64 {
        match *self {
            Potential::Free => 0.0,
            Potential::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
        }
    }
}

/// A state to sample onto a grid: a single scenario wavefunction, or one of
/// the two-center superpositions used in decoherence studies.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    /// `psi = R exp(i S / hbar)` of a scenario.
    Single(Scenario),
    /// Superposition of two displaced first-excited oscillator components,
    /// `psi ~ phi_1(x - x1) + phi_1(x - x2)`.
    OscillatorPair { params: PhysParams, x1: f64, x2: f64 },
    /// Superposition of two drifting Gaussians centered at `x1` and `x2`
    /// with common drift `params.drift` and width `params.sigma0`.
    FreeGaussianPair { params: PhysParams, x1: f64, x2: f64 },
}

impl StateSpec {
    fn centers(&self, t: f64) -> Vec<f64> {
        match self {
            StateSpec::Single(s) => vec![s.packet_center(t)],
            StateSpec::OscillatorPair { x1, x2, .. } => vec![*x1, *x2],
            StateSpec::FreeGaussianPair { params, x1, x2 } => {
                vec![*x1 + params.drift * t, *x2 + params.drift * t]
            }
        }
    }

    fn width(&self, t: f64) -> f64 {
        match self {
            StateSpec::Single(s) => s.packet_width(t),
            StateSpec::OscillatorPair { params, .. } => {
                // n = 1 component: turning radius sqrt(3 hbar / m omega).
                (3.0 * params.hbar / (params.mass * params.omega)).sqrt()
            }
            StateSpec::FreeGaussianPair { params, .. } => {
                let tau = params.hbar * t / (2.0 * params.mass * params.sigma0.powi(2));
                params.sigma0 * (1.0 + tau * tau).sqrt()
            }
        }
    }
}

/// Sample the closed-form state at time `t` and normalize it on the grid.
///
/// The grid must span at least four packet widths on each side of every
/// packet center.
pub fn discretize_state(
    spec: &StateSpec,
    grid: &SpatialGrid,
    t: f64,
) -> Result<Vec<Complex64>> {
    let w = spec.width(t);
    for c in spec.centers(t) {
        if grid.x_min() > c - 4.0 * w || grid.x_max() < c + 4.0 * w {
            return Err(Error::Domain(format!(
                "grid [{}, {}] too small: needs 4 widths ({w}) around center {c}",
                grid.x_min(),
                grid.x_max()
            )));
        }
    }
    let mut psi: Vec<Complex64> = match spec {
        StateSpec::Single(scn) => {
            let hbar = scn.params().hbar;
            grid.points()
                .iter()
                .map(|&x| {
                    Complex64::from_polar(1.0, scn.wave_phase(x, t) / hbar)
                        * scn.wave_amplitude(x, t)
                })
                .collect()
        }
        StateSpec::OscillatorPair { params, x1, x2 } => {
            let mw = params.mass * params.omega / params.hbar;
            // Common time phase exp(-i E_1 t / hbar); a global factor, kept
            // for fidelity.
            let time_phase = Complex64::from_polar(1.0, -1.5 * params.omega * t);
            grid.points()
                .iter()
                .map(|&x| {
                    let lobe = |c: f64| (x - c) * (-0.5 * mw * (x - c).powi(2)).exp();
                    time_phase * (lobe(*x1) + lobe(*x2))
                })
                .collect()
        }
        StateSpec::FreeGaussianPair { params, x1, x2 } => {
            let m = params.mass;
            let hb = params.hbar;
            let s0 = params.sigma0;
            let u = params.drift;
            let k = m * u / hb;
            let s_t = Complex64::new(1.0, hb * t / (2.0 * m * s0 * s0)) * s0;
            let pref = (s_t * s_t * 2.0 * std::f64::consts::PI).powf(-0.25);
            grid.points()
                .iter()
                .map(|&x| {
                    let lobe = |c: f64| {
                        let xc = x - c - u * t;
                        (Complex64::i() * k * (x - c - 0.5 * u * t)
                            - xc * xc / (4.0 * s_t * s0))
                            .exp()
                    };
                    pref * (lobe(*x1) + lobe(*x2))
                })
                .collect()
        }
    };
    let norm_sq: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dx();
    if norm_sq <= 0.0 || !norm_sq.is_finite() {
        return Err(Error::DegenerateInput(format!(
            "state norm^2 = {norm_sq} on the grid"
        )));
    }
    let scale = norm_sq.sqrt().recip();
    for v in &mut psi {
        *v *= scale;
    }
    Ok(psi)
}

/// Pure-state density matrix `rho[i][j] = psi[i] conj(psi[j])`.
pub fn density_from_pure(grid: &SpatialGrid, psi: &[Complex64]) -> Result<DensityMatrixGrid> {
    if psi.len() != grid.len() {
        return Err(Error::Config(format!(
            "state has {} entries for a {}-point grid",
            psi.len(),
            grid.len()
        )));
    }
    let n = grid.len();
    let mut values = vec![Complex64::ZERO; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = psi[i] * psi[j].conj();
        }
    }
    DensityMatrixGrid::new(*grid, values)
}

/// Mean energy of a grid state: spectral kinetic expectation plus the grid
/// quadrature of the potential.
pub fn mean_energy(
    psi: &[Complex64],
    grid: &SpatialGrid,
    mass: f64,
    hbar: f64,
    potential: &Potential,
) -> f64 {
    let n = grid.len();
    let mut spectrum = psi.to_vec();
    FftPlanner::new().plan_fft_forward(n).process(&mut spectrum);
    let weight: f64 = spectrum.iter().map(|v| v.norm_sqr()).sum();
    let kinetic = spectrum
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let p = grid.fft_momentum(hbar, k);
            v.norm_sqr() * p * p / (2.0 * mass)
        })
        .sum::<f64>()
        / weight;
    let dx = grid.dx();
    let pot: f64 = psi
        .iter()
        .enumerate()
        .map(|(i, v)| v.norm_sqr() * potential.value(mass, grid.point(i)))
        .sum::<f64>()
        * dx;
    kinetic + pot
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn natural() -> PhysParams {
        PhysParams::default()
    }

    #[test]
    fn single_state_is_normalized() {
        let grid = SpatialGrid::symmetric(8.0, 256).unwrap();
        let scn = Scenario::free_gaussian(natural()).unwrap();
        let psi = discretize_state(&StateSpec::Single(scn), &grid, 0.0).unwrap();
        let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dx();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn grid_span_check_fires() {
        let grid = SpatialGrid::symmetric(2.0, 64).unwrap();
        let scn = Scenario::free_gaussian(natural()).unwrap();
        assert!(discretize_state(&StateSpec::Single(scn), &grid, 0.0).is_err());
    }

    #[test]
    fn oscillator_pair_is_antisymmetric_for_mirrored_centers() {
        let grid = SpatialGrid::symmetric(12.0, 256).unwrap();
        let spec = StateSpec::OscillatorPair {
            params: natural(),
            x1: -2.0,
            x2: 2.0,
        };
        let psi = discretize_state(&spec, &grid, 0.0).unwrap();
        let n = grid.len();
        for j in 1..n {
            let a = psi[j];
            let b = psi[n - j];
            assert!((a + b).norm() < 1e-9, "j={j}: {a} vs {b}");
        }
    }

    #[test]
    fn distant_gaussian_pair_has_negligible_overlap() {
        let grid = SpatialGrid::symmetric(16.0, 512).unwrap();
        let (x1, x2) = (-8.0, 8.0);
        let spec = StateSpec::FreeGaussianPair {
            params: natural(),
            x1,
            x2,
        };
        let psi = discretize_state(&spec, &grid, 0.0).unwrap();
        // Overlap of the two lobes, computed on the grid.
        let lobe = |c: f64, x: f64| {
            Complex64::new((2.0 * std::f64::consts::PI).powf(-0.25), 0.0)
                * (-(x - c) * (x - c) / 4.0).exp()
        };
        let overlap: Complex64 = grid
            .points()
            .iter()
            .map(|&x| lobe(x1, x).conj() * lobe(x2, x))
            .sum::<Complex64>()
            * grid.dx();
        // Gaussian overlap formula exp(-(x1-x2)^2 / 8 sigma^2).
        let expected = (-(x1 - x2).powi(2) / 8.0).exp();
        assert!(overlap.norm() < 1e-10, "overlap {}", overlap.norm());
        assert_relative_eq!(overlap.re, expected, epsilon = 1e-10);
        // Norm is unity without any cross-term correction.
        let norm: f64 = psi.iter().map(|v| v.norm_sqr()).sum::<f64>() * grid.dx();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn density_has_unit_trace_and_purity() {
        let grid = SpatialGrid::symmetric(8.0, 128).unwrap();
        let scn = Scenario::ho_stationary(1, natural()).unwrap();
        let psi = discretize_state(&StateSpec::Single(scn), &grid, 0.0).unwrap();
        let rho = density_from_pure(&grid, &psi).unwrap();
        rho.validate().unwrap();
        assert_relative_eq!(rho.trace().re, 1.0, epsilon = 1e-8);
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn real_state_gives_real_symmetric_density() {
        let grid = SpatialGrid::symmetric(8.0, 64).unwrap();
        let scn = Scenario::ho_stationary(0, natural()).unwrap();
        let psi = discretize_state(&StateSpec::Single(scn), &grid, 0.0).unwrap();
        let rho = density_from_pure(&grid, &psi).unwrap();
        for i in 0..grid.len() {
            for j in 0..grid.len() {
                assert_eq!(rho.value(i, j).im, 0.0);
                assert_eq!(rho.value(i, j), rho.value(j, i));
            }
        }
    }

    #[test]
    fn superposition_density_has_half_height_off_diagonal_lobes() {
        let grid = SpatialGrid::symmetric(16.0, 512).unwrap();
        let (x1, x2) = (-4.0, 4.0);
        let spec = StateSpec::FreeGaussianPair {
            params: natural(),
            x1,
            x2,
        };
        let psi = discretize_state(&spec, &grid, 0.0).unwrap();
        let rho = density_from_pure(&grid, &psi).unwrap();
        let i1 = grid.nearest_index(x1);
        let i2 = grid.nearest_index(x2);
        let lobe = rho.value(i1, i2).norm();
        assert_relative_eq!(lobe, psi[i1].norm() * psi[i2].norm(), epsilon = 1e-12);
        // Each half-weight branch puts the coherence lobe at half the peak
        // density of a lone packet, (2 pi sigma0^2)^(-1/2).
        let single_peak = (2.0 * std::f64::consts::PI).powf(-0.5);
        assert_relative_eq!(lobe, 0.5 * single_peak, max_relative = 1e-3);
        assert_relative_eq!(rho.value(i1, i1).norm(), 0.5 * single_peak, max_relative = 1e-3);
    }

    #[test]
    fn free_gaussian_mean_energy() {
        let grid = SpatialGrid::symmetric(10.0, 256).unwrap();
        let scn = Scenario::free_gaussian(natural()).unwrap();
        let psi = discretize_state(&StateSpec::Single(scn), &grid, 0.0).unwrap();
        let e = mean_energy(&psi, &grid, 1.0, 1.0, &Potential::Free);
        assert_relative_eq!(e, 0.125, epsilon = 1e-6);
    }

    #[test]
    fn oscillator_eigenstate_mean_energy() {
        let grid = SpatialGrid::symmetric(10.0, 256).unwrap();
        let scn = Scenario::ho_stationary(1, natural()).unwrap();
        let psi = discretize_state(&StateSpec::Single(scn), &grid, 0.0).unwrap();
        let e = mean_energy(&psi, &grid, 1.0, 1.0, &Potential::Harmonic { omega: 1.0 });
        assert_relative_eq!(e, 1.5, epsilon = 1e-6);
    }

    #[test]
    fn drift_adds_kinetic_offset() {
        let grid = SpatialGrid::symmetric(12.0, 512).unwrap();
        let rest = Scenario::free_gaussian(natural()).unwrap();
        let mut moving = natural();
        moving.drift = 0.7;
        let drifting = Scenario::free_gaussian(moving).unwrap();
        let e0 = mean_energy(
            &discretize_state(&StateSpec::Single(rest), &grid, 0.0).unwrap(),
            &grid,
            1.0,
            1.0,
            &Potential::Free,
        );
        let e1 = mean_energy(
            &discretize_state(&StateSpec::Single(drifting), &grid, 0.0).unwrap(),
            &grid,
            1.0,
            1.0,
            &Potential::Free,
        );
        assert_relative_eq!(e1 - e0, 0.5 * 0.7 * 0.7, epsilon = 1e-6);
    }
}
