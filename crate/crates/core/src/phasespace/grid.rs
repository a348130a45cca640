//! Spatial grids, discretized density matrices, and phase-space grids.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Uniform spatial grid `x_j = x_min + j dx`, `j = 0 .. n_points - 1`, with
/// `dx = (x_max - x_min) / n_points` (periodic convention, so the conjugate
/// momentum spacing is `2 pi hbar / (n dx)`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl SpatialGrid {
    /// Powers of two for `n_points` keep the spectral steps fastest, but any
    /// size of at least 16 is accepted.
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_max > x_min) {
            return Err(Error::Config(format!(
                "grid needs x_max > x_min, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 16 {
            return Err(Error::Config(format!(
                "grid needs at least 16 points, got {n_points}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Symmetric grid on `[-half_width, half_width)`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.point(i)).collect()
    }

    /// Index of the grid point nearest to `x` (clamped to the grid).
    pub fn nearest_index(&self, x: f64) -> usize {
        let raw = ((x - self.x_min) / self.dx()).round();
        (raw.max(0.0) as usize).min(self.n_points - 1)
    }

    /// Conjugate momentum spacing `2 pi hbar / (n dx)`.
    pub fn momentum_spacing(&self, hbar: f64) -> f64 {
        2.0 * std::f64::consts::PI * hbar / (self.n_points as f64 * self.dx())
    }

    /// Centered momentum axis `p_k = (k - n/2) dp`.
    pub fn momenta(&self, hbar: f64) -> Vec<f64> {
        let dp = self.momentum_spacing(hbar);
        let half = self.n_points as f64 / 2.0;
        (0..self.n_points).map(|k| (k as f64 - half) * dp).collect()
    }

    /// Momentum for FFT bin `k` (wrap-around ordering).
    pub fn fft_momentum(&self, hbar: f64, k: usize) -> f64 {
        let n = self.n_points;
        let dp = self.momentum_spacing(hbar);
        let signed = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
        signed * dp
    }
}

/// Discretized density matrix `rho[i][j] ~ rho(x_i, x_j)`, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrixGrid {
    grid: SpatialGrid,
    values: Vec<Complex64>,
}

impl DensityMatrixGrid {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() * grid.len() {
            return Err(Error::Config(format!(
                "density matrix needs {} entries, got {}",
                grid.len() * grid.len(),
                values.len()
            )));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn value(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.grid.len() + j]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// `sum_i rho[i][i] dx`; unity for a normalized state.
    pub fn trace(&self) -> Complex64 {
        let n = self.grid.len();
        let dx = self.grid.dx();
        (0..n).map(|i| self.values[i * n + i]).sum::<Complex64>() * dx
    }

    /// Grid quadrature of `tr(rho^2)`; unity for a pure state.
    pub fn purity(&self) -> f64 {
        let dx = self.grid.dx();
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * dx * dx
    }

    /// Checks Hermiticity (1e-10) and unit trace (1e-8).
    pub fn validate(&self) -> Result<()> {
        let n = self.grid.len();
        for i in 0..n {
            for j in i..n {
                let a = self.values[i * n + j];
                let b = self.values[j * n + i].conj();
                if (a - b).norm() > 1e-10 {
                    return Err(Error::DegenerateInput(format!(
                        "density matrix not Hermitian at ({i}, {j}): {a} vs conj {b}"
                    )));
                }
            }
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::DegenerateInput(format!(
                "density matrix trace {tr} differs from 1"
            )));
        }
        Ok(())
    }
}

/// Discretized Wigner function `W(x_i, p_k)`, row-major over `(x, p)`.
///
/// The momentum axis is the centered conjugate axis of the spatial grid,
/// `p_k = (k - n/2) * 2 pi hbar / (n dx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    grid: SpatialGrid,
    momenta: Vec<f64>,
    values: Vec<f64>,
}

impl WignerGrid {
    pub(crate) fn from_parts(grid: SpatialGrid, momenta: Vec<f64>, values: Vec<f64>) -> Self {
        Self {
            grid,
            momenta,
            values,
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn momenta(&self) -> &[f64] {
        &self.momenta
    }

    pub fn momentum_spacing(&self) -> f64 {
        self.momenta[1] - self.momenta[0]
    }

    pub fn value(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.momenta.len() + k]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// `sum W dx dp` over the whole grid.
    pub fn normalization(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.grid.dx() * self.momentum_spacing()
    }

    /// Position marginal `sum_k W dp`, one value per grid point.
    pub fn position_marginal(&self) -> Vec<f64> {
        let n = self.grid.len();
        let dp = self.momentum_spacing();
        (0..n)
            .map(|i| {
                self.values[i * self.momenta.len()..(i + 1) * self.momenta.len()]
                    .iter()
                    .sum::<f64>()
                    * dp
            })
            .collect()
    }

    /// Momentum marginal `sum_i W dx`, one value per momentum point.
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let n = self.grid.len();
        let m = self.momenta.len();
        let dx = self.grid.dx();
        (0..m)
            .map(|k| (0..n).map(|i| self.values[i * m + k]).sum::<f64>() * dx)
            .collect()
    }
}
