//! Wigner transform of discretized density matrices and phase-space
//! functionals built on it.

use super::grid::{DensityMatrixGrid, WignerGrid};
use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;

/// `W(x, p) = (1 / 2 pi hbar) integral of exp(i p y / hbar)
/// rho(x - y/2, x + y/2) dy`.
///
/// For each grid point `x_i`, the density matrix is read along the
/// anti-diagonal at offsets `y = l dx`; odd `l` land between grid points and
/// are linearly interpolated (error `O(dx^2)`). The quadrature over `y` is a
/// length-`n` discrete Fourier transform, so the momentum axis is the
/// centered conjugate axis with spacing `2 pi hbar / (n dx)`.
///
/// For Hermitian input the result is real by construction; the imaginary
/// residue is discarded after a debug assertion.
pub fn wigner_transform(rho: &DensityMatrixGrid, hbar: f64) -> WignerGrid {
    let grid = *rho.grid();
    let n = grid.len();
    let dx = grid.dx();
    let vals = rho.values();
    let half = (n / 2) as isize;
    let inverse = FftPlanner::new().plan_fft_inverse(n);

    // rho on the anti-diagonal through i at even offset 2r.
    let at = |i: isize, r: isize| -> Complex64 {
        let (a, b) = (i - r, i + r);
        if a < 0 || b < 0 || a >= n as isize || b >= n as isize {
            Complex64::ZERO
        } else {
            vals[a as usize * n + b as usize]
        }
    };

    let mut values = vec![0.0; n * n];
    let mut row = vec![Complex64::ZERO; n];
    let mut max_imag = 0.0f64;
    let scale = dx / (2.0 * std::f64::consts::PI * hbar);
    for i in 0..n {
        let ii = i as isize;
        for l in -half..half {
            let c = if l.rem_euclid(2) == 0 {
                at(ii, l / 2)
            } else {
                // Half-grid offset: average the bracketing even offsets.
                (at(ii, (l - 1) / 2) + at(ii, (l + 1) / 2)) * 0.5
            };
            // Centered momentum axis folds in a (-1)^l factor.
            let sign = if l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            row[l.rem_euclid(n as isize) as usize] = c * sign;
        }
        inverse.process(&mut row);
        for (k, v) in row.iter().enumerate() {
            values[i * n + k] = v.re * scale;
            max_imag = max_imag.max((v.im * scale).abs());
        }
    }
    debug_assert!(
        max_imag < 1e-8,
        "imaginary residue {max_imag} from non-Hermitian input"
    );
    WignerGrid::from_parts(grid, grid.momenta(hbar), values)
}

/// Pointwise oscillator energy field of a Wigner function,
/// `p^2/2m + m w^2 x^2 / 2 - (hbar^2 / 8 m W) d2W/dx2
///  - (m w^2 hbar^2 / 8 W) d2W/dp2`,
/// with both second derivatives from central differences.
///
/// Entries where `|W| < 1e-3 max|W|` (and the grid border) are masked out:
/// near the nodes of `W` the division amplifies discretization error without
/// bound. For a stationary oscillator state the unmasked field is flat at
/// `(n + 1/2) hbar omega`.
#[derive(Debug, Clone)]
pub struct EnergyField {
    n: usize,
    values: Vec<f64>,
    mask: Vec<bool>,
    /// `|W|`-weighted mean of the unmasked entries.
    pub weighted_mean: f64,
}

impl EnergyField {
    pub fn value(&self, i: usize, k: usize) -> Option<f64> {
        self.mask[i * self.n + k].then(|| self.values[i * self.n + k])
    }

    pub fn unmasked_count(&self) -> usize {
        self.mask.iter().filter(|m| **m).count()
    }

    /// Unweighted mean and standard deviation of the unmasked entries.
    pub fn unmasked_stats(&self) -> (f64, f64) {
        let entries: Vec<f64> = self
            .values
            .iter()
            .zip(&self.mask)
            .filter_map(|(v, m)| m.then_some(*v))
            .collect();
        let n = entries.len() as f64;
        let mean = entries.iter().sum::<f64>() / n;
        let var = entries.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        (mean, var.sqrt())
    }
}

pub fn wigner_energy_field(
    w: &WignerGrid,
    mass: f64,
    omega: f64,
    hbar: f64,
) -> Result<EnergyField> {
    let n = w.grid().len();
    let dx = w.grid().dx();
    let dp = w.momentum_spacing();
    let max_abs = w.max_abs();
    if max_abs == 0.0 {
        return Err(Error::DegenerateInput("Wigner function is identically zero".into()));
    }
    let threshold = 1e-3 * max_abs;
    let p_half = alias_free_band(w);
    let mut values = vec![0.0; n * n];
    let mut mask = vec![false; n * n];
    let mut weighted = 0.0;
    let mut weight = 0.0;
    for i in 1..n - 1 {
        let x = w.grid().point(i);
        for k in 1..n - 1 {
            let wc = w.value(i, k);
            let p = w.momenta()[k];
            if wc.abs() < threshold || p.abs() > p_half {
                continue;
            }
            let d2x = (w.value(i + 1, k) - 2.0 * wc + w.value(i - 1, k)) / (dx * dx);
            let d2p = (w.value(i, k + 1) - 2.0 * wc + w.value(i, k - 1)) / (dp * dp);
            let e = p * p / (2.0 * mass) + 0.5 * mass * omega * omega * x * x
                - hbar * hbar / (8.0 * mass * wc) * d2x
                - mass * omega * omega * hbar * hbar / (8.0 * wc) * d2p;
            values[i * n + k] = e;
            mask[i * n + k] = true;
            weighted += wc.abs() * e;
            weight += wc.abs();
        }
    }
    if weight == 0.0 {
        return Err(Error::DegenerateInput(
            "all Wigner entries fell below the mask threshold".into(),
        ));
    }
    Ok(EnergyField {
        n,
        values,
        mask,
        weighted_mean: weighted / weight,
    })
}

/// Half of the momentum range: content above this is the aliasing image of
/// the half-grid interpolation (the even-offset anti-diagonal samples have
/// an effective spacing of `2 dx`), not physics. States resolved on the
/// grid live well inside the band.
fn alias_free_band(w: &WignerGrid) -> f64 {
    0.5 * w.momenta()[0].abs()
}

/// Variance of the momentum marginal, `<p^2> - <p>^2`, with moments taken
/// against `W` normalized by its own mass.
///
/// Moments are restricted to the alias-free half of the momentum axis:
/// the interpolated Wigner transform carries a faint image of the state
/// near the edge of the axis, which `p^2` would otherwise amplify far above
/// its mass.
pub fn momentum_variance(w: &WignerGrid) -> f64 {
    let marginal = w.momentum_marginal();
    let dp = w.momentum_spacing();
    let p_half = alias_free_band(w);
    let mut m0 = 0.0;
    let mut m1 = 0.0;
    let mut m2 = 0.0;
    for (v, p) in marginal.iter().zip(w.momenta()) {
        if p.abs() > p_half {
            continue;
        }
        m0 += v * dp;
        m1 += v * p * dp;
        m2 += v * p * p * dp;
    }
    m2 / m0 - (m1 / m0).powi(2)
}
