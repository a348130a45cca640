//! Closed-form wavefunction fields for the three reference systems.
//!
//! Each [`Scenario`] carries the polar decomposition `psi = R exp(i S / hbar)`
//! of a known solution: the stationary oscillator eigenstates, the
//! non-dispersive coherent oscillator packet, and the spreading free Gaussian
//! packet. The quantum potential `Q = -(hbar^2 / 2m) R'' / R`, its force, and
//! the guidance velocity `(1/m) dS/dx` are all hand-differentiated closed
//! forms; nothing here is finite-differenced. All functions are pure and safe
//! to call from any number of threads.

use crate::error::{Error, Result};
use statrs::function::erf;

/// Physical parameters in natural units (`hbar = m = omega = 1` by default).
///
/// Only the fields a scenario actually uses are read; the rest are inert.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub hbar: f64,
    pub mass: f64,
    /// Angular frequency (oscillator scenarios).
    pub omega: f64,
    /// Oscillation amplitude of the coherent packet center.
    pub amplitude: f64,
    /// Initial width of the free Gaussian packet.
    pub sigma0: f64,
    /// Drift velocity of the free Gaussian packet.
    pub drift: f64,
}

impl Default for PhysParams {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
            omega: 1.0,
            amplitude: 1.0,
            sigma0: 1.0,
            drift: 0.0,
        }
    }
}

impl PhysParams {
    fn check_base(&self) -> Result<()> {
        if !(self.hbar > 0.0) {
            return Err(Error::Domain(format!("hbar must be positive, got {}", self.hbar)));
        }
        if !(self.mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {}", self.mass)));
        }
        Ok(())
    }

    fn check_omega(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(Error::Domain(format!("omega must be positive, got {}", self.omega)));
        }
        Ok(())
    }

    fn check_sigma0(&self) -> Result<()> {
        if !(self.sigma0 > 0.0) {
            return Err(Error::Domain(format!("sigma0 must be positive, got {}", self.sigma0)));
        }
        Ok(())
    }
}

/// One of the three reference systems with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    /// Stationary oscillator eigenstate `n`. The particles of this ensemble
    /// are at rest: `S = -E_n t`, so the guidance velocity vanishes.
    HoStationary { n: u32, params: PhysParams },
    /// Non-dispersive Gaussian packet oscillating with classical amplitude.
    HoCoherent { params: PhysParams },
    /// Free Gaussian packet spreading as `sigma(t)` around a drifting center.
    FreeGaussian { params: PhysParams },
}

impl Scenario {
    pub fn ho_stationary(n: u32, params: PhysParams) -> Result<Self> {
        params.check_base()?;
        params.check_omega()?;
        Ok(Self::HoStationary { n, params })
    }

    pub fn ho_coherent(params: PhysParams) -> Result<Self> {
        params.check_base()?;
        params.check_omega()?;
        Ok(Self::HoCoherent { params })
    }

    pub fn free_gaussian(params: PhysParams) -> Result<Self> {
        params.check_base()?;
        params.check_sigma0()?;
        Ok(Self::FreeGaussian { params })
    }

    pub fn params(&self) -> &PhysParams {
        match self {
            Self::HoStationary { params, .. }
            | Self::HoCoherent { params }
            | Self::FreeGaussian { params } => params,
        }
    }

    /// Squared width `sigma(t)^2 = sigma0^2 (1 + (hbar t / 2 m sigma0^2)^2)`
    /// of the free packet; for the oscillator scenarios returns the
    /// (time-independent) ground-width squared `hbar / 2 m omega`.
    pub fn sigma_sq(&self, t: f64) -> f64 {
        match self {
            Self::FreeGaussian { params } => {
                let tau = params.hbar * t / (2.0 * params.mass * params.sigma0.powi(2));
                params.sigma0.powi(2) * (1.0 + tau * tau)
            }
            Self::HoStationary { params, .. } | Self::HoCoherent { params } => {
                params.hbar / (2.0 * params.mass * params.omega)
            }
        }
    }

    /// Center of the position density.
    pub fn packet_center(&self, t: f64) -> f64 {
        match self {
            Self::HoStationary { .. } => 0.0,
            Self::HoCoherent { params } => params.amplitude * (params.omega * t).cos(),
            Self::FreeGaussian { params } => params.drift * t,
        }
    }

    /// Characteristic width of the packet, used for grid-span checks.
    ///
    /// For stationary states this is the classical turning radius
    /// `sqrt((2n+1) hbar / m omega)`, which bounds the support of the density.
    pub fn packet_width(&self, t: f64) -> f64 {
        match self {
            Self::HoStationary { n, params } => {
                ((2.0 * f64::from(*n) + 1.0) * params.hbar / (params.mass * params.omega)).sqrt()
            }
            Self::HoCoherent { params } => (params.hbar / (params.mass * params.omega)).sqrt(),
            Self::FreeGaussian { .. } => self.sigma_sq(t).sqrt(),
        }
    }

    /// Amplitude `R(x, t)` of the polar decomposition.
    ///
    /// For the stationary states this is the signed eigenfunction value
    /// (it carries the nodes of the Hermite polynomial); densities are
    /// always formed as `R^2`.
    pub fn wave_amplitude(&self, x: f64, t: f64) -> f64 {
        match self {
            Self::HoStationary { n, params } => {
                let alpha = (params.mass * params.omega / params.hbar).sqrt();
                let xi = alpha * x;
                let norm = (params.mass * params.omega / (std::f64::consts::PI * params.hbar))
                    .powf(0.25)
                    / (2f64.powi(*n as i32) * factorial(*n)).sqrt();
                norm * hermite(*n, xi) * (-0.5 * xi * xi).exp()
            }
            Self::HoCoherent { params } => {
                let c = self.packet_center(t);
                let pref = (params.mass * params.omega / (std::f64::consts::PI * params.hbar))
                    .powf(0.25);
                pref * (-params.mass * params.omega * (x - c).powi(2) / (2.0 * params.hbar)).exp()
            }
            Self::FreeGaussian { params } => {
                let s2 = self.sigma_sq(t);
                let c = params.drift * t;
                (2.0 * std::f64::consts::PI * s2).powf(-0.25)
                    * (-(x - c).powi(2) / (4.0 * s2)).exp()
            }
        }
    }

    /// Phase `S(x, t)` (units of action) of the polar decomposition.
    pub fn wave_phase(&self, x: f64, t: f64) -> f64 {
        match self {
            Self::HoStationary { n, params } => {
                let energy = (f64::from(*n) + 0.5) * params.hbar * params.omega;
                -energy * t
            }
            Self::HoCoherent { params } => {
                let m = params.mass;
                let w = params.omega;
                let a = params.amplitude;
                -0.5 * params.hbar * w * t + 0.25 * m * w * a * a * (2.0 * w * t).sin()
                    - m * w * a * x * (w * t).sin()
            }
            Self::FreeGaussian { params } => {
                let m = params.mass;
                let hb = params.hbar;
                let s0sq = params.sigma0.powi(2);
                let s2 = self.sigma_sq(t);
                let u = params.drift;
                let xc = x - u * t;
                -0.5 * hb * (hb * t / (2.0 * m * s0sq)).atan()
                    + m * u * (x - 0.5 * u * t)
                    + xc * xc * hb * hb * t / (8.0 * m * s0sq * s2)
            }
        }
    }

    /// Quantum potential `Q(x, t) = -(hbar^2 / 2m) R'' / R`, in closed form.
    ///
    /// The stationary-state form `(n + 1/2) hbar omega - m omega^2 x^2 / 2`
    /// is a polynomial, globally smooth through the nodes of `R`.
    pub fn quantum_potential(&self, x: f64, t: f64) -> f64 {
        match self {
            Self::HoStationary { n, params } => {
                (f64::from(*n) + 0.5) * params.hbar * params.omega
                    - 0.5 * params.mass * params.omega.powi(2) * x * x
            }
            Self::HoCoherent { params } => {
                let c = self.packet_center(t);
                0.5 * params.hbar * params.omega
                    - 0.5 * params.mass * params.omega.powi(2) * (x - c).powi(2)
            }
            Self::FreeGaussian { params } => {
                let s2 = self.sigma_sq(t);
                let xc = x - params.drift * t;
                params.hbar.powi(2) / (4.0 * params.mass * s2) * (1.0 - xc * xc / (2.0 * s2))
            }
        }
    }

    /// Quantum force `-dQ/dx`, the exact analytic derivative.
    pub fn quantum_force(&self, x: f64, t: f64) -> f64 {
        match self {
            Self::HoStationary { params, .. } => params.mass * params.omega.powi(2) * x,
            Self::HoCoherent { params } => {
                let c = self.packet_center(t);
                params.mass * params.omega.powi(2) * (x - c)
            }
            Self::FreeGaussian { params } => {
                let s2 = self.sigma_sq(t);
                let xc = x - params.drift * t;
                params.hbar.powi(2) * xc / (4.0 * params.mass * s2 * s2)
            }
        }
    }

    /// Classical potential `V(x)`: harmonic for the oscillator scenarios,
    /// zero for the free packet.
    pub fn potential(&self, x: f64) -> f64 {
        match self {
            Self::HoStationary { params, .. } | Self::HoCoherent { params } => {
                0.5 * params.mass * params.omega.powi(2) * x * x
            }
            Self::FreeGaussian { .. } => 0.0,
        }
    }

    /// Classical force `-dV/dx`.
    pub fn classical_force(&self, x: f64) -> f64 {
        match self {
            Self::HoStationary { params, .. } | Self::HoCoherent { params } => {
                -params.mass * params.omega.powi(2) * x
            }
            Self::FreeGaussian { .. } => 0.0,
        }
    }

    /// Guidance velocity `(1/m) dS/dx`.
    pub fn guidance_velocity(&self, x: f64, t: f64) -> f64 {
        match self {
            Self::HoStationary { .. } => 0.0,
            Self::HoCoherent { params } => {
                -params.omega * params.amplitude * (params.omega * t).sin()
            }
            Self::FreeGaussian { params } => {
                let m = params.mass;
                let hb = params.hbar;
                let s2 = self.sigma_sq(t);
                let xc = x - params.drift * t;
                params.drift + xc * hb * hb * t / (4.0 * m * m * params.sigma0.powi(2) * s2)
            }
        }
    }

    /// Inverse cumulative of the position density `R^2` at time `t`:
    /// returns `x` with `integral of R^2 up to x = q`.
    ///
    /// Gaussian densities use the inverse error function directly; the
    /// stationary states use bisection on an exact Hermite-moment CDF.
    /// Accurate to better than 1e-10 in position.
    pub fn density_quantile(&self, q: f64, t: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::Domain(format!(
                "quantile probability must lie in (0, 1), got {q}"
            )));
        }
        match self {
            Self::HoStationary { n, params } => {
                let alpha = (params.mass * params.omega / params.hbar).sqrt();
                // Bracket generously beyond the turning points: the density
                // tail decays like exp(-xi^2).
                let hi = (2.0 * f64::from(*n) + 1.0).sqrt() + 9.0;
                let mut lo = -hi;
                let mut hi = hi;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if stationary_cdf(*n, mid) < q {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-13 * (1.0 + mid.abs()) {
                        break;
                    }
                }
                Ok(0.5 * (lo + hi) / alpha)
            }
            Self::HoCoherent { params } => {
                let c = self.packet_center(t);
                // Density std is sqrt(hbar / 2 m omega).
                Ok(c + (params.hbar / (params.mass * params.omega)).sqrt()
                    * erf::erf_inv(2.0 * q - 1.0))
            }
            Self::FreeGaussian { params } => {
                let sigma = self.sigma_sq(t).sqrt();
                Ok(params.drift * t + sigma * std::f64::consts::SQRT_2 * erf::erf_inv(2.0 * q - 1.0))
            }
        }
    }
}

/// Physicists' Hermite polynomial `H_n(y)` by the three-term recurrence.
fn hermite(n: u32, y: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 2.0 * y,
        _ => {
            let mut hm = 1.0;
            let mut h = 2.0 * y;
            for k in 1..n {
                let next = 2.0 * y * h - 2.0 * f64::from(k) * hm;
                hm = h;
                h = next;
            }
            h
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Coefficients of `H_n` in the monomial basis, index = power of `y`.
fn hermite_coeffs(n: u32) -> Vec<f64> {
    let mut hm = vec![1.0];
    if n == 0 {
        return hm;
    }
    let mut h = vec![0.0, 2.0];
    for k in 1..n {
        // H_{k+1} = 2 y H_k - 2k H_{k-1}
        let mut next = vec![0.0; h.len() + 1];
        for (p, c) in h.iter().enumerate() {
            next[p + 1] += 2.0 * c;
        }
        for (p, c) in hm.iter().enumerate() {
            next[p] -= 2.0 * f64::from(k) * c;
        }
        hm = h;
        h = next;
    }
    h
}

/// Exact CDF of the stationary-state density in the scaled variable
/// `xi = sqrt(m omega / hbar) x`.
///
/// `H_n(u)^2 e^{-u^2}` integrates to a finite combination of `erf` and
/// polynomial-times-Gaussian terms via the incomplete-moment recursion
/// `I_m(xi) = -xi^{m-1} e^{-xi^2} / 2 + (m-1)/2 I_{m-2}(xi)`.
fn stationary_cdf(n: u32, xi: f64) -> f64 {
    let coeffs = hermite_coeffs(n);
    // Square of the polynomial by convolution.
    let mut sq = vec![0.0; 2 * coeffs.len() - 1];
    for (i, a) in coeffs.iter().enumerate() {
        for (j, b) in coeffs.iter().enumerate() {
            sq[i + j] += a * b;
        }
    }
    let gauss = (-xi * xi).exp();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    // Incomplete moments I_m(xi) = integral of t^m e^{-t^2} from -inf to xi.
    let mut moments = vec![0.0; sq.len()];
    moments[0] = 0.5 * sqrt_pi * (1.0 + erf::erf(xi));
    if moments.len() > 1 {
        moments[1] = -0.5 * gauss;
    }
    for m in 2..moments.len() {
        moments[m] = -0.5 * xi.powi(m as i32 - 1) * gauss
            + 0.5 * (m as f64 - 1.0) * moments[m - 2];
    }
    let total: f64 = sq.iter().zip(&moments).map(|(c, i)| c * i).sum();
    total / (sqrt_pi * 2f64.powi(n as i32) * factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn natural() -> PhysParams {
        PhysParams::default()
    }

    fn scenarios() -> Vec<Scenario> {
        vec![
            Scenario::ho_stationary(0, natural()).unwrap(),
            Scenario::ho_stationary(1, natural()).unwrap(),
            Scenario::ho_stationary(2, natural()).unwrap(),
            Scenario::ho_coherent(natural()).unwrap(),
            Scenario::free_gaussian(natural()).unwrap(),
        ]
    }

    /// Simpson quadrature of the density over a generous window.
    fn density_integral(scn: &Scenario, t: f64, x_lo: f64, x_hi: f64, n: usize) -> f64 {
        let h = (x_hi - x_lo) / n as f64;
        let mut sum = 0.0;
        for i in 0..=n {
            let x = x_lo + i as f64 * h;
            let f = scn.wave_amplitude(x, t).powi(2);
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            sum += w * f;
        }
        sum * h / 3.0
    }

    #[test]
    fn amplitudes_are_normalized() {
        for scn in scenarios() {
            for &t in &[0.0, 0.7, 2.0] {
                let c = scn.packet_center(t);
                let w = scn.packet_width(t);
                let norm = density_integral(&scn, t, c - 12.0 * w, c + 12.0 * w, 4000);
                assert_relative_eq!(norm, 1.0, epsilon = 1e-8);
            }
        }
    }

    #[test]
    fn coherent_amplitude_closed_form_value() {
        let scn = Scenario::ho_coherent(natural()).unwrap();
        // At the packet center the exponent vanishes, leaving (1/pi)^(1/4).
        assert_relative_eq!(scn.wave_amplitude(1.0, 0.0), 0.7511255444649425, epsilon = 1e-12);
        // Peak value is t-independent on the moving center.
        for &t in &[0.3, 1.1, 4.0] {
            let c = scn.packet_center(t);
            assert_relative_eq!(scn.wave_amplitude(c, t), 0.7511255444649425, epsilon = 1e-12);
        }
    }

    #[test]
    fn free_amplitude_closed_form_value() {
        let scn = Scenario::free_gaussian(natural()).unwrap();
        let expected = (2.0 * std::f64::consts::PI).powf(-0.25);
        assert_relative_eq!(scn.wave_amplitude(0.0, 0.0), expected, epsilon = 1e-14);
        assert!((expected - 0.6316).abs() < 1e-4);
    }

    #[test]
    fn stationary_phase_is_minus_energy_time() {
        let scn = Scenario::ho_stationary(0, natural()).unwrap();
        assert_relative_eq!(scn.wave_phase(3.0, 2.0), -1.0, epsilon = 1e-15);
        let scn2 = Scenario::ho_stationary(2, natural()).unwrap();
        assert_relative_eq!(scn2.wave_phase(-1.0, 2.0), -5.0, epsilon = 1e-15);
    }

    #[test]
    fn phases_vanish_at_t0() {
        let coh = Scenario::ho_coherent(natural()).unwrap();
        let free = Scenario::free_gaussian(natural()).unwrap();
        for &x in &[-2.0, 0.0, 0.5, 3.0] {
            assert_eq!(coh.wave_phase(x, 0.0), 0.0);
            assert_eq!(free.wave_phase(x, 0.0), 0.0);
        }
    }

    #[test]
    fn quantum_potential_reference_values() {
        let s1 = Scenario::ho_stationary(1, natural()).unwrap();
        assert_relative_eq!(s1.quantum_potential(0.0, 0.0), 1.5, epsilon = 1e-15);

        let coh = Scenario::ho_coherent(natural()).unwrap();
        assert_relative_eq!(coh.quantum_potential(1.0, 0.0), 0.5, epsilon = 1e-15);

        let free = Scenario::free_gaussian(natural()).unwrap();
        assert_relative_eq!(free.quantum_potential(0.0, 0.0), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn quantum_potential_matches_amplitude_curvature() {
        // Q must equal -(hbar^2/2m) R''/R wherever R is not small; R'' from
        // central differences of the amplitude.
        let h = 1e-4;
        for scn in scenarios() {
            for i in 0..=60 {
                let x = -3.0 + 0.1 * i as f64;
                for &t in &[0.0, 0.65, 1.3] {
                    let r = scn.wave_amplitude(x, t);
                    if r.abs() <= 1e-6 {
                        continue;
                    }
                    let rpp = (scn.wave_amplitude(x + h, t) - 2.0 * r
                        + scn.wave_amplitude(x - h, t))
                        / (h * h);
                    let p = scn.params();
                    let q_fd = -p.hbar * p.hbar / (2.0 * p.mass) * rpp / r;
                    let q = scn.quantum_potential(x, t);
                    assert!(
                        (q - q_fd).abs() < 1e-5 * (1.0 + q.abs()),
                        "{scn:?} x={x} t={t}: Q={q} fd={q_fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn forces_match_potential_gradients() {
        let h = 1e-5;
        for scn in scenarios() {
            for i in 0..=60 {
                let x = -3.0 + 0.1 * i as f64;
                for &t in &[0.0, 0.65, 1.3] {
                    let fd_q = -(scn.quantum_potential(x + h, t) - scn.quantum_potential(x - h, t))
                        / (2.0 * h);
                    let fq = scn.quantum_force(x, t);
                    assert!(
                        (fq - fd_q).abs() < 1e-5 * (1.0 + fq.abs()),
                        "{scn:?} quantum force x={x} t={t}: {fq} vs {fd_q}"
                    );

                    let fd_v = -(scn.potential(x + h) - scn.potential(x - h)) / (2.0 * h);
                    let fv = scn.classical_force(x);
                    assert!(
                        (fv - fd_v).abs() < 1e-5 * (1.0 + fv.abs()),
                        "{scn:?} classical force x={x}: {fv} vs {fd_v}"
                    );

                    let fd_s = (scn.wave_phase(x + h, t) - scn.wave_phase(x - h, t)) / (2.0 * h);
                    let v = scn.guidance_velocity(x, t);
                    let v_fd = fd_s / scn.params().mass;
                    assert!(
                        (v - v_fd).abs() < 1e-5 * (1.0 + v.abs()),
                        "{scn:?} guidance x={x} t={t}: {v} vs {v_fd}"
                    );
                }
            }
        }
    }

    #[test]
    fn quantum_force_reference_values() {
        let s0 = Scenario::ho_stationary(0, natural()).unwrap();
        assert_relative_eq!(s0.quantum_force(1.0, 0.0), 1.0, epsilon = 1e-15);

        let coh = Scenario::ho_coherent(natural()).unwrap();
        for &t in &[0.0, 0.4, 2.2] {
            assert_relative_eq!(coh.quantum_force(coh.packet_center(t), t), 0.0);
        }

        let mut p = natural();
        p.drift = 0.8;
        let free = Scenario::free_gaussian(p).unwrap();
        for &t in &[0.0, 0.5, 2.0] {
            assert_relative_eq!(free.quantum_force(0.8 * t, t), 0.0);
        }
    }

    #[test]
    fn classical_force_reference_values() {
        let coh = Scenario::ho_coherent(natural()).unwrap();
        assert_relative_eq!(coh.classical_force(1.0), -1.0, epsilon = 1e-15);
        assert_eq!(coh.classical_force(0.0), 0.0);
        let free = Scenario::free_gaussian(natural()).unwrap();
        assert_eq!(free.classical_force(3.7), 0.0);
    }

    #[test]
    fn stationary_forces_cancel_exactly() {
        for n in 0..=4 {
            let scn = Scenario::ho_stationary(n, natural()).unwrap();
            for i in 0..=100 {
                let x = -5.0 + 0.1 * i as f64;
                let sum = scn.classical_force(x) + scn.quantum_force(x, 0.3);
                assert!(sum.abs() < 1e-12, "n={n} x={x}: residual {sum}");
            }
        }
    }

    #[test]
    fn guidance_reference_values() {
        let stat = Scenario::ho_stationary(1, natural()).unwrap();
        assert_eq!(stat.guidance_velocity(0.4, 1.7), 0.0);

        let coh = Scenario::ho_coherent(natural()).unwrap();
        let v = coh.guidance_velocity(123.0, std::f64::consts::FRAC_PI_2);
        assert_relative_eq!(v, -1.0, epsilon = 1e-12);

        let mut p = natural();
        p.drift = 0.6;
        let free = Scenario::free_gaussian(p).unwrap();
        for &t in &[0.0, 0.9, 3.0] {
            assert_relative_eq!(free.guidance_velocity(0.6 * t, t), 0.6, epsilon = 1e-12);
        }
    }

    #[test]
    fn quantile_median_is_center() {
        let coh = Scenario::ho_coherent(natural()).unwrap();
        assert_relative_eq!(coh.density_quantile(0.5, 0.0).unwrap(), 1.0, epsilon = 1e-10);
        let free = Scenario::free_gaussian(natural()).unwrap();
        assert!(free.density_quantile(0.5, 0.0).unwrap().abs() < 1e-10);
        let stat = Scenario::ho_stationary(2, natural()).unwrap();
        assert!(stat.density_quantile(0.5, 0.0).unwrap().abs() < 1e-10);
    }

    #[test]
    fn quantile_gaussian_reference_value() {
        // Phi(1) for the unit-width free packet.
        let free = Scenario::free_gaussian(natural()).unwrap();
        let q = 0.8413447460685429;
        assert_relative_eq!(free.density_quantile(q, 0.0).unwrap(), 1.0, epsilon = 1e-9);
    }

    #[test]
    fn quantile_rejects_out_of_range() {
        let free = Scenario::free_gaussian(natural()).unwrap();
        assert!(free.density_quantile(0.0, 0.0).is_err());
        assert!(free.density_quantile(1.0, 0.0).is_err());
        assert!(free.density_quantile(-0.3, 0.0).is_err());
    }

    /// Independent CDF oracle: Simpson quadrature of R^2 from far left.
    fn numeric_cdf(scn: &Scenario, x: f64, t: f64) -> f64 {
        let c = scn.packet_center(t);
        let w = scn.packet_width(t);
        density_integral(scn, t, c - 14.0 * w, x, 20_000)
    }

    #[test]
    fn quantile_inverts_numeric_cdf() {
        for scn in scenarios() {
            for &q in &[0.02, 0.2, 0.5, 0.77, 0.98] {
                for &t in &[0.0, 1.2] {
                    let x = scn.density_quantile(q, t).unwrap();
                    let back = numeric_cdf(&scn, x, t);
                    assert!(
                        (back - q).abs() < 1e-8,
                        "{scn:?} q={q} t={t}: round trip {back}"
                    );
                }
            }
        }
    }

    #[test]
    fn quantiles_symmetric_about_center() {
        for scn in scenarios() {
            for &q in &[0.1, 0.25, 0.4] {
                let t = 0.4;
                let c = scn.packet_center(t);
                let lo = scn.density_quantile(q, t).unwrap();
                let hi = scn.density_quantile(1.0 - q, t).unwrap();
                assert!(
                    ((lo - c) + (hi - c)).abs() < 1e-9,
                    "{scn:?} q={q}: {lo} and {hi} not symmetric about {c}"
                );
            }
        }
    }

    #[test]
    fn invalid_params_rejected() {
        let mut p = natural();
        p.mass = 0.0;
        assert!(Scenario::ho_coherent(p).is_err());
        let mut p = natural();
        p.omega = -1.0;
        assert!(Scenario::ho_stationary(0, p).is_err());
        let mut p = natural();
        p.sigma0 = 0.0;
        assert!(Scenario::free_gaussian(p).is_err());
    }

    #[test]
    fn hermite_polynomial_values() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert_eq!(hermite(1, 0.7), 1.4);
        assert_relative_eq!(hermite(2, 0.7), 4.0 * 0.49 - 2.0, epsilon = 1e-14);
        assert_relative_eq!(
            hermite(3, -1.3),
            8.0 * (-1.3f64).powi(3) - 12.0 * -1.3,
            epsilon = 1e-12
        );
        // Coefficient expansion agrees with the recurrence.
        for n in 0..=6 {
            let coeffs = hermite_coeffs(n);
            for &y in &[-2.2f64, -0.4, 0.0, 1.7] {
                let poly: f64 = coeffs
                    .iter()
                    .enumerate()
                    .map(|(p, c)| c * y.powi(p as i32))
                    .sum();
                assert_relative_eq!(poly, hermite(n, y), max_relative = 1e-10, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn stationary_cdf_limits() {
        for n in 0..=3 {
            assert!(stationary_cdf(n, -10.0).abs() < 1e-12);
            assert_relative_eq!(stationary_cdf(n, 10.0), 1.0, epsilon = 1e-12);
            assert_relative_eq!(stationary_cdf(n, 0.0), 0.5, epsilon = 1e-12);
        }
    }
}
