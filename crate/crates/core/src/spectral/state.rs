//! States in the energy representation.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use super::grid::EnergyGrid;
use crate::error::{invalid, Error, Result};

/// Amplitudes `psi(E_j, alpha)` on an energy grid, one column per
/// degeneracy channel. Stored node-major: `amps[j * channels + alpha]`.
///
/// Amplitudes are taken with respect to a time-reversal-real basis
/// (`|E_f>` on the free half-line, `|E_Theta>` in general), so complex
/// conjugation of the amplitudes realizes the time-reversal operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralState {
    grid: Arc<EnergyGrid>,
    channels: usize,
    amps: Vec<Complex64>,
}

impl SpectralState {
    pub fn new(grid: Arc<EnergyGrid>, channels: usize, amps: Vec<Complex64>) -> Result<Self> {
        if channels == 0 {
            return Err(invalid("a state needs at least one channel"));
        }
        if amps.len() != grid.len() * channels {
            return Err(Error::IncompatibleGrid(format!(
                "{} amplitudes for {} nodes x {} channels",
                amps.len(),
                grid.len(),
                channels
            )));
        }
        Ok(Self {
            grid,
            channels,
            amps,
        })
    }

    /// Samples `f(E, alpha)` at every node and channel.
    pub fn from_fn(grid: Arc<EnergyGrid>, channels: usize, f: impl Fn(f64, usize) -> Complex64) -> Result<Self> {
        let amps = grid
            .nodes()
            .iter()
            .flat_map(|&e| (0..channels).map(move |a| (e, a)))
            .map(|(e, a)| f(e, a))
            .collect();
        Self::new(grid, channels, amps)
    }

    pub fn grid(&self) -> &Arc<EnergyGrid> {
        &self.grid
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, node: usize, channel: usize) -> Complex64 {
        self.amps[node * self.channels + channel]
    }

    /// `sum_j w_j sum_alpha |psi(E_j, alpha)|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.probability_density()
            .iter()
            .zip(self.grid.weights())
            .map(|(p, w)| p * w)
            .sum()
    }

    /// `sum_alpha |psi(E_j, alpha)|^2` per node.
    pub fn probability_density(&self) -> Vec<f64> {
        self.amps
            .chunks(self.channels)
            .map(|c| c.iter().map(|a| a.norm_sqr()).sum())
            .collect()
    }

    /// `<self|other>` with the grid weights.
    pub fn inner(&self, other: &SpectralState) -> Result<Complex64> {
        self.check_compatible(other)?;
        let c = self.channels;
        Ok(self
            .amps
            .chunks(c)
            .zip(other.amps.chunks(c))
            .zip(self.grid.weights())
            .map(|((a, b), &w)| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum::<Complex64>() * w)
            .sum())
    }

    /// Expectation of a function of energy, `sum_j w_j f(E_j) sum_alpha |psi|^2`.
    pub fn energy_expectation(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.probability_density()
            .iter()
            .zip(self.grid.nodes())
            .zip(self.grid.weights())
            .map(|((p, &e), w)| w * p * f(e))
            .sum()
    }

    pub fn normalize(&self) -> Result<SpectralState> {
        let n = self.norm_sqr();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::DegenerateState);
        }
        let s = 1.0 / n.sqrt();
        Ok(self.map_amplitudes(|_, a| a * s))
    }

    /// Complex conjugation of the amplitudes: time reversal in a
    /// time-reversal-real basis. An involution.
    pub fn time_reverse(&self) -> SpectralState {
        self.map_amplitudes(|_, a| a.conj())
    }

    /// `psi_t(E) = exp(-i E t) psi(E)` (units with hbar = 1).
    pub fn evolve(&self, t: f64) -> SpectralState {
        self.map_amplitudes(|e, a| a * Complex64::from_polar(1.0, -e * t))
    }

    /// Multiplies every amplitude by a node-dependent phase `exp(i phase(E))`.
    pub fn rephase(&self, phase: impl Fn(f64) -> f64) -> SpectralState {
        self.map_amplitudes(|e, a| a * Complex64::from_polar(1.0, phase(e)))
    }

    /// Largest `|Im psi| / max |psi|`; zero for real states.
    pub fn max_imag_ratio(&self) -> f64 {
        let scale = self.amps.iter().map(|a| a.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        self.amps.iter().map(|a| a.im.abs()).fold(0.0, f64::max) / scale
    }

    pub(crate) fn map_amplitudes(&self, f: impl Fn(f64, Complex64) -> Complex64) -> SpectralState {
        let c = self.channels;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(i, &a)| f(self.grid.nodes()[i / c], a))
            .collect();
        SpectralState {
            grid: Arc::clone(&self.grid),
            channels: c,
            amps,
        }
    }

    pub(crate) fn check_compatible(&self, other: &SpectralState) -> Result<()> {
        if self.channels != other.channels || !self.grid.same_as(&other.grid) {
            return Err(Error::IncompatibleGrid("states live on different grids".into()));
        }
        Ok(())
    }
}

/// Parameters of the suppressed Gaussian packet
/// `psi(k) = N [1 - exp(-beta k^2)] exp(-(k - k0)^2 / (4 dk^2))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketParams {
    /// Central wavenumber; only its magnitude is used.
    pub k0: f64,
    /// Amplitude width in `k` (the `|psi|^2` standard deviation).
    pub dk: f64,
    /// Initial distance of the packet center from the origin.
    pub x0: f64,
    /// Low-momentum suppression; `0` disables the suppression factor.
    pub beta: f64,
}

impl PacketParams {
    /// `k0 = pi/2, dk = 0.045, x0 = 180, beta = 1/2`.
    pub fn fig1() -> Self {
        Self {
            k0: PI / 2.0,
            dk: 0.045,
            x0: 180.0,
            beta: 0.5,
        }
    }

    /// Real k-space envelope (without the position phase).
    pub fn envelope(&self, k: f64) -> f64 {
        let suppression = if self.beta > 0.0 {
            -(-self.beta * k * k).exp_m1()
        } else {
            1.0
        };
        let d = k - self.k0.abs();
        suppression * (-(d * d) / (4.0 * self.dk * self.dk)).exp()
    }

    /// `int_0^inf |psi(k)|^2 dk` by dense Gauss–Legendre quadrature in `k`.
    pub fn k_space_norm(&self) -> f64 {
        self.k_space_moment(|_| 1.0)
    }

    /// `int_0^inf f(k) |psi(k)|^2 dk`, unnormalized.
    pub fn k_space_moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        let k0 = self.k0.abs();
        let hi = k0 + 14.0 * self.dk;
        let lo = (k0 - 14.0 * self.dk).max(0.0);
        let mut breaks = Vec::new();
        if lo > 0.0 {
            breaks.extend((0..=32).map(|i| lo * i as f64 / 32.0));
        } else {
            breaks.push(0.0);
        }
        let n_core = 256;
        breaks.extend((1..=n_core).map(|i| lo + (hi - lo) * i as f64 / n_core as f64));
        let g = EnergyGrid::gauss_legendre(&breaks, 12).expect("valid k panels");
        g.integrate(|k| {
            let e = self.envelope(k);
            f(k) * e * e
        })
    }
}

/// Normalized incoming packet in the energy representation.
///
/// `psi(E_j) = psi(k_j) / sqrt(k_j) * exp(+i k_j x0)` with `k_j = sqrt(2 E_j)`;
/// the `1/sqrt(k)` factor is the Jacobian of `dE = k dk`, and the sign of the
/// position phase makes the packet move toward the origin, arriving near
/// `x0 / |k0|`. A node at exactly `E = 0` gets amplitude zero.
pub fn gaussian_packet(grid: Arc<EnergyGrid>, params: PacketParams) -> Result<SpectralState> {
    if !(params.dk > 0.0) {
        return Err(invalid(format!("packet width dk must be positive, got {}", params.dk)));
    }
    if !(params.beta >= 0.0) {
        return Err(invalid(format!("beta must be non-negative, got {}", params.beta)));
    }
    if !params.k0.is_finite() || !params.x0.is_finite() {
        return Err(invalid("k0 and x0 must be finite"));
    }
    let state = SpectralState::from_fn(grid, 1, |e, _| {
        if e <= 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let k = (2.0 * e).sqrt();
        Complex64::from_polar(params.envelope(k) / k.sqrt(), k * params.x0)
    })?;
    let analytic = params.k_space_norm();
    let captured = state.norm_sqr() / analytic;
    if !(captured >= 0.99) {
        return Err(Error::GridCoverage {
            captured,
            required: 0.99,
        });
    }
    state.normalize()
}
