//! Sampled phase shifts and the asymptotic maps they generate.

use std::sync::Arc;

use num_complex::Complex64;

use super::potential::HalfLinePotential;
use crate::error::{invalid, Error, Result};
use crate::spectral::{EnergyGrid, SpectralState};

/// Which energy eigenbasis a set of amplitudes refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelTag {
    /// `|E_+>`: amplitudes are those of the free incoming asymptote.
    In,
    /// `|E_->`: amplitudes of the free outgoing asymptote.
    Out,
    /// `|E_Theta> = e^{-i delta} |E_+>`, the time-reversal-real basis.
    Theta,
}

/// Target of [`map_asymptotic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsymptoticTarget {
    /// `psi_out = e^{2 i delta} psi_in`.
    Out,
    /// `psi_io = e^{i delta} psi_in`, halfway between in and out.
    Io,
}

/// `delta(E_j)` and `d delta/dE (E_j)` on an energy grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftProfile {
    grid: Arc<EnergyGrid>,
    delta: Vec<f64>,
    derivative: Vec<f64>,
}

impl PhaseShiftProfile {
    /// Samples `potential` at every node; all nodes must be positive.
    pub fn new(grid: Arc<EnergyGrid>, potential: &HalfLinePotential) -> Result<Self> {
        let (delta, derivative) = grid
            .nodes()
            .iter()
            .map(|&e| potential.phase_shift(e))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(Self {
            grid,
            delta,
            derivative,
        })
    }

    /// Profile from samples of an arbitrary phase shift.
    pub fn from_samples(grid: Arc<EnergyGrid>, delta: Vec<f64>, derivative: Vec<f64>) -> Result<Self> {
        if delta.len() != grid.len() || derivative.len() != grid.len() {
            return Err(invalid("phase samples must match the grid"));
        }
        Ok(Self {
            grid,
            delta,
            derivative,
        })
    }

    pub fn grid(&self) -> &Arc<EnergyGrid> {
        &self.grid
    }

    pub fn delta(&self) -> &[f64] {
        &self.delta
    }

    pub fn derivative(&self) -> &[f64] {
        &self.derivative
    }

    /// Largest jump `|delta_{j+1} - delta_j|` between neighbouring nodes.
    pub fn max_jump(&self) -> f64 {
        self.delta.windows(2).map(|w| (w[1] - w[0]).abs()).fold(0.0, f64::max)
    }

    pub(crate) fn check_state(&self, state: &SpectralState) -> Result<()> {
        if !state.grid().same_as(&self.grid) {
            return Err(Error::IncompatibleGrid("profile and state grids differ".into()));
        }
        Ok(())
    }

    /// Multiplies amplitudes by `exp(i m delta(E))`, channel by channel.
    pub(crate) fn apply(&self, state: &SpectralState, m: f64) -> Result<SpectralState> {
        self.check_state(state)?;
        let c = state.channels();
        let amps = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, a)| a * Complex64::from_polar(1.0, m * self.delta[i / c]))
            .collect();
        SpectralState::new(Arc::clone(state.grid()), c, amps)
    }
}

/// Free asymptote of `state_in` after the collision (`Out`) or the
/// interpolating one (`Io`). Pure phases, so every `|psi(E_j)|` is kept.
pub fn map_asymptotic(state_in: &SpectralState, profile: &PhaseShiftProfile, target: AsymptoticTarget) -> Result<SpectralState> {
    match target {
        AsymptoticTarget::Out => profile.apply(state_in, 2.0),
        AsymptoticTarget::Io => profile.apply(state_in, 1.0),
    }
}

/// In-asymptote of the time-reversed scattering state: `conj(psi_out)`.
/// Its outgoing asymptote is `conj(psi_in)`, so reversal swaps the in and
/// out descriptions rather than negating each one.
pub fn reversed_incoming(state_in: &SpectralState, profile: &PhaseShiftProfile) -> Result<SpectralState> {
    Ok(map_asymptotic(state_in, profile, AsymptoticTarget::Out)?.time_reverse())
}
