//! Smith delays, arrival means of the asymptotes and first arrivals at `x = a`.

use std::sync::Arc;

use super::potential::HalfLinePotential;
use super::profile::{map_asymptotic, AsymptoticTarget, PhaseShiftProfile};
use crate::error::Result;
use crate::observables::{moments_distribution, temporal_distribution, GaugeFamily};
use crate::spectral::{adaptive_breakpoints, EnergyGrid, SpectralState, TemporalDistribution, TemporalGrid, TimeKind};

/// `2 int dE delta'(E) |psi_in(E)|^2`, summed over channels.
pub fn smith_delay(state_in: &SpectralState, profile: &PhaseShiftProfile) -> Result<f64> {
    profile.check_state(state_in)?;
    let w = state_in.grid().weights();
    Ok(2.0
        * state_in
            .probability_density()
            .iter()
            .zip(profile.derivative())
            .zip(w)
            .map(|((p, d), w)| w * d * p)
            .sum::<f64>())
}

/// `<1/|v|> = int dE |psi|^2 / sqrt(2E)`.
pub fn inverse_speed_expectation(state: &SpectralState) -> f64 {
    state.energy_expectation(|e| 1.0 / (2.0 * e).sqrt())
}

/// `-2 a <1/|v|>`: the delay of a hard wall at `a`.
pub fn wall_delay(state: &SpectralState, a: f64) -> f64 {
    -2.0 * a * inverse_speed_expectation(state)
}

/// Origin-arrival densities (`b = 1`) of the three free asymptotes.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticArrivals {
    pub incoming: TemporalDistribution,
    pub outgoing: TemporalDistribution,
    pub interpolating: TemporalDistribution,
}

pub fn asymptotic_arrivals(state_in: &SpectralState, profile: &PhaseShiftProfile, tgrid: &TemporalGrid) -> Result<AsymptoticArrivals> {
    let gauge = GaugeFamily::unity(Arc::clone(state_in.grid()), state_in.channels());
    let out = map_asymptotic(state_in, profile, AsymptoticTarget::Out)?;
    let io = map_asymptotic(state_in, profile, AsymptoticTarget::Io)?;
    Ok(AsymptoticArrivals {
        incoming: temporal_distribution(state_in, &gauge, tgrid, TimeKind::Arrival)?,
        outgoing: temporal_distribution(&out, &gauge, tgrid, TimeKind::Arrival)?,
        interpolating: temporal_distribution(&io, &gauge, tgrid, TimeKind::Arrival)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrivalMeans {
    pub mean_in: f64,
    pub mean_out: f64,
    pub mean_io: f64,
    /// Smith delay from the phase derivative.
    pub delay: f64,
}

impl ArrivalMeans {
    /// `|(mean_out - mean_in) - delay| / max(|delay|, tiny)`.
    pub fn identity_error(&self) -> f64 {
        ((self.mean_out - self.mean_in) - self.delay).abs() / self.delay.abs().max(f64::MIN_POSITIVE)
    }

    /// `|mean_io - (mean_in + mean_out)/2|`.
    pub fn interpolation_error(&self) -> f64 {
        (self.mean_io - 0.5 * (self.mean_in + self.mean_out)).abs()
    }

    /// Tolerance `1e-4 max(1, |delay|)` for [`Self::interpolation_error`].
    pub fn interpolation_tolerance(&self) -> f64 {
        1e-4 * self.delay.abs().max(1.0)
    }

    /// True when `mean_io` lies strictly between the other two means.
    pub fn io_between(&self) -> bool {
        let (lo, hi) = if self.mean_in < self.mean_out {
            (self.mean_in, self.mean_out)
        } else {
            (self.mean_out, self.mean_in)
        };
        lo < self.mean_io && self.mean_io < hi
    }
}

/// Arrival means of the three asymptotes from their sampled densities,
/// next to the Smith delay.
pub fn arrival_mean_relations(state_in: &SpectralState, profile: &PhaseShiftProfile, tgrid: &TemporalGrid) -> Result<ArrivalMeans> {
    let arr = asymptotic_arrivals(state_in, profile, tgrid)?;
    Ok(ArrivalMeans {
        mean_in: moments_distribution(&arr.incoming)?.mean,
        mean_out: moments_distribution(&arr.outgoing)?.mean,
        mean_io: moments_distribution(&arr.interpolating)?.mean,
        delay: smith_delay(state_in, profile)?,
    })
}

/// Density of first arrivals at `x = a` on the free half-line: the arrival
/// density with gauge `b(E) = e^{ika}`. `a = 0` is the origin observable.
pub fn first_arrival_distribution(state: &SpectralState, a: f64, tgrid: &TemporalGrid) -> Result<TemporalDistribution> {
    if !(a >= 0.0) {
        return Err(crate::error::invalid(format!("arrival position must be >= 0, got {a}")));
    }
    let gauge = GaugeFamily::first_arrival(Arc::clone(state.grid()), a);
    temporal_distribution(state, &gauge, tgrid, TimeKind::Arrival)
}

/// Gauss–Legendre grid on `[lo, hi]` whose panels shrink around every
/// narrow resonance of `potential`, so that `delta'` is resolved.
pub fn resolving_grid(potential: &HalfLinePotential, lo: f64, hi: f64, base_width: f64, nodes_per_panel: usize) -> Result<EnergyGrid> {
    let features: Vec<(f64, f64)> = potential
        .resonances(hi)
        .into_iter()
        .filter(|(e, w)| *e > lo - 10.0 * w && *e < hi + 10.0 * w)
        .collect();
    let breaks = adaptive_breakpoints(lo, hi, base_width, &features)?;
    EnergyGrid::gauss_legendre(&breaks, nodes_per_panel)
}
