//! Temporal densities `Pi(t) = sum_i |eta_i(t)|^2`.

use super::gauge::GaugeFamily;
use crate::error::{Error, Result};
use crate::spectral::{energy_time_amplitude_with, Method, SpectralState, TemporalDistribution, TemporalGrid, TimeKind};

/// Mass a window must hold before a distribution is accepted.
pub const REQUIRED_MASS: f64 = 0.999;

/// Temporal density of `state` under `gauge`; errors if the window holds
/// less than [`REQUIRED_MASS`].
pub fn temporal_distribution(state: &SpectralState, gauge: &GaugeFamily, tgrid: &TemporalGrid, kind: TimeKind) -> Result<TemporalDistribution> {
    let d = temporal_distribution_unchecked(state, gauge, tgrid, kind)?;
    d.check_mass(REQUIRED_MASS)?;
    Ok(d)
}

/// As [`temporal_distribution`] without the window-mass check, for partial
/// windows and plots.
pub fn temporal_distribution_unchecked(state: &SpectralState, gauge: &GaugeFamily, tgrid: &TemporalGrid, kind: TimeKind) -> Result<TemporalDistribution> {
    temporal_distribution_with(state, gauge, tgrid, kind, Method::Auto)
}

pub fn temporal_distribution_with(
    state: &SpectralState,
    gauge: &GaugeFamily,
    tgrid: &TemporalGrid,
    kind: TimeKind,
    method: Method,
) -> Result<TemporalDistribution> {
    check_gauge_grid(state, gauge)?;
    let mut density = vec![0.0; tgrid.len()];
    for b in gauge.members() {
        let eta = energy_time_amplitude_with(state, b, tgrid, kind, method)?;
        for (d, e) in density.iter_mut().zip(&eta) {
            *d += e.norm_sqr();
        }
    }
    TemporalDistribution::new(*tgrid, density, kind)
}

pub(crate) fn check_gauge_grid(state: &SpectralState, gauge: &GaugeFamily) -> Result<()> {
    if state.channels() != gauge.channels() || !state.grid().same_as(gauge.grid()) {
        return Err(Error::IncompatibleGrid("state and gauge live on different grids".into()));
    }
    Ok(())
}
