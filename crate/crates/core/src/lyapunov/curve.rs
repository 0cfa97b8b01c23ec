//! Lyapunov curves as one minus the accumulated arrival probability.

use crate::error::{invalid, Result};
use crate::observables::{temporal_distribution, GaugeFamily};
use crate::spectral::{SpectralState, TemporalDistribution, TemporalGrid, TimeKind};

/// Samples of `<psi_t| L |psi_t>` on a time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovCurve {
    grid: TemporalGrid,
    values: Vec<f64>,
}

impl LyapunovCurve {
    pub fn new(grid: TemporalGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid("curve length does not match the time grid"));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &TemporalGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Largest step `values[k+1] - values[k]`; non-positive for monotone curves.
    pub fn max_increase(&self) -> f64 {
        self.values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_monotone(&self, tol: f64) -> bool {
        self.max_increase() <= tol
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// `max |1 - first|, |last|`.
    pub fn endpoint_defect(&self) -> f64 {
        (1.0 - self.first()).abs().max(self.last().abs())
    }

    /// Sup distance to another curve on the same grid.
    pub fn max_deviation(&self, other: &LyapunovCurve) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// `max_k |L(t_k) + int_{t_min}^{t_k} Pi - 1|`.
    pub fn accumulation_defect(&self, dist: &TemporalDistribution) -> f64 {
        self.values
            .iter()
            .zip(dist.cumulative())
            .map(|(l, c)| (l + c - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `1 - int_{-inf}^t Pi(t') dt'` for the arrival density of `(state, gauge)`.
/// The window must hold the arrival mass (see [`crate::observables::REQUIRED_MASS`]).
pub fn lyapunov_curve(state: &SpectralState, gauge: &GaugeFamily, tgrid: &TemporalGrid) -> Result<LyapunovCurve> {
    let dist = temporal_distribution(state, gauge, tgrid, TimeKind::Arrival)?;
    curve_from_distribution(&dist)
}

/// The curve built from an already sampled arrival density.
pub fn curve_from_distribution(dist: &TemporalDistribution) -> Result<LyapunovCurve> {
    let values = dist.cumulative().into_iter().map(|c| 1.0 - c).collect();
    LyapunovCurve::new(*dist.grid(), values)
}
