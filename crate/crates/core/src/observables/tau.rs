//! The non-normalizable clock eigenfunctions `|tau>` of the minimal-variance observable.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::spectral::{EnergyGrid, SpectralState, TemporalGrid};

/// Components `(2 pi)^(-1/2) exp(-i E_j tau)` against the time-reversal-real basis.
pub fn tau_state(grid: &EnergyGrid, tau: f64) -> Vec<Complex64> {
    let s = 1.0 / (2.0 * PI).sqrt();
    grid.nodes().iter().map(|&e| Complex64::from_polar(s, -e * tau)).collect()
}

/// `<tau|psi>` for a single-channel state.
pub fn tau_overlap(state: &SpectralState, tau: f64) -> Result<Complex64> {
    if state.channels() != 1 {
        return Err(invalid("|tau> states are defined for one channel"));
    }
    let grid = state.grid();
    Ok(tau_state(grid, tau)
        .iter()
        .zip(state.amplitudes())
        .zip(grid.weights())
        .map(|((t, p), &w)| t.conj() * p * w)
        .sum())
}

/// Trapezoid quadrature of `int dtau tau |<tau|psi>|^2` over `tgrid`.
pub fn tau_resolution_mean(state: &SpectralState, tgrid: &TemporalGrid) -> Result<f64> {
    let n = tgrid.len();
    let mut acc = 0.0;
    for (k, tau) in tgrid.times().enumerate() {
        let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
        acc += w * tau * tau_overlap(state, tau)?.norm_sqr();
    }
    Ok(acc * tgrid.dt())
}
