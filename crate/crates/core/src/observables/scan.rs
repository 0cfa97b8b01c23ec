//! Variance of clock readings across one-parameter families of phase gauges.

use super::gauge::GaugeFamily;
use super::moments::{derivative_norm, moments_spectral};
use crate::error::{Error, Result};
use crate::spectral::{SpectralState, TimeKind};

/// Relative imaginary part above which a state counts as non-real.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub param: f64,
    pub mean: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeScan {
    pub rows: Vec<ScanRow>,
    /// `int |psi'|^2 dE`, the lower bound for real states; `None` otherwise.
    pub floor: Option<f64>,
}

impl GaugeScan {
    /// Row with the smallest variance (first one on ties).
    pub fn argmin(&self) -> Option<ScanRow> {
        self.rows
            .iter()
            .copied()
            .fold(None, |best: Option<ScanRow>, r| match best {
                Some(b) if b.variance <= r.variance => Some(b),
                _ => Some(r),
            })
    }

    /// `(max - min) / min` of the variances.
    pub fn relative_spread(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r.variance), b.max(r.variance)));
        (hi - lo) / lo
    }
}

/// Clock variance under `b(E) = exp(i phi(E; p))` (times the identity over
/// channels) for each `p` in `params`. The state must be real.
pub fn variance_gauge_scan(state: &SpectralState, phi: impl Fn(f64, f64) -> f64, params: &[f64]) -> Result<GaugeScan> {
    let r = state.max_imag_ratio();
    if r > REAL_TOL {
        return Err(Error::NonRealState { max_imag: r });
    }
    let mut scan = phase_gauge_scan(state, phi, params)?;
    scan.floor = Some(derivative_norm(state) / state.norm_sqr());
    Ok(scan)
}

/// Like [`variance_gauge_scan`] for arbitrary states; no floor is reported.
pub fn phase_gauge_scan(state: &SpectralState, phi: impl Fn(f64, f64) -> f64, params: &[f64]) -> Result<GaugeScan> {
    let base = GaugeFamily::unity(state.grid().clone(), state.channels());
    let rows = params
        .iter()
        .map(|&p| {
            let m = moments_spectral(state, &base.rephase(|e| phi(e, p)), TimeKind::Clock)?;
            Ok(ScanRow {
                param: p,
                mean: m.mean,
                variance: m.variance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GaugeScan { rows, floor: None })
}
