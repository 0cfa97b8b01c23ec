//! Oscillatory energy-to-time sums `S_k = sum_j c_j exp(i s E_j t_k)`.
//!
//! Two evaluation routes share one contract:
//!
//! * [`Method::Direct`] sums node by node. For each block of 64 consecutive
//!   times the phase `exp(i s E_j t)` is started exactly and advanced by a
//!   fixed rotation, so the reduction order over `j` is the node order and the
//!   result does not depend on how blocks are scheduled.
//! * [`Method::Nufft`] is a type-1 non-uniform FFT (Gaussian gridding on a
//!   twofold oversampled grid). It costs `O(N_E + N_t log N_t)` and is used
//!   for the long windows needed by narrow scattering resonances.
//!
//! [`Method::Auto`] picks the direct sum unless `N_E * N_t` exceeds
//! [`AUTO_DIRECT_LIMIT`].

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::EnergyGrid;
use super::state::SpectralState;
use super::time::{TemporalGrid, TimeKind};
use crate::error::{Error, Result};

/// Work size `N_E * N_t` above which [`Method::Auto`] switches to the NUFFT.
pub const AUTO_DIRECT_LIMIT: usize = 1 << 23;

const BLOCK: usize = 64;
// Gaussian spreading half-width in oversampled grid cells.
const SPREAD: i64 = 16;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Method {
    #[default]
    Auto,
    Direct,
    Nufft,
}

/// `S_k = sum_j c_j exp(i sign E_j t_k)` for every sample of `tgrid`.
pub fn oscillatory_sum(energies: &[f64], coeffs: &[Complex64], sign: f64, tgrid: &TemporalGrid, method: Method) -> Vec<Complex64> {
    assert_eq!(energies.len(), coeffs.len());
    let use_direct = match method {
        Method::Direct => true,
        Method::Nufft => false,
        Method::Auto => energies.len().saturating_mul(tgrid.len()) <= AUTO_DIRECT_LIMIT,
    };
    if use_direct {
        direct(energies, coeffs, sign, tgrid)
    } else {
        nufft(energies, coeffs, sign, tgrid)
    }
}

fn direct(energies: &[f64], coeffs: &[Complex64], sign: f64, tgrid: &TemporalGrid) -> Vec<Complex64> {
    let n_t = tgrid.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n_t];
    let dt = tgrid.dt();
    for (b, chunk) in out.chunks_mut(BLOCK).enumerate() {
        let t0 = tgrid.t(b * BLOCK);
        for (&e, &c) in energies.iter().zip(coeffs) {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let mut p = c * Complex64::from_polar(1.0, sign * e * t0);
            let z = Complex64::from_polar(1.0, sign * e * dt);
            for slot in chunk.iter_mut() {
                *slot += p;
                p *= z;
            }
        }
    }
    out
}

fn nufft(energies: &[f64], coeffs: &[Complex64], sign: f64, tgrid: &TemporalGrid) -> Vec<Complex64> {
    let n_t = tgrid.len();
    let dt = tgrid.dt();
    let (e_lo, e_hi) = energies
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &e| (a.min(e), b.max(e)));
    if energies.is_empty() {
        return vec![Complex64::new(0.0, 0.0); n_t];
    }
    let e_c = 0.5 * (e_lo + e_hi);
    // Modes m in [-M/2, M/2) map to k = m + M/2.
    let m_modes = n_t + (n_t % 2);
    let k_shift = (m_modes / 2) as f64;
    let m_r = (2 * m_modes).max(4 * SPREAD as usize);
    let r = m_r as f64 / m_modes as f64;
    let tau = PI * SPREAD as f64 / ((m_modes * m_modes) as f64 * r * (r - 0.5));
    let h = 2.0 * PI / m_r as f64;
    let t_min = tgrid.t_min();

    let mut fine = vec![Complex64::new(0.0, 0.0); m_r];
    for (&e, &c) in energies.iter().zip(coeffs) {
        let x = sign * (e - e_c) * dt;
        debug_assert!(x.abs() < PI);
        let d = c * Complex64::from_polar(1.0, sign * e * t_min + k_shift * x);
        let l0 = (x / h).round() as i64;
        for l in (l0 - SPREAD)..=(l0 + SPREAD) {
            let xi = l as f64 * h;
            let g = (-(x - xi).powi(2) / (4.0 * tau)).exp();
            fine[l.rem_euclid(m_r as i64) as usize] += d * g;
        }
    }
    let fft = FftPlanner::new().plan_fft_inverse(m_r);
    fft.process(&mut fine);

    let norm = h / (4.0 * PI * tau).sqrt();
    (0..n_t)
        .map(|k| {
            let m = k as i64 - m_modes as i64 / 2;
            let g = fine[m.rem_euclid(m_r as i64) as usize];
            let deconv = ((m * m) as f64 * tau).exp();
            g * (norm * deconv) * Complex64::from_polar(1.0, sign * e_c * k as f64 * dt)
        })
        .collect()
}

/// `eta(t_k) = (2 pi)^(-1/2) sum_j w_j exp(-+ i E_j t_k) sum_alpha conj(psi(E_j, alpha)) b(E_j, alpha)`,
/// with `-` for clock and `+` for arrival kinds.
///
/// `member` holds one gauge function sampled like the state,
/// `member[j * channels + alpha]`.
pub fn energy_time_amplitude(state: &SpectralState, member: &[Complex64], tgrid: &TemporalGrid, kind: TimeKind) -> Result<Vec<Complex64>> {
    energy_time_amplitude_with(state, member, tgrid, kind, Method::Auto)
}

pub fn energy_time_amplitude_with(
    state: &SpectralState,
    member: &[Complex64],
    tgrid: &TemporalGrid,
    kind: TimeKind,
    method: Method,
) -> Result<Vec<Complex64>> {
    let grid: &EnergyGrid = state.grid();
    if member.len() != state.amplitudes().len() {
        return Err(Error::IncompatibleGrid(format!(
            "gauge member has {} samples, state has {}",
            member.len(),
            state.amplitudes().len()
        )));
    }
    tgrid.check_nyquist(grid)?;
    let coeffs = projected_coefficients(state, member);
    Ok(oscillatory_sum(grid.nodes(), &coeffs, kind.phase_sign(), tgrid, method))
}

/// `(2 pi)^(-1/2) w_j f(E_j)` with `f = sum_alpha conj(psi) b`.
pub(crate) fn projected_coefficients(state: &SpectralState, member: &[Complex64]) -> Vec<Complex64> {
    let c = state.channels();
    let s = 1.0 / (2.0 * PI).sqrt();
    state
        .amplitudes()
        .chunks(c)
        .zip(member.chunks(c))
        .zip(state.grid().weights())
        .map(|((psi, b), &w)| psi.iter().zip(b).map(|(p, b)| p.conj() * b).sum::<Complex64>() * (w * s))
        .collect()
}
