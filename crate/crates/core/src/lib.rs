//! Covariant clock and arrival-time observables on discretized energy spectra.
//!
//! Everything is spectral: states are amplitudes on an [`EnergyGrid`], time
//! densities come from oscillatory energy-to-time sums, and scattering enters
//! only through phase shifts. Units have `hbar = m = 1`.
//!
//! * [`spectral`]: grids, states, time grids and the transform.
//! * [`observables`]: gauge families, density kernels, temporal
//!   distributions, moments, `|tau>` states and variance scans.
//! * [`halfline`]: half-line eigenfunctions, delta-barrier phase shifts,
//!   asymptotic maps, Smith delays and first arrivals.
//! * [`lyapunov`]: accumulation curves, the Strauss kernel and the
//!   time-reversal certificate.

// `!(x > 0.0)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod halfline;
pub mod lyapunov;
pub mod observables;
pub mod spectral;

pub use error::{Error, Result};
pub use spectral::{
    build_energy_grid, gaussian_packet, EnergyGrid, PacketParams, SpectralState, TemporalDistribution, TemporalGrid, TimeKind,
};
