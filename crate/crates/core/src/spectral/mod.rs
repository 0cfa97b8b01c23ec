//! Grids, states, quadrature and the energy-to-time transform.

pub mod grid;
pub mod quadrature;
pub mod state;
pub mod time;
pub mod transform;

pub use grid::{adaptive_breakpoints, build_energy_grid, EnergyGrid, QuadratureScheme};
pub use state::{gaussian_packet, PacketParams, SpectralState};
pub use time::{nyquist_limit, TemporalDistribution, TemporalGrid, TimeKind};
pub use transform::{energy_time_amplitude, energy_time_amplitude_with, oscillatory_sum, Method};
