//! Scattering on the half-line `r >= 0`: phase shifts, asymptotes and delays.

pub mod delay;
pub mod eigen;
pub mod potential;
pub mod profile;

pub use delay::{
    arrival_mean_relations, asymptotic_arrivals, first_arrival_distribution, inverse_speed_expectation, resolving_grid, smith_delay,
    wall_delay, ArrivalMeans, AsymptoticArrivals,
};
pub use eigen::{eigenfunction, free_eigenfunction, position_density, position_density_unchecked, PositionDensity};
pub use potential::{delta_phase_shift, delta_resonances, HalfLinePotential};
pub use profile::{map_asymptotic, reversed_incoming, AsymptoticTarget, ChannelTag, PhaseShiftProfile};
