//! Covariant temporal densities, their moments and the gauge families behind them.

pub mod density;
pub mod gauge;
pub mod kernel;
pub mod moments;
pub mod scan;
pub mod tau;

pub use density::{temporal_distribution, temporal_distribution_unchecked, temporal_distribution_with, REQUIRED_MASS};
pub use gauge::{check_gauge_normalization, GaugeFamily, NormalizationReport};
pub use kernel::{gauge_from_kernel, kernel_from_gauge, reconstruction_error, DensityKernel};
pub use moments::{derivative_norm, moments_distribution, moments_spectral, MomentReport, MomentSource};
pub use scan::{phase_gauge_scan, variance_gauge_scan, GaugeScan, ScanRow};
pub use tau::{tau_overlap, tau_resolution_mean, tau_state};
