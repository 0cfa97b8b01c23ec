//! Lyapunov operators: monotone accumulation of arrivals, the Strauss kernel,
//! and the obstruction to time-reversal invariance.

pub mod curve;
pub mod reversal;
pub mod strauss;

pub use curve::{curve_from_distribution, lyapunov_curve, LyapunovCurve};
pub use reversal::{no_invariant_lyapunov_certificate, reversal_identity_check, ReversalCheck, Verdict};
pub use strauss::{default_epsilon, strauss_expectation, StraussKernel};
