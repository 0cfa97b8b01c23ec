//! Gauge families `b_i(E, alpha)` decomposing a covariant density kernel.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::spectral::EnergyGrid;

/// Functions `b_i(E_j, alpha)`, `i = 0..m`, sampled per node and channel.
///
/// The density operator built from the family is
/// `Pi_0 = (2 pi)^-1 sum_i sum_{alpha alpha'} b_i(E,alpha) |E,alpha><E',alpha'| conj(b_i(E',alpha'))`;
/// it integrates to one for every state iff the completeness relation
/// `sum_i b_i(E,alpha) conj(b_i(E,alpha')) = delta_{alpha alpha'}` holds at
/// every node.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFamily {
    grid: Arc<EnergyGrid>,
    channels: usize,
    members: Vec<Vec<Complex64>>,
}

/// Outcome of [`check_gauge_normalization`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationReport {
    /// Largest entry of `|sum_i b_i b_i^dagger - 1|` over nodes.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Completeness tolerance for [`check_gauge_normalization`].
pub const NORMALIZATION_TOL: f64 = 1e-10;

impl GaugeFamily {
    pub fn new(grid: Arc<EnergyGrid>, channels: usize, members: Vec<Vec<Complex64>>) -> Result<Self> {
        if channels == 0 || members.is_empty() {
            return Err(invalid("a gauge family needs at least one channel and one member"));
        }
        let n = grid.len() * channels;
        if let Some(m) = members.iter().find(|m| m.len() != n) {
            return Err(Error::IncompatibleGrid(format!(
                "gauge member has {} samples, expected {n}",
                m.len()
            )));
        }
        Ok(Self {
            grid,
            channels,
            members,
        })
    }

    /// `m` members sampled from `f(E, member, channel)`.
    pub fn from_fn(grid: Arc<EnergyGrid>, channels: usize, m: usize, f: impl Fn(f64, usize, usize) -> Complex64) -> Result<Self> {
        let members = (0..m)
            .map(|i| {
                grid.nodes()
                    .iter()
                    .flat_map(|&e| (0..channels).map(move |a| (e, a)))
                    .map(|(e, a)| f(e, i, a))
                    .collect()
            })
            .collect();
        Self::new(grid, channels, members)
    }

    /// The minimal-variance family: `b_i(E, alpha) = delta_{i alpha}`
    /// (a single `b = 1` without degeneracy).
    pub fn unity(grid: Arc<EnergyGrid>, channels: usize) -> Self {
        Self::from_fn(grid, channels, channels, |_, i, a| Complex64::new(if i == a { 1.0 } else { 0.0 }, 0.0))
            .expect("unity family is well formed")
    }

    /// Single-channel pure phase `b(E) = exp(i phi(E))`.
    pub fn phase(grid: Arc<EnergyGrid>, phi: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, 1, 1, |e, _, _| Complex64::from_polar(1.0, phi(e))).expect("phase family is well formed")
    }

    /// `b(E) = exp(i lambda E)`: shifts clock readings by `lambda`.
    pub fn linear_phase(grid: Arc<EnergyGrid>, lambda: f64) -> Self {
        Self::phase(grid, move |e| lambda * e)
    }

    /// `b(E) = exp(i mu E^2)`.
    pub fn quadratic_phase(grid: Arc<EnergyGrid>, mu: f64) -> Self {
        Self::phase(grid, move |e| mu * e * e)
    }

    /// `b(E) = exp(i k a)`, `k = sqrt(2E)`: first arrivals at `x = a` on the
    /// free half-line.
    pub fn first_arrival(grid: Arc<EnergyGrid>, a: f64) -> Self {
        Self::phase(grid, move |e| (2.0 * e).sqrt() * a)
    }

    /// The pair `{cos theta(E), sin theta(E)}`.
    pub fn rotation(grid: Arc<EnergyGrid>, theta: impl Fn(f64) -> f64) -> Self {
        Self::from_fn(grid, 1, 2, |e, i, _| {
            let t = theta(e);
            Complex64::new(if i == 0 { t.cos() } else { t.sin() }, 0.0)
        })
        .expect("rotation family is well formed")
    }

    pub fn grid(&self) -> &Arc<EnergyGrid> {
        &self.grid
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn member(&self, i: usize) -> &[Complex64] {
        &self.members[i]
    }

    pub fn members(&self) -> &[Vec<Complex64>] {
        &self.members
    }

    /// Complex-conjugated family: the gauge of `Theta Pi_0 Theta`.
    pub fn conj(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            channels: self.channels,
            members: self
                .members
                .iter()
                .map(|m| m.iter().map(|b| b.conj()).collect())
                .collect(),
        }
    }

    /// Multiplies every member by `exp(i phi(E))` (a change of energy basis phases).
    pub fn rephase(&self, phi: impl Fn(f64) -> f64) -> Self {
        let c = self.channels;
        let nodes = self.grid.nodes();
        Self {
            grid: Arc::clone(&self.grid),
            channels: c,
            members: self
                .members
                .iter()
                .map(|m| {
                    m.iter()
                        .enumerate()
                        .map(|(k, &b)| b * Complex64::from_polar(1.0, phi(nodes[k / c])))
                        .collect()
                })
                .collect(),
        }
    }

    /// New members `b'_i = sum_k u[i][k] b_k` for a mixing matrix `u`.
    pub fn mix(&self, u: &[Vec<Complex64>]) -> Result<Self> {
        let m = self.members.len();
        if u.iter().any(|row| row.len() != m) || u.is_empty() {
            return Err(invalid("mixing matrix must have one column per member"));
        }
        let n = self.members[0].len();
        let members = u
            .iter()
            .map(|row| {
                (0..n)
                    .map(|s| row.iter().zip(&self.members).map(|(c, b)| c * b[s]).sum())
                    .collect()
            })
            .collect();
        Self::new(Arc::clone(&self.grid), self.channels, members)
    }

    /// Grid analogue of the finite-variance condition: every difference
    /// quotient `sum_i |Delta b_i / Delta E|^2` between neighbouring nodes is finite.
    pub fn is_admissible(&self) -> bool {
        let c = self.channels;
        let nodes = self.grid.nodes();
        nodes.windows(2).enumerate().all(|(j, w)| {
            let de = w[1] - w[0];
            (0..c).all(|a| {
                let s: f64 = self
                    .members
                    .iter()
                    .map(|b| ((b[(j + 1) * c + a] - b[j * c + a]) / de).norm_sqr())
                    .sum();
                s.is_finite()
            })
        })
    }
}

/// Largest deviation of `sum_i b_i(E,alpha) conj(b_i(E,alpha'))` from
/// `delta_{alpha alpha'}` over all nodes; passes below [`NORMALIZATION_TOL`].
pub fn check_gauge_normalization(gauge: &GaugeFamily) -> NormalizationReport {
    let c = gauge.channels;
    let mut max_dev: f64 = 0.0;
    for j in 0..gauge.grid.len() {
        for a in 0..c {
            for ap in 0..c {
                let s: Complex64 = gauge
                    .members
                    .iter()
                    .map(|b| b[j * c + a] * b[j * c + ap].conj())
                    .sum();
                let target = if a == ap { 1.0 } else { 0.0 };
                let dev = (s - target).norm();
                if !dev.is_finite() {
                    max_dev = f64::INFINITY;
                }
                max_dev = max_dev.max(dev);
            }
        }
    }
    NormalizationReport {
        max_deviation: max_dev,
        pass: max_dev < NORMALIZATION_TOL,
    }
}
