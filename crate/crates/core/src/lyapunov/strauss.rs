//! The regularized Strauss kernel `(i / 2 pi) / (E - E' + i eps)`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::curve::LyapunovCurve;
use crate::error::{invalid, Error, Result};
use crate::spectral::{EnergyGrid, SpectralState, TemporalGrid};

/// Strauss kernel on a grid, diagonal in the channel index.
///
/// Expectations use singularity subtraction. For each node `j` the grid
/// rule sums the smooth remainder
/// `(phi(E') - phi_j - phi'_j (E' - E_j)) / (E_j - E' + i eps)` and the
/// subtracted Taylor terms are integrated exactly over the grid interval.
/// This keeps the quadrature accurate when `eps` is far below the node
/// spacing.
#[derive(Debug, Clone)]
pub struct StraussKernel {
    grid: Arc<EnergyGrid>,
    eps: f64,
    // Off-diagonal w_j' / (E_j - E_j' + i eps); zero diagonal.
    q: DMatrix<Complex64>,
    // Coefficients of phi_j and phi'_j in the subtracted terms.
    c0: Vec<Complex64>,
    c1: Vec<Complex64>,
}

impl StraussKernel {
    pub fn new(grid: Arc<EnergyGrid>, eps: f64) -> Result<Self> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(invalid(format!("eps must be positive, got {eps}")));
        }
        let e = grid.nodes();
        let w = grid.weights();
        let n = e.len();
        let ie = Complex64::new(0.0, eps);
        let (lo, hi) = (grid.lo(), grid.hi());
        let q = DMatrix::from_fn(n, n, |j, jp| if j == jp { Complex64::new(0.0, 0.0) } else { w[jp] / (e[j] - e[jp] + ie) });
        let mut c0 = Vec::with_capacity(n);
        let mut c1 = Vec::with_capacity(n);
        for j in 0..n {
            // int dE' 1 / (E_j - E' + i eps) and int dE' (E' - E_j) / (E_j - E' + i eps).
            let log = (e[j] - lo + ie).ln() - (e[j] - hi + ie).ln();
            let lin = ie * log - (hi - lo);
            let (mut s0, mut s1) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for jp in 0..n {
                if jp != j {
                    s0 += q[(j, jp)];
                    s1 += q[(j, jp)] * (e[jp] - e[j]);
                }
            }
            c0.push(log - s0);
            c1.push(lin - s1);
        }
        Ok(Self { grid, eps, q, c0, c1 })
    }

    pub fn grid(&self) -> &Arc<EnergyGrid> {
        &self.grid
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Sampled kernel `K_jj' = (i / 2 pi) / (E_j - E_j' + i eps)`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let e = self.grid.nodes();
        let ie = Complex64::new(0.0, self.eps);
        let c = Complex64::new(0.0, 1.0 / (2.0 * PI));
        DMatrix::from_fn(e.len(), e.len(), |j, jp| c / (e[j] - e[jp] + ie))
    }

    /// Smallest eigenvalue of `W^(1/2) K W^(1/2)`. `K` is a Gram matrix
    /// (`(2 pi)^-1 int_0^inf e^{i(E-E')s - eps s} ds`), so this is `>= 0` up
    /// to rounding.
    pub fn min_weighted_eigenvalue(&self) -> f64 {
        let s: Vec<f64> = self.grid.weights().iter().map(|w| w.sqrt()).collect();
        let mut k = self.matrix();
        for j in 0..k.nrows() {
            for jp in 0..k.ncols() {
                k[(j, jp)] *= s[j] * s[jp];
            }
        }
        k.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `<phi| L |phi>` for one channel, given `phi` and `phi'` at the nodes.
    fn expectation(&self, phi: &[Complex64], dphi: &[Complex64]) -> f64 {
        let w = self.grid.weights();
        let qphi = &self.q * DVector::from_column_slice(phi);
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..phi.len() {
            let i_j = qphi[j] + self.c0[j] * phi[j] + self.c1[j] * dphi[j];
            acc += w[j] * phi[j].conj() * i_j;
        }
        (Complex64::new(0.0, 1.0 / (2.0 * PI)) * acc).re
    }
}

/// `<psi_t| L_S |psi_t>` for `psi_t = e^{-iEt} psi`, summed over channels.
pub fn strauss_expectation(state: &SpectralState, kernel: &StraussKernel, tgrid: &TemporalGrid) -> Result<LyapunovCurve> {
    if !state.grid().same_as(kernel.grid()) {
        return Err(Error::IncompatibleGrid("state and Strauss kernel grids differ".into()));
    }
    let c = state.channels();
    let grid = state.grid();
    let dpsi = grid.derivative(state.amplitudes(), c);
    let values = tgrid
        .times()
        .map(|t| {
            (0..c)
                .map(|a| {
                    let mut phi = Vec::with_capacity(grid.len());
                    let mut dphi = Vec::with_capacity(grid.len());
                    for (j, &e) in grid.nodes().iter().enumerate() {
                        let rot = Complex64::from_polar(1.0, -e * t);
                        let p = state.amplitudes()[j * c + a];
                        phi.push(rot * p);
                        // d/dE (e^{-iEt} psi) = e^{-iEt} (psi' - i t psi)
                        dphi.push(rot * (dpsi[j * c + a] - Complex64::new(0.0, t) * p));
                    }
                    kernel.expectation(&phi, &dphi)
                })
                .sum()
        })
        .collect();
    LyapunovCurve::new(*tgrid, values)
}

/// `1e-3` times the energy standard deviation of `state`.
pub fn default_epsilon(state: &SpectralState) -> f64 {
    let n = state.norm_sqr();
    let m1 = state.energy_expectation(|e| e) / n;
    let m2 = state.energy_expectation(|e| e * e) / n;
    1e-3 * (m2 - m1 * m1).max(0.0).sqrt()
}
