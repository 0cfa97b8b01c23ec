//! Density kernels `K = sum_i b_i b_i^dagger` and their Schmidt factorization.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::gauge::GaugeFamily;
use crate::error::{invalid, Error, Result};
use crate::spectral::{EnergyGrid, SpectralState};

/// Hermitian tolerance, relative to the largest entry.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative eigenvalue threshold for positivity and numerical rank.
pub const RANK_TOL: f64 = 1e-10;

/// `2 pi <E,alpha| Pi_0 |E',alpha'>` sampled on the composite index
/// `j * channels + alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityKernel {
    grid: Arc<EnergyGrid>,
    channels: usize,
    matrix: DMatrix<Complex64>,
}

impl DensityKernel {
    /// Wraps a matrix, rejecting non-square or non-Hermitian input.
    pub fn new(grid: Arc<EnergyGrid>, channels: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = grid.len() * channels;
        if channels == 0 || matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::IncompatibleGrid(format!(
                "kernel is {}x{}, expected {n}x{n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let asym = hermitian_defect(&matrix);
        let scale = max_abs(&matrix).max(1.0);
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(Self {
            grid,
            channels,
            matrix,
        })
    }

    pub fn grid(&self) -> &Arc<EnergyGrid> {
        &self.grid
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Positive semidefinite within `RANK_TOL * max |lambda|`.
    pub fn is_psd(&self) -> bool {
        let ev = self.eigenvalues();
        let top = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        !ev.first().is_some_and(|&m| !(m >= -RANK_TOL * top))
    }

    /// Largest deviation of the channel blocks on the diagonal from the identity.
    pub fn channel_diagonal_defect(&self) -> f64 {
        let c = self.channels;
        let mut dev: f64 = 0.0;
        for j in 0..self.grid.len() {
            for a in 0..c {
                for ap in 0..c {
                    let target = if a == ap { 1.0 } else { 0.0 };
                    dev = dev.max((self.matrix[(j * c + a, j * c + ap)] - target).norm());
                }
            }
        }
        dev
    }

    /// `<psi| Pi_0 |psi> = (2 pi)^-1 sum w_j w_j' conj(psi_j) K_jj' psi_j'`,
    /// the density at `t = 0`.
    pub fn expectation(&self, state: &SpectralState) -> Result<f64> {
        if !state.grid().same_as(&self.grid) || state.channels() != self.channels {
            return Err(Error::IncompatibleGrid("state and kernel grids differ".into()));
        }
        let v = weighted(state);
        let kv = &self.matrix * &v;
        Ok(v.dotc(&kv).re / (2.0 * std::f64::consts::PI))
    }

    /// Kernel of the complex-conjugated family, `conj(K)`.
    pub fn conj(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            channels: self.channels,
            matrix: self.matrix.map(|z| z.conj()),
        }
    }

    /// `-conj(K)`.
    pub fn negated_conj(&self) -> Self {
        Self {
            grid: Arc::clone(&self.grid),
            channels: self.channels,
            matrix: self.matrix.map(|z| -z.conj()),
        }
    }
}

fn weighted(state: &SpectralState) -> DVector<Complex64> {
    let c = state.channels();
    let w = state.grid().weights();
    DVector::from_iterator(
        state.amplitudes().len(),
        state.amplitudes().iter().enumerate().map(|(i, a)| a * w[i / c]),
    )
}

pub(crate) fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0, |a, z| a.max(z.norm()))
}

/// `K = sum_i b_i b_i^dagger`, PSD by construction.
pub fn kernel_from_gauge(gauge: &GaugeFamily) -> DensityKernel {
    let n = gauge.grid().len() * gauge.channels();
    let mut k = DMatrix::<Complex64>::zeros(n, n);
    for b in gauge.members() {
        let v = DVector::from_column_slice(b);
        k.gerc(Complex64::new(1.0, 0.0), &v, &v, Complex64::new(1.0, 0.0));
    }
    // Symmetrize so the stored matrix is exactly Hermitian.
    let kh = k.adjoint();
    k = (k + kh) * Complex64::new(0.5, 0.0);
    DensityKernel {
        grid: Arc::clone(gauge.grid()),
        channels: gauge.channels(),
        matrix: k,
    }
}

/// Factorizes a PSD kernel as `sum_i b_i b_i^dagger` by Schmidt
/// orthogonalization of the node vectors in the kernel inner product
/// (Cholesky with diagonal pivoting). The number of members is the numerical
/// rank at [`RANK_TOL`]; members are canonical only up to unitary mixing.
pub fn gauge_from_kernel(kernel: &DensityKernel) -> Result<GaugeFamily> {
    let ev = kernel.eigenvalues();
    let top = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let min = ev.first().copied().unwrap_or(0.0);
    if min < -RANK_TOL * top {
        return Err(Error::NotPositive { min_eigenvalue: min });
    }
    if top == 0.0 {
        return Err(invalid("zero kernel has no gauge family"));
    }
    let tol = RANK_TOL * top;
    let n = kernel.dim();
    let mut r = kernel.matrix.clone();
    let mut members: Vec<Vec<Complex64>> = Vec::new();
    loop {
        let (p, d) = (0..n)
            .map(|i| (i, r[(i, i)].re))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        if d <= tol || members.len() == n {
            break;
        }
        let s = 1.0 / d.sqrt();
        let b: Vec<Complex64> = (0..n).map(|i| r[(i, p)] * s).collect();
        for i in 0..n {
            for j in 0..n {
                r[(i, j)] -= b[i] * b[j].conj();
            }
        }
        members.push(b);
    }
    GaugeFamily::new(Arc::clone(kernel.grid()), kernel.channels(), members)
}

/// `||K - sum_i b_i b_i^dagger||_F`.
pub fn reconstruction_error(kernel: &DensityKernel, gauge: &GaugeFamily) -> f64 {
    let rebuilt = kernel_from_gauge(gauge);
    (kernel.matrix() - rebuilt.matrix())
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::build_energy_grid;

    fn grid() -> Arc<EnergyGrid> {
        Arc::new(build_energy_grid(4.0, 6, 4).unwrap())
    }

    #[test]
    fn unity_kernel_is_all_ones_rank_one() {
        let k = kernel_from_gauge(&GaugeFamily::unity(grid(), 1));
        assert!(k.matrix().iter().all(|z| (z - 1.0).norm() == 0.0));
        let g = gauge_from_kernel(&k).unwrap();
        assert_eq!(g.len(), 1);
        let b0 = g.member(0)[0];
        for b in g.member(0) {
            assert!((b.norm() - 1.0).abs() < 1e-12);
            assert!((b / b0 - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_round_trip() {
        let fam = GaugeFamily::rotation(grid(), |e| (2.0 * e).sin() + e);
        let k = kernel_from_gauge(&fam);
        assert!(k.is_psd());
        assert!(k.channel_diagonal_defect() < 1e-14);
        let g = gauge_from_kernel(&k).unwrap();
        assert!(g.len() <= 2);
        assert!(reconstruction_error(&k, &g) < 1e-8);
    }

    #[test]
    fn non_psd_and_non_hermitian_are_rejected() {
        let gr = grid();
        let n = gr.len();
        let mut m = DMatrix::<Complex64>::identity(n, n);
        m[(0, 0)] = Complex64::new(-1.0, 0.0);
        let k = DensityKernel::new(Arc::clone(&gr), 1, m.clone()).unwrap();
        assert!(matches!(gauge_from_kernel(&k), Err(Error::NotPositive { .. })));
        m[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(matches!(DensityKernel::new(gr, 1, m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn expectation_matches_amplitude_at_zero() {
        use crate::spectral::{energy_time_amplitude, TemporalGrid, TimeKind};
        let gr = grid();
        let s = SpectralState::from_fn(Arc::clone(&gr), 1, |e, _| Complex64::new((-(e - 2.0f64).powi(2)).exp(), 0.3 * e))
            .unwrap()
            .normalize()
            .unwrap();
        let fam = GaugeFamily::rotation(Arc::clone(&gr), |e| e * e);
        let k = kernel_from_gauge(&fam);
        let tg = TemporalGrid::new(0.0, 0.1, 2).unwrap();
        let direct: f64 = fam
            .members()
            .iter()
            .map(|b| energy_time_amplitude(&s, b, &tg, TimeKind::Clock).unwrap()[0].norm_sqr())
            .sum();
        assert!((k.expectation(&s).unwrap() - direct).abs() < 1e-13);
    }
}
