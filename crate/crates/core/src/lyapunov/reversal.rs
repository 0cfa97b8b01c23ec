//! Time reversal of Lyapunov curves and the certificate that no Lyapunov
//! operator is time-reversal invariant.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::curve::lyapunov_curve;
use crate::error::{Error, Result};
use crate::observables::kernel::hermitian_defect;
use crate::observables::{temporal_distribution, GaugeFamily};
use crate::spectral::{SpectralState, TemporalGrid, TimeKind};

/// Both sides of `<(Theta psi)_t| L |(Theta psi)_t> = <psi_{-t}| Theta L Theta |psi_{-t}>`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversalCheck {
    /// Lyapunov curve of the reversed state.
    pub lhs: Vec<f64>,
    /// `int_t^inf` of the clock density of `psi` under the conjugate gauge.
    pub rhs: Vec<f64>,
    pub max_deviation: f64,
}

/// Evaluates both sides independently: the left from the arrival density of
/// `Theta psi`, the right from the clock density of `psi` with gauge
/// `conj(b)` (the gauge of `Theta Pi_0 Theta`), integrated from each `t` to
/// the end of the window.
pub fn reversal_identity_check(state: &SpectralState, gauge: &GaugeFamily, tgrid: &TemporalGrid) -> Result<ReversalCheck> {
    let lhs = lyapunov_curve(&state.time_reverse(), gauge, tgrid)?.values().to_vec();
    let rhs = temporal_distribution(state, &gauge.conj(), tgrid, TimeKind::Clock)?.tail();
    let max_deviation = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(ReversalCheck {
        lhs,
        rhs,
        max_deviation,
    })
}

/// Outcome of [`no_invariant_lyapunov_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `||K|| < 1e-12`: the only kernel compatible with both signs.
    Trivial,
    /// A vector with `<v| -conj(K) |v> = value < 0`, so `-conj(K)` is not
    /// positive and `K` cannot be time-reversal invariant.
    Witness { vector: Vec<Complex64>, value: f64 },
}

/// Kernels below this Frobenius norm count as zero.
pub const TRIVIAL_NORM: f64 = 1e-12;

/// For a Hermitian kernel `K` of a nonzero positive `Pi_0^L`, exhibits `v`
/// with `<v| -conj(K) |v> < 0`: the top eigenvector `u` of `K` gives
/// `v = conj(u)` and value `-lambda_max`.
pub fn no_invariant_lyapunov_certificate(kernel: &DMatrix<Complex64>) -> Result<Verdict> {
    let scale = kernel.iter().fold(0.0f64, |a, z| a.max(z.norm())).max(1.0);
    let asym = hermitian_defect(kernel);
    if kernel.nrows() != kernel.ncols() || asym > 1e-12 * scale {
        return Err(Error::NotHermitian { asymmetry: asym });
    }
    let norm = kernel.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm < TRIVIAL_NORM {
        return Ok(Verdict::Trivial);
    }
    let eig = kernel.clone().symmetric_eigen();
    let (top, lambda) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, &l)| if l > b.1 { (i, l) } else { b });
    if !(lambda > 0.0) {
        return Err(Error::NotPositive {
            min_eigenvalue: eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min),
        });
    }
    let v: DVector<Complex64> = eig.eigenvectors.column(top).map(|z| z.conj());
    let neg = kernel.map(|z| -z.conj());
    let value = v.dotc(&(&neg * &v)).re / v.norm_squared();
    Ok(Verdict::Witness {
        vector: v.iter().copied().collect(),
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_kernel_has_witness() {
        let k = DMatrix::<Complex64>::identity(5, 5) * Complex64::new(0.3, 0.0);
        match no_invariant_lyapunov_certificate(&k).unwrap() {
            Verdict::Witness { value, .. } => assert!((value + 0.3).abs() < 1e-14),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn zero_kernel_is_trivial() {
        let k = DMatrix::<Complex64>::zeros(4, 4);
        assert_eq!(no_invariant_lyapunov_certificate(&k).unwrap(), Verdict::Trivial);
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut k = DMatrix::<Complex64>::identity(3, 3);
        k[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(no_invariant_lyapunov_certificate(&k), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn negative_kernel_is_reported() {
        let k = -DMatrix::<Complex64>::identity(3, 3);
        assert!(matches!(no_invariant_lyapunov_certificate(&k), Err(Error::NotPositive { .. })));
    }
}
