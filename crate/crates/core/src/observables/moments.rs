//! First and second moments of temporal densities, spectrally and from samples.

use num_complex::Complex64;

use super::density::{check_gauge_grid, REQUIRED_MASS};
use super::gauge::GaugeFamily;
use crate::error::{Error, Result};
use crate::spectral::{SpectralState, TemporalDistribution, TimeKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentSource {
    Spectral,
    Distribution,
}

/// Normalized moments of a temporal density. The second moment always
/// comes from the density, never from a squared operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub mean: f64,
    pub second_moment: f64,
    pub variance: f64,
    pub source: MomentSource,
}

impl MomentReport {
    fn new(mean: f64, second_moment: f64, source: MomentSource) -> Self {
        Self {
            mean,
            second_moment,
            variance: second_moment - mean * mean,
            source,
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.max(0.0).sqrt()
    }
}

/// `f_i(E_j) = sum_alpha conj(psi(E_j,alpha)) b_i(E_j,alpha)` for every member.
pub(crate) fn projections(state: &SpectralState, gauge: &GaugeFamily) -> Vec<Vec<Complex64>> {
    let c = state.channels();
    gauge
        .members()
        .iter()
        .map(|b| {
            state
                .amplitudes()
                .chunks(c)
                .zip(b.chunks(c))
                .map(|(p, b)| p.iter().zip(b).map(|(p, b)| p.conj() * b).sum())
                .collect()
        })
        .collect()
}

/// Moments from the energy representation.
///
/// With `f_i` as above, the clock mean is `-i sum_i int conj(f_i) f_i' dE`,
/// the arrival mean its negative, and the second moment
/// `sum_i int |f_i'|^2 dE` for both kinds. Results are divided by
/// `sum_i int |f_i|^2`, which is one for normalized inputs. Amplitudes are
/// assumed to vanish at both grid ends.
pub fn moments_spectral(state: &SpectralState, gauge: &GaugeFamily, kind: TimeKind) -> Result<MomentReport> {
    check_gauge_grid(state, gauge)?;
    let grid = state.grid();
    let w = grid.weights();
    let (mut m0, mut m1, mut m2) = (0.0, Complex64::new(0.0, 0.0), 0.0);
    for f in projections(state, gauge) {
        let df = grid.derivative(&f, 1);
        for j in 0..f.len() {
            m0 += w[j] * f[j].norm_sqr();
            m1 += w[j] * f[j].conj() * df[j];
            m2 += w[j] * df[j].norm_sqr();
        }
    }
    if !(m0 > 0.0) {
        return Err(Error::DegenerateState);
    }
    // -i * m1 for clocks, +i * m1 for arrivals; only the real part survives.
    let mean = kind.covariance_sign() * m1.im / m0;
    Ok(MomentReport::new(mean, m2 / m0, MomentSource::Spectral))
}

/// Trapezoid moments of a sampled density, normalized by its mass.
pub fn moments_distribution(dist: &TemporalDistribution) -> Result<MomentReport> {
    let mass = dist.mass();
    if !(mass >= REQUIRED_MASS) {
        return Err(Error::WindowMass {
            mass,
            required: REQUIRED_MASS,
        });
    }
    Ok(MomentReport::new(
        dist.raw_moment(1) / mass,
        dist.raw_moment(2) / mass,
        MomentSource::Distribution,
    ))
}

/// `int |psi'|^2 dE` summed over channels: the variance floor for real states.
pub fn derivative_norm(state: &SpectralState) -> f64 {
    let d = state.grid().derivative(state.amplitudes(), state.channels());
    let c = state.channels();
    let w = state.grid().weights();
    d.iter().enumerate().map(|(i, z)| w[i / c] * z.norm_sqr()).sum()
}
