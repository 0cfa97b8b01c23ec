//! Energy-normalized half-line eigenfunctions and position-space densities.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::potential::{interior_amplitude, HalfLinePotential};
use super::profile::ChannelTag;
use crate::error::{invalid, Error, Result};
use crate::spectral::SpectralState;

/// `<r|E_f> = i (2 pi k)^(-1/2) (e^{-ikr} - e^{ikr})`, vanishing at the wall.
pub fn free_eigenfunction(r: f64, e: f64) -> Result<Complex64> {
    if !(e > 0.0) {
        return Err(invalid(format!("energy must be positive, got {e}")));
    }
    if !(r >= 0.0) {
        return Err(invalid(format!("position must be non-negative, got {r}")));
    }
    let k = (2.0 * e).sqrt();
    let i = Complex64::new(0.0, 1.0);
    Ok(i / (2.0 * PI * k).sqrt() * (Complex64::from_polar(1.0, -k * r) - Complex64::from_polar(1.0, k * r)))
}

/// `<r|E_tag>` for `potential`. The real solution `<r|E_Theta>` is
/// `sqrt(2/(pi k)) sin(kr + delta)` beyond the barrier and
/// `sqrt(2/(pi k)) sin(kr) / |z|` inside; `|E_+>` and `|E_->` carry the
/// extra phases `e^{+i delta}` and `e^{-i delta}`.
pub fn eigenfunction(potential: &HalfLinePotential, tag: ChannelTag, r: f64, e: f64) -> Result<Complex64> {
    if !(r >= 0.0) {
        return Err(invalid(format!("position must be non-negative, got {r}")));
    }
    let (delta, _) = potential.phase_shift(e)?;
    let k = (2.0 * e).sqrt();
    let norm = (2.0 / (PI * k)).sqrt();
    let real = match *potential {
        HalfLinePotential::Delta { g, a } if r < a => norm * (k * r).sin() * interior_amplitude(k, g, a),
        _ => norm * (k * r + delta).sin(),
    };
    let phase = match tag {
        ChannelTag::In => delta,
        ChannelTag::Out => -delta,
        ChannelTag::Theta => 0.0,
    };
    Ok(Complex64::from_polar(real, phase))
}

/// `|psi(r, t)|^2` on `r_grid` with
/// `psi(r, t) = sum_j w_j e^{-i E_j t} <r|E_j,tag> psi(E_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionDensity {
    pub r: Vec<f64>,
    pub density: Vec<f64>,
    /// Trapezoid integral over `r`.
    pub norm: f64,
}

impl PositionDensity {
    /// `int r rho dr / int rho dr`.
    pub fn mean_position(&self) -> f64 {
        trapezoid(&self.r, |i| self.r[i] * self.density[i]) / self.norm
    }

    /// Largest `r` at which the density exceeds `fraction` of its peak,
    /// searching only positions above `r_min`.
    pub fn leading_edge(&self, fraction: f64, r_min: f64) -> Option<f64> {
        let peak = self
            .r
            .iter()
            .zip(&self.density)
            .filter(|(r, _)| **r >= r_min)
            .map(|(_, d)| *d)
            .fold(0.0, f64::max);
        self.r
            .iter()
            .zip(&self.density)
            .filter(|(r, d)| **r >= r_min && **d >= fraction * peak && peak > 0.0)
            .map(|(r, _)| *r)
            .next_back()
    }

    /// Position of the largest density above `r_min`.
    pub fn peak_position(&self, r_min: f64) -> Option<f64> {
        self.r
            .iter()
            .zip(&self.density)
            .filter(|(r, _)| **r >= r_min)
            .fold(None, |best: Option<(f64, f64)>, (&r, &d)| match best {
                Some((_, bd)) if bd >= d => best,
                _ => Some((r, d)),
            })
            .map(|(r, _)| r)
    }
}

fn trapezoid(x: &[f64], f: impl Fn(usize) -> f64) -> f64 {
    x.windows(2)
        .enumerate()
        .map(|(i, w)| 0.5 * (w[1] - w[0]) * (f(i) + f(i + 1)))
        .sum()
}

/// Spatial norm a window must capture in [`position_density`].
pub const REQUIRED_SPATIAL_NORM: f64 = 0.999;

/// Position density of a single-channel state; errors when the `r` window
/// captures less than [`REQUIRED_SPATIAL_NORM`] of the norm.
pub fn position_density(state: &SpectralState, tag: ChannelTag, potential: &HalfLinePotential, r_grid: &[f64], t: f64) -> Result<PositionDensity> {
    let d = position_density_unchecked(state, tag, potential, r_grid, t)?;
    if !(d.norm >= REQUIRED_SPATIAL_NORM) {
        return Err(Error::GridCoverage {
            captured: d.norm,
            required: REQUIRED_SPATIAL_NORM,
        });
    }
    Ok(d)
}

pub fn position_density_unchecked(
    state: &SpectralState,
    tag: ChannelTag,
    potential: &HalfLinePotential,
    r_grid: &[f64],
    t: f64,
) -> Result<PositionDensity> {
    if state.channels() != 1 {
        return Err(invalid("position densities need a single-channel state"));
    }
    if r_grid.windows(2).any(|w| !(w[1] > w[0])) || !r_grid.first().is_some_and(|r| *r >= 0.0) {
        return Err(invalid("r grid must be non-empty, non-negative and increasing"));
    }
    let grid = state.grid();
    let barrier = match *potential {
        HalfLinePotential::Delta { a, .. } => a,
        HalfLinePotential::Free => 0.0,
    };
    // Per node: k, delta, interior amplitude and w_j e^{-iEt} psi_j <r|E_tag>/<r|E_Theta>.
    let mut nodes = Vec::with_capacity(grid.len());
    for ((&e, &w), &a) in grid.nodes().iter().zip(grid.weights()).zip(state.amplitudes()) {
        if a.norm() == 0.0 {
            continue;
        }
        let (delta, _) = potential.phase_shift(e)?;
        let k = (2.0 * e).sqrt();
        let inner = match *potential {
            HalfLinePotential::Delta { g, a } => interior_amplitude(k, g, a),
            HalfLinePotential::Free => 1.0,
        };
        let tag_phase = match tag {
            ChannelTag::In => delta,
            ChannelTag::Out => -delta,
            ChannelTag::Theta => 0.0,
        };
        let c = a * (w * (2.0 / (PI * k)).sqrt()) * Complex64::from_polar(1.0, tag_phase - e * t);
        nodes.push((k, delta, inner, c));
    }
    let density: Vec<f64> = r_grid
        .iter()
        .map(|&r| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(k, delta, inner, c) in &nodes {
                let u = if r < barrier { (k * r).sin() * inner } else { (k * r + delta).sin() };
                acc += c * u;
            }
            acc.norm_sqr()
        })
        .collect();
    let norm = trapezoid(r_grid, |i| density[i]);
    Ok(PositionDensity {
        r: r_grid.to_vec(),
        density,
        norm,
    })
}
