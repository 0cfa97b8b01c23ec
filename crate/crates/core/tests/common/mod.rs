#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tempus::observables::GaugeFamily;
use tempus::spectral::{EnergyGrid, SpectralState, TemporalGrid};

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grid on which the random states below are resolved.
pub fn test_grid() -> Arc<EnergyGrid> {
    Arc::new(EnergyGrid::uniform_panels(0.0, 4.0, 80, 10).unwrap())
}

/// Window holding the random states' clock and arrival densities.
pub fn test_window() -> TemporalGrid {
    TemporalGrid::new(-80.0, 80.0, 3201).unwrap()
}

/// Sum of up to three Gaussians in `E` with random linear and quadratic
/// phases, normalized, in each channel.
pub fn random_state(rng: &mut ChaCha8Rng, grid: &Arc<EnergyGrid>, channels: usize) -> SpectralState {
    let mut bumps = Vec::new();
    for a in 0..channels {
        for _ in 0..rng.gen_range(1..=3) {
            bumps.push((
                a,
                rng.gen_range(1.3..2.7),
                rng.gen_range(0.12..0.22),
                Complex64::from_polar(rng.gen_range(0.3..1.0), rng.gen_range(0.0..2.0 * PI)),
                rng.gen_range(-15.0..15.0),
                rng.gen_range(-3.0..3.0),
            ));
        }
    }
    SpectralState::from_fn(Arc::clone(grid), channels, |e, a| {
        bumps
            .iter()
            .filter(|b| b.0 == a)
            .map(|&(_, c, s, amp, tau, mu)| amp * (-(e - c).powi(2) / (2.0 * s * s)).exp() * Complex64::from_polar(1.0, tau * e + mu * (e - c).powi(2)))
            .sum()
    })
    .unwrap()
    .normalize()
    .unwrap()
}

/// Real random state: Gaussians with real amplitudes of either sign.
pub fn random_real_state(rng: &mut ChaCha8Rng, grid: &Arc<EnergyGrid>) -> SpectralState {
    let bumps: Vec<(f64, f64, f64)> = (0..rng.gen_range(1..=3))
        .map(|_| (rng.gen_range(1.4..2.6), rng.gen_range(0.12..0.22), rng.gen_range(-1.0..1.0)))
        .collect();
    SpectralState::from_fn(Arc::clone(grid), 1, |e, _| {
        Complex64::new(bumps.iter().map(|&(c, s, a)| a * (-(e - c).powi(2) / (2.0 * s * s)).exp()).sum(), 0.0)
    })
    .unwrap()
    .normalize()
    .unwrap()
}

/// Smooth random angle `theta(E) = p0 + p1 E + p2 sin(p3 E)`.
fn smooth_angle(rng: &mut ChaCha8Rng, scale: f64) -> impl Fn(f64) -> f64 {
    let p: [f64; 4] = [
        rng.gen_range(0.0..2.0 * PI),
        rng.gen_range(-scale..scale),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(0.5..3.0),
    ];
    move |e| p[0] + p[1] * e + p[2] * (p[3] * e).sin()
}

type Angle = Box<dyn Fn(f64) -> f64>;

/// Random normalized family with `m >= channels` members: the first
/// `channels` columns of a product of `E`-dependent Givens rotations and
/// phases, so that `sum_i b_i(E,a) conj(b_i(E,a')) = delta_{aa'}`.
pub fn random_gauge(rng: &mut ChaCha8Rng, grid: &Arc<EnergyGrid>, channels: usize, m: usize) -> GaugeFamily {
    assert!(m >= channels);
    let mut rots: Vec<(usize, usize, Angle, Angle)> = Vec::new();
    for _ in 0..(2 * m) {
        let i = rng.gen_range(0..m);
        let j = (i + rng.gen_range(1..m.max(2))) % m;
        if i == j {
            continue;
        }
        rots.push((i, j, Box::new(smooth_angle(rng, 3.0)), Box::new(smooth_angle(rng, 4.0))));
    }
    let phases: Vec<Angle> = (0..m).map(|_| Box::new(smooth_angle(rng, 5.0)) as Angle).collect();
    let column = |e: f64, a: usize| -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); m];
        v[a] = Complex64::new(1.0, 0.0);
        for (i, j, th, ph) in &rots {
            let (s, c) = th(e).sin_cos();
            let z = Complex64::from_polar(1.0, ph(e));
            let (vi, vj) = (v[*i], v[*j]);
            v[*i] = vi * c - vj * s * z;
            v[*j] = vi * s * z.conj() + vj * c;
        }
        for (k, p) in phases.iter().enumerate() {
            v[k] *= Complex64::from_polar(1.0, p(e));
        }
        v
    };
    GaugeFamily::from_fn(Arc::clone(grid), channels, m, |e, i, a| column(e, a)[i]).unwrap()
}

/// Relative error against `reference`, with `scale` as the floor of the denominator.
pub fn rel(a: f64, reference: f64, scale: f64) -> f64 {
    (a - reference).abs() / reference.abs().max(scale)
}
