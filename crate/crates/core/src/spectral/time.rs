//! Uniform time grids and sampled temporal probability densities.

use std::f64::consts::PI;

use super::grid::EnergyGrid;
use crate::error::{invalid, Error, Result};

/// Uniform samples `t_k = t_min + k dt`, `k = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TemporalGrid {
    t_min: f64,
    dt: f64,
    n: usize,
}

impl TemporalGrid {
    /// `n >= 2` samples spanning `[t_min, t_max]`.
    pub fn new(t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("a time grid needs at least 2 samples"));
        }
        if !(t_max > t_min) || !t_min.is_finite() || !t_max.is_finite() {
            return Err(invalid(format!("invalid time window [{t_min}, {t_max}]")));
        }
        Ok(Self {
            t_min,
            dt: (t_max - t_min) / (n - 1) as f64,
            n,
        })
    }

    /// Smallest uniform grid on `[t_min, t_max]` with spacing at most `dt_max`.
    pub fn with_max_step(t_min: f64, t_max: f64, dt_max: f64) -> Result<Self> {
        if !(dt_max > 0.0) {
            return Err(invalid("dt_max must be positive"));
        }
        let n = ((t_max - t_min) / dt_max).ceil() as usize + 1;
        Self::new(t_min, t_max, n.max(2))
    }

    /// Grid on `[t_min, t_max]` satisfying the sampling rule for `grid`.
    pub fn for_energy_grid(grid: &EnergyGrid, t_min: f64, t_max: f64) -> Result<Self> {
        Self::with_max_step(t_min, t_max, nyquist_limit(grid))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }

    pub fn t_max(&self) -> f64 {
        self.t(self.n - 1)
    }

    pub fn t(&self, k: usize) -> f64 {
        self.t_min + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(move |k| self.t(k))
    }

    /// The mirrored grid `{-t_k}` in increasing order.
    pub fn reflected(&self) -> Self {
        Self {
            t_min: -self.t_max(),
            dt: self.dt,
            n: self.n,
        }
    }

    /// Errors unless `dt <= pi / E_max` for this energy grid.
    pub fn check_nyquist(&self, grid: &EnergyGrid) -> Result<()> {
        let limit = nyquist_limit(grid);
        if self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::Nyquist { dt: self.dt, limit });
        }
        Ok(())
    }
}

/// `pi / E_max` (hbar = 1).
pub fn nyquist_limit(grid: &EnergyGrid) -> f64 {
    PI / grid.hi()
}

/// Which covariance law a density obeys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeKind {
    /// Readings advance with the state: evolving by `t0` shifts the density by `+t0`.
    Clock,
    /// Waiting times: evolving by `t0` shifts the density by `-t0`.
    Arrival,
}

impl TimeKind {
    /// Sign of `E t` in the phase `exp(i sign E t)` of the energy-to-time transform.
    pub fn phase_sign(self) -> f64 {
        match self {
            TimeKind::Clock => -1.0,
            TimeKind::Arrival => 1.0,
        }
    }

    /// Sign with which a forward evolution translates the density.
    pub fn covariance_sign(self) -> f64 {
        -self.phase_sign()
    }
}

/// Samples of a temporal probability density `Pi(t_k) >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalDistribution {
    grid: TemporalGrid,
    density: Vec<f64>,
    kind: TimeKind,
}

impl TemporalDistribution {
    pub fn new(grid: TemporalGrid, density: Vec<f64>, kind: TimeKind) -> Result<Self> {
        if density.len() != grid.len() {
            return Err(invalid("density length does not match the time grid"));
        }
        if let Some(v) = density.iter().find(|v| !(**v >= 0.0)) {
            return Err(invalid(format!("density must be non-negative, found {v}")));
        }
        Ok(Self {
            grid,
            density,
            kind,
        })
    }

    pub fn grid(&self) -> &TemporalGrid {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn kind(&self) -> TimeKind {
        self.kind
    }

    /// Trapezoid integral over the window.
    pub fn mass(&self) -> f64 {
        self.trapezoid(|_, p| p)
    }

    /// `int t^p Pi(t) dt` over the window, unnormalized.
    pub fn raw_moment(&self, p: i32) -> f64 {
        self.trapezoid(|t, v| t.powi(p) * v)
    }

    /// Running trapezoid integral, starting at zero at `t_min`.
    pub fn cumulative(&self) -> Vec<f64> {
        let h = 0.5 * self.grid.dt();
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.density.len());
        out.push(0.0);
        for w in self.density.windows(2) {
            acc += h * (w[0] + w[1]);
            out.push(acc);
        }
        out
    }

    /// Integral from each `t_k` to the end of the window.
    pub fn tail(&self) -> Vec<f64> {
        let h = 0.5 * self.grid.dt();
        let n = self.density.len();
        let mut out = vec![0.0; n];
        for k in (0..n - 1).rev() {
            out[k] = out[k + 1] + h * (self.density[k] + self.density[k + 1]);
        }
        out
    }

    /// Cubic (four-point Lagrange) interpolation; zero outside the window.
    pub fn value_at(&self, t: f64) -> f64 {
        let n = self.density.len();
        let x = (t - self.grid.t_min()) / self.grid.dt();
        if x < 0.0 || x > (n - 1) as f64 {
            return 0.0;
        }
        if n < 4 {
            let i = (x.floor() as usize).min(n - 2);
            let f = x - i as f64;
            return self.density[i] * (1.0 - f) + self.density[i + 1] * f;
        }
        let i = (x.floor() as isize - 1).clamp(0, n as isize - 4) as usize;
        let f = x - i as f64;
        let p = &self.density[i..i + 4];
        let l0 = -(f - 1.0) * (f - 2.0) * (f - 3.0) / 6.0;
        let l1 = f * (f - 2.0) * (f - 3.0) / 2.0;
        let l2 = -f * (f - 1.0) * (f - 3.0) / 2.0;
        let l3 = f * (f - 1.0) * (f - 2.0) / 6.0;
        p[0] * l0 + p[1] * l1 + p[2] * l2 + p[3] * l3
    }

    /// Errors if less than `required` of the probability lies in the window.
    pub fn check_mass(&self, required: f64) -> Result<f64> {
        let mass = self.mass();
        if !(mass >= required) {
            return Err(Error::WindowMass { mass, required });
        }
        Ok(mass)
    }

    fn trapezoid(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let n = self.density.len();
        let mut s = 0.0;
        for (k, &p) in self.density.iter().enumerate() {
            let w = if k == 0 || k == n - 1 { 0.5 } else { 1.0 };
            s += w * f(self.grid.t(k), p);
        }
        s * self.grid.dt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(c: f64, s: f64) -> TemporalDistribution {
        let g = TemporalGrid::new(-40.0, 40.0, 1601).unwrap();
        let d = g
            .times()
            .map(|t| (-(t - c).powi(2) / (2.0 * s * s)).exp() / (s * (2.0 * PI).sqrt()))
            .collect();
        TemporalDistribution::new(g, d, TimeKind::Arrival).unwrap()
    }

    #[test]
    fn moments_of_symmetric_density() {
        let d = gaussian(3.0, 2.0);
        assert!((d.mass() - 1.0).abs() < 1e-12);
        assert!((d.raw_moment(1) - 3.0).abs() < 1e-12);
        assert!((d.raw_moment(2) - 13.0).abs() < 1e-10);
    }

    #[test]
    fn cumulative_and_tail_are_complementary() {
        let d = gaussian(0.0, 3.0);
        let c = d.cumulative();
        let t = d.tail();
        let m = d.mass();
        for k in 0..c.len() {
            assert!((c[k] + t[k] - m).abs() < 1e-12);
        }
        assert!(c.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn cubic_interpolation_is_accurate() {
        let d = gaussian(1.3, 2.5);
        for &t in &[-3.21, 0.017, 1.3, 4.999] {
            let exact = (-(t - 1.3f64).powi(2) / 12.5).exp() / (2.5 * (2.0 * PI).sqrt());
            assert!((d.value_at(t) - exact).abs() < 1e-6);
        }
        assert_eq!(d.value_at(100.0), 0.0);
    }

    #[test]
    fn rejects_negative_density() {
        let g = TemporalGrid::new(0.0, 1.0, 3).unwrap();
        assert!(TemporalDistribution::new(g, vec![0.0, -1.0, 0.0], TimeKind::Clock).is_err());
    }

    #[test]
    fn nyquist_rule() {
        let e = EnergyGrid::uniform_panels(0.0, 8.0, 4, 4).unwrap();
        let ok = TemporalGrid::for_energy_grid(&e, 0.0, 100.0).unwrap();
        assert!(ok.dt() <= PI / 8.0);
        ok.check_nyquist(&e).unwrap();
        let bad = TemporalGrid::new(0.0, 100.0, 11).unwrap();
        assert!(matches!(bad.check_nyquist(&e), Err(Error::Nyquist { .. })));
    }
}
