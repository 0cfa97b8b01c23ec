//! Energy grids: the discretized continuous spectrum every other module
//! integrates over.

use num_complex::Complex64;

use super::quadrature::{differentiation_matrix, GaussLegendre};
use crate::error::{invalid, Result};

/// How the nodes and weights of an [`EnergyGrid`] were produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureScheme {
    /// Composite Gauss–Legendre panels with a fixed number of nodes each.
    GaussLegendre { nodes_per_panel: usize },
    /// Uniform trapezoid rule including both endpoints.
    Trapezoid,
}

#[derive(Debug, Clone, PartialEq)]
struct Panel {
    start: usize,
    len: usize,
    lo: f64,
    hi: f64,
}

/// Quadrature nodes and weights over `[lo, hi]`, `0 <= lo < hi`.
///
/// Nodes are strictly increasing and every weight is positive. Composite
/// Gauss–Legendre grids also remember their panels so that sampled functions
/// can be differentiated panel by panel with the interpolating polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    scheme: QuadratureScheme,
    panels: Vec<Panel>,
    // Row-major differentiation matrix on [-1, 1] (Gauss–Legendre only).
    ref_diff: Vec<f64>,
    lo: f64,
    hi: f64,
}

/// Composite Gauss–Legendre grid on `[0, e_max]` with panels refined
/// geometrically toward `E = 0`.
///
/// One eighth of the panels (rounded down) halve the first uniform cell
/// repeatedly, so the smallest panel is `2^-n_geo` of the bulk width.
pub fn build_energy_grid(e_max: f64, n_panels: usize, nodes_per_panel: usize) -> Result<EnergyGrid> {
    if !(e_max > 0.0) || !e_max.is_finite() {
        return Err(invalid(format!("E_max must be positive, got {e_max}")));
    }
    if n_panels == 0 || nodes_per_panel == 0 {
        return Err(invalid("panel and node counts must be at least 1"));
    }
    let n_geo = (n_panels / 8).min(n_panels - 1);
    let n_uniform = n_panels - n_geo;
    let h = e_max / n_uniform as f64;
    let mut breaks = vec![0.0];
    for m in (1..=n_geo).rev() {
        breaks.push(h / f64::powi(2.0, m as i32));
    }
    for i in 1..=n_uniform {
        breaks.push(if i == n_uniform { e_max } else { i as f64 * h });
    }
    EnergyGrid::gauss_legendre(&breaks, nodes_per_panel)
}

impl EnergyGrid {
    /// Composite Gauss–Legendre rule on the panels `[b_i, b_{i+1}]`.
    pub fn gauss_legendre(breakpoints: &[f64], nodes_per_panel: usize) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(invalid("need at least two breakpoints"));
        }
        if nodes_per_panel == 0 {
            return Err(invalid("nodes_per_panel must be at least 1"));
        }
        if !(breakpoints[0] >= 0.0) {
            return Err(invalid("energies must be non-negative"));
        }
        for w in breakpoints.windows(2) {
            if !(w[1] > w[0]) || !w[1].is_finite() {
                return Err(invalid("breakpoints must be finite and strictly increasing"));
            }
        }
        let rule = GaussLegendre::new(nodes_per_panel);
        let n = nodes_per_panel;
        let mut nodes = Vec::with_capacity((breakpoints.len() - 1) * n);
        let mut weights = Vec::with_capacity(nodes.capacity());
        let mut panels = Vec::with_capacity(breakpoints.len() - 1);
        for w in breakpoints.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            panels.push(Panel {
                start: nodes.len(),
                len: n,
                lo: a,
                hi: b,
            });
            for (x, wt) in rule.nodes().iter().zip(rule.weights()) {
                nodes.push(mid + half * x);
                weights.push(half * wt);
            }
        }
        for w in nodes.windows(2) {
            if !(w[1] > w[0]) {
                return Err(invalid("panels too narrow: nodes not strictly increasing"));
            }
        }
        Ok(Self {
            nodes,
            weights,
            scheme: QuadratureScheme::GaussLegendre { nodes_per_panel: n },
            panels,
            ref_diff: rule.diff().to_vec(),
            lo: breakpoints[0],
            hi: *breakpoints.last().unwrap(),
        })
    }

    /// `n_panels` equal Gauss–Legendre panels on `[lo, hi]`.
    pub fn uniform_panels(lo: f64, hi: f64, n_panels: usize, nodes_per_panel: usize) -> Result<Self> {
        if n_panels == 0 {
            return Err(invalid("n_panels must be at least 1"));
        }
        if !(hi > lo) {
            return Err(invalid(format!("empty energy interval [{lo}, {hi}]")));
        }
        let h = (hi - lo) / n_panels as f64;
        let breaks: Vec<f64> = (0..=n_panels)
            .map(|i| if i == n_panels { hi } else { lo + i as f64 * h })
            .collect();
        Self::gauss_legendre(&breaks, nodes_per_panel)
    }

    /// Uniform trapezoid rule with `n >= 2` nodes including both endpoints.
    pub fn trapezoid(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid("trapezoid grid needs at least 2 nodes"));
        }
        if !(lo >= 0.0) || !(hi > lo) || !hi.is_finite() {
            return Err(invalid(format!("invalid energy interval [{lo}, {hi}]")));
        }
        let h = (hi - lo) / (n - 1) as f64;
        let nodes: Vec<f64> = (0..n)
            .map(|i| if i == n - 1 { hi } else { lo + i as f64 * h })
            .collect();
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Self {
            nodes,
            weights,
            scheme: QuadratureScheme::Trapezoid,
            panels: vec![Panel {
                start: 0,
                len: n,
                lo,
                hi,
            }],
            ref_diff: Vec::new(),
            lo,
            hi,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn scheme(&self) -> QuadratureScheme {
        self.scheme
    }

    pub fn n_panels(&self) -> usize {
        self.panels.len()
    }

    /// Lower end of the integration interval.
    pub fn lo(&self) -> f64 {
        self.lo
    }

    /// Upper end of the integration interval (`E_max`).
    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| w * f(e))
            .sum()
    }

    /// Weighted sum of values already sampled at the nodes.
    pub fn integrate_samples(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Derivative in `E` of samples laid out as `values[j * stride + c]`,
    /// one column per `c < stride`.
    ///
    /// Gauss–Legendre grids differentiate the panel interpolant; trapezoid
    /// grids use second-order centered differences with one-sided ends.
    pub fn derivative(&self, values: &[Complex64], stride: usize) -> Vec<Complex64> {
        assert_eq!(values.len(), self.len() * stride, "sample layout mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
        match self.scheme {
            QuadratureScheme::GaussLegendre { nodes_per_panel: n } => {
                for p in &self.panels {
                    let scale = 2.0 / (p.hi - p.lo);
                    for c in 0..stride {
                        for i in 0..n {
                            let row = &self.ref_diff[i * n..(i + 1) * n];
                            let mut acc = Complex64::new(0.0, 0.0);
                            for (j, d) in row.iter().enumerate() {
                                acc += values[(p.start + j) * stride + c] * d;
                            }
                            out[(p.start + i) * stride + c] = acc * scale;
                        }
                    }
                }
            }
            QuadratureScheme::Trapezoid => {
                let x = &self.nodes;
                let n = x.len();
                let at = |j: usize, c: usize| values[j * stride + c];
                for c in 0..stride {
                    if n == 2 {
                        let d = (at(1, c) - at(0, c)) / (x[1] - x[0]);
                        out[c] = d;
                        out[stride + c] = d;
                        continue;
                    }
                    for i in 0..n {
                        let (a, b, m) = if i == 0 {
                            (0, 2, 0)
                        } else if i == n - 1 {
                            (n - 3, n - 1, n - 1)
                        } else {
                            (i - 1, i + 1, i)
                        };
                        let pts = [x[a], x[a + 1], x[b]];
                        let d = differentiation_matrix(&pts);
                        let row = m - a;
                        out[i * stride + c] = at(a, c) * d[row * 3]
                            + at(a + 1, c) * d[row * 3 + 1]
                            + at(b, c) * d[row * 3 + 2];
                    }
                }
            }
        }
        out
    }

    /// True when `other` has the same nodes and weights.
    pub fn same_as(&self, other: &EnergyGrid) -> bool {
        std::ptr::eq(self, other) || (self.nodes == other.nodes && self.weights == other.weights)
    }
}

/// Panel breakpoints on `[lo, hi]` with bulk width `base_width`, shrinking
/// geometrically toward each `(center, width)` feature.
///
/// The local panel width is `min(base, max(width/2, |E - center|/2))` over all
/// features, so a narrow feature is covered by panels of half its width and
/// the spacing grows by a factor of about 1.5 per panel away from it.
pub fn adaptive_breakpoints(lo: f64, hi: f64, base_width: f64, features: &[(f64, f64)]) -> Result<Vec<f64>> {
    if !(hi > lo) || !(base_width > 0.0) {
        return Err(invalid("adaptive_breakpoints needs hi > lo and base_width > 0"));
    }
    let local = |e: f64| {
        features
            .iter()
            .filter(|(_, w)| *w > 0.0)
            .fold(base_width, |h, &(c, w)| h.min((0.5 * w).max(0.5 * (e - c).abs())))
    };
    let mut breaks = vec![lo];
    let mut cur = lo;
    loop {
        let step = local(cur);
        let next = cur + step;
        if next >= hi - 0.25 * step {
            break;
        }
        breaks.push(next);
        cur = next;
    }
    breaks.push(hi);
    Ok(breaks)
}
