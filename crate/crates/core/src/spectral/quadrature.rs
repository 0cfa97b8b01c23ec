//! Gauss–Legendre reference rules and panel-local differentiation.

use std::f64::consts::PI;

/// An `n`-point Gauss–Legendre rule on `[-1, 1]` together with the
/// differentiation matrix of the interpolating polynomial through its nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    diff: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, refined by Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        let diff = differentiation_matrix(&nodes);
        Self {
            nodes,
            weights,
            diff,
        }
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

    /// Row-major `n x n` differentiation matrix on `[-1, 1]`.
    pub fn diff(&self) -> &[f64] {
        &self.diff
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Barycentric differentiation matrix for distinct nodes.
pub(crate) fn differentiation_matrix(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let lambda: Vec<f64> = (0..n)
        .map(|j| {
            1.0 / (0..n)
                .filter(|&k| k != j)
                .map(|k| x[j] - x[k])
                .product::<f64>()
        })
        .collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (lambda[j] / lambda[i]) / (x[i] - x[j]);
                d[i * n + j] = v;
                diag -= v;
            }
        }
        d[i * n + i] = diag;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in 1..40 {
            let r = GaussLegendre::new(n);
            let s: f64 = r.weights().iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n} sum={s}");
        }
    }

    #[test]
    fn exact_for_degree_2n_minus_1() {
        let n = 7;
        let r = GaussLegendre::new(n);
        for p in 0..(2 * n) {
            let q: f64 = r
                .nodes()
                .iter()
                .zip(r.weights())
                .map(|(x, w)| w * x.powi(p as i32))
                .sum();
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "p={p}");
        }
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let r = GaussLegendre::new(16);
        for w in r.nodes().windows(2) {
            assert!(w[0] < w[1]);
        }
        for i in 0..16 {
            assert!((r.nodes()[i] + r.nodes()[15 - i]).abs() < 1e-15);
        }
    }

    #[test]
    fn differentiation_exact_for_polynomials() {
        let r = GaussLegendre::new(6);
        let n = r.len();
        let f: Vec<f64> = r.nodes().iter().map(|x| x.powi(5) - 2.0 * x * x).collect();
        for i in 0..n {
            let d: f64 = (0..n).map(|j| r.diff()[i * n + j] * f[j]).sum();
            let x = r.nodes()[i];
            let exact = 5.0 * x.powi(4) - 4.0 * x;
            assert!((d - exact).abs() < 1e-12);
        }
    }
}
