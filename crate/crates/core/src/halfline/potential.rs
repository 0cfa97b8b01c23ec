//! Half-line potentials and the delta-barrier phase shift.

use crate::error::{invalid, Result};

/// Potential on `r >= 0` with a hard wall at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HalfLinePotential {
    Free,
    /// `V(r) = g delta(r - a)`.
    Delta { g: f64, a: f64 },
}

impl HalfLinePotential {
    pub fn delta(g: f64, a: f64) -> Result<Self> {
        if !(g >= 0.0) || !g.is_finite() {
            return Err(invalid(format!("barrier strength g must be >= 0, got {g}")));
        }
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("barrier position a must be > 0, got {a}")));
        }
        Ok(Self::Delta { g, a })
    }

    /// `(delta(E), d delta / dE)`.
    pub fn phase_shift(&self, e: f64) -> Result<(f64, f64)> {
        match *self {
            Self::Free => {
                if !(e > 0.0) {
                    return Err(invalid(format!("energy must be positive, got {e}")));
                }
                Ok((0.0, 0.0))
            }
            Self::Delta { g, a } => delta_phase_shift(e, g, a),
        }
    }

    /// Narrow transmission resonances below `e_max` as `(E_center, FWHM)`.
    pub fn resonances(&self, e_max: f64) -> Vec<(f64, f64)> {
        match *self {
            Self::Free => Vec::new(),
            Self::Delta { g, a } => delta_resonances(g, a, e_max),
        }
    }
}

// z(k) = 1 + (2g/k) sin(ka) exp(-ika), so that delta = arg z and the
// interior amplitude is 1/|z|. Returns (Re z, Im z, d Re z/dk, d Im z/dk).
fn matching(k: f64, g: f64, a: f64) -> (f64, f64, f64, f64) {
    let ka = k * a;
    let (s, c) = ka.sin_cos();
    let s2 = (2.0 * ka).sin();
    let c2 = (2.0 * ka).cos();
    let q = g / k;
    let re = 1.0 + q * s2;
    let im = -2.0 * q * s * s;
    let dre = -(q / k) * s2 + 2.0 * q * a * c2;
    let dim = 2.0 * (q / k) * s * s - 4.0 * q * a * s * c;
    (re, im, dre, dim)
}

/// Phase shift of `g delta(r - a)` in front of a hard wall.
///
/// Matching `sin(kr)` inside to `sin(kr + delta)` outside with the jump
/// `u'(a+) - u'(a-) = 2 g u(a)` gives `cot(ka + delta) = cot(ka) + 2g/k`.
/// The branch `delta = arg(1 + (2g/k) sin(ka) e^{-ika})` lies in `(-pi, 0]`,
/// is continuous in `E` and tends to zero at high energy.
pub fn delta_phase_shift(e: f64, g: f64, a: f64) -> Result<(f64, f64)> {
    if !(e > 0.0) || !e.is_finite() {
        return Err(invalid(format!("energy must be positive, got {e}")));
    }
    if !(g >= 0.0) || !(a > 0.0) {
        return Err(invalid("delta barrier needs g >= 0 and a > 0"));
    }
    let k = (2.0 * e).sqrt();
    let (re, im, dre, dim) = matching(k, g, a);
    let delta = im.atan2(re);
    let ddk = (re * dim - im * dre) / (re * re + im * im);
    Ok((delta, ddk / k))
}

/// `1 / |z|`: amplitude of the interior solution `sin(kr)` relative to the
/// unit exterior wave `sin(kr + delta)`.
pub(crate) fn interior_amplitude(k: f64, g: f64, a: f64) -> f64 {
    let (re, im, _, _) = matching(k, g, a);
    1.0 / re.hypot(im)
}

/// Resonances of the delta barrier with `k < g` (where they are narrow),
/// located by Newton iteration on `Re z = 0` just below `ka = n pi`.
/// The width is the leading-order `k^3 / (2 g^2 a)`.
pub fn delta_resonances(g: f64, a: f64, e_max: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if !(g > 0.0) || !(a > 0.0) {
        return out;
    }
    let k_max = (2.0 * e_max).sqrt();
    let mut n = 1usize;
    loop {
        let kn = n as f64 * std::f64::consts::PI / a;
        if kn > k_max.min(g) {
            break;
        }
        let mut k = kn - kn / (2.0 * g * a);
        for _ in 0..30 {
            let (re, _, dre, _) = matching(k, g, a);
            let step = re / dre;
            k -= step;
            if step.abs() < 1e-15 * k {
                break;
            }
        }
        if k > 0.0 && k < kn && k > kn - std::f64::consts::PI / (2.0 * a) {
            out.push((0.5 * k * k, k.powi(3) / (2.0 * g * g * a)));
        }
        n += 1;
    }
    out
}
