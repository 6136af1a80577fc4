//! Integration against an exponential density.
//!
//! Integrals of the form `∫₀^∞ f(y)·(1/μ)·e^(−y/μ) dy` are rewritten with
//! `u = y/μ` as `∫₀^∞ f(μu)·e^(−u) du`. The range is truncated at `u = 50`
//! (e^(−50) ≈ 2e-22), the tail is approximated by `f(50μ)·e^(−50)`, and the
//! finite part is integrated by adaptive Simpson.
//!
//! Gauss–Laguerre rules are kept for smooth integrands but are not used by
//! [`integrate_exp_weighted`]: for a frame-success step near `y ≈ 1` and a
//! large mean every node sits past the step, and successive orders agree on
//! a wrong value.

use std::sync::OnceLock;

use crate::error::NumericsError;

/// Tolerances for [`integrate_exp_weighted`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Target error relative to the magnitude of the integral.
    pub relative_tolerance: f64,
    /// Maximum bisection depth of the adaptive rule.
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-10,
            max_refinements: 60,
        }
    }
}

impl QuadratureSpec {
    pub fn new(relative_tolerance: f64, max_refinements: u32) -> Result<Self, NumericsError> {
        let spec = Self {
            relative_tolerance,
            max_refinements,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.relative_tolerance.is_finite() && self.relative_tolerance > 0.0) {
            return Err(NumericsError::InvalidArgument(format!(
                "relative_tolerance must be positive, got {}",
                self.relative_tolerance
            )));
        }
        if self.max_refinements < 1 {
            return Err(NumericsError::InvalidArgument(
                "max_refinements must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Upper end of the truncated range; e^(−50) ≈ 2e-22.
pub const TRUNCATION: f64 = 50.0;
const INITIAL_PANELS: usize = 64;
/// Halvings of the first panel; reaches about 1e-50 of its width.
const GEOMETRIC_LEVELS: u32 = 160;
/// Below this magnitude two estimates are considered equal regardless of the relative test.
const ABSOLUTE_FLOOR: f64 = 1e-300;

/// Nodes and weights of an n-point Gauss–Laguerre rule (weight e^(−u) on [0, ∞)).
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLaguerre {
    /// Computes the rule by Newton iteration on L_n, seeded with the usual
    /// asymptotic guesses for the roots. Orders above 256 overflow the
    /// three-term recurrence near the largest node.
    pub fn new(n: usize) -> Self {
        assert!((1..=256).contains(&n), "Gauss–Laguerre order must be in 1..=256");
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let mut z = 0.0_f64;
        for i in 0..n {
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * nf),
                1 => z + 15.0 / (1.0 + 2.5 * nf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + (1.0 + 2.55 * ai) / (1.9 * ai) * (z - nodes[i - 2])
                }
            };
            for _ in 0..100 {
                let (p1, p2) = laguerre_pair(n, z);
                let pp = (nf * p1 - nf * p2) / z;
                let z1 = z;
                z = z1 - p1 / pp;
                if (z - z1).abs() <= 3e-15 * z.abs() {
                    break;
                }
            }
            let (p1, p2) = laguerre_pair(n, z);
            let pp = (nf * p1 - nf * p2) / z;
            nodes[i] = z;
            let denom = pp * nf * p2;
            weights[i] = if denom.is_finite() { -1.0 / denom } else { 0.0 };
        }
        Self { nodes, weights }
    }

    /// Shared rule of order `8·2^k`, `k ≤ 5`.
    pub fn cached(order: usize) -> &'static GaussLaguerre {
        static RULES: [OnceLock<GaussLaguerre>; 6] = [
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
            OnceLock::new(),
        ];
        assert!(
            (8..=256).contains(&order) && order.is_power_of_two(),
            "cached orders are 8, 16, …, 256"
        );
        let slot = (order / 8).trailing_zeros() as usize;
        RULES[slot].get_or_init(|| GaussLaguerre::new(order))
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn apply(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }
}

/// Returns (L_n(z), L_{n−1}(z)).
fn laguerre_pair(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = 1.0;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
    }
    (p1, p2)
}

/// Approximates `∫₀^∞ f(y)·(1/mean)·e^(−y/mean) dy`.
pub fn integrate_exp_weighted<F>(f: F, mean: f64, spec: &QuadratureSpec) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    if !(mean.is_finite() && mean > 0.0) {
        return Err(NumericsError::InvalidArgument(format!(
            "mean must be positive and finite, got {mean}"
        )));
    }
    let integrand = |u: f64| f(mean * u) * (-u).exp();
    let body = adaptive_simpson_with_depth(
        integrand,
        0.0,
        TRUNCATION,
        spec.relative_tolerance,
        spec.max_refinements,
    )?;
    let tail = f(mean * TRUNCATION) * (-TRUNCATION).exp();
    Ok(body + tail)
}

/// Adaptive Simpson with a global tolerance relative to a coarse whole-range
/// estimate. Returns `None` if the bisection depth is exhausted somewhere.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, relative_tolerance: f64) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    adaptive_simpson_with_depth(f, a, b, relative_tolerance, 60).ok()
}

fn adaptive_simpson_with_depth<F>(
    f: F,
    a: f64,
    b: f64,
    relative_tolerance: f64,
    max_depth: u32,
) -> Result<f64, NumericsError>
where
    F: Fn(f64) -> f64,
{
    let h = (b - a) / INITIAL_PANELS as f64;
    // The first panel is split geometrically towards `a`, so a sharp
    // feature close to the left end starts in a small panel.
    let mut edges: Vec<f64> = (0..=GEOMETRIC_LEVELS)
        .rev()
        .map(|k| a + h * 0.5f64.powi(k as i32))
        .collect();
    edges.insert(0, a);
    edges.extend((2..=INITIAL_PANELS).map(|k| if k == INITIAL_PANELS { b } else { a + k as f64 * h }));
    let mut coarse = 0.0;
    let mut fa = f(a);
    let mut segments = Vec::with_capacity(edges.len() - 1);
    for pair in edges.windows(2) {
        let (x0, x1) = (pair[0], pair[1]);
        let fm = f(0.5 * (x0 + x1));
        let fb = f(x1);
        let s = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
        coarse += s;
        segments.push((x0, x1, fa, fm, fb, s));
        fa = fb;
    }
    let abs_tol = (relative_tolerance * coarse.abs()).max(ABSOLUTE_FLOOR) / segments.len() as f64;
    let mut total = 0.0;
    for (x0, x1, f0, fm, f1, s) in segments {
        match simpson_step(&f, x0, x1, f0, fm, f1, s, abs_tol, max_depth) {
            Some(v) => total += v,
            None => {
                return Err(NumericsError::QuadratureNotConverged {
                    previous: coarse,
                    last: total + s,
                })
            }
        }
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Option<f64>
where
    F: Fn(f64) -> f64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?;
    let r = simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}
