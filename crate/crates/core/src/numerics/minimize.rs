//! Scalar minimization over a positive open interval: a logarithmic grid
//! scan followed by golden-section refinement in log-argument space.

use crate::error::NumericsError;

pub const DEFAULT_GRID_POINTS: usize = 128;
const MIN_GRID_POINTS: usize = 64;
const MAX_GOLDEN_ITER: usize = 500;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub argmin: f64,
    pub value: f64,
}

/// Minimizes `f` over `(lo, hi)` with `0 < lo < hi`.
///
/// `f` may return `+∞` where it is undefined. `tol` bounds the final bracket
/// width in `ln(argument)`.
pub fn minimize_scalar<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<Minimum, NumericsError>
where
    F: Fn(f64) -> f64,
{
    minimize_scalar_with_grid(f, lo, hi, tol, DEFAULT_GRID_POINTS)
}

pub fn minimize_scalar_with_grid<F>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    grid_points: usize,
) -> Result<Minimum, NumericsError>
where
    F: Fn(f64) -> f64,
{
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(NumericsError::InvalidArgument(format!(
            "minimization interval must satisfy 0 < lo < hi < ∞, got ({lo}, {hi})"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(NumericsError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = grid_points.max(MIN_GRID_POINTS);
    let (llo, lhi) = (lo.ln(), hi.ln());
    let step = (lhi - llo) / (n + 1) as f64;
    // Interior points only: the interval is open.
    let eval = |t: f64| {
        let v = f(t.exp());
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let grid: Vec<(f64, f64)> = (1..=n)
        .map(|k| {
            let t = llo + k as f64 * step;
            (t, eval(t))
        })
        .collect();

    let (best_idx, &(best_t, best_v)) = grid
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .expect("grid is non-empty");
    if best_v == f64::INFINITY {
        return Err(NumericsError::NoFeasiblePoint);
    }

    let left = if best_idx == 0 { llo } else { grid[best_idx - 1].0 };
    let right = if best_idx + 1 == n { lhi } else { grid[best_idx + 1].0 };
    let (gt, gv) = golden_section(&eval, left, right, tol);

    let (t, v) = if gv < best_v { (gt, gv) } else { (best_t, best_v) };
    Ok(Minimum {
        argmin: t.exp(),
        value: v,
    })
}

/// Golden-section search on `[a, b]` in the transformed variable.
fn golden_section<F>(f: &F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64)
where
    F: Fn(f64) -> f64,
{
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..MAX_GOLDEN_ITER {
        if (b - a).abs() <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}
