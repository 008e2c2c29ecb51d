//! One-dimensional maximization for the adversary's single free penalty.
//!
//! The objectives here are piecewise smooth with kinks, so a plain golden
//! section search can lock onto the wrong hump. [`maximize_1d`] scans a coarse
//! grid first and only refines around the best grid point.

use crate::error::{Error, Result};

pub const DEFAULT_COARSE_POINTS: usize = 1000;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const MIN_COARSE_POINTS: usize = 50;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScalarOptResult {
    pub argmax: f64,
    pub max_value: f64,
    pub evaluations: usize,
    /// Width of the final golden-section bracket.
    pub bracket_width: f64,
    /// The final bracket itself.
    pub bracket: (f64, f64),
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64, count: &mut usize) -> Result<f64> {
    *count += 1;
    let v = f(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: x })
    }
}

/// Maximizes `objective` on `[a, b]`: `coarse_points` evenly spaced samples
/// (leftmost wins ties), then golden section on the neighbours of the best
/// sample until the bracket is narrower than `tol`.
///
/// The result is never worse than the best grid sample.
pub fn maximize_1d<F: FnMut(f64) -> f64>(
    mut objective: F,
    a: f64,
    b: f64,
    coarse_points: usize,
    tol: f64,
) -> Result<ScalarOptResult> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter {
            name: "interval",
            value: b - a,
            expected: "finite bounds with a < b",
        });
    }
    if coarse_points < MIN_COARSE_POINTS {
        return Err(Error::InvalidParameter {
            name: "coarse_points",
            value: coarse_points as f64,
            expected: "at least 50 grid points",
        });
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "tol",
            value: tol,
            expected: "a positive tolerance",
        });
    }

    let mut evaluations = 0;
    let last = coarse_points - 1;
    let grid = |i: usize| {
        if i == last {
            b
        } else {
            a + (b - a) * i as f64 / last as f64
        }
    };
    let mut best_i = 0;
    let mut best_v = f64::NEG_INFINITY;
    for i in 0..coarse_points {
        let v = eval(&mut objective, grid(i), &mut evaluations)?;
        if v > best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = grid(best_i.saturating_sub(1));
    let hi = grid((best_i + 1).min(last));

    let refined = golden_section_inner(&mut objective, lo, hi, tol, &mut evaluations)?;
    let (argmax, max_value) = if refined.max_value > best_v {
        (refined.argmax, refined.max_value)
    } else {
        (grid(best_i), best_v)
    };
    Ok(ScalarOptResult {
        argmax,
        max_value,
        evaluations,
        bracket_width: refined.bracket_width,
        bracket: refined.bracket,
    })
}

/// [`maximize_1d`] with the default grid and tolerance.
pub fn maximize_1d_default<F: FnMut(f64) -> f64>(objective: F, a: f64, b: f64) -> Result<ScalarOptResult> {
    maximize_1d(objective, a, b, DEFAULT_COARSE_POINTS, DEFAULT_TOL)
}

/// Plain golden-section search, assuming a unimodal objective on `[a, b]`.
/// Endpoints are evaluated too and win if they are better.
pub fn golden_section_max<F: FnMut(f64) -> f64>(
    mut objective: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<ScalarOptResult> {
    if !(a.is_finite() && b.is_finite() && a <= b) {
        return Err(Error::InvalidParameter {
            name: "interval",
            value: b - a,
            expected: "finite bounds with a <= b",
        });
    }
    let mut evaluations = 0;
    golden_section_inner(&mut objective, a, b, tol, &mut evaluations).map(|mut r| {
        r.evaluations = evaluations;
        r
    })
}

fn golden_section_inner<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    evaluations: &mut usize,
) -> Result<ScalarOptResult> {
    let fa = eval(f, a, evaluations)?;
    let fb = eval(f, b, evaluations)?;
    let (mut best_x, mut best_v) = if fb > fa { (b, fb) } else { (a, fa) };

    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(f, x1, evaluations)?;
    let mut f2 = eval(f, x2, evaluations)?;
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(f, x1, evaluations)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(f, x2, evaluations)?;
        }
        // Floating point can stall the bracket before reaching `tol`.
        if x1 >= x2 && hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best_v {
            best_x = x;
            best_v = v;
        }
    }
    Ok(ScalarOptResult {
        argmax: best_x,
        max_value: best_v,
        evaluations: *evaluations,
        bracket_width: hi - lo,
        bracket: (lo, hi),
    })
}
