//! Worst-case value curves for the two-option game.
//!
//! `L^t(w)` is the largest cumulative loss the adversary can force in `t + 1`
//! rounds starting from first-option weight `w`:
//!
//! ```text
//! L^0(w) = max(w, 1 - w)
//! L^t(w) = max_ℓ [ wℓ + (1-w)(1-ℓ) + L^{t-1}(W(w, ℓ)) ],   W(w, ℓ) = w / (w + (1-w) β^{1-2ℓ})
//! ```
//!
//! Weights are sampled at `k/M`. `L^{t-1}` at off-grid weights is read by
//! linear interpolation (or nearest neighbour). The inner maximum scans
//! `ℓ ∈ {0, 1/P, …, 1}` and refines the best grid bracket by golden section.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hedge::{self, GameParams};
use crate::par;
use crate::plan::PenaltyPlan;
use crate::scalar::golden_section_max;

pub const DEFAULT_GRID: usize = 10_000;
pub const DEFAULT_PENALTY_GRID: usize = 1000;
pub const MIN_GRID: usize = 100;

const REFINE_TOL: f64 = 1e-9;

/// How `L^{t-1}` is read between grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Interpolation {
    #[default]
    Linear,
    /// Round to the closest grid weight (plain quantization).
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpConfig {
    pub grid_size: usize,
    pub penalty_grid: usize,
    pub interpolation: Interpolation,
    /// Golden-section refinement of the best penalty bracket.
    pub refine: bool,
}

impl Default for DpConfig {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID,
            penalty_grid: DEFAULT_PENALTY_GRID,
            interpolation: Interpolation::Linear,
            refine: true,
        }
    }
}

/// Sampled `L^t(w)` for `t = 0 … T-1` with the maximizing first-option penalties.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ValueCurve {
    beta: f64,
    grid_size: usize,
    penalty_grid: usize,
    interpolation: Interpolation,
    values: Vec<Vec<f64>>,
    argmax: Vec<Vec<f64>>,
}

impl ValueCurve {
    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn penalty_grid(&self) -> usize {
        self.penalty_grid
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// Number of stored horizons (the game length the curve was solved for).
    pub fn horizons(&self) -> usize {
        self.values.len()
    }

    /// `k / M`.
    pub fn grid_weight(&self, k: usize) -> f64 {
        k as f64 / self.grid_size as f64
    }

    /// `L^t` at every grid weight.
    pub fn values(&self, t: usize) -> &[f64] {
        &self.values[t]
    }

    /// Maximizing first-option penalty at every grid weight for horizon `t`.
    pub fn argmax_penalties(&self, t: usize) -> &[f64] {
        &self.argmax[t]
    }

    /// `L^t(w)` read with the curve's interpolation.
    pub fn value_at(&self, t: usize, w: f64) -> Result<f64> {
        if t >= self.horizons() {
            return Err(Error::InvalidParameter {
                name: "horizon",
                value: t as f64,
                expected: "a horizon index below the solved length",
            });
        }
        check_weight(w)?;
        Ok(interpolate(&self.values[t], w, self.interpolation))
    }

    fn nearest_index(&self, w: f64) -> usize {
        (libm::round(w * self.grid_size as f64) as usize).min(self.grid_size)
    }
}

fn check_weight(w: f64) -> Result<()> {
    if (0.0..=1.0).contains(&w) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "w",
            value: w,
            expected: "a first-option weight in [0, 1]",
        })
    }
}

fn interpolate(values: &[f64], w: f64, mode: Interpolation) -> f64 {
    let m = values.len() - 1;
    let pos = w * m as f64;
    match mode {
        Interpolation::Nearest => values[(libm::round(pos) as usize).min(m)],
        Interpolation::Linear => {
            let i = (libm::floor(pos) as usize).min(m - 1);
            let frac = pos - i as f64;
            values[i] + (values[i + 1] - values[i]) * frac
        }
    }
}

/// [`solve_curve_with`] using linear interpolation and refinement.
pub fn solve_curve(params: &GameParams, grid_size: usize, penalty_grid: usize) -> Result<ValueCurve> {
    solve_curve_with(
        params,
        &DpConfig {
            grid_size,
            penalty_grid,
            ..DpConfig::default()
        },
    )
}

pub fn solve_curve_with(params: &GameParams, config: &DpConfig) -> Result<ValueCurve> {
    params.require_two_options("value curves need exactly two options")?;
    let m = config.grid_size;
    let p = config.penalty_grid;
    if m < MIN_GRID {
        return Err(Error::InvalidParameter {
            name: "grid_size",
            value: m as f64,
            expected: "at least 100 weight grid points",
        });
    }
    if p < MIN_GRID {
        return Err(Error::InvalidParameter {
            name: "penalty_grid",
            value: p as f64,
            expected: "at least 100 penalty grid points",
        });
    }
    let beta = params.beta();
    let ln_beta = params.ln_beta();
    let penalties: Vec<f64> = (0..=p).map(|j| j as f64 / p as f64).collect();
    let factors: Vec<f64> = penalties
        .iter()
        .map(|&l| libm::exp((1.0 - 2.0 * l) * ln_beta))
        .collect();

    let mut values = Vec::with_capacity(params.horizon());
    let mut argmax = Vec::with_capacity(params.horizon());
    let (v0, a0): (Vec<f64>, Vec<f64>) = (0..=m)
        .map(|k| {
            let w = k as f64 / m as f64;
            if w >= 0.5 {
                (w, 1.0)
            } else {
                (1.0 - w, 0.0)
            }
        })
        .unzip();
    values.push(v0);
    argmax.push(a0);

    for _ in 1..params.horizon() {
        let prev = values.last().expect("horizon 0 is always present");
        let row = par::map_range(m + 1, |k| {
            let w = k as f64 / m as f64;
            best_penalty(w, beta, prev, &penalties, &factors, config)
        });
        let (v, a) = row.into_iter().unzip();
        values.push(v);
        argmax.push(a);
    }

    Ok(ValueCurve {
        beta,
        grid_size: m,
        penalty_grid: p,
        interpolation: config.interpolation,
        values,
        argmax,
    })
}

fn best_penalty(
    w: f64,
    beta: f64,
    prev: &[f64],
    penalties: &[f64],
    factors: &[f64],
    config: &DpConfig,
) -> (f64, f64) {
    let mode = config.interpolation;
    let value = |l: f64, next: f64| w * l + (1.0 - w) * (1.0 - l) + interpolate(prev, next, mode);
    let mut best_j = 0;
    let mut best_v = f64::NEG_INFINITY;
    for (j, (&l, &q)) in penalties.iter().zip(factors).enumerate() {
        let v = value(l, w / (w + (1.0 - w) * q));
        if v > best_v {
            best_v = v;
            best_j = j;
        }
    }
    let mut best_l = penalties[best_j];

    // The balanced penalty keeps w in place; always offering it makes
    // L^t(w) ≥ L^{t-1}(w) + 1/2 hold on the grid even for odd P.
    let hold = value(0.5, w);
    if hold > best_v {
        best_v = hold;
        best_l = 0.5;
    }

    if config.refine {
        let lo = penalties[best_j.saturating_sub(1)];
        let hi = penalties[(best_j + 1).min(penalties.len() - 1)];
        let objective = |l: f64| value(l, hedge::step_two(w, l, beta));
        if let Ok(r) = golden_section_max(objective, lo, hi, REFINE_TOL) {
            if r.max_value > best_v {
                best_v = r.max_value;
                best_l = r.argmax;
            }
        }
    }
    (best_v, best_l)
}

/// Walks the recovered argmax penalties forward from `w0` for `params.horizon()`
/// rounds, reading each round's penalty at the grid weight nearest the current weight.
pub fn recover_penalties(curve: &ValueCurve, w0: f64, params: &GameParams) -> Result<PenaltyPlan> {
    params.require_two_options("value curves need exactly two options")?;
    check_weight(w0)?;
    let t = params.horizon();
    if curve.horizons() < t {
        return Err(Error::InvalidParameter {
            name: "horizon",
            value: t as f64,
            expected: "a game no longer than the solved curve",
        });
    }
    if curve.beta() != params.beta() {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: params.beta(),
            expected: "the beta the curve was solved for",
        });
    }
    let mut w = w0;
    let mut penalties = Vec::with_capacity(t);
    for h in (0..t).rev() {
        let l = curve.argmax_penalties(h)[curve.nearest_index(w)];
        penalties.push(l);
        w = hedge::step_two(w, l, params.beta());
    }
    PenaltyPlan::from_first_option(&penalties)
}

/// Grid-convergence diagnostic: the largest change of the final-horizon
/// curve at the `M` grid weights when the grid is refined to `2M`.
pub fn grid_refinement_change(params: &GameParams, config: &DpConfig) -> Result<f64> {
    let coarse = solve_curve_with(params, config)?;
    let fine = solve_curve_with(
        params,
        &DpConfig {
            grid_size: 2 * config.grid_size,
            ..*config
        },
    )?;
    let t = coarse.horizons() - 1;
    let (a, b) = (coarse.values(t), fine.values(t));
    Ok(a.iter()
        .enumerate()
        .map(|(k, v)| (v - b[2 * k]).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hedge::{play_game, WeightVector};

    fn params(beta: f64, t: usize) -> GameParams {
        GameParams::two_options(beta, t).unwrap()
    }

    #[test]
    fn horizon_zero_is_exact() {
        let curve = solve_curve(&params(0.3, 1), 200, 100).unwrap();
        for (k, &v) in curve.values(0).iter().enumerate() {
            let w = curve.grid_weight(k);
            assert_eq!(v, w.max(1.0 - w));
        }
        assert_eq!(curve.value_at(0, 0.5).unwrap(), 0.5);
    }

    #[test]
    fn three_rounds_from_equal_weights() {
        for beta in [0.1, 0.5, 0.8] {
            let curve = solve_curve(&params(beta, 3), 4000, 400).unwrap();
            let expected = 0.5 + 2.0 / (1.0 + libm::sqrt(beta));
            let got = curve.value_at(2, 0.5).unwrap();
            assert!((got - expected).abs() < 2e-3, "beta={beta}: {got} vs {expected}");
        }
    }

    #[test]
    fn monotone_in_horizon_and_symmetric() {
        let curve = solve_curve(&params(0.1, 6), 1000, 200).unwrap();
        let m = curve.grid_size();
        for t in 1..curve.horizons() {
            let (now, before) = (curve.values(t), curve.values(t - 1));
            for k in 0..=m {
                assert!(now[k] >= before[k] + 0.5 - 1e-9);
                assert!((now[k] - now[m - k]).abs() < 1e-3);
                // The mirrored maximizer is (near) optimal here too; at ties
                // the stored maximizers need not mirror each other exactly.
                let w = curve.grid_weight(k);
                let l = 1.0 - curve.argmax_penalties(t)[m - k];
                let next = hedge::step_two(w, l, 0.1);
                let v = w * l + (1.0 - w) * (1.0 - l) + interpolate(before, next, Interpolation::Linear);
                assert!(v >= now[k] - 1e-3, "t={t} k={k}");
            }
        }
    }

    #[test]
    fn recover_single_round() {
        let p = params(0.8, 1);
        let curve = solve_curve(&p, 100, 100).unwrap();
        for w in [0.51, 0.7, 1.0] {
            let plan = recover_penalties(&curve, w, &p).unwrap();
            assert_eq!(plan.first_option_penalties(), vec![1.0]);
        }
    }

    #[test]
    fn recover_rejects_bad_input() {
        let curve = solve_curve(&params(0.8, 2), 100, 100).unwrap();
        assert!(recover_penalties(&curve, 1.2, &params(0.8, 2)).is_err());
        assert!(recover_penalties(&curve, 0.5, &params(0.8, 3)).is_err());
        assert!(recover_penalties(&curve, 0.5, &params(0.7, 2)).is_err());
    }

    #[test]
    fn replay_matches_curve() {
        let p = params(0.8, 6);
        let (m, q) = (2000, 200);
        let curve = solve_curve(&p, m, q).unwrap();
        for w in [0.2, 0.5, 0.62, 0.9] {
            let plan = recover_penalties(&curve, w, &p).unwrap();
            let loss = play_game(&WeightVector::two(w).unwrap(), &plan, &p)
                .unwrap()
                .cumulative_loss();
            let v = curve.value_at(5, w).unwrap();
            let tol = 5.0 * (1.0 / m as f64 + 1.0 / q as f64) * 6.0;
            assert!((loss - v).abs() <= tol, "w={w}: {loss} vs {v}");
        }
    }

    #[test]
    fn nearest_interpolation_runs() {
        let config = DpConfig {
            grid_size: 1000,
            penalty_grid: 100,
            interpolation: Interpolation::Nearest,
            refine: false,
        };
        let curve = solve_curve_with(&params(0.5, 3), &config).unwrap();
        let expected = 0.5 + 2.0 / (1.0 + libm::sqrt(0.5));
        assert!((curve.value_at(2, 0.5).unwrap() - expected).abs() < 1e-2);
    }

    #[test]
    fn rejects_small_grids_and_many_options() {
        assert!(solve_curve(&params(0.5, 2), 50, 100).is_err());
        assert!(solve_curve(&params(0.5, 2), 100, 50).is_err());
        assert!(solve_curve(&GameParams::new(0.5, 3, 2).unwrap(), 100, 100).is_err());
    }

    #[test]
    fn refinement_change_is_small_and_shrinks() {
        let p = params(0.5, 4);
        let cfg = |m| DpConfig {
            grid_size: m,
            penalty_grid: 200,
            ..DpConfig::default()
        };
        let coarse = grid_refinement_change(&p, &cfg(200)).unwrap();
        let fine = grid_refinement_change(&p, &cfg(800)).unwrap();
        assert!(coarse < 1e-2, "{coarse}");
        assert!(fine <= coarse, "{fine} vs {coarse}");
    }
}
