//! Adversary plans.
//!
//! [`greedy_binary_plan`] and [`rotating_plan`] work for any number of options.
//! The fractional planners ([`equal_weights_plan`], [`optimal_plan`]) are
//! two-option only.
//!
//! [`optimal_plan`] does not trust region tests to pick a pattern. It builds the
//! greedy plan, derives a family of skeletons from it (a run of ones on the
//! heavy arm followed by alternation, with the run length varied around the
//! greedy one), frees one penalty in each skeleton, maximizes over that value
//! and keeps whichever plan loses the player the most.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hedge::{self, play_game, GameParams, PenaltyVector, WeightVector};
use crate::par;
use crate::plan::{PenaltyPlan, PlanPattern};
use crate::scalar::{maximize_1d, DEFAULT_COARSE_POINTS, DEFAULT_TOL};

/// Ideal weights for a rotating adversary and what they cost the player per cycle.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct RotationSpec {
    pub ideal_weights: Vec<f64>,
    pub per_cycle_loss: f64,
    pub cycle_length: usize,
}

impl RotationSpec {
    pub fn per_round_loss(&self) -> f64 {
        self.per_cycle_loss / self.cycle_length as f64
    }
}

/// Unit penalty on the heaviest arm every round (lowest index on ties).
///
/// Weights are tracked through penalty counts, `w_i β^{c_i}`, so long runs do
/// not accumulate rounding from repeated updates.
pub fn greedy_binary_plan(w0: &WeightVector, params: &GameParams) -> Result<PenaltyPlan> {
    let n = params.n_options();
    if w0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: w0.len(),
        });
    }
    let ln_beta = params.ln_beta();
    let mut counts = alloc::vec![0u32; n];
    let mut weights = alloc::vec![0.0; n];
    let mut rows = Vec::with_capacity(params.horizon());
    let mut loss = 0.0;
    let first_target = w0.argmax();
    let mut leading = 0;
    let mut still_leading = true;
    for _ in 0..params.horizon() {
        let c_min = counts.iter().copied().min().unwrap_or(0);
        for ((v, &w), &c) in weights.iter_mut().zip(w0.as_slice()).zip(&counts) {
            *v = w * libm::exp(f64::from(c - c_min) * ln_beta);
        }
        let total: f64 = weights.iter().sum();
        for v in &mut weights {
            *v /= total;
        }
        let target = hedge::argmax_with_ties(&weights);
        loss += weights[target];
        if still_leading && target == first_target {
            leading += 1;
        } else {
            still_leading = false;
        }
        counts[target] += 1;
        rows.push(PenaltyVector::unit(n, target)?);
    }
    let pattern = if leading == params.horizon() {
        PlanPattern::GreedyAllOnes
    } else {
        PlanPattern::GreedyThenRotation
    };
    Ok(PenaltyPlan::new(rows, pattern)?
        .with_transition_length(Some(leading))
        .with_predicted_loss(Some(loss)))
}

/// Rounds during which greedy play provably keeps the first weight above the
/// intersection area: `max(min(⌊ln((1-w)/w)/ln β - 1⌋, T), 0)`.
///
/// Needs `w > 1/2`; mirror the arms first otherwise.
pub fn transition_phase_length(w: f64, params: &GameParams) -> Result<usize> {
    if !(w > 0.5 && w < 1.0) {
        return Err(Error::InvalidParameter {
            name: "w",
            value: w,
            expected: "a first-option weight in (1/2, 1); mirror the arms first",
        });
    }
    let raw = libm::floor(libm::log((1.0 - w) / w) / params.ln_beta() - 1.0);
    Ok(raw.clamp(0.0, params.horizon() as f64) as usize)
}

/// Row `t` is `base_row` shifted cyclically by `t` places.
pub fn rotating_plan(params: &GameParams, base_row: &PenaltyVector) -> Result<PenaltyPlan> {
    if base_row.len() != params.n_options() {
        return Err(Error::DimensionMismatch {
            expected: params.n_options(),
            found: base_row.len(),
        });
    }
    let rows = (0..params.horizon()).map(|t| base_row.rotated(t)).collect();
    PenaltyPlan::explicit(rows)
}

/// `w_i* = (1 - β^{1/N}) β^{(i-1)/N} / (1 - β)`, per-cycle loss `N (1 - β^{1/N}) / (1 - β)`.
pub fn ideal_rotation(params: &GameParams) -> RotationSpec {
    let n = params.n_options();
    let ln_beta = params.ln_beta();
    let nf = n as f64;
    // 1 - β^{1/N} and 1 - β without cancellation for β near 1.
    let scale = libm::expm1(ln_beta / nf) / libm::expm1(ln_beta);
    let ideal_weights = (0..n)
        .map(|i| scale * libm::exp(ln_beta * i as f64 / nf))
        .collect();
    RotationSpec {
        ideal_weights,
        per_cycle_loss: nf * scale,
        cycle_length: n,
    }
}

/// Cumulative loss of `(x, 0, 1, 0, 1, …)` from equal weights:
/// `1/2 + ⌈(T-1)/2⌉ β/(y+β) + ⌊(T-1)/2⌋ y/(y+β²)` with `y = β^{2x}`.
pub fn equal_weights_loss(x: f64, params: &GameParams) -> f64 {
    let beta = params.beta();
    let y = libm::exp(2.0 * x * params.ln_beta());
    let rest = params.horizon() - 1;
    let up = rest.div_ceil(2) as f64;
    let down = (rest / 2) as f64;
    0.5 + up * beta / (y + beta) + down * y / (y + beta * beta)
}

/// Maximizer of [`equal_weights_loss`] over `x ∈ [0, 1]`.
///
/// Odd `T` gives `3/4`. Even `T = 2k` gives `y* = (√((1-β)² β³ k(k-1)) - β²) / (β + k - βk)`
/// and `x* = ln y* / (2 ln β)` clamped to `[0, 1]`; `y* ≤ 0` means the
/// derivative never changes sign and `x* = 1`.
pub fn equal_weights_x_star(params: &GameParams) -> f64 {
    let t = params.horizon();
    if t % 2 == 1 {
        return 0.75;
    }
    let beta = params.beta();
    let k = (t / 2) as f64;
    let root = libm::sqrt((1.0 - beta) * (1.0 - beta) * beta * beta * beta * k * (k - 1.0));
    let y = (root - beta * beta) / (beta + k - beta * k);
    if y <= 0.0 {
        return 1.0;
    }
    (libm::log(y) / (2.0 * params.ln_beta())).clamp(0.0, 1.0)
}

/// Worst case from `(1/2, 1/2)`: `(x*, 0, 1, 0, …)` on the first option.
pub fn equal_weights_plan(params: &GameParams) -> Result<PenaltyPlan> {
    params.require_two_options("the equal-weights plan needs exactly two options")?;
    let x = equal_weights_x_star(params);
    let mut first = Vec::with_capacity(params.horizon());
    first.push(x);
    first.extend((1..params.horizon()).map(|t| if t % 2 == 1 { 0.0 } else { 1.0 }));
    Ok(PenaltyPlan::from_first_option(&first)?
        .with_pattern(PlanPattern::EqualWeightsClosedForm)
        .with_adjustment(Some(x))
        .with_transition_length(Some(0))
        .with_predicted_loss(Some(equal_weights_loss(x, params))))
}

/// `[1; ones]` followed by `0, 1, 0, …` up to `horizon` entries.
fn skeleton(ones: usize, horizon: usize) -> Vec<f64> {
    (0..horizon)
        .map(|t| {
            if t < ones || (t - ones) % 2 == 1 {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
struct Candidate {
    ones: usize,
    free_at: usize,
    value: f64,
    loss: f64,
}

fn best_on_skeleton(w: f64, beta: f64, ones: usize, free_at: usize, horizon: usize) -> Result<Candidate> {
    let base = skeleton(ones, horizon);
    let objective = |v: f64| {
        hedge::two_option_loss(
            w,
            beta,
            base.iter()
                .enumerate()
                .map(|(t, &l)| if t == free_at { v } else { l }),
        )
    };
    let r = maximize_1d(objective, 0.0, 1.0, DEFAULT_COARSE_POINTS, DEFAULT_TOL)?;
    Ok(Candidate {
        ones,
        free_at,
        value: r.argmax,
        loss: r.max_value,
    })
}

/// Best plan found for a two-option game.
///
/// The greedy plan is always among the candidates and is kept unless another
/// candidate beats it by more than `1e-12`. Starts below one half are solved
/// on the mirrored game; an exact tie at one half uses [`equal_weights_plan`].
pub fn optimal_plan(w0: &WeightVector, params: &GameParams) -> Result<PenaltyPlan> {
    params.require_two_options("the optimal planner needs exactly two options")?;
    if w0.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: w0.len(),
        });
    }
    let w = w0.first();
    if w < 0.5 {
        let mirrored = optimal_plan(&w0.mirrored(), params)?;
        return Ok(mirrored.mirrored());
    }

    let greedy = greedy_binary_plan(w0, params)?;
    let greedy_loss = play_game(w0, &greedy, params)?.cumulative_loss();

    if w == 0.5 {
        let plan = equal_weights_plan(params)?;
        let loss = play_game(w0, &plan, params)?.cumulative_loss();
        return Ok(if loss > greedy_loss + 1e-12 {
            plan.with_predicted_loss(Some(loss))
        } else {
            greedy.with_predicted_loss(Some(greedy_loss))
        });
    }

    let horizon = params.horizon();
    let run = greedy.transition_length().unwrap_or(0);
    let mut shapes = Vec::new();
    for ones in run.saturating_sub(2)..=(run + 2).min(horizon) {
        for free_at in [0, 1, ones, ones + 1] {
            if free_at < horizon && !shapes.contains(&(ones, free_at)) {
                shapes.push((ones, free_at));
            }
        }
    }
    let beta = params.beta();
    let candidates = par::map_range(shapes.len(), |i| {
        let (ones, free_at) = shapes[i];
        best_on_skeleton(w, beta, ones, free_at, horizon)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let mut best: Option<&Candidate> = None;
    for c in &candidates {
        if best.is_none_or(|b| c.loss > b.loss) {
            best = Some(c);
        }
    }
    let Some(best) = best.filter(|c| c.loss > greedy_loss + 1e-12) else {
        return Ok(greedy.with_predicted_loss(Some(greedy_loss)));
    };

    let mut first = skeleton(best.ones, horizon);
    let replaced = first[best.free_at];
    first[best.free_at] = best.value;
    let plan = PenaltyPlan::from_first_option(&first)?;
    let (pattern, adjustment) = if plan.is_binary() {
        (PlanPattern::ExplicitRows, None)
    } else if best.free_at == 0 && replaced == 1.0 {
        (PlanPattern::AdjustedFirstRound, Some(1.0 - best.value))
    } else {
        (
            PlanPattern::AdjustedEntryRotation,
            Some((best.value - replaced).abs()),
        )
    };
    let loss = play_game(w0, &plan, params)?.cumulative_loss();
    if loss <= greedy_loss {
        return Ok(greedy.with_predicted_loss(Some(greedy_loss)));
    }
    Ok(plan
        .with_pattern(pattern)
        .with_adjustment(adjustment)
        .with_transition_length(Some(best.ones))
        .with_predicted_loss(Some(loss)))
}
