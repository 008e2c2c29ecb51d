//! Exhaustive search over grid penalty sequences for short two-option games.
//!
//! Deliberately simple: every sequence in `{0, 1/q, …, 1}^T` is played, with
//! no pruning. The optional refinement polishes the best grid sequence one
//! coordinate at a time and never accepts a worse plan.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hedge::{self, play_game, GameParams, WeightVector};
use crate::par;
use crate::plan::PenaltyPlan;
use crate::scalar::golden_section_max;

pub const MAX_ROUNDS: usize = 6;
pub const MIN_RESOLUTION: usize = 20;
const REFINE_SWEEPS: usize = 3;
const REFINE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OracleResult {
    /// Replayed loss of `best_plan`.
    pub best_loss: f64,
    pub best_plan: PenaltyPlan,
    /// Best loss on the grid alone, before refinement.
    pub grid_loss: f64,
    pub grid_resolution: usize,
    pub nodes_explored: u64,
    pub refined: bool,
}

struct Search<'a> {
    rounds: usize,
    penalties: &'a [f64],
    factors: &'a [f64],
}

#[derive(Clone)]
struct Best {
    loss: f64,
    path: Vec<usize>,
    nodes: u64,
}

impl Search<'_> {
    fn dfs(&self, depth: usize, w: f64, acc: f64, path: &mut Vec<usize>, best: &mut Best) {
        best.nodes += 1;
        if depth == self.rounds {
            if acc > best.loss {
                best.loss = acc;
                best.path.clone_from(path);
            }
            return;
        }
        for (j, (&l, &q)) in self.penalties.iter().zip(self.factors).enumerate() {
            let loss = w * l + (1.0 - w) * (1.0 - l);
            let next = w / (w + (1.0 - w) * q);
            path.push(j);
            self.dfs(depth + 1, next, acc + loss, path, best);
            path.pop();
        }
    }
}

/// Best first-option penalty sequence on the grid `{0, 1/q, …, 1}`.
///
/// Refuses games longer than [`MAX_ROUNDS`] rounds (the cost is `(q+1)^T`
/// sequences). Grid ties keep the lexicographically smallest sequence.
pub fn brute_force_max(
    w0: &WeightVector,
    params: &GameParams,
    q: usize,
    refine: bool,
) -> Result<OracleResult> {
    params.require_two_options("the oracle searches two-option games only")?;
    if w0.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: w0.len(),
        });
    }
    let rounds = params.horizon();
    if rounds > MAX_ROUNDS {
        return Err(Error::TooExpensive {
            rounds,
            evaluations: libm::pow((q + 1) as f64, rounds as f64),
        });
    }
    if q < MIN_RESOLUTION {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q as f64,
            expected: "a penalty grid of at least 20 steps",
        });
    }

    let beta = params.beta();
    let penalties: Vec<f64> = (0..=q).map(|j| j as f64 / q as f64).collect();
    let factors: Vec<f64> = penalties
        .iter()
        .map(|&l| libm::exp((1.0 - 2.0 * l) * params.ln_beta()))
        .collect();
    let search = Search {
        rounds,
        penalties: &penalties,
        factors: &factors,
    };
    let w = w0.first();

    // One partition per first-round penalty.
    let parts = par::map_range(q + 1, |j| {
        let l = penalties[j];
        let mut best = Best {
            loss: f64::NEG_INFINITY,
            path: Vec::new(),
            nodes: 0,
        };
        let mut path = alloc::vec![j];
        let next = w / (w + (1.0 - w) * factors[j]);
        search.dfs(1, next, w * l + (1.0 - w) * (1.0 - l), &mut path, &mut best);
        best
    });
    let nodes_explored = 1 + parts.iter().map(|b| b.nodes).sum::<u64>();
    let mut winner = &parts[0];
    for part in &parts[1..] {
        if part.loss > winner.loss {
            winner = part;
        }
    }

    let grid_seq: Vec<f64> = winner.path.iter().map(|&j| penalties[j]).collect();
    let grid_plan = PenaltyPlan::from_first_option(&grid_seq)?;
    let grid_loss = play_game(w0, &grid_plan, params)?.cumulative_loss();

    let (best_plan, best_loss) = if refine {
        let seq = refine_coordinates(w, beta, grid_seq, 1.0 / q as f64)?;
        let plan = PenaltyPlan::from_first_option(&seq)?;
        let loss = play_game(w0, &plan, params)?.cumulative_loss();
        if loss > grid_loss {
            (plan, loss)
        } else {
            (grid_plan, grid_loss)
        }
    } else {
        (grid_plan, grid_loss)
    };

    Ok(OracleResult {
        best_loss,
        best_plan: best_plan.with_predicted_loss(Some(best_loss)),
        grid_loss,
        grid_resolution: q,
        nodes_explored,
        refined: refine,
    })
}

/// Cyclic coordinate ascent: each penalty is re-optimized within `± radius`
/// of its current value with the others held fixed.
fn refine_coordinates(w: f64, beta: f64, mut seq: Vec<f64>, radius: f64) -> Result<Vec<f64>> {
    let total = |s: &[f64]| hedge::two_option_loss(w, beta, s.iter().copied());
    let mut current = total(&seq);
    for _ in 0..REFINE_SWEEPS {
        for i in 0..seq.len() {
            let centre = seq[i];
            let lo = (centre - radius).max(0.0);
            let hi = (centre + radius).min(1.0);
            let mut trial = seq.clone();
            let r = golden_section_max(
                |x| {
                    trial[i] = x;
                    total(&trial)
                },
                lo,
                hi,
                REFINE_TOL,
            )?;
            if r.max_value > current {
                seq[i] = r.argmax;
                current = r.max_value;
            }
        }
    }
    Ok(seq)
}
