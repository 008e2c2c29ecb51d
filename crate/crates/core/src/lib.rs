//! Worst-case adversaries for the Hedge (multiplicative weights) player.
//!
//! The game: each round the player splits a unit bet over `N` options with
//! Hedge weights, the adversary distributes one unit of penalty over the
//! options, and the player loses `Σ p_i ℓ_i`. Hedge then multiplies every
//! weight by `β^{ℓ_i}` and renormalizes. This crate answers the adversary's
//! question: which penalty sequence maximizes the player's cumulative loss?
//!
//! - [`hedge`]: the player, game playback and the two-option weight walk.
//! - [`adversary`]: greedy, rotating, equal-weights and pattern-optimal plans.
//! - [`dp`]: value curves over a weight grid and penalty recovery.
//! - [`oracle`]: exhaustive grid search for short games.
//! - [`scalar`]: coarse-grid plus golden-section 1-D maximization.
//! - [`analysis`]: lemma checkers, error bounds and rotation cycle losses.
//!
//! The crate is `no_std` (it needs `alloc`). The `std` feature is only needed
//! for `parallel`, which spreads grid work across threads with rayon.

#![cfg_attr(not(any(feature = "std", test)), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod adversary;
pub mod analysis;
pub mod dp;
mod error;
pub mod hedge;
pub mod oracle;
mod par;
mod plan;
pub mod scalar;
pub mod special;

pub use adversary::{
    equal_weights_plan, greedy_binary_plan, ideal_rotation, optimal_plan, rotating_plan,
    transition_phase_length, RotationSpec,
};
pub use dp::{grid_refinement_change, recover_penalties, solve_curve, solve_curve_with, DpConfig, Interpolation, ValueCurve};
pub use error::{Error, Result};
pub use hedge::{
    f_walk, hedge_update, play_game, round_loss, transition_penalty, GameParams, GameTrace,
    PenaltyVector, WeightVector,
};
pub use oracle::{brute_force_max, OracleResult};
pub use plan::{PenaltyPlan, PlanPattern};
pub use scalar::{maximize_1d, ScalarOptResult};
