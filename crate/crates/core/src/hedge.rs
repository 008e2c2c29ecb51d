//! The Hedge player and the game it plays.
//!
//! Weights are kept normalized (they are the bet fractions `p_i`). A round with
//! penalties `ℓ` costs the player `Σ p_i ℓ_i` and moves the weights to
//! `p_i β^{ℓ_i} / Σ_j p_j β^{ℓ_j}`.
//!
//! For two options the whole trajectory lives on a one-parameter curve:
//! after any history the first weight is [`f_walk`]`(w, x)` where `x` is the
//! signed penalty offset (`+1` for a unit penalty on the first option, `-1`
//! for one on the second, `2ℓ - 1` in general).

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::plan::PenaltyPlan;

/// Sum tolerance inside which weights are silently renormalized.
pub const RENORMALIZE_TOL: f64 = 1e-9;
/// Sum tolerance for penalty rows (the budget is used with equality).
pub const PENALTY_SUM_TOL: f64 = 1e-12;

/// Fixed definition of a game: adaptation factor, options and rounds.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GameParams {
    beta: f64,
    n_options: usize,
    horizon: usize,
}

impl GameParams {
    pub fn new(beta: f64, n_options: usize, horizon: usize) -> Result<Self> {
        if !(beta > 0.0 && beta < 1.0) {
            return Err(Error::InvalidParameter {
                name: "beta",
                value: beta,
                expected: "a value in the open interval (0, 1)",
            });
        }
        if n_options < 2 {
            return Err(Error::InvalidParameter {
                name: "n_options",
                value: n_options as f64,
                expected: "at least 2 options",
            });
        }
        if horizon < 1 {
            return Err(Error::InvalidParameter {
                name: "horizon",
                value: horizon as f64,
                expected: "at least 1 round",
            });
        }
        Ok(Self {
            beta,
            n_options,
            horizon,
        })
    }

    /// Two-option game, the setting of most of the analysis.
    pub fn two_options(beta: f64, horizon: usize) -> Result<Self> {
        Self::new(beta, 2, horizon)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_options(&self) -> usize {
        self.n_options
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn ln_beta(&self) -> f64 {
        libm::log(self.beta)
    }

    /// Same game with a different number of rounds.
    pub fn with_horizon(&self, horizon: usize) -> Result<Self> {
        Self::new(self.beta, self.n_options, horizon)
    }

    pub(crate) fn require_two_options(&self, what: &'static str) -> Result<()> {
        if self.n_options == 2 {
            Ok(())
        } else {
            Err(Error::Unsupported(what))
        }
    }
}

/// Normalized bet fractions, one per option.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WeightVector {
    weights: Vec<f64>,
}

impl WeightVector {
    /// Validates and renormalizes. Sums off by more than [`RENORMALIZE_TOL`]
    /// are rejected rather than silently rescaled.
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "weights",
                value: weights.len() as f64,
                expected: "at least 2 components",
            });
        }
        for &w in &weights {
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "weight",
                    value: w,
                    expected: "a finite nonnegative value",
                });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > RENORMALIZE_TOL {
            return Err(Error::NotNormalized { what: "weights", sum });
        }
        let weights = weights.into_iter().map(|w| w / sum).collect();
        Ok(Self { weights })
    }

    /// `(w, 1 - w)`.
    pub fn two(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidParameter {
                name: "w",
                value: w,
                expected: "a first-option weight in [0, 1]",
            });
        }
        Ok(Self {
            weights: alloc::vec![w, 1.0 - w],
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0 / n as f64; n])
    }

    /// Caller guarantees normalization (used on freshly updated weights).
    pub(crate) fn from_normalized(weights: Vec<f64>) -> Self {
        Self { weights }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// First-option weight `w_1`.
    pub fn first(&self) -> f64 {
        self.weights[0]
    }

    /// Index of the largest weight; near-ties (within 1e-12) go to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax_with_ties(&self.weights)
    }

    /// Options in reverse order (for two options: swap the arms).
    pub fn mirrored(&self) -> Self {
        let mut weights = self.weights.clone();
        weights.reverse();
        Self { weights }
    }
}

pub(crate) fn argmax_with_ties(values: &[f64]) -> usize {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    values
        .iter()
        .position(|&v| v >= max - 1e-12)
        .unwrap_or(0)
}

/// One round's penalty distribution: entries in `[0, 1]` summing to one.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PenaltyVector {
    penalties: Vec<f64>,
}

impl PenaltyVector {
    pub fn new(penalties: Vec<f64>) -> Result<Self> {
        if penalties.len() < 2 {
            return Err(Error::InvalidParameter {
                name: "penalties",
                value: penalties.len() as f64,
                expected: "at least 2 components",
            });
        }
        for &l in &penalties {
            if !(0.0..=1.0).contains(&l) {
                return Err(Error::InvalidParameter {
                    name: "penalty",
                    value: l,
                    expected: "a value in [0, 1]",
                });
            }
        }
        let sum: f64 = penalties.iter().sum();
        if (sum - 1.0).abs() > PENALTY_SUM_TOL {
            return Err(Error::NotNormalized {
                what: "penalties",
                sum,
            });
        }
        Ok(Self { penalties })
    }

    /// `(x, 1 - x)`: `x` on the first option, the rest of the budget on the second.
    pub fn two(x: f64) -> Result<Self> {
        Self::new(alloc::vec![x, 1.0 - x])
    }

    /// The whole unit of penalty on option `index`.
    pub fn unit(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: index + 1,
            });
        }
        let mut penalties = alloc::vec![0.0; n];
        penalties[index] = 1.0;
        Self::new(penalties)
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(alloc::vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.penalties
    }

    pub fn len(&self) -> usize {
        self.penalties.len()
    }

    pub fn is_empty(&self) -> bool {
        self.penalties.is_empty()
    }

    /// First-option penalty `ℓ_1`.
    pub fn first(&self) -> f64 {
        self.penalties[0]
    }

    pub fn is_binary(&self) -> bool {
        self.penalties.iter().all(|&l| l == 0.0 || l == 1.0)
    }

    /// Cyclic shift: option `i + k` receives what option `i` had.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.penalties.len();
        let mut penalties = alloc::vec![0.0; n];
        for (i, &l) in self.penalties.iter().enumerate() {
            penalties[(i + k) % n] = l;
        }
        Self { penalties }
    }

    pub fn mirrored(&self) -> Self {
        let mut penalties = self.penalties.clone();
        penalties.reverse();
        Self { penalties }
    }

    pub(crate) fn min_max(&self) -> (f64, f64) {
        self.penalties
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &l| {
                (lo.min(l), hi.max(l))
            })
    }
}

/// Per-round record of a played game.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GameTrace {
    params: GameParams,
    weights_per_round: Vec<WeightVector>,
    penalties_per_round: Vec<PenaltyVector>,
    loss_per_round: Vec<f64>,
    cumulative_loss: f64,
    final_weights: WeightVector,
}

impl GameTrace {
    pub fn params(&self) -> &GameParams {
        &self.params
    }

    /// `w^0 … w^{T-1}`: the weights the player bets with in each round.
    pub fn weights_per_round(&self) -> &[WeightVector] {
        &self.weights_per_round
    }

    pub fn penalties_per_round(&self) -> &[PenaltyVector] {
        &self.penalties_per_round
    }

    pub fn loss_per_round(&self) -> &[f64] {
        &self.loss_per_round
    }

    pub fn cumulative_loss(&self) -> f64 {
        self.cumulative_loss
    }

    /// `w^T`, the weights a further round would start from.
    pub fn final_weights(&self) -> &WeightVector {
        &self.final_weights
    }
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// One Hedge step: `W_i = w_i β^{ℓ_i} / Σ_j w_j β^{ℓ_j}`.
pub fn hedge_update(
    w: &WeightVector,
    l: &PenaltyVector,
    params: &GameParams,
) -> Result<WeightVector> {
    check_dims(params.n_options(), w.len())?;
    check_dims(params.n_options(), l.len())?;
    // Factors are taken relative to the smallest penalty so they stay in [β, 1].
    let ln_beta = params.ln_beta();
    let (l_min, _) = l.min_max();
    let mut next: Vec<f64> = w
        .as_slice()
        .iter()
        .zip(l.as_slice())
        .map(|(&wi, &li)| wi * libm::exp((li - l_min) * ln_beta))
        .collect();
    let sum: f64 = next.iter().sum();
    for v in &mut next {
        *v /= sum;
    }
    Ok(WeightVector::from_normalized(next))
}

/// Player's loss in one round, `Σ_i w_i ℓ_i`.
pub fn round_loss(w: &WeightVector, l: &PenaltyVector) -> Result<f64> {
    check_dims(w.len(), l.len())?;
    let loss: f64 = w
        .as_slice()
        .iter()
        .zip(l.as_slice())
        .map(|(&wi, &li)| wi * li)
        .sum();
    // A convex combination of the penalties; clamp away rounding overshoot.
    let (lo, hi) = l.min_max();
    Ok(loss.clamp(lo, hi))
}

/// Plays `plan` against Hedge started at `w0`.
pub fn play_game(w0: &WeightVector, plan: &PenaltyPlan, params: &GameParams) -> Result<GameTrace> {
    check_dims(params.n_options(), w0.len())?;
    if plan.len() != params.horizon() {
        return Err(Error::PlanLength {
            expected: params.horizon(),
            found: plan.len(),
        });
    }
    let mut weights_per_round = Vec::with_capacity(plan.len());
    let mut loss_per_round = Vec::with_capacity(plan.len());
    let mut cumulative_loss = 0.0;
    let mut w = w0.clone();
    for row in plan.rows() {
        let loss = round_loss(&w, row)?;
        let next = hedge_update(&w, row, params)?;
        cumulative_loss += loss;
        loss_per_round.push(loss);
        weights_per_round.push(core::mem::replace(&mut w, next));
    }
    Ok(GameTrace {
        params: *params,
        weights_per_round,
        penalties_per_round: plan.rows().to_vec(),
        loss_per_round,
        cumulative_loss,
        final_weights: w,
    })
}

fn require_interior(name: &'static str, w: f64) -> Result<()> {
    if w > 0.0 && w < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: w,
            expected: "a weight in the open interval (0, 1)",
        })
    }
}

/// `f(w, x) = w β^x / (w β^x + 1 - w)`: the first-option weight after a net
/// penalty offset `x` from `w`.
pub fn f_walk(w: f64, x: f64, params: &GameParams) -> Result<f64> {
    require_interior("w", w)?;
    if !x.is_finite() {
        return Err(Error::InvalidParameter {
            name: "x",
            value: x,
            expected: "a finite offset",
        });
    }
    Ok(walk(w, x, params.beta()))
}

/// Unchecked [`f_walk`]. Stable for large `|x|` because the power is always ≤ 1.
pub(crate) fn walk(w: f64, x: f64, beta: f64) -> f64 {
    if x >= 0.0 {
        let a = w * libm::pow(beta, x);
        a / (a + (1.0 - w))
    } else {
        w / (w + (1.0 - w) * libm::pow(beta, -x))
    }
}

/// Two-option weight after first-option penalty `l`: `w / (w + (1-w) β^{1-2l})`.
#[inline]
pub(crate) fn step_two(w: f64, l: f64, beta: f64) -> f64 {
    walk(w, 2.0 * l - 1.0, beta)
}

/// Cumulative loss of a two-option game given first-option penalties only.
/// Cheap path for optimizers; [`play_game`] is the reference.
pub(crate) fn two_option_loss<I: IntoIterator<Item = f64>>(w0: f64, beta: f64, penalties: I) -> f64 {
    let mut w = w0;
    let mut total = 0.0;
    for l in penalties {
        total += w * l + (1.0 - w) * (1.0 - l);
        w = step_two(w, l, beta);
    }
    total
}

/// First-option penalty that moves the weight from `u` to `u_target` in one round:
/// `1/2 + ln(u'(1-u) / (u(1-u'))) / (2 ln β)`.
pub fn transition_penalty(u: f64, u_target: f64, params: &GameParams) -> Result<f64> {
    require_interior("u", u)?;
    require_interior("u_target", u_target)?;
    let beta = params.beta();
    let lowest = walk(u, 1.0, beta);
    let highest = walk(u, -1.0, beta);
    if u_target < lowest - 1e-12 || u_target > highest + 1e-12 {
        return Err(Error::Unreachable {
            from: u,
            to: u_target,
        });
    }
    let ratio = (u_target * (1.0 - u)) / (u * (1.0 - u_target));
    let x = 0.5 + libm::log(ratio) / (2.0 * params.ln_beta());
    Ok(x.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn p(beta: f64, t: usize) -> GameParams {
        GameParams::two_options(beta, t).unwrap()
    }

    #[test]
    fn params_reject_degenerate_beta() {
        assert!(GameParams::new(0.0, 2, 1).is_err());
        assert!(GameParams::new(1.0, 2, 1).is_err());
        assert!(GameParams::new(f64::NAN, 2, 1).is_err());
        assert!(GameParams::new(0.5, 1, 1).is_err());
        assert!(GameParams::new(0.5, 2, 0).is_err());
    }

    #[test]
    fn weight_vector_renormalizes_small_drift_only() {
        let w = WeightVector::new(vec![0.5 + 5e-10, 0.5]).unwrap();
        assert!(close(w.as_slice().iter().sum::<f64>(), 1.0, 1e-15));
        assert!(WeightVector::new(vec![0.6, 0.5]).is_err());
        assert!(WeightVector::new(vec![-0.1, 1.1]).is_err());
        // Degenerate weights are fine here, only the walk rejects them.
        assert!(WeightVector::new(vec![1.0, 0.0]).is_ok());
    }

    #[test]
    fn penalty_vector_requires_full_budget() {
        assert!(PenaltyVector::new(vec![0.5, 0.4]).is_err());
        assert!(PenaltyVector::new(vec![1.2, -0.2]).is_err());
        assert!(PenaltyVector::two(0.3).is_ok());
        assert_eq!(PenaltyVector::unit(3, 1).unwrap().as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn update_with_unit_penalty_from_equal_weights() {
        let beta = 0.8;
        let w = WeightVector::two(0.5).unwrap();
        let next = hedge_update(&w, &PenaltyVector::two(1.0).unwrap(), &p(beta, 1)).unwrap();
        assert!(close(next.first(), beta / (1.0 + beta), 1e-15));
        assert!(close(next.as_slice()[1], 1.0 / (1.0 + beta), 1e-15));
        assert!(close(next.first(), 0.444_444_444_444_444_4, 1e-15));
    }

    #[test]
    fn equal_penalties_keep_weights() {
        let w = WeightVector::two(0.5).unwrap();
        for beta in [0.1, 0.5, 0.9] {
            let next = hedge_update(&w, &PenaltyVector::two(0.5).unwrap(), &p(beta, 1)).unwrap();
            assert!(close(next.first(), 0.5, 1e-15));
        }
    }

    #[test]
    fn quarter_split_reaches_ideal_rotation_weight() {
        let w = WeightVector::two(0.5).unwrap();
        for beta in [0.1, 0.37, 0.8] {
            let next = hedge_update(&w, &PenaltyVector::two(0.25).unwrap(), &p(beta, 1)).unwrap();
            let s = libm::sqrt(beta);
            assert!(close(next.first(), 1.0 / (1.0 + s), 1e-14));
            assert!(close(next.as_slice()[1], s / (1.0 + s), 1e-14));
        }
    }

    #[test]
    fn update_rejects_dimension_mismatch() {
        let w = WeightVector::uniform(3).unwrap();
        let err = hedge_update(&w, &PenaltyVector::two(1.0).unwrap(), &p(0.5, 1));
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        assert!(round_loss(&w, &PenaltyVector::two(1.0).unwrap()).is_err());
    }

    #[test]
    fn round_loss_examples() {
        let half = WeightVector::two(0.5).unwrap();
        for x in [0.0, 0.3, 1.0] {
            let l = round_loss(&half, &PenaltyVector::two(x).unwrap()).unwrap();
            assert!(close(l, 0.5, 1e-15));
        }
        let corner = WeightVector::two(1.0).unwrap();
        assert_eq!(round_loss(&corner, &PenaltyVector::two(0.0).unwrap()).unwrap(), 0.0);
        let w = WeightVector::two(0.62).unwrap();
        assert!(close(
            round_loss(&w, &PenaltyVector::two(1.0).unwrap()).unwrap(),
            0.62,
            1e-15
        ));
    }

    #[test]
    fn play_game_two_and_three_rounds_from_equal_weights() {
        let w = WeightVector::two(0.5).unwrap();
        for beta in [0.1, 0.5, 0.8] {
            let plan = PenaltyPlan::from_first_option(&[0.0, 1.0]).unwrap();
            let trace = play_game(&w, &plan, &p(beta, 2)).unwrap();
            assert!(close(trace.cumulative_loss(), 0.5 + 1.0 / (1.0 + beta), 1e-12));

            let plan = PenaltyPlan::from_first_option(&[0.25, 1.0, 0.0]).unwrap();
            let trace = play_game(&w, &plan, &p(beta, 3)).unwrap();
            let expected = 0.5 + 2.0 / (1.0 + libm::sqrt(beta));
            assert!(close(trace.cumulative_loss(), expected, 1e-12));
        }
    }

    #[test]
    fn play_game_greedy_ten_rounds() {
        let w = WeightVector::two(0.62).unwrap();
        let plan =
            PenaltyPlan::from_first_option(&[1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0])
                .unwrap();
        let trace = play_game(&w, &plan, &p(0.8, 10)).unwrap();
        assert!(close(trace.cumulative_loss(), 5.40886, 5e-5));
    }

    #[test]
    fn play_game_rejects_wrong_length() {
        let w = WeightVector::two(0.5).unwrap();
        let plan = PenaltyPlan::from_first_option(&[1.0, 0.0]).unwrap();
        assert!(matches!(
            play_game(&w, &plan, &p(0.8, 3)),
            Err(Error::PlanLength { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn f_walk_examples() {
        let params = p(0.8, 10);
        for w in [0.1, 0.5, 0.883] {
            assert_eq!(f_walk(w, 0.0, &params).unwrap(), w);
        }
        assert!(close(f_walk(0.883, 10.0, &params).unwrap(), 0.4476, 5e-5));
        assert!(close(f_walk(0.883, 9.0, &params).unwrap(), 0.5032, 5e-5));
        assert!(f_walk(0.0, 1.0, &params).is_err());
        assert!(f_walk(1.0, 1.0, &params).is_err());
    }

    #[test]
    fn f_walk_is_stable_far_from_the_origin() {
        let params = p(0.1, 1);
        let far = f_walk(0.5, -5000.0, &params).unwrap();
        assert_eq!(far, 1.0);
        let near_zero = f_walk(0.5, 5000.0, &params).unwrap();
        assert_eq!(near_zero, 0.0);
    }

    #[test]
    fn transition_penalty_examples() {
        let params = p(0.8, 10);
        assert!(close(transition_penalty(0.3, 0.3, &params).unwrap(), 0.5, 1e-15));

        let s = libm::sqrt(0.8);
        let lower_ideal = s / (1.0 + s);
        let upper_ideal = 1.0 / (1.0 + s);
        // 0.5108 is where two greedy rounds leave w = 0.62.
        let u = walk(0.62, 2.0, 0.8);
        assert!(close(u, 0.5108, 5e-5));
        let x = transition_penalty(u, lower_ideal, &params).unwrap();
        assert!(close(x, 0.8469, 1e-4));

        // 0.1371 lifts w = 0.65 back to the upper ideal weight after three greedy rounds.
        let u = walk(0.65, 3.0, 0.8);
        let x = transition_penalty(u, upper_ideal, &params).unwrap();
        assert!(close(x, 0.1371, 1e-4));

        assert!(matches!(
            transition_penalty(0.9, 0.1, &params),
            Err(Error::Unreachable { .. })
        ));
        assert!(transition_penalty(1.0, 0.5, &params).is_err());
    }

    #[test]
    fn transition_penalty_lands_on_target() {
        let params = p(0.6, 1);
        for (u, t) in [(0.7, 0.65), (0.2, 0.25), (0.55, 0.45)] {
            let x = transition_penalty(u, t, &params).unwrap();
            let next = hedge_update(
                &WeightVector::two(u).unwrap(),
                &PenaltyVector::two(x).unwrap(),
                &params,
            )
            .unwrap();
            assert!(close(next.first(), t, 1e-12));
        }
    }

    #[test]
    fn greedy_argmax_breaks_ties_low() {
        assert_eq!(WeightVector::two(0.5).unwrap().argmax(), 0);
        assert_eq!(WeightVector::new(vec![0.2, 0.4, 0.4]).unwrap().argmax(), 1);
    }
}
