use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hedge::PenaltyVector;

/// Which family a plan belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PlanPattern {
    /// Unit penalty on the heaviest arm every round, never entering rotation.
    GreedyAllOnes,
    /// `(1 - δ, 1, …, 1)`: one fractional penalty in the first round.
    AdjustedFirstRound,
    /// Greedy: a run of ones on the heavy arm, then alternation.
    GreedyThenRotation,
    /// Greedy skeleton with one fractional penalty steering the rotation weights.
    AdjustedEntryRotation,
    /// The even-start solution `(x*, 0, 1, 0, …)`.
    EqualWeightsClosedForm,
    /// Anything else: rotations, recovered DP plans, oracle plans.
    ExplicitRows,
}

/// A full penalty sequence with a description of how it was built.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PenaltyPlan {
    rows: Vec<PenaltyVector>,
    pattern: PlanPattern,
    adjustment: Option<f64>,
    transition_length: Option<usize>,
    predicted_loss: Option<f64>,
}

impl PenaltyPlan {
    pub fn new(rows: Vec<PenaltyVector>, pattern: PlanPattern) -> Result<Self> {
        if let Some(first) = rows.first() {
            let n = first.len();
            if let Some(bad) = rows.iter().find(|r| r.len() != n) {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: bad.len(),
                });
            }
        }
        Ok(Self {
            rows,
            pattern,
            adjustment: None,
            transition_length: None,
            predicted_loss: None,
        })
    }

    pub fn explicit(rows: Vec<PenaltyVector>) -> Result<Self> {
        Self::new(rows, PlanPattern::ExplicitRows)
    }

    /// Two-option plan from first-option penalties `ℓ_1^t`.
    pub fn from_first_option(penalties: &[f64]) -> Result<Self> {
        let rows = penalties
            .iter()
            .map(|&l| PenaltyVector::two(l))
            .collect::<Result<Vec<_>>>()?;
        Self::explicit(rows)
    }

    pub(crate) fn with_pattern(mut self, pattern: PlanPattern) -> Self {
        self.pattern = pattern;
        self
    }

    pub(crate) fn with_adjustment(mut self, adjustment: Option<f64>) -> Self {
        self.adjustment = adjustment;
        self
    }

    pub(crate) fn with_transition_length(mut self, length: Option<usize>) -> Self {
        self.transition_length = length;
        self
    }

    pub(crate) fn with_predicted_loss(mut self, loss: Option<f64>) -> Self {
        self.predicted_loss = loss;
        self
    }

    pub fn rows(&self) -> &[PenaltyVector] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pattern(&self) -> PlanPattern {
        self.pattern
    }

    /// The free parameter of the pattern (δ, ε or x*), if it has one.
    pub fn adjustment(&self) -> Option<f64> {
        self.adjustment
    }

    /// Length of the leading greedy run, where meaningful.
    pub fn transition_length(&self) -> Option<usize> {
        self.transition_length
    }

    /// Loss recorded by the constructor (a closed form or a replay).
    pub fn predicted_loss(&self) -> Option<f64> {
        self.predicted_loss
    }

    /// `ℓ_1^t` for every round.
    pub fn first_option_penalties(&self) -> Vec<f64> {
        self.rows.iter().map(PenaltyVector::first).collect()
    }

    /// Same plan with the options listed in reverse order.
    pub fn mirrored(&self) -> Self {
        Self {
            rows: self.rows.iter().map(PenaltyVector::mirrored).collect(),
            ..self.clone()
        }
    }

    pub fn is_binary(&self) -> bool {
        self.rows.iter().all(PenaltyVector::is_binary)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_first_option_builds_complementary_rows() {
        let plan = PenaltyPlan::from_first_option(&[0.25, 1.0]).unwrap();
        assert_eq!(plan.rows()[0].as_slice(), &[0.25, 0.75]);
        assert_eq!(plan.first_option_penalties(), vec![0.25, 1.0]);
        assert!(!plan.is_binary());
        assert_eq!(plan.pattern(), PlanPattern::ExplicitRows);
    }

    #[test]
    fn mirrored_swaps_arms() {
        let plan = PenaltyPlan::from_first_option(&[1.0, 0.3]).unwrap();
        assert_eq!(plan.mirrored().first_option_penalties(), vec![0.0, 0.7]);
    }

    #[test]
    fn mixed_widths_are_rejected() {
        let rows = vec![
            PenaltyVector::two(1.0).unwrap(),
            PenaltyVector::uniform(3).unwrap(),
        ];
        assert!(PenaltyPlan::explicit(rows).is_err());
    }
}
