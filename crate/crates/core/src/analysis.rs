//! Executable versions of the analytic results about the two-option game:
//! the first-round adjustment objective `F_n(ε)`, inequality checkers for the
//! structural lemmas, error bounds for binary (greedy) play and the cycle
//! losses of rotating adversaries.
//!
//! Every checker plays the competing plans through [`play_game`] rather than
//! trusting a closed form, and reports a signed margin (preferred minus
//! alternative). `holds` is strict: the margin must exceed [`STRICT_SLACK`].
//! Margins within that slack of zero are flagged `degenerate`.

use alloc::vec::Vec;

use crate::adversary::rotating_plan;
use crate::error::{Error, Result};
use crate::hedge::{self, play_game, GameParams, PenaltyVector, WeightVector};
use crate::plan::PenaltyPlan;
use crate::scalar::maximize_1d;
use crate::special::{digamma, EULER_GAMMA};

/// Rounding allowance used by all checkers.
pub const STRICT_SLACK: f64 = 1e-12;

/// Outcome of one lemma instance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LemmaCheck {
    /// The strict inequality holds beyond rounding.
    pub holds: bool,
    /// Preferred side minus the alternative (positive when the lemma holds).
    pub margin: f64,
    /// `|margin| ≤ STRICT_SLACK`: the two sides coincide.
    pub degenerate: bool,
}

impl LemmaCheck {
    fn from_margin(margin: f64) -> Self {
        Self {
            holds: margin > STRICT_SLACK,
            margin,
            degenerate: margin.abs() <= STRICT_SLACK,
        }
    }

    /// Not contradicted: the margin is nonnegative up to rounding.
    pub fn not_violated(&self) -> bool {
        self.margin > -STRICT_SLACK
    }
}

fn interior(name: &'static str, w: f64) -> Result<()> {
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

fn unit_interval(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value: x,
            expected: "a value in [0, 1]",
        })
    }
}

fn two_option_total(w: f64, penalties: &[f64], params: &GameParams) -> Result<(f64, f64)> {
    let p = params.with_horizon(penalties.len())?;
    let trace = play_game(
        &WeightVector::two(w)?,
        &PenaltyPlan::from_first_option(penalties)?,
        &p,
    )?;
    Ok((trace.cumulative_loss(), trace.final_weights().first()))
}

/// `F_n(ε) = (1-ε) f(0) + ε (1-f(0)) + Σ_{k=1}^{n} f(k - 2ε)`: the loss of
/// `(1-ε, 1, …, 1)` over `n + 1` rounds, with `f = f_walk(w, ·)`.
pub fn big_f(n: usize, eps: f64, w: f64, params: &GameParams) -> Result<f64> {
    interior("w", w)?;
    unit_interval("eps", eps)?;
    let beta = params.beta();
    let f0 = w;
    let head = (1.0 - eps) * f0 + eps * (1.0 - f0);
    let tail: f64 = (1..=n)
        .map(|k| hedge::walk(w, k as f64 - 2.0 * eps, beta))
        .sum();
    Ok(head + tail)
}

/// Greedy play is strictly better than a first-round adjustment while the
/// weight cannot reach one half: `F_n(ε) < F_n(0)` for `w β^{n+1} > 1 - w`.
pub fn check_lemma3(w: f64, eps: f64, n: usize, params: &GameParams) -> Result<LemmaCheck> {
    if !(w > 0.5 && w < 1.0) {
        return Err(Error::Precondition("w must lie in (1/2, 1)"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition("eps must lie in (0, 1]"));
    }
    let reaches = w * libm::pow(params.beta(), (n + 1) as f64) > 1.0 - w;
    if !reaches {
        return Err(Error::Precondition("w beta^(n+1) > 1 - w is required"));
    }
    let mut adjusted = alloc::vec![1.0; n + 1];
    adjusted[0] = 1.0 - eps;
    let greedy = alloc::vec![1.0; n + 1];
    let (l_adj, _) = two_option_total(w, &adjusted, params)?;
    let (l_greedy, _) = two_option_total(w, &greedy, params)?;
    Ok(LemmaCheck::from_margin(l_greedy - l_adj))
}

/// Early versus late adjustment: `(1-ε, 1, …, 1)` against `(1, …, 1, 1-ε)`,
/// both `n + 1` rounds long and ending at the same weight `f(n + 1 - 2ε)`.
///
/// Margin is early minus late. Errors with [`Error::Inconsistent`] if the two
/// plans do not end at the same weight.
pub fn check_lemma5(w: f64, eps: f64, n: usize, params: &GameParams) -> Result<LemmaCheck> {
    if !(w > 0.5 && w < 1.0) {
        return Err(Error::Precondition("w must lie in (1/2, 1)"));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Precondition("eps must lie in (0, 1]"));
    }
    let reaches = w * libm::pow(params.beta(), n as f64) > 1.0 - w;
    if !reaches {
        return Err(Error::Precondition("w beta^n > 1 - w is required"));
    }
    let mut early = alloc::vec![1.0; n + 1];
    early[0] = 1.0 - eps;
    let mut late = alloc::vec![1.0; n + 1];
    late[n] = 1.0 - eps;
    let (l_early, w_early) = two_option_total(w, &early, params)?;
    let (l_late, w_late) = two_option_total(w, &late, params)?;
    let expected = hedge::walk(w, (n + 1) as f64 - 2.0 * eps, params.beta());
    if (w_early - w_late).abs() > STRICT_SLACK || (w_early - expected).abs() > STRICT_SLACK {
        return Err(Error::Inconsistent("early and late adjustments must end at the same weight"));
    }
    Ok(LemmaCheck::from_margin(l_early - l_late))
}

/// Which two-round approach lemma applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum ApproachCase {
    /// `w ≤ w'`: preferred plan `(x, 0)`, splits satisfy `x1 + x2 = x`.
    FromBelowTarget,
    /// `w' < w`: preferred plan `(1, x)`, splits satisfy `x1 + x2 = 1 + x`.
    FromAboveTarget,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ApproachCheck {
    pub case: ApproachCase,
    /// Free penalty of the preferred plan.
    pub x: f64,
    pub check: LemmaCheck,
}

/// Required `x1 + x2` for a two-round split from `w` to `w_target`.
pub fn approach_split_sum(w: f64, w_target: f64, params: &GameParams) -> Result<(ApproachCase, f64, f64)> {
    interior("w", w)?;
    interior("w_target", w_target)?;
    // Walk offset y with f(w, y) = w_target.
    let y = libm::log(w_target * (1.0 - w) / (w * (1.0 - w_target))) / params.ln_beta();
    if w <= w_target {
        // (x, 0) moves the walk by 2x - 2.
        let x = 1.0 + y / 2.0;
        Ok((ApproachCase::FromBelowTarget, x, x))
    } else {
        // (1, x) moves the walk by 2x.
        let x = y / 2.0;
        Ok((ApproachCase::FromAboveTarget, x, 1.0 + x))
    }
}

/// Two rounds from `w` to `w_target` inside the upper half of the
/// intersection area: the greedy-style plan (`(x, 0)` from below, `(1, x)`
/// from above) beats any split `(x1, x2)` reaching the same weight.
///
/// Splits must have both entries in `[0, 1]` and the sum given by
/// [`approach_split_sum`] (within `1e-9`).
pub fn check_lemma6_7(
    w: f64,
    w_target: f64,
    split: (f64, f64),
    params: &GameParams,
) -> Result<ApproachCheck> {
    let upper = 1.0 / (1.0 + params.beta());
    if !(w > 0.5 && w < upper && w_target > 0.5 && w_target < upper) {
        return Err(Error::Precondition(
            "w and w_target must lie in (1/2, 1/(1+beta))",
        ));
    }
    let (case, x, required) = approach_split_sum(w, w_target, params)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Unreachable { from: w, to: w_target });
    }
    let (x1, x2) = split;
    unit_interval("x1", x1)?;
    unit_interval("x2", x2)?;
    if (x1 + x2 - required).abs() > 1e-9 {
        return Err(Error::InfeasibleSplit {
            required,
            found: x1 + x2,
        });
    }
    let preferred = match case {
        ApproachCase::FromBelowTarget => [x, 0.0],
        ApproachCase::FromAboveTarget => [1.0, x],
    };
    let (l_pref, w_pref) = two_option_total(w, &preferred, params)?;
    let (l_split, w_split) = two_option_total(w, &[x1, x2], params)?;
    if (w_pref - w_target).abs() > 1e-9 || (w_split - w_target).abs() > 1e-9 {
        return Err(Error::Inconsistent("both plans must reach the target weight"));
    }
    Ok(ApproachCheck {
        case,
        x,
        check: LemmaCheck::from_margin(l_pref - l_split),
    })
}

/// Rotating penalties produce weights with period `N`: the largest
/// `|p_i^{t+N} - p_i^t|` over the game is reported as `-margin`.
pub fn check_lemma1(w0: &WeightVector, base_row: &PenaltyVector, params: &GameParams) -> Result<LemmaCheck> {
    let n = params.n_options();
    if params.horizon() <= n {
        return Err(Error::Precondition("the game must be longer than one rotation cycle"));
    }
    let plan = rotating_plan(params, base_row)?;
    let trace = play_game(w0, &plan, params)?;
    let mut rounds: Vec<&WeightVector> = trace.weights_per_round().iter().collect();
    rounds.push(trace.final_weights());
    let mut worst: f64 = 0.0;
    for t in 0..rounds.len() - n {
        for (a, b) in rounds[t].as_slice().iter().zip(rounds[t + n].as_slice()) {
            worst = worst.max((a - b).abs());
        }
    }
    Ok(LemmaCheck {
        holds: worst <= STRICT_SLACK,
        margin: -worst,
        degenerate: false,
    })
}

/// Weights from which one half is reachable in a single round.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct IntersectionArea {
    pub lower: f64,
    pub upper: f64,
}

impl IntersectionArea {
    pub fn new(params: &GameParams) -> Self {
        let beta = params.beta();
        Self {
            lower: beta / (1.0 + beta),
            upper: 1.0 / (1.0 + beta),
        }
    }

    pub fn contains(&self, w: f64) -> bool {
        (self.lower..=self.upper).contains(&w)
    }
}

/// `⌈(ln(1-w) - ln w) / ln β⌉`: greedy rounds until `w β^{T1} ≤ 1 - w`. Not clamped to the horizon.
pub fn transition_phase_length_ceil(w: f64, params: &GameParams) -> Result<usize> {
    if !(w > 0.5 && w < 1.0) {
        return Err(Error::InvalidParameter {
            name: "w",
            value: w,
            expected: "a first-option weight in (1/2, 1)",
        });
    }
    let raw = libm::ceil((libm::log(1.0 - w) - libm::log(w)) / params.ln_beta());
    Ok(raw.max(0.0) as usize)
}

/// `ΔL'(β) = 2/(1+√β) - 1/2 - 1/(1+β)`: best minus worst loss of a pair of
/// rotation rounds.
pub fn rotation_error_per_cycle(beta: f64) -> f64 {
    2.0 / (1.0 + libm::sqrt(beta)) - 0.5 - 1.0 / (1.0 + beta)
}

/// Loss of one pair of rotation rounds entered at first-option weight `w`:
/// `w + 1 - wβ/(wβ + 1 - w)`.
pub fn rotation_pair_loss(w: f64, params: &GameParams) -> Result<f64> {
    interior("w", w)?;
    Ok(w + 1.0 - hedge::walk(w, 1.0, params.beta()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum BoundCategory {
    /// `w β^T > 1 - w`: greedy is optimal.
    I,
    /// `w β^{T-1} > 1 - w ≥ w β^T`: the walk just touches one half.
    II,
    /// Greedy play reaches rotation.
    III,
}

/// Upper bounds on how much an optimal adversary gains over greedy play.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ErrorBoundReport {
    /// Transition length, ceil form (the horizon itself in category II).
    pub t1_transition: usize,
    pub category: BoundCategory,
    pub transition_bound: f64,
    pub rotation_per_cycle_bound: f64,
    pub rotation_total_bound: f64,
    pub total_bound: f64,
    /// Whether the best first-round adjustment of the transition game was
    /// found at `ε ≤ 1/4`, which licenses the tighter transition bound.
    pub conjecture_confirmed: bool,
    /// That best adjustment.
    pub optimal_epsilon: f64,
}

/// Bounds for an instance with `1/2 < w < 1`.
///
/// The transition bound for a `T1`-round phase is `w - f(T1 - 1)`. When the
/// numerically best `ε` of `F_{T1-1}` is at most `1/4` the tighter
/// `Σ_{i=1}^{T1-1} [f(i - 1/2) - f(i)]` is used instead. Category III adds
/// `⌈(T - T1)/2⌉ ΔL'(β)` for the rotation rounds.
pub fn binary_error_bounds(w: f64, params: &GameParams) -> Result<ErrorBoundReport> {
    if !(w > 0.5 && w < 1.0) {
        return Err(Error::InvalidParameter {
            name: "w",
            value: w,
            expected: "a first-option weight in (1/2, 1)",
        });
    }
    let beta = params.beta();
    let t = params.horizon();
    let per_cycle = rotation_error_per_cycle(beta);
    let head = w * libm::pow(beta, t as f64);
    let head_prev = w * libm::pow(beta, (t - 1) as f64);
    let category = if head > 1.0 - w {
        BoundCategory::I
    } else if head_prev > 1.0 - w {
        BoundCategory::II
    } else {
        BoundCategory::III
    };
    let t1 = match category {
        BoundCategory::I => t,
        BoundCategory::II => t,
        BoundCategory::III => transition_phase_length_ceil(w, params)?.min(t),
    };

    let (transition_bound, confirmed, eps) = if category == BoundCategory::I || t1 == 0 {
        (0.0, true, 0.0)
    } else {
        let n = t1 - 1;
        let r = maximize_1d(|e| big_f(n, e, w, params).unwrap_or(f64::NAN), 0.0, 1.0, 1000, 1e-10)?;
        let f = |x: f64| hedge::walk(w, x, beta);
        if r.argmax <= 0.25 {
            let tight: f64 = (1..=n).map(|i| f(i as f64 - 0.5) - f(i as f64)).sum();
            (tight, true, r.argmax)
        } else {
            (w - f(n as f64), false, r.argmax)
        }
    };
    let rotation_total = match category {
        BoundCategory::III => (t - t1).div_ceil(2) as f64 * per_cycle,
        _ => 0.0,
    };
    Ok(ErrorBoundReport {
        t1_transition: t1,
        category,
        transition_bound,
        rotation_per_cycle_bound: per_cycle,
        rotation_total_bound: rotation_total,
        total_bound: transition_bound + rotation_total,
        conjecture_confirmed: confirmed,
        optimal_epsilon: eps,
    })
}

/// `(x, 1, …, 1, 0, 1, 0, …)` with `r` leading rounds (the first adjusted)
/// and `(T - r)/2` rotation pairs:
///
/// `x f(0) + (1-x)(1-f(0)) + Σ_{i=1}^{r-1} f(2x+i-2) + (T-r)/2 [1 - f(r+2x-2) + f(r+2x-3)]`.
///
/// Equals the played loss when `T - r` is even.
pub fn first_round_adjusted_loss(x: f64, w: f64, r: usize, params: &GameParams) -> Result<f64> {
    interior("w", w)?;
    unit_interval("x", x)?;
    let t = params.horizon();
    if r == 0 || r > t {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r as f64,
            expected: "a leading run between 1 and the horizon",
        });
    }
    let beta = params.beta();
    let f = |y: f64| hedge::walk(w, y, beta);
    let rf = r as f64;
    let run: f64 = (1..r).map(|i| f(2.0 * x + i as f64 - 2.0)).sum();
    let pairs = (t - r) as f64 / 2.0;
    Ok(x * w + (1.0 - x) * (1.0 - w)
        + run
        + pairs * (1.0 - f(rf + 2.0 * x - 2.0))
        + pairs * f(rf + 2.0 * x - 3.0))
}

/// Loss of one full rotation `(1,0,…,0), (0,1,0,…), …` from `w0`:
/// `w_1 + Σ_{j≥2} w_j / (β Σ_{i<j} w_i + Σ_{i≥j} w_i)`.
pub fn cycle_loss(w0: &WeightVector, params: &GameParams) -> Result<f64> {
    if w0.len() != params.n_options() {
        return Err(Error::DimensionMismatch {
            expected: params.n_options(),
            found: w0.len(),
        });
    }
    let beta = params.beta();
    let w = w0.as_slice();
    let mut before = 0.0;
    let mut after: f64 = w.iter().sum();
    let mut total = 0.0;
    for &wj in w {
        total += wj / (beta * before + after);
        before += wj;
        after -= wj;
    }
    Ok(total)
}

/// Cycle loss from uniform weights by direct summation: `Σ_{i=0}^{N-1} 1/(iβ + N - i)`.
/// `β = 0` is allowed.
pub fn cycle_loss_equal_direct(n: usize, beta: f64) -> f64 {
    (0..n)
        .map(|i| 1.0 / (i as f64 * beta + (n - i) as f64))
        .sum()
}

/// Uniform-start cycle loss via digamma: `-(ψ(a) - ψ(a+N)) / (β - 1)`,
/// `a = N/(β - 1)`; `β = 0` gives `γ + ψ(1 + N)`.
///
/// Both `a` and `a + N` are negative and often poles (e.g. `β = 1/2`), so the
/// difference is taken after reflection, where the cotangent terms cancel:
/// `ψ(a) - ψ(a+N) = ψ(1-a) - ψ(1-a-N)`.
pub fn cycle_loss_equal_closed(n: usize, beta: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n_options",
            value: n as f64,
            expected: "at least 2 options",
        });
    }
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::InvalidParameter {
            name: "beta",
            value: beta,
            expected: "a value in [0, 1)",
        });
    }
    let nf = n as f64;
    if beta == 0.0 {
        return Ok(EULER_GAMMA + digamma(1.0 + nf));
    }
    let a = nf / (beta - 1.0);
    let diff = digamma(1.0 - a) - digamma(1.0 - a - nf);
    Ok(diff / (1.0 - beta))
}

/// [`cycle_loss_equal_closed`] for a game's `N` and `β`.
pub fn cycle_loss_equal_digamma(params: &GameParams) -> Result<f64> {
    cycle_loss_equal_closed(params.n_options(), params.beta())
}
