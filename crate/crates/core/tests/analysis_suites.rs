//! Randomized lemma suites and long-game checks for the analysis module.

use proptest::prelude::*;
use worst_hedge::analysis::{
    approach_split_sum, binary_error_bounds, check_lemma1, check_lemma3, check_lemma5,
    check_lemma6_7, first_round_adjusted_loss, ApproachCase, BoundCategory,
};
use worst_hedge::{
    greedy_binary_plan, maximize_1d, optimal_plan, play_game, GameParams, PenaltyVector,
    PlanPattern, WeightVector,
};

fn p2(beta: f64) -> GameParams {
    GameParams::two_options(beta, 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lemma3(u in 0.0f64..1.0, beta in 0.05f64..0.95, n in 0usize..=8, eps in 1e-9f64..=1.0) {
        let lo = 1.0 / (1.0 + beta.powi(n as i32 + 1));
        let w = lo + (1.0 - lo) * u;
        prop_assume!(w > lo && w < 1.0);
        prop_assert!(check_lemma3(w, eps, n, &p2(beta)).unwrap().not_violated());
    }

    #[test]
    fn lemma5_up_to_half(u in 0.0f64..1.0, beta in 0.05f64..0.95, n in 0usize..=6, eps in 1e-9f64..=0.5) {
        let lo = (1.0 / (1.0 + beta.powi(n as i32))).max(0.5);
        let w = lo + (1.0 - lo) * u;
        prop_assume!(w > lo && w > 0.5 && w < 1.0);
        prop_assert!(check_lemma5(w, eps, n, &p2(beta)).unwrap().not_violated());
    }

    #[test]
    fn lemmas6_7(beta in 0.05f64..0.95, a in 0.0f64..1.0, b in 0.0f64..1.0, s in 0.0f64..=1.0) {
        let up = 1.0 / (1.0 + beta);
        let w = 0.5 + (up - 0.5) * a;
        let target = 0.5 + (up - 0.5) * b;
        prop_assume!(w > 0.5 && target > 0.5 && w < up && target < up);
        let p = p2(beta);
        let (case, x, sum) = approach_split_sum(w, target, &p).unwrap();
        let x1 = match case {
            ApproachCase::FromBelowTarget => s * x,
            ApproachCase::FromAboveTarget => x + s * (1.0 - x),
        };
        let c = check_lemma6_7(w, target, (x1, sum - x1), &p).unwrap();
        prop_assert!(c.check.not_violated());
    }

    #[test]
    fn lemma1(beta in 0.05f64..0.95, n in 2usize..=6, raw in proptest::collection::vec(0.01f64..1.0, 6), k in 0usize..6) {
        let s: f64 = raw[..n].iter().sum();
        let w0 = WeightVector::new(raw[..n].iter().map(|x| x / s).collect()).unwrap();
        let p = GameParams::new(beta, n, 4 * n).unwrap();
        let row = PenaltyVector::unit(n, k % n).unwrap();
        prop_assert!(check_lemma1(&w0, &row, &p).unwrap().holds);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bounds_cover_the_adjustment_gain(w in 0.501f64..0.999, beta in 0.05f64..0.95, t in 1usize..60) {
        let p = GameParams::two_options(beta, t).unwrap();
        let report = binary_error_bounds(w, &p).unwrap();
        prop_assume!(report.category != BoundCategory::I);
        let w0 = WeightVector::two(w).unwrap();
        let greedy = play_game(&w0, &greedy_binary_plan(&w0, &p).unwrap(), &p).unwrap().cumulative_loss();
        let best = play_game(&w0, &optimal_plan(&w0, &p).unwrap(), &p).unwrap().cumulative_loss();
        prop_assert!(best - greedy <= report.total_bound + 1e-12);
    }
}

#[test]
fn long_game_first_round_adjustment() {
    let p = GameParams::two_options(0.8, 643).unwrap();
    let w0 = WeightVector::two(0.62).unwrap();
    let plan = optimal_plan(&w0, &p).unwrap();
    assert_eq!(plan.pattern(), PlanPattern::AdjustedFirstRound);
    let x = plan.first_option_penalties()[0];
    assert!((x - 0.8583).abs() < 2e-3, "x = {x}");

    // The same optimum from the closed-form objective with three leading rounds.
    let r = maximize_1d(|x| first_round_adjusted_loss(x, 0.62, 3, &p).unwrap(), 0.0, 1.0, 1000, 1e-10).unwrap();
    assert!((r.argmax - 0.8583).abs() < 2e-3);
    let played = play_game(&w0, &plan, &p).unwrap().cumulative_loss();
    assert!((played - r.max_value).abs() < 1e-9);
}
