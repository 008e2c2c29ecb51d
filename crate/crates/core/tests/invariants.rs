//! Property tests for the player, the plans and the game trace.

use proptest::prelude::*;
use worst_hedge::{
    f_walk, hedge_update, play_game, rotating_plan, round_loss, GameParams, PenaltyPlan,
    PenaltyVector, WeightVector,
};

fn simplex(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.001f64..1.0, len).prop_map(|v| {
        let s: f64 = v.iter().sum();
        v.into_iter().map(|x| x / s).collect()
    })
}

/// A penalty row with exact unit sum: the last entry takes up the remainder.
fn penalty_row(n: usize) -> impl Strategy<Value = PenaltyVector> {
    simplex(n..n + 1).prop_filter_map("rounding left the budget", |mut v| {
        let head: f64 = v[..v.len() - 1].iter().sum();
        let last = v.len() - 1;
        v[last] = 1.0 - head;
        PenaltyVector::new(v).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn update_stays_normalized(w in simplex(2..7), beta in 0.001f64..0.999, seed in any::<u64>()) {
        let n = w.len();
        let mut row = vec![0.0; n];
        row[(seed % n as u64) as usize] = 1.0;
        let p = GameParams::new(beta, n, 1).unwrap();
        let next = hedge_update(&WeightVector::new(w).unwrap(), &PenaltyVector::new(row).unwrap(), &p).unwrap();
        let sum: f64 = next.as_slice().iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(next.as_slice().iter().all(|&x| x >= 0.0));
    }
}

proptest! {
    #[test]
    fn fractional_update_stays_normalized(w in simplex(2..7), beta in 0.001f64..0.999) {
        let n = w.len();
        let p = GameParams::new(beta, n, 1).unwrap();
        let row = PenaltyVector::uniform(n).unwrap().rotated(1);
        let next = hedge_update(&WeightVector::new(w).unwrap(), &row, &p).unwrap();
        prop_assert!((next.as_slice().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn heavier_first_penalty_lowers_first_weight(w in 0.01f64..0.99, beta in 0.01f64..0.99, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        prop_assume!((a - b).abs() > 1e-9);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let p = GameParams::two_options(beta, 1).unwrap();
        let w0 = WeightVector::two(w).unwrap();
        let w_lo = hedge_update(&w0, &PenaltyVector::two(lo).unwrap(), &p).unwrap().first();
        let w_hi = hedge_update(&w0, &PenaltyVector::two(hi).unwrap(), &p).unwrap().first();
        prop_assert!(w_hi < w_lo);
    }

    #[test]
    fn unit_penalties_follow_the_walk(w in 0.01f64..0.99, beta in 0.05f64..0.95, k in 1usize..40) {
        let p = GameParams::two_options(beta, k).unwrap();
        let plan = PenaltyPlan::from_first_option(&vec![1.0; k]).unwrap();
        let trace = play_game(&WeightVector::two(w).unwrap(), &plan, &p).unwrap();
        let walked = f_walk(w, k as f64, &p).unwrap();
        prop_assert!((trace.final_weights().first() - walked).abs() <= 1e-12);
    }

    #[test]
    fn rotation_is_periodic(w in simplex(2..7), beta in 0.05f64..0.95, seed in any::<u64>(), binary in any::<bool>()) {
        let n = w.len();
        let row = if binary {
            PenaltyVector::unit(n, (seed % n as u64) as usize).unwrap()
        } else {
            let mut v: Vec<f64> = (0..n).map(|i| ((seed >> (i * 5)) % 31 + 1) as f64).collect();
            let s: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= s);
            let head: f64 = v[..n - 1].iter().sum();
            v[n - 1] = 1.0 - head;
            match PenaltyVector::new(v) { Ok(r) => r, Err(_) => return Ok(()) }
        };
        let p = GameParams::new(beta, n, 3 * n).unwrap();
        let trace = play_game(&WeightVector::new(w).unwrap(), &rotating_plan(&p, &row).unwrap(), &p).unwrap();
        let ws = trace.weights_per_round();
        for t in 0..ws.len() - n {
            for (a, b) in ws[t].as_slice().iter().zip(ws[t + n].as_slice()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn round_loss_is_bracketed(w in simplex(3..4), row in penalty_row(3)) {
        let l = round_loss(&WeightVector::new(w).unwrap(), &row).unwrap();
        let lo = row.as_slice().iter().copied().fold(f64::INFINITY, f64::min);
        let hi = row.as_slice().iter().copied().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= l && l <= hi);
    }

    #[test]
    fn trace_is_self_consistent(w in 0.0f64..=1.0, beta in 0.05f64..0.95, seq in proptest::collection::vec(0.0f64..=1.0, 1..20)) {
        let p = GameParams::two_options(beta, seq.len()).unwrap();
        let plan = PenaltyPlan::from_first_option(&seq).unwrap();
        let trace = play_game(&WeightVector::two(w).unwrap(), &plan, &p).unwrap();
        let ws = trace.weights_per_round();
        for t in 0..ws.len() {
            let next = hedge_update(&ws[t], &trace.penalties_per_round()[t], &p).unwrap();
            let expected = if t + 1 < ws.len() { &ws[t + 1] } else { trace.final_weights() };
            for (a, b) in next.as_slice().iter().zip(expected.as_slice()) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
        let sum: f64 = trace.loss_per_round().iter().sum();
        prop_assert!((sum - trace.cumulative_loss()).abs() <= 1e-10);
        prop_assert!(trace.loss_per_round().iter().all(|&l| (0.0..=1.0).contains(&l)));
    }
}
