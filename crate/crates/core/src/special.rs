//! Digamma function.
//!
//! Arguments are raised with `ψ(x) = ψ(x + 1) - 1/x` until `x ≥ 15`, then the
//! asymptotic series is summed through the `x^{-10}` term.

use core::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `ψ(x) = Γ'(x)/Γ(x)`. Poles (non-positive integers) give NaN.
pub fn digamma(x: f64) -> f64 {
    if x.is_nan() || x == f64::NEG_INFINITY {
        return f64::NAN;
    }
    if x <= 0.0 {
        if x == libm::floor(x) {
            return f64::NAN;
        }
        // ψ(1 - x) - ψ(x) = π cot(πx)
        return digamma(1.0 - x) - PI / libm::tan(PI * x);
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 15.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0)))));
    acc + libm::log(x) - 0.5 * inv - series
}

/// `ψ(a + n) - ψ(a)` for integer `n ≥ 0` and `a > 0`, as the finite sum `Σ 1/(a+i)`.
pub fn digamma_shift_difference(a: f64, n: usize) -> f64 {
    (0..n).map(|i| 1.0 / (a + i as f64)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert!((digamma(1.0) + EULER_GAMMA).abs() < 1e-14);
        assert!((digamma(0.5) - (-EULER_GAMMA - 2.0 * core::f64::consts::LN_2)).abs() < 1e-14);
        // ψ(4) = H_3 - γ
        assert!((digamma(4.0) - (11.0 / 6.0 - EULER_GAMMA)).abs() < 1e-14);
        assert!((digamma(100.0) - 4.600_161_852_738_087).abs() < 1e-13);
    }

    #[test]
    fn recurrence_and_reflection() {
        for &x in &[0.1, 0.77, 2.5, 9.99, 13.2] {
            assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-12);
        }
        for &x in &[-0.5, -1.3, -7.25] {
            assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-10);
        }
        assert!(digamma(0.0).is_nan());
        assert!(digamma(-3.0).is_nan());
    }

    #[test]
    fn shift_difference_matches() {
        for &(a, n) in &[(0.3, 5usize), (2.0, 40), (11.5, 3)] {
            let d = digamma(a + n as f64) - digamma(a);
            assert!((d - digamma_shift_difference(a, n)).abs() < 1e-12);
        }
    }
}
