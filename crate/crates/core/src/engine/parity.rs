//! Probability that independent Bernoulli trials produce an odd number of
//! successes, and the closed forms that follow from it.

use crate::scalar::{signed_pow, Scalar};

/// `P(odd) = (1 - Π(1 - 2 p_i)) / 2`.
pub fn parity_odd_probability<T: Scalar>(probs: &[T]) -> T {
    let product = probs
        .iter()
        .fold(T::one(), |acc, &p| acc * (T::one() - T::two() * p));
    (T::one() - product) / T::two()
}

/// Same quantity by propagating the two-state parity distribution trial by
/// trial.
pub fn parity_odd_convolution<T: Scalar>(probs: &[T]) -> T {
    let mut odd = T::zero();
    for &p in probs {
        let even = T::one() - odd;
        odd = odd * (T::one() - p) + even * p;
    }
    odd
}

/// `(1 - (1 - 2p)^n) / 2`: A's value with `n` equal parameters `p < 1/2`,
/// where both players pass at every chance. For `p >= 1/2` use `solve_dp`.
pub fn equal_p_value<T: Scalar>(p: T, n: u64) -> T {
    (T::one() - signed_pow(T::one() - T::two() * p, n)) / T::two()
}

/// A's value with `n` trials of parameter `1/n`.
///
/// Evaluated through the ratio form
/// `((n-1)/n)^n ((n/(n-1))^n - ((n-2)/(n-1))^n) / 2` for `n >= 3`; the
/// small cases `n = 1` (certain success) and `n = 2` (fair trials) are exact.
pub fn reciprocal_n_value<T: Scalar>(n: u64) -> T {
    match n {
        0 => T::zero(),
        1 => T::one(),
        2 => T::half(),
        _ => {
            let nf = T::from_count(n as usize);
            let m = nf - T::one();
            let lead = signed_pow(m / nf, n);
            let up = signed_pow(nf / m, n);
            let down = signed_pow((nf - T::two()) / m, n);
            lead * (up - down) / T::two()
        }
    }
}

/// Limit of [`reciprocal_n_value`] as `n -> ∞`: `1/2 - 1/(2e²)`.
pub fn reciprocal_n_limit<T: Scalar>() -> T {
    T::half() - T::one() / (T::two() * T::E() * T::E())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Sum of outcome weights with an odd popcount.
    fn brute_force_odd(probs: &[f64]) -> f64 {
        let n = probs.len();
        (0u32..1 << n)
            .filter(|mask| mask.count_ones() % 2 == 1)
            .map(|mask| {
                probs
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| if mask >> i & 1 == 1 { p } else { 1.0 - p })
                    .product::<f64>()
            })
            .sum()
    }

    #[test]
    fn fair_trials_are_even_money() {
        for n in 1..20 {
            let probs = vec![0.5f64; n];
            assert_eq!(parity_odd_probability(&probs), 0.5);
            assert!((parity_odd_convolution(&probs) - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn impossible_success() {
        assert_eq!(parity_odd_probability(&[0.0]), 0.0);
        assert_eq!(parity_odd_convolution(&[0.0]), 0.0);
    }

    #[test]
    fn three_trials_match_enumeration() {
        let probs = [0.3, 0.3, 0.3];
        let expected = brute_force_odd(&probs);
        assert!((expected - 0.468).abs() < 1e-15);
        assert!((parity_odd_probability(&probs) - expected).abs() < 1e-15);
        assert!((parity_odd_convolution(&probs) - expected).abs() < 1e-15);
    }

    #[test]
    fn product_and_convolution_agree_on_mixed_inputs() {
        let probs = [0.1, 0.9, 0.45, 1.0, 0.0, 0.33, 0.77];
        let expected = brute_force_odd(&probs);
        assert!((parity_odd_probability(&probs) - expected).abs() < 1e-14);
        assert!((parity_odd_convolution(&probs) - expected).abs() < 1e-14);
    }

    #[test]
    fn equal_p_examples() {
        assert_eq!(equal_p_value(0.2, 1), 0.2);
        for n in 1..50 {
            assert_eq!(equal_p_value(0.5, n), 0.5);
        }
        assert!((equal_p_value(0.3f64, 3) - 0.468).abs() < 1e-14);
    }

    #[test]
    fn reciprocal_examples() {
        assert_eq!(reciprocal_n_value::<f64>(1), 1.0);
        assert_eq!(reciprocal_n_value::<f64>(2), 0.5);
        assert!((reciprocal_n_value::<f64>(3) - 13.0 / 27.0).abs() < 1e-14);
        assert!((reciprocal_n_value::<f64>(3) - brute_force_odd(&[1.0 / 3.0; 3])).abs() < 1e-14);
        let limit: f64 = reciprocal_n_limit();
        assert!((limit - 0.432_332_358_381_693_6).abs() < 1e-15);
    }

    #[test]
    fn reciprocal_matches_equal_p_form() {
        for n in 3..2000u64 {
            let via_equal = equal_p_value(1.0 / n as f64, n);
            assert!(
                (reciprocal_n_value::<f64>(n) - via_equal).abs() < 1e-12,
                "n = {n}"
            );
        }
    }
}
