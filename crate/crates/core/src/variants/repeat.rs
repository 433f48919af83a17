use crate::engine::{reciprocal_n_value, win_probability, GameSpec};
use crate::error::{Error, Result};
use crate::scalar::{one_minus_pow, signed_pow, Scalar};

/// A's win probability with `p_i = 1/n` when an all-zero round is replayed,
/// from the closed form
/// `((n-2)^n - (n-1)^n (n/(n-1))^n) / (2((n-1)^n - n^n))`.
///
/// Numerator and denominator are divided through by `(n-1)^n` so the powers
/// stay bounded for large `n`.
pub fn repeat_value_reciprocal<T: Scalar>(n: u64) -> Result<T> {
    if n < 2 {
        return Err(Error::BelowMinimum {
            what: "n",
            min: 2,
            value: n as usize,
        });
    }
    let nf = T::from_count(n as usize);
    let m = nf - T::one();
    let down = signed_pow((nf - T::two()) / m, n);
    let up = signed_pow(nf / m, n);
    Ok((down - up) / (T::two() * (T::one() - up)))
}

/// The same quantity by its definition: the plain game value conditioned on
/// at least one success.
pub fn repeat_value_reciprocal_conditional<T: Scalar>(n: u64) -> Result<T> {
    if n < 2 {
        return Err(Error::BelowMinimum {
            what: "n",
            min: 2,
            value: n as usize,
        });
    }
    let none = one_minus_pow(T::one() / T::from_count(n as usize), n);
    Ok(reciprocal_n_value::<T>(n) / (T::one() - none))
}

/// `(1 + e) / (2e)`, the large-`n` limit of [`repeat_value_reciprocal`].
pub fn repeat_value_limit<T: Scalar>() -> T {
    (T::one() + T::E()) / (T::two() * T::E())
}

/// Win probability under the replay rule for a spec with every `p_i < 1/2`:
/// `win_probability / (1 - Π q_i)`.
pub fn repeat_value<T: Scalar>(spec: &GameSpec<T>) -> Result<T> {
    if let Some((i, &p)) = spec
        .params()
        .iter()
        .enumerate()
        .find(|(_, &p)| p >= T::half())
    {
        return Err(Error::NotSubHalf {
            index: i + 1,
            value: p.as_f64(),
        });
    }
    let none = spec
        .params()
        .iter()
        .fold(T::one(), |acc, &p| acc * (T::one() - p));
    if none >= T::one() {
        return Err(Error::AllZero);
    }
    Ok(win_probability(spec) / (T::one() - none))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_trials() {
        assert_eq!(repeat_value_reciprocal::<f64>(2).unwrap(), 2.0 / 3.0);
        assert!((repeat_value_reciprocal_conditional::<f64>(2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn three_trials() {
        let v: f64 = repeat_value_reciprocal(3).unwrap();
        assert!((v - 13.0 / 19.0).abs() < 1e-14);
        // above the stated limit
        assert!(v > repeat_value_limit::<f64>());
    }

    #[test]
    fn rejects_small_n() {
        assert!(repeat_value_reciprocal::<f64>(1).is_err());
        assert!(repeat_value_reciprocal_conditional::<f64>(0).is_err());
    }

    #[test]
    fn limit_value() {
        let l: f64 = repeat_value_limit();
        assert!((l - 0.683_939_720_585_721_2).abs() < 1e-15);
        let far: f64 = repeat_value_reciprocal(1_000_000).unwrap();
        assert!((far - l).abs() < 1e-6);
    }

    #[test]
    fn spec_examples() {
        let third = GameSpec::new(vec![1.0f64 / 3.0; 3]).unwrap();
        assert!((repeat_value(&third).unwrap() - 13.0 / 19.0).abs() < 1e-14);
        let single = GameSpec::new(vec![0.2f64]).unwrap();
        assert!((repeat_value(&single).unwrap() - 1.0).abs() < 1e-15);
        let quarter = GameSpec::new(vec![0.25f64, 0.25]).unwrap();
        assert!((repeat_value(&quarter).unwrap() - 0.375 / 0.4375).abs() < 1e-15);
    }

    #[test]
    fn rejects_outside_regime() {
        let s = GameSpec::new(vec![0.2, 0.5]).unwrap();
        assert_eq!(
            repeat_value(&s),
            Err(Error::NotSubHalf {
                index: 2,
                value: 0.5
            })
        );
        let zero = GameSpec::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(repeat_value(&zero), Err(Error::AllZero));
    }
}
