use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Success probabilities `p_1..p_n` of the independent trials, in
/// observation order.
#[derive(Clone, Debug, PartialEq)]
pub struct GameSpec<T> {
    params: Vec<T>,
}

/// Checks that `raw` is a non-empty list of finite probabilities.
pub fn validate_spec<T: Scalar>(raw: &[T]) -> Result<GameSpec<T>> {
    GameSpec::new(raw.to_vec())
}

impl<T: Scalar> GameSpec<T> {
    pub fn new(params: Vec<T>) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::EmptySpec);
        }
        if let Some((i, p)) = params.iter().enumerate().find(|(_, p)| !p.is_probability()) {
            return Err(Error::InvalidProbability {
                index: i + 1,
                value: p.as_f64(),
            });
        }
        Ok(Self { params })
    }

    /// `n` trials sharing the parameter `p`.
    pub fn equal(p: T, n: usize) -> Result<Self> {
        Self::new(vec![p; n])
    }

    /// `n` trials with `p_i = 1/n`.
    pub fn reciprocal(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptySpec);
        }
        Self::equal(T::one() / T::from_count(n), n)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    /// Always false: a spec holds at least one trial.
    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[T] {
        &self.params
    }

    /// `p_k` for a 1-based stage `k`.
    pub fn p(&self, k: usize) -> T {
        self.params[k - 1]
    }

    pub fn q(&self, k: usize) -> T {
        T::one() - self.p(k)
    }

    /// Odds `r_k = p_k / q_k`; infinite when `p_k = 1`.
    pub fn odds(&self, k: usize) -> T {
        let q = self.q(k);
        if q == T::zero() {
            T::infinity()
        } else {
            self.p(k) / q
        }
    }

    pub fn total_odds(&self) -> T {
        (1..=self.len()).fold(T::zero(), |acc, k| acc + self.odds(k))
    }

    /// Returns a copy with `p_k` replaced.
    pub fn with_param(&self, k: usize, p: T) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::StageOutOfRange {
                stage: k,
                n: self.len(),
            });
        }
        let mut params = self.params.clone();
        params[k - 1] = p;
        Self::new(params)
    }

    pub(crate) fn check_stage(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.len() {
            Err(Error::StageOutOfRange {
                stage: k,
                n: self.len(),
            })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accepts_in_range() {
        let spec = validate_spec(&[0.5f64, 0.2]).unwrap();
        assert_eq!(spec.len(), 2);
        assert_eq!(spec.p(2), 0.2);
        assert!((spec.q(2) - 0.8).abs() < 1e-15);
        assert!((spec.odds(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn rejects_empty() {
        let err = validate_spec::<f64>(&[]).unwrap_err();
        assert_eq!(err, Error::EmptySpec);
        assert_eq!(err.to_string(), "empty spec");
    }

    #[test]
    fn rejects_out_of_range_with_index() {
        let err = validate_spec(&[0.5, 1.2]).unwrap_err();
        assert_eq!(
            err,
            Error::InvalidProbability {
                index: 2,
                value: 1.2
            }
        );
        assert!(matches!(
            validate_spec(&[f64::NAN]),
            Err(Error::InvalidProbability { index: 1, .. })
        ));
        assert!(validate_spec(&[0.1, f64::INFINITY]).is_err());
        assert!(validate_spec(&[-0.0f64, 1.0]).is_ok());
    }

    #[test]
    fn odds_of_certain_trial_are_infinite() {
        let spec = validate_spec(&[1.0f64]).unwrap();
        assert!(spec.odds(1).is_infinite());
    }
}
