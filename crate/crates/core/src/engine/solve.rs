use serde::{Deserialize, Serialize};

use super::parity::parity_odd_probability;
use super::spec::GameSpec;
use crate::error::Result;
use crate::oracle::PassSet;
use crate::scalar::Scalar;

/// Holder win probabilities `V_1..V_n`, where `V_k` is the chance that the
/// player about to observe trial `k` wins under optimal play.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValueTable<T> {
    values: Vec<T>,
}

impl<T: Scalar> ValueTable<T> {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `V_k` for a 1-based stage.
    pub fn value(&self, k: usize) -> T {
        self.values[k - 1]
    }

    /// Player A's optimal win probability.
    pub fn v1(&self) -> T {
        self.values[0]
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Whether the canonical optimal holder keeps the turn after a success at
    /// stage `k < n`. Ties at `V_{k+1} = 1/2` keep.
    pub fn keeps_after_success(&self, k: usize) -> bool {
        self.value(k + 1) >= T::half()
    }
}

/// Backward induction over
/// `V_k = p_k max(V_{k+1}, 1 - V_{k+1}) + (1 - p_k) V_{k+1}`, `V_n = p_n`.
pub fn solve_dp<T: Scalar>(spec: &GameSpec<T>) -> ValueTable<T> {
    let n = spec.len();
    let mut values = vec![T::zero(); n];
    values[n - 1] = spec.p(n);
    for k in (1..n).rev() {
        let next = values[k];
        let p = spec.p(k);
        values[k - 1] = p * next.max(T::one() - next) + (T::one() - p) * next;
    }
    ValueTable { values }
}

/// Keep-then-pass strategy for a holder starting at stage `start`: keep the
/// turn before `threshold`, pass at every chance from `threshold` on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdStrategy {
    pub start: usize,
    pub threshold: usize,
}

impl ThresholdStrategy {
    /// Pass stages `{k : threshold <= k <= n - 1}`.
    pub fn pass_set(&self, n: usize) -> PassSet {
        PassSet::from_threshold(self.threshold, n)
    }
}

/// Last stage `k >= r` with `p_k >= 1/2`, or `r` when there is none.
pub fn threshold_index<T: Scalar>(spec: &GameSpec<T>, r: usize) -> Result<ThresholdStrategy> {
    spec.check_stage(r)?;
    let threshold = (r..=spec.len())
        .rev()
        .find(|&k| spec.p(k) >= T::half())
        .unwrap_or(r);
    Ok(ThresholdStrategy {
        start: r,
        threshold,
    })
}

/// Player A's optimal win probability as the chance of an odd number of
/// successes from the threshold stage onward.
pub fn win_probability<T: Scalar>(spec: &GameSpec<T>) -> T {
    let threshold = threshold_index(spec, 1)
        .expect("stage 1 always valid")
        .threshold;
    parity_odd_probability(&spec.params()[threshold - 1..])
}
