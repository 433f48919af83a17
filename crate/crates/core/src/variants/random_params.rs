use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomParamKind {
    /// Holder value with `k` remaining trials, all parameters `U[0, 1/2]`.
    Suffix,
    /// Value when the last parameter `>= 1/2` is drawn `U[1/2, 1]` and is
    /// followed by `k - 1` parameters drawn `U[0, 1/2]`.
    Pivot,
    /// A's expected value with `n` parameters drawn `U[0, 1]`.
    Expectation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomParamValue<T> {
    pub kind: RandomParamKind,
    pub index: u64,
    pub value: T,
}

impl<T: Scalar> RandomParamValue<T> {
    pub fn compute(kind: RandomParamKind, index: u64) -> Self {
        let value = match kind {
            RandomParamKind::Suffix => rp_suffix_value(index),
            RandomParamKind::Pivot => rp_pivot_value(index),
            RandomParamKind::Expectation => rp_expected_value(index),
        };
        Self { kind, index, value }
    }
}

fn pow2<T: Scalar>(e: i64) -> T {
    T::two().powi(e.clamp(-2000, 2000) as i32)
}

/// `X_k = 2^{-1-k} (2^k - 1)`.
pub fn rp_suffix_value<T: Scalar>(k: u64) -> T {
    if k > 1000 {
        return T::half();
    }
    let k = k as i64;
    pow2::<T>(-1 - k) * (pow2::<T>(k) - T::one())
}

/// `X_k` by iterating `X_i = (1 + 2 X_{i-1}) / 4` from `X_0 = 0`.
pub fn rp_suffix_recurrence<T: Scalar>(k: u64) -> T {
    let quarter = T::lit(0.25);
    (0..k).fold(T::zero(), |x, _| (T::one() + T::two() * x) * quarter)
}

/// `J_k = (1 + 2^{-k}) / 2`.
pub fn rp_pivot_value<T: Scalar>(k: u64) -> T {
    (T::one() + pow2::<T>(-(k as i64))) / T::two()
}

/// `E(n) = 2 (1 - 4^{-n}) / 3`.
pub fn rp_expected_value<T: Scalar>(n: u64) -> T {
    T::two() * (T::one() - pow2::<T>(-2 * n as i64)) / T::lit(3.0)
}

/// `E(n)` assembled from its cases: all parameters below 1/2 (probability
/// `2^{-n}`, value `X_n`), or the last parameter `>= 1/2` sitting `k - 1`
/// places before the end (probability `2^{-k}`, value `J_k`).
pub fn rp_expected_assembled<T: Scalar>(n: u64) -> T {
    let none = rp_suffix_value::<T>(n) * pow2::<T>(-(n as i64));
    (1..=n).fold(none, |acc, k| {
        acc + rp_pivot_value::<T>(k) * pow2::<T>(-(k as i64))
    })
}
