//! Single-player last-success reference solver via the odds sum.

use serde::{Deserialize, Serialize};

use super::spec::GameSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Optimal stopping threshold `s` and its win probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LspResult<T> {
    pub stop_index: usize,
    pub win_probability: T,
}

fn check_finite_odds<T: Scalar>(spec: &GameSpec<T>) -> Result<()> {
    match spec.params().iter().position(|&p| p >= T::one()) {
        Some(i) => Err(Error::DegenerateOdds { index: i + 1 }),
        None => Ok(()),
    }
}

/// `s = max{k : Σ_{j>=k} r_j >= 1}` when the total odds reach 1, else 1.
pub fn lsp_odds_index<T: Scalar>(spec: &GameSpec<T>) -> Result<usize> {
    check_finite_odds(spec)?;
    let mut tail = T::zero();
    for k in (1..=spec.len()).rev() {
        tail = tail + spec.odds(k);
        if tail >= T::one() {
            return Ok(k);
        }
    }
    Ok(1)
}

/// Win probability `(Π_{j>=s} q_j)(Σ_{j>=s} r_j)` of stopping on the first
/// success at or after `s`.
pub fn lsp_odds_value<T: Scalar>(spec: &GameSpec<T>) -> Result<LspResult<T>> {
    let s = lsp_odds_index(spec)?;
    let (q_prod, r_sum) = (s..=spec.len()).fold((T::one(), T::zero()), |(q, r), k| {
        (q * spec.q(k), r + spec.odds(k))
    });
    Ok(LspResult {
        stop_index: s,
        win_probability: q_prod * r_sum,
    })
}

/// Probability of exactly one success in stages `s..=n`, i.e. the value of
/// "stop on the first success from `s`". Valid for any parameters.
pub fn lsp_threshold_value<T: Scalar>(spec: &GameSpec<T>, s: usize) -> Result<T> {
    spec.check_stage(s)?;
    // (P(no success), P(exactly one)) propagated backwards.
    let (_, one) = (s..=spec.len())
        .rev()
        .fold((T::one(), T::zero()), |(none, one), k| {
            let p = spec.p(k);
            ((T::one() - p) * none, p * none + (T::one() - p) * one)
        });
    Ok(one)
}

/// Fallback for specs with `p_i = 1`: evaluate every threshold and keep the
/// best, preferring the latest on ties.
pub fn lsp_best_threshold<T: Scalar>(spec: &GameSpec<T>) -> LspResult<T> {
    let mut best = LspResult {
        stop_index: spec.len(),
        win_probability: spec.p(spec.len()),
    };
    for s in (1..spec.len()).rev() {
        let v = lsp_threshold_value(spec, s).expect("stage in range");
        if v > best.win_probability {
            best = LspResult {
                stop_index: s,
                win_probability: v,
            };
        }
    }
    best
}
