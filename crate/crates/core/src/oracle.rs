//! Brute-force checks that never touch the engine's recurrence.
//!
//! With independent trials the holder's continuation depends only on the
//! stage, so pure strategies indexed by stage (a set of stages at which to
//! pass after a success) cover every optimal strategy. Each player therefore
//! has `2^(n-1)` candidate strategies, and outcome vectors are enumerated as
//! bitmasks with bit `k-1` holding trial `k`.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::GameSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const ENUMERATION_LIMIT: usize = 24;
pub const MINIMAX_LIMIT: usize = 8;
pub const BEST_RESPONSE_LIMIT: usize = 16;
pub const LSP_BRUTE_FORCE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::A => Player::B,
            Player::B => Player::A,
        }
    }
}

/// Stages in `1..=n-1` at which a holder passes after observing a success.
///
/// Ordered lexicographically by the sorted stage list.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PassSet {
    stages: BTreeSet<usize>,
}

impl PassSet {
    pub fn new(n: usize, stages: impl IntoIterator<Item = usize>) -> Result<Self> {
        let stages: BTreeSet<usize> = stages.into_iter().collect();
        if let Some(&bad) = stages.iter().find(|&&k| k == 0 || k >= n) {
            return Err(Error::NotDecisionStage { stage: bad, n });
        }
        Ok(Self { stages })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Pass at every decision stage.
    pub fn always(n: usize) -> Self {
        Self {
            stages: (1..n).collect(),
        }
    }

    /// `{k : threshold <= k <= n - 1}`.
    pub fn from_threshold(threshold: usize, n: usize) -> Self {
        Self {
            stages: (threshold.max(1)..n).collect(),
        }
    }

    /// Bit `k-1` of `mask` selects stage `k`; bits at or beyond `n-1` are
    /// ignored.
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Self {
            stages: (1..n).filter(|k| mask >> (k - 1) & 1 == 1).collect(),
        }
    }

    pub fn mask(&self) -> u64 {
        self.stages.iter().fold(0, |m, k| m | 1 << (k - 1))
    }

    pub fn contains(&self, stage: usize) -> bool {
        self.stages.contains(&stage)
    }

    pub fn stages(&self) -> impl Iterator<Item = usize> + '_ {
        self.stages.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }
}

fn guard(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        Err(Error::TooLarge { n, limit })
    } else {
        Ok(())
    }
}

/// Weight `Π p_i^{x_i} q_i^{1-x_i}` of every outcome mask, each product
/// formed independently.
fn outcome_weights<T: Scalar>(spec: &GameSpec<T>) -> Vec<T> {
    let n = spec.len();
    (0u64..1 << n)
        .map(|mask| {
            (1..=n).fold(T::one(), |w, k| {
                if mask >> (k - 1) & 1 == 1 {
                    w * spec.p(k)
                } else {
                    w * spec.q(k)
                }
            })
        })
        .collect()
}

/// Plays one outcome vector under the stated rules; true when A wins.
fn a_wins(n: usize, outcome: u64, pass_a: u64, pass_b: u64) -> bool {
    let mut holder = Player::A;
    for k in 1..=n {
        let success = outcome >> (k - 1) & 1 == 1;
        if k == n {
            return success == (holder == Player::A);
        }
        let passes = match holder {
            Player::A => pass_a,
            Player::B => pass_b,
        };
        if success && passes >> (k - 1) & 1 == 1 {
            holder = holder.other();
        }
    }
    unreachable!("loop returns at the final stage")
}

fn enumerate_masks<T: Scalar>(n: usize, weights: &[T], pass_a: u64, pass_b: u64) -> T {
    weights
        .iter()
        .enumerate()
        .filter(|&(mask, _)| a_wins(n, mask as u64, pass_a, pass_b))
        .fold(T::zero(), |acc, (_, &w)| acc + w)
}

/// A's exact win probability for a strategy pair, summed over all `2^n`
/// outcome vectors. An all-zero outcome is a loss for A.
pub fn enumerate_value<T: Scalar>(
    spec: &GameSpec<T>,
    pass_a: &PassSet,
    pass_b: &PassSet,
) -> Result<T> {
    guard(spec.len(), ENUMERATION_LIMIT)?;
    let weights = outcome_weights(spec);
    Ok(enumerate_masks(
        spec.len(),
        &weights,
        pass_a.mask(),
        pass_b.mask(),
    ))
}

/// A's win probability for a strategy pair by propagating the probability
/// that A holds the turn forward through the stages.
pub fn policy_value<T: Scalar>(spec: &GameSpec<T>, pass_a: &PassSet, pass_b: &PassSet) -> T {
    let n = spec.len();
    let mut a_holds = T::one();
    for k in 1..n {
        let p = spec.p(k);
        let a_keeps = if pass_a.contains(k) {
            T::one() - p
        } else {
            T::one()
        };
        let b_passes = if pass_b.contains(k) { p } else { T::zero() };
        a_holds = a_holds * a_keeps + (T::one() - a_holds) * b_passes;
    }
    a_holds * spec.p(n) + (T::one() - a_holds) * spec.q(n)
}

/// A's win probability for every pure strategy pair; rows are A's pass
/// masks, columns B's.
#[derive(Clone, Debug)]
pub struct PayoffMatrix<T> {
    n: usize,
    rows: Vec<Vec<T>>,
}

/// Values within this distance of the optimum count as ties when choosing a
/// canonical optimal strategy.
const TIE: f64 = 1e-12;

impl<T: Scalar> PayoffMatrix<T> {
    pub fn strategies(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, a: &PassSet, b: &PassSet) -> T {
        self.rows[a.mask() as usize][b.mask() as usize]
    }

    /// `max_a min_b` and the lexicographically smallest maximiser.
    pub fn max_min(&self) -> (T, PassSet) {
        let security: Vec<T> = self
            .rows
            .iter()
            .map(|row| row.iter().copied().fold(T::infinity(), T::min))
            .collect();
        self.pick(&security, true)
    }

    /// `min_b max_a` and the lexicographically smallest minimiser.
    pub fn min_max(&self) -> (T, PassSet) {
        let cols = self.rows.len();
        let security: Vec<T> = (0..cols)
            .map(|b| {
                self.rows
                    .iter()
                    .map(|row| row[b])
                    .fold(T::neg_infinity(), T::max)
            })
            .collect();
        self.pick(&security, false)
    }

    fn pick(&self, values: &[T], maximise: bool) -> (T, PassSet) {
        let best = values.iter().copied().fold(
            if maximise {
                T::neg_infinity()
            } else {
                T::infinity()
            },
            |acc, v| if maximise { acc.max(v) } else { acc.min(v) },
        );
        let tie = T::lit(TIE);
        let choice = values
            .iter()
            .enumerate()
            .filter(|(_, &v)| (v - best).abs() <= tie)
            .map(|(mask, _)| PassSet::from_mask(mask as u64, self.n))
            .min()
            .expect("at least one strategy");
        (best, choice)
    }
}

pub fn payoff_matrix<T: Scalar>(spec: &GameSpec<T>) -> Result<PayoffMatrix<T>> {
    let n = spec.len();
    guard(n, MINIMAX_LIMIT)?;
    let weights = outcome_weights(spec);
    let count = 1u64 << (n - 1);
    let rows = (0..count)
        .into_par_iter()
        .map(|a| {
            (0..count)
                .map(|b| enumerate_masks(n, &weights, a, b))
                .collect()
        })
        .collect();
    Ok(PayoffMatrix { n, rows })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinimaxResult<T> {
    pub value: T,
    pub pass_a: PassSet,
    pub pass_b: PassSet,
}

/// `max` over A's pass sets of `min` over B's of [`enumerate_value`], with
/// one optimal pair (each side's lexicographically smallest security
/// strategy).
pub fn minimax_value<T: Scalar>(spec: &GameSpec<T>) -> Result<MinimaxResult<T>> {
    let matrix = payoff_matrix(spec)?;
    let (value, pass_a) = matrix.max_min();
    let (_, pass_b) = matrix.min_max();
    Ok(MinimaxResult {
        value,
        pass_a,
        pass_b,
    })
}

/// The responder's best pass set against a fixed opponent and the
/// responder's win probability. Ties go to the lexicographically smallest
/// stage set.
pub fn best_response<T: Scalar>(
    spec: &GameSpec<T>,
    responder: Player,
    opponent: &PassSet,
) -> Result<(PassSet, T)> {
    let n = spec.len();
    guard(n, BEST_RESPONSE_LIMIT)?;
    let values: Vec<(PassSet, T)> = (0u64..1 << (n - 1))
        .map(|mask| {
            let own = PassSet::from_mask(mask, n);
            let a_value = match responder {
                Player::A => policy_value(spec, &own, opponent),
                Player::B => policy_value(spec, opponent, &own),
            };
            let value = match responder {
                Player::A => a_value,
                Player::B => T::one() - a_value,
            };
            (own, value)
        })
        .collect();
    let best = values
        .iter()
        .map(|(_, v)| *v)
        .fold(T::neg_infinity(), T::max);
    let tie = T::lit(TIE);
    let (set, _) = values
        .into_iter()
        .filter(|(_, v)| best - *v <= tie)
        .min_by(|x, y| x.0.cmp(&y.0))
        .expect("at least one response");
    Ok((set, best))
}

/// Best single-player last-success probability over every stage-indexed
/// stopping rule ("stop at the first success among the chosen stages").
pub fn lsp_brute_force<T: Scalar>(spec: &GameSpec<T>) -> Result<T> {
    let n = spec.len();
    guard(n, LSP_BRUTE_FORCE_LIMIT)?;
    let weights = outcome_weights(spec);
    let all = (1u64 << n) - 1;
    let best = (0u64..1 << n)
        .map(|stop_set| {
            weights
                .iter()
                .enumerate()
                .filter(|&(outcome, _)| {
                    let hits = outcome as u64 & stop_set;
                    if hits == 0 {
                        return false;
                    }
                    let first = hits.trailing_zeros();
                    let later = all & !((2u64 << first) - 1);
                    outcome as u64 & later == 0
                })
                .fold(T::zero(), |acc, (_, &w)| acc + w)
        })
        .fold(T::neg_infinity(), T::max);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: &[f64]) -> GameSpec<f64> {
        GameSpec::new(p.to_vec()).unwrap()
    }

    #[test]
    fn pass_set_bounds() {
        assert!(PassSet::new(3, [1, 2]).is_ok());
        assert_eq!(
            PassSet::new(3, [3]),
            Err(Error::NotDecisionStage { stage: 3, n: 3 })
        );
        assert!(PassSet::new(3, [0]).is_err());
        assert!(PassSet::new(1, [1]).is_err());
        let set = PassSet::new(5, [2, 4]).unwrap();
        assert_eq!(set.mask(), 0b1010);
        assert_eq!(PassSet::from_mask(0b1010, 5), set);
        assert_eq!(PassSet::always(4).len(), 3);
        assert!(PassSet::always(1).is_empty());
        assert_eq!(
            PassSet::from_threshold(2, 4),
            PassSet::new(4, [2, 3]).unwrap()
        );
    }

    #[test]
    fn pass_set_lexicographic_order() {
        let e = PassSet::empty();
        let one = PassSet::new(4, [1]).unwrap();
        let one_two = PassSet::new(4, [1, 2]).unwrap();
        let two = PassSet::new(4, [2]).unwrap();
        assert!(e < one && one < one_two && one_two < two);
    }

    #[test]
    fn fair_pair_always_passing() {
        let s = spec(&[0.5, 0.5]);
        let all = PassSet::always(2);
        assert!((enumerate_value(&s, &all, &all).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_trial_has_no_decisions() {
        let s = spec(&[0.37]);
        let v = enumerate_value(&s, &PassSet::empty(), &PassSet::empty()).unwrap();
        assert!((v - 0.37).abs() < 1e-15);
        let (set, v) = best_response(&s, Player::A, &PassSet::empty()).unwrap();
        assert!(set.is_empty());
        assert!((v - 0.37).abs() < 1e-15);
        let (set, v) = best_response(&s, Player::B, &PassSet::empty()).unwrap();
        assert!(set.is_empty());
        assert!((v - 0.63).abs() < 1e-15);
    }

    #[test]
    fn a_passes_at_stage_one() {
        let s = spec(&[0.6, 0.3]);
        let a = PassSet::new(2, [1]).unwrap();
        for b in [PassSet::empty(), PassSet::always(2)] {
            assert!((enumerate_value(&s, &a, &b).unwrap() - 0.54).abs() < 1e-15);
        }
    }

    #[test]
    fn all_zero_outcome_loses_for_a() {
        let s = spec(&[0.0, 0.0]);
        let v = enumerate_value(&s, &PassSet::empty(), &PassSet::empty()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn minimax_examples() {
        let r = minimax_value(&spec(&[0.5, 0.5])).unwrap();
        assert!((r.value - 0.5).abs() < 1e-15);

        let r = minimax_value(&spec(&[0.3, 0.3, 0.3])).unwrap();
        assert!((r.value - 0.468).abs() < 1e-12);
        assert_eq!(r.pass_a, PassSet::new(3, [1, 2]).unwrap());

        let r = minimax_value(&spec(&[0.6, 0.3])).unwrap();
        assert!((r.value - 0.54).abs() < 1e-12);
        assert!(r.pass_a.contains(1));
    }

    #[test]
    fn best_response_example() {
        let s = spec(&[0.3, 0.3]);
        let (set, v) = best_response(&s, Player::A, &PassSet::always(2)).unwrap();
        assert_eq!(set, PassSet::always(2));
        assert!((v - 0.42).abs() < 1e-15);
    }

    #[test]
    fn policy_and_enumeration_agree() {
        let s = spec(&[0.2, 0.7, 0.4, 0.55, 0.1]);
        for a in 0..16 {
            for b in 0..16 {
                let pa = PassSet::from_mask(a, 5);
                let pb = PassSet::from_mask(b, 5);
                let e = enumerate_value(&s, &pa, &pb).unwrap();
                let p = policy_value(&s, &pa, &pb);
                assert!((e - p).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn limits_enforced() {
        let big = spec(&[0.1; 9]);
        assert_eq!(
            minimax_value(&big).unwrap_err(),
            Error::TooLarge { n: 9, limit: 8 }
        );
        let huge = spec(&[0.1; 25]);
        assert!(enumerate_value(&huge, &PassSet::empty(), &PassSet::empty()).is_err());
        assert!(best_response(&spec(&[0.1; 17]), Player::A, &PassSet::empty()).is_err());
    }

    #[test]
    fn lsp_brute_force_small() {
        let v = lsp_brute_force(&spec(&[0.5, 0.5])).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let v = lsp_brute_force(&spec(&[0.1])).unwrap();
        assert!((v - 0.1).abs() < 1e-15);
    }
}
