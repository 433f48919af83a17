//! The game on a two-state Markov chain of trials, solved exactly, plus a
//! tester for the conjectured pass rule: after a success at stage `k`, pass
//! iff `P(I_i = 1 | I_k = 1) < 1/2` for every later `i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::GameSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Value gaps at or below this are floating-point ties, not violations.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Largest horizon accepted by [`counterexample_search`].
pub const SEARCH_MAX_N: usize = 6;

/// Chain law of the trials.
///
/// `alpha[j-1] = P(I_{j+1} = 1 | I_j = 0)` and
/// `beta[j-1] = P(I_{j+1} = 0 | I_j = 1)` for `j = 1..n-1`; `p1 = P(I_1 = 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovSpec<T> {
    pub p1: T,
    pub alpha: Vec<T>,
    pub beta: Vec<T>,
}

impl<T: Scalar> MarkovSpec<T> {
    pub fn new(p1: T, alpha: Vec<T>, beta: Vec<T>) -> Result<Self> {
        let spec = Self { p1, alpha, beta };
        spec.validate()?;
        Ok(spec)
    }

    /// Re-checks the invariants, e.g. after deserialisation.
    pub fn validate(&self) -> Result<()> {
        if self.alpha.len() != self.beta.len() {
            return Err(Error::LengthMismatch {
                what: "beta",
                expected: self.alpha.len(),
                found: self.beta.len(),
            });
        }
        if !self.p1.is_probability() {
            return Err(Error::InvalidParameter {
                what: "p1",
                value: self.p1.as_f64(),
            });
        }
        for (what, seq) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if let Some(v) = seq.iter().find(|v| !v.is_probability()) {
                return Err(Error::InvalidParameter {
                    what,
                    value: v.as_f64(),
                });
            }
        }
        Ok(())
    }

    /// Encodes independent trials: `alpha_j = p_{j+1}`, `beta_j = 1 - p_{j+1}`.
    pub fn independent(spec: &GameSpec<T>) -> Self {
        let rest = &spec.params()[1..];
        Self {
            p1: spec.p(1),
            alpha: rest.to_vec(),
            beta: rest.iter().map(|&p| T::one() - p).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.alpha.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `P(I_{j+1} = 1 | I_j = prev)`.
    fn step(&self, j: usize, prev_success: bool) -> T {
        if prev_success {
            T::one() - self.beta[j - 1]
        } else {
            self.alpha[j - 1]
        }
    }

    /// Pushes `P(I_j = 1)` forward to `P(I_{j+1} = 1)`.
    fn propagate(&self, j: usize, success: T) -> T {
        success * self.step(j, true) + (T::one() - success) * self.step(j, false)
    }

    /// Unconditional `P(I_k = 1)` for `k = 1..=n`.
    pub fn marginals(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        let mut current = self.p1;
        out.push(current);
        for j in 1..self.len() {
            current = self.propagate(j, current);
            out.push(current);
        }
        out
    }
}

/// `P(I_i = 1 | I_k = 1)` for `1 <= k < i <= n`.
pub fn conditional_success<T: Scalar>(spec: &MarkovSpec<T>, k: usize, i: usize) -> Result<T> {
    let n = spec.len();
    if k == 0 || k >= i || i > n {
        return Err(Error::StageOrder { k, i, n });
    }
    Ok((k..i).fold(T::one(), |success, j| spec.propagate(j, success)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Keep,
    Pass,
}

/// Holder-relative values of both actions after a success at `stage`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDecision<T> {
    pub stage: usize,
    pub action: Action,
    pub keep_value: T,
    pub pass_value: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovSolution<T> {
    /// Player A's optimal win probability.
    pub value: T,
    /// Optimal action after a success, at every decision stage where a
    /// success has positive probability. Ties keep.
    pub decisions: Vec<StageDecision<T>>,
}

/// Backward induction over (stage, last observed value), values relative to
/// the current holder; passing turns a continuation value `v` into `1 - v`.
pub fn markov_optimal<T: Scalar>(spec: &MarkovSpec<T>) -> MarkovSolution<T> {
    let n = spec.len();
    // Holder value just after observing I_k = 0 / 1, before deciding.
    let mut after = [T::zero(), T::one()];
    let mut decisions = Vec::new();
    for k in (1..n).rev() {
        // Holder value about to observe I_{k+1}, given I_k = 0 / 1.
        let before = [false, true].map(|prev| {
            let s = spec.step(k, prev);
            s * after[1] + (T::one() - s) * after[0]
        });
        let keep_value = before[1];
        let pass_value = T::one() - before[1];
        let action = if keep_value >= T::half() {
            Action::Keep
        } else {
            Action::Pass
        };
        decisions.push(StageDecision {
            stage: k,
            action,
            keep_value,
            pass_value,
        });
        after = [before[0], keep_value.max(pass_value)];
    }
    let value = spec.p1 * after[1] + (T::one() - spec.p1) * after[0];
    let marginals = spec.marginals();
    decisions.retain(|d| marginals[d.stage - 1] > T::zero());
    decisions.reverse();
    MarkovSolution { value, decisions }
}

/// Action after a success at each stage `1..n` under the conjectured rule;
/// `None` when the largest conditional success probability ties 1/2, where
/// the rule prescribes neither action.
pub fn conjectured_decisions<T: Scalar>(spec: &MarkovSpec<T>) -> Vec<(usize, Option<Action>)> {
    let n = spec.len();
    let tol = T::lit(TIE_TOLERANCE);
    (1..n)
        .map(|k| {
            let mut success = T::one();
            let mut largest = T::zero();
            for j in k..n {
                success = spec.propagate(j, success);
                largest = largest.max(success);
            }
            let action = if largest > T::half() + tol {
                Some(Action::Keep)
            } else if largest < T::half() - tol {
                Some(Action::Pass)
            } else {
                None
            };
            (k, action)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mismatch<T> {
    pub stage: usize,
    pub conjectured: Action,
    pub optimal: Action,
    /// How much the optimal action beats the conjectured one.
    pub gap: T,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport<T> {
    pub spec: MarkovSpec<T>,
    pub agrees: bool,
    pub mismatches: Vec<Mismatch<T>>,
}

impl<T: Scalar> ConjectureReport<T> {
    /// Mismatches whose gap exceeds [`TIE_TOLERANCE`].
    pub fn violations(&self) -> impl Iterator<Item = &Mismatch<T>> {
        let tol = T::lit(TIE_TOLERANCE);
        self.mismatches.iter().filter(move |m| m.gap > tol)
    }
}

/// Compares the conjectured rule with the exact optimum at every reachable
/// decision stage.
pub fn conjecture_check<T: Scalar>(spec: &MarkovSpec<T>) -> ConjectureReport<T> {
    let optimal = markov_optimal(spec);
    let conjectured = conjectured_decisions(spec);
    let mismatches: Vec<Mismatch<T>> = optimal
        .decisions
        .iter()
        .filter_map(|d| {
            let guess = conjectured[d.stage - 1].1?;
            (guess != d.action).then(|| Mismatch {
                stage: d.stage,
                conjectured: guess,
                optimal: d.action,
                gap: (d.keep_value - d.pass_value).abs(),
            })
        })
        .collect();
    let tol = T::lit(TIE_TOLERANCE);
    let agrees = mismatches.iter().all(|m| m.gap <= tol);
    ConjectureReport {
        spec: spec.clone(),
        agrees,
        mismatches,
    }
}

/// Outcome of [`counterexample_search`]; `violations` holds the reports of
/// every spec where the conjecture is strictly beaten, grid specs first in
/// grid order, then random specs in draw order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n_max: usize,
    pub grid_step: f64,
    pub random_trials: u64,
    pub seed: u64,
    pub grid_specs: u64,
    pub random_specs: u64,
    pub violations: Vec<ConjectureReport<f64>>,
}

/// Grid values `0, step, 2·step, ... <= 1`, rounded to 12 decimals.
pub fn grid_values(step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step < 1.0) {
        return Err(Error::GridStep(step));
    }
    let count = (1.0 / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((i as f64 * step * 1e12).round() / 1e12).min(1.0))
        .collect())
}

fn grid_spec(n: usize, values: &[f64], mut index: u64) -> MarkovSpec<f64> {
    let g = values.len() as u64;
    let mut digit = || {
        let v = values[(index % g) as usize];
        index /= g;
        v
    };
    let p1 = digit();
    let alpha = (1..n).map(|_| digit()).collect();
    let beta = (1..n).map(|_| digit()).collect();
    MarkovSpec { p1, alpha, beta }
}

fn random_spec(rng: &mut ChaCha8Rng, n_max: usize) -> MarkovSpec<f64> {
    let n = rng.random_range(2..=n_max);
    let p1 = rng.random::<f64>();
    let alpha = (1..n).map(|_| rng.random::<f64>()).collect();
    let beta = (1..n).map(|_| rng.random::<f64>()).collect();
    MarkovSpec { p1, alpha, beta }
}

/// Exhaustive grid over `p1`, `alpha`, `beta` for every `2 <= n <= n_max`
/// (a single trial has no decision), followed by `random_trials` specs with
/// uniform parameters and `n` uniform in `2..=n_max`, drawn from ChaCha8
/// seeded with `seed`. Deterministic for fixed arguments.
pub fn counterexample_search(
    n_max: usize,
    grid_step: f64,
    random_trials: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    if n_max > SEARCH_MAX_N {
        return Err(Error::TooLarge {
            n: n_max,
            limit: SEARCH_MAX_N,
        });
    }
    let values = grid_values(grid_step)?;
    let mut violations = Vec::new();
    let mut grid_specs = 0u64;
    for n in 2..=n_max {
        let total = (values.len() as u64).pow((2 * n - 1) as u32);
        grid_specs += total;
        let found: Vec<ConjectureReport<f64>> = (0..total)
            .into_par_iter()
            .filter_map(|i| {
                let report = conjecture_check(&grid_spec(n, &values, i));
                (!report.agrees).then_some(report)
            })
            .collect();
        violations.extend(found);
    }

    let random_specs = if n_max >= 2 { random_trials } else { 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<MarkovSpec<f64>> = (0..random_specs)
        .map(|_| random_spec(&mut rng, n_max))
        .collect();
    let found: Vec<ConjectureReport<f64>> = specs
        .par_iter()
        .filter_map(|spec| {
            let report = conjecture_check(spec);
            (!report.agrees).then_some(report)
        })
        .collect();
    violations.extend(found);

    Ok(SearchOutcome {
        n_max,
        grid_step,
        random_trials,
        seed,
        grid_specs,
        random_specs,
        violations,
    })
}
