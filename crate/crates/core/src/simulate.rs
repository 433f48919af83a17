//! Seeded Monte Carlo play of the game.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), a counter-based generator
//! with 2^64 independent streams. Samples are split into `shards` contiguous
//! blocks; shard `i` seeds ChaCha8 with the master seed through
//! `SeedableRng::seed_from_u64` and then selects stream `i`, so results depend
//! only on `(inputs, seed, shards)` and never on thread scheduling. Shard
//! counts are added in shard order.
//!
//! A Bernoulli trial with parameter `p` succeeds when a unit draw `u < p`,
//! where `u` is `rand`'s standard `f64` mapping: the top 53 bits of a `u64`
//! output scaled by `2^-53`, giving `u ∈ [0, 1)`. Uniform parameters use the
//! same mapping.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{threshold_index, GameSpec};
use crate::error::{Error, Result};
use crate::oracle::{PassSet, Player};

pub const DEFAULT_SHARDS: u64 = 16;

/// Frequency estimate with its normal-approximation 95% half width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub estimate: f64,
    pub samples: u64,
    pub seed: u64,
    pub half_width_95: f64,
}

impl SimReport {
    pub fn from_count(hits: u64, samples: u64, seed: u64) -> Self {
        let estimate = hits as f64 / samples as f64;
        let half_width_95 = 1.96 * (estimate * (1.0 - estimate) / samples as f64).sqrt();
        Self {
            estimate,
            samples,
            seed,
            half_width_95,
        }
    }

    /// Whether `value` lies in `estimate ± half_width_95`.
    pub fn covers(&self, value: f64) -> bool {
        (value - self.estimate).abs() <= self.half_width_95
    }

    /// Distance from `value` in half widths; infinite when the half width is
    /// zero and the values differ.
    pub fn half_widths_from(&self, value: f64) -> f64 {
        let d = (value - self.estimate).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.half_width_95
        }
    }
}

fn shard_rng(seed: u64, shard: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(shard);
    rng
}

/// Runs `samples` trials split over `shards` streams; `play` returns the
/// per-category hit counts of one sample as an index into `categories`.
fn run_sharded<F>(samples: u64, seed: u64, shards: u64, categories: usize, play: F) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    let shards = shards.max(1);
    let base = samples / shards;
    let extra = samples % shards;
    let per_shard: Vec<Vec<u64>> = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let count = base + u64::from(shard < extra);
            let mut rng = shard_rng(seed, shard);
            let mut hits = vec![0u64; categories];
            for _ in 0..count {
                hits[play(&mut rng)] += 1;
            }
            hits
        })
        .collect();
    per_shard
        .into_iter()
        .fold(vec![0u64; categories], |mut acc, hits| {
            for (a, h) in acc.iter_mut().zip(hits) {
                *a += h;
            }
            acc
        })
}

fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    rng.random::<f64>() < p
}

/// Plays one game; true when A wins.
fn play_game(rng: &mut ChaCha8Rng, params: &[f64], pass_a: &PassSet, pass_b: &PassSet) -> bool {
    let n = params.len();
    let mut holder = Player::A;
    for (i, &p) in params.iter().enumerate() {
        let stage = i + 1;
        let success = bernoulli(rng, p);
        if stage == n {
            return success == (holder == Player::A);
        }
        let passes = match holder {
            Player::A => pass_a,
            Player::B => pass_b,
        };
        if success && passes.contains(stage) {
            holder = holder.other();
        }
    }
    unreachable!("final stage returns")
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        Err(Error::BelowMinimum {
            what: "samples",
            min: 1,
            value: 0,
        })
    } else {
        Ok(())
    }
}

/// A's win frequency for a fixed strategy pair.
pub fn simulate(
    spec: &GameSpec<f64>,
    pass_a: &PassSet,
    pass_b: &PassSet,
    samples: u64,
    seed: u64,
) -> Result<SimReport> {
    simulate_sharded(spec, pass_a, pass_b, samples, seed, DEFAULT_SHARDS)
}

pub fn simulate_sharded(
    spec: &GameSpec<f64>,
    pass_a: &PassSet,
    pass_b: &PassSet,
    samples: u64,
    seed: u64,
    shards: u64,
) -> Result<SimReport> {
    check_samples(samples)?;
    let params = spec.params();
    let hits = run_sharded(samples, seed, shards, 2, |rng| {
        usize::from(play_game(rng, params, pass_a, pass_b))
    });
    Ok(SimReport::from_count(hits[1], samples, seed))
}

/// Draws `n` parameters from `U[0, 1]` per sample, plays the threshold
/// strategy for both sides and records A's win frequency.
pub fn simulate_random_params(n: usize, samples: u64, seed: u64) -> Result<SimReport> {
    simulate_random_params_sharded(n, samples, seed, DEFAULT_SHARDS)
}

pub fn simulate_random_params_sharded(
    n: usize,
    samples: u64,
    seed: u64,
    shards: u64,
) -> Result<SimReport> {
    check_samples(samples)?;
    if n == 0 {
        return Err(Error::EmptySpec);
    }
    let hits = run_sharded(samples, seed, shards, 2, |rng| {
        let params: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let spec = GameSpec::new(params).expect("unit draws are probabilities");
        let threshold = threshold_index(&spec, 1).expect("stage 1").threshold;
        let pass = PassSet::from_threshold(threshold, n);
        usize::from(play_game(rng, spec.params(), &pass, &pass))
    });
    Ok(SimReport::from_count(hits[1], samples, seed))
}

/// Hot-potato play with `m` seats under always-pass: every success hands the
/// turn to the next seat; the holder after the last trial loses. Returns one
/// loss-frequency report per seat.
pub fn simulate_multiplayer(
    spec: &GameSpec<f64>,
    m: usize,
    samples: u64,
    seed: u64,
) -> Result<Vec<SimReport>> {
    simulate_multiplayer_sharded(spec, m, samples, seed, DEFAULT_SHARDS)
}

pub fn simulate_multiplayer_sharded(
    spec: &GameSpec<f64>,
    m: usize,
    samples: u64,
    seed: u64,
    shards: u64,
) -> Result<Vec<SimReport>> {
    if m < 2 {
        return Err(Error::BelowMinimum {
            what: "player count",
            min: 2,
            value: m,
        });
    }
    check_samples(samples)?;
    let params = spec.params();
    let hits = run_sharded(samples, seed, shards, m, |rng| {
        params.iter().fold(0usize, |holder, &p| {
            if bernoulli(rng, p) {
                (holder + 1) % m
            } else {
                holder
            }
        })
    });
    Ok(hits
        .into_iter()
        .map(|h| SimReport::from_count(h, samples, seed))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: &[f64]) -> GameSpec<f64> {
        GameSpec::new(p.to_vec()).unwrap()
    }

    #[test]
    fn certain_success_always_wins() {
        let r = simulate(&spec(&[1.0]), &PassSet::empty(), &PassSet::empty(), 1000, 5).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert_eq!(r.half_width_95, 0.0);
    }

    #[test]
    fn all_zero_always_loses() {
        let all = PassSet::always(2);
        let r = simulate(&spec(&[0.0, 0.0]), &all, &all, 1000, 5).unwrap();
        assert_eq!(r.estimate, 0.0);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(simulate(&spec(&[0.5]), &PassSet::empty(), &PassSet::empty(), 0, 1).is_err());
        assert!(simulate_multiplayer(&spec(&[0.5]), 1, 10, 1).is_err());
    }

    #[test]
    fn half_width_formula() {
        let r = SimReport::from_count(25, 100, 0);
        assert!((r.half_width_95 - 1.96 * (0.25f64 * 0.75 / 100.0).sqrt()).abs() < 1e-15);
        assert!(r.covers(0.25));
    }

    #[test]
    fn shard_remainders_are_counted() {
        let r = simulate_sharded(
            &spec(&[1.0]),
            &PassSet::empty(),
            &PassSet::empty(),
            103,
            1,
            7,
        )
        .unwrap();
        assert_eq!(r.samples, 103);
        assert_eq!(r.estimate, 1.0);
    }

    #[test]
    fn multiplayer_single_trial() {
        let reports = simulate_multiplayer(&spec(&[0.2]), 3, 100_000, 4).unwrap();
        assert_eq!(reports.len(), 3);
        assert!(reports[0].half_widths_from(0.8) < 3.0);
        assert!(reports[1].half_widths_from(0.2) < 3.0);
        assert_eq!(reports[2].estimate, 0.0);
    }

    #[test]
    fn reproducible() {
        let s = spec(&[0.3, 0.6, 0.2]);
        let a = PassSet::always(3);
        let x = simulate_sharded(&s, &a, &a, 10_000, 11, 4).unwrap();
        let y = simulate_sharded(&s, &a, &a, 10_000, 11, 4).unwrap();
        assert_eq!(x, y);
    }
}
