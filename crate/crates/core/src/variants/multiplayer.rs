use serde::{Deserialize, Serialize};

use crate::engine::GameSpec;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Loss probability of each of `m` players, in seating order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LossDistribution<T> {
    pub per_player: Vec<T>,
}

impl<T: Scalar> LossDistribution<T> {
    pub fn players(&self) -> usize {
        self.per_player.len()
    }

    /// Loss probability of player `j` (1-based).
    pub fn loss(&self, j: usize) -> T {
        self.per_player[j - 1]
    }

    pub fn total(&self) -> T {
        self.per_player.iter().fold(T::zero(), |a, &b| a + b)
    }
}

fn check_players(m: usize) -> Result<()> {
    if m < 2 {
        Err(Error::BelowMinimum {
            what: "player count",
            min: 2,
            value: m,
        })
    } else {
        Ok(())
    }
}

/// Loss distribution when every holder passes at every chance.
///
/// Each success moves the turn to the next seat, so the holder after the
/// last trial is player `1 + (N mod m)` for `N` total successes. The residue
/// distribution of `N` is propagated exactly, one trial at a time. The
/// always-pass profile is only claimed optimal when every `p_i < 1/2`; the
/// distribution itself is computed for any spec.
pub fn multiplayer_loss_distribution<T: Scalar>(
    spec: &GameSpec<T>,
    m: usize,
) -> Result<LossDistribution<T>> {
    check_players(m)?;
    let mut residues = vec![T::zero(); m];
    residues[0] = T::one();
    let mut next = vec![T::zero(); m];
    for &p in spec.params() {
        let q = T::one() - p;
        for r in 0..m {
            next[r] = residues[r] * q + residues[(r + m - 1) % m] * p;
        }
        std::mem::swap(&mut residues, &mut next);
    }
    Ok(LossDistribution {
        per_player: residues,
    })
}

/// Large-`n` limit of the loss distribution for `p_i = 1/n`: residues of a
/// unit-rate Poisson count modulo `m`, by the roots-of-unity filter
/// `P(N ≡ r) = (1/m) Σ_j ω^{-jr} exp(ω^j - 1)` with `ω = e^{2πi/m}`.
pub fn poisson_mod_limit<T: Scalar>(m: usize) -> Result<LossDistribution<T>> {
    check_players(m)?;
    let mf = T::from_count(m);
    let per_player = (0..m)
        .map(|r| {
            let sum = (0..m).fold(T::zero(), |acc, j| {
                let theta = T::two() * T::PI() * T::from_count(j) / mf;
                let angle = theta.sin() - T::from_count(r) * theta;
                acc + (theta.cos() - T::one()).exp() * angle.cos()
            });
            sum / mf
        })
        .collect();
    Ok(LossDistribution { per_player })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::reciprocal_n_value;

    #[test]
    fn two_players_complement_reciprocal_value() {
        for n in 3..40 {
            let spec = GameSpec::<f64>::reciprocal(n).unwrap();
            let d = multiplayer_loss_distribution(&spec, 2).unwrap();
            assert!((d.loss(1) - (1.0 - reciprocal_n_value::<f64>(n as u64))).abs() < 1e-12);
        }
    }

    #[test]
    fn single_trial_three_players() {
        let spec = GameSpec::new(vec![0.2f64]).unwrap();
        let d = multiplayer_loss_distribution(&spec, 3).unwrap();
        assert!((d.loss(1) - 0.8).abs() < 1e-15);
        assert!((d.loss(2) - 0.2).abs() < 1e-15);
        assert_eq!(d.loss(3), 0.0);
    }

    #[test]
    fn rejects_one_player() {
        let spec = GameSpec::new(vec![0.2f64]).unwrap();
        assert!(multiplayer_loss_distribution(&spec, 1).is_err());
        assert!(poisson_mod_limit::<f64>(0).is_err());
    }

    #[test]
    fn poisson_two_players() {
        let d: LossDistribution<f64> = poisson_mod_limit(2).unwrap();
        let e2 = std::f64::consts::E.powi(2);
        assert!((d.loss(1) - (0.5 + 0.5 / e2)).abs() < 1e-15);
        assert!((d.loss(2) - (0.5 - 0.5 / e2)).abs() < 1e-15);
    }

    #[test]
    fn poisson_three_players_first_entry() {
        let d: LossDistribution<f64> = poisson_mod_limit(3).unwrap();
        let closed = 1.0 / 3.0 + 2.0 * (3f64.sqrt() / 2.0).cos() / (3.0 * 1.5f64.exp());
        assert!((d.loss(1) - closed).abs() < 1e-15);
        assert!((d.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn poisson_matches_truncated_series() {
        // direct summation of Poisson(1) masses by residue
        for m in 2..8 {
            let mut direct = vec![0.0f64; m];
            let mut mass = (-1.0f64).exp();
            for k in 0..60 {
                direct[k % m] += mass;
                mass /= (k + 1) as f64;
            }
            let d: LossDistribution<f64> = poisson_mod_limit(m).unwrap();
            for (r, (got, want)) in d.per_player.iter().zip(&direct).enumerate() {
                assert!((got - want).abs() < 1e-14, "m={m} r={r}");
            }
        }
    }
}
