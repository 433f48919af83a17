//! Solver for the two-player adversarial last-success game.
//!
//! `n` independent Bernoulli trials with known parameters are observed in
//! order. The player holding the turn must observe the next trial; after a
//! success (and before the last trial) the holder may hand the turn to the
//! opponent. The holder at the final trial wins iff it succeeds, so an
//! all-zero run is a loss for the first player, A.
//!
//! The core types are generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which every tolerance in the test
//! suites assumes.

pub mod cli;
pub mod engine;
pub mod error;
pub mod markov;
pub mod oracle;
pub mod scalar;
pub mod simulate;
pub mod variants;

pub use engine::{GameSpec, LspResult, ThresholdStrategy, ValueTable};
pub use error::{Error, Result};
pub use markov::{ConjectureReport, MarkovSolution, MarkovSpec};
pub use oracle::{PassSet, Player};
pub use scalar::Scalar;
pub use simulate::SimReport;
pub use variants::{LossDistribution, RandomParamValue};

pub type GameSpec64 = GameSpec<f64>;
pub type ValueTable64 = ValueTable<f64>;
pub type LspResult64 = LspResult<f64>;
pub type MarkovSpec64 = MarkovSpec<f64>;
pub type MarkovSolution64 = MarkovSolution<f64>;
pub type ConjectureReport64 = ConjectureReport<f64>;
pub type LossDistribution64 = LossDistribution<f64>;
pub type RandomParamValue64 = RandomParamValue<f64>;

pub type GameSpec32 = GameSpec<f32>;
pub type ValueTable32 = ValueTable<f32>;
pub type MarkovSpec32 = MarkovSpec<f32>;
