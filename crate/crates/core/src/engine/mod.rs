//! Core game model: validated specs, the exact backward-induction solver,
//! threshold strategies, closed forms and the single-player odds reference.

mod odds;
mod parity;
mod solve;
mod spec;

pub use odds::{
    lsp_best_threshold, lsp_odds_index, lsp_odds_value, lsp_threshold_value, LspResult,
};
pub use parity::{
    equal_p_value, parity_odd_convolution, parity_odd_probability, reciprocal_n_limit,
    reciprocal_n_value,
};
pub use solve::{solve_dp, threshold_index, win_probability, ThresholdStrategy, ValueTable};
pub use spec::{validate_spec, GameSpec};
