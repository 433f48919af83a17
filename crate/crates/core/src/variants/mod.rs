//! Variant games: replay on an all-zero round, more than two players under
//! always-pass play, and parameters drawn uniformly at random.

mod multiplayer;
mod random_params;
mod repeat;

pub use multiplayer::{multiplayer_loss_distribution, poisson_mod_limit, LossDistribution};
pub use random_params::{
    rp_expected_assembled, rp_expected_value, rp_pivot_value, rp_suffix_recurrence,
    rp_suffix_value, RandomParamKind, RandomParamValue,
};
pub use repeat::{
    repeat_value, repeat_value_limit, repeat_value_reciprocal, repeat_value_reciprocal_conditional,
};
