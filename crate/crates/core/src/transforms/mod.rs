//! Constructive transformations between machine kinds.

mod closure;
mod cutpoint;
mod dispatch;
mod latvian;
mod quantum;
mod restart_post;

pub use closure::{
    amplify, choose_k, closed_form_k, post_complement, post_intersection, post_union,
    AmplificationPlan, Tensor,
};
pub use cutpoint::{post_to_cutpoint, zero_error_post_to_cutpoint_zero, CutpointBase, Side};
pub use dispatch::{convert, Target};
pub use latvian::{
    cutpoint_zero_to_latvian, dfa_as_pfa, has_zero_post_mass, latvian_to_post, zero_support_dfa,
    LatvianSide,
};
pub use quantum::{
    epsilon_prime, kwqfa_restart_to_qfa_restart, linearize, qfa_restart_to_kwqfa_restart,
    CompiledKwqfa, LinearizedSystem,
};
pub use restart_post::{
    defer_halting, post_qfa_to_restart, post_to_restart, restart_qfa_to_post, restart_to_post,
    unreachable_states,
};
