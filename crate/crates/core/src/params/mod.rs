//! Parameter choice: penalization weight families, the balancing principle
//! for the regularization parameter, and random-search kernel selection.

mod balancing;
mod search;
mod weights;

pub use balancing::{
    balancing_principle, write_trace_csv, Balancer, BalancingConfig, BalancingOutcome, BalancingStep, NormBoundKind,
};
pub use search::{kernel_select, KernelSearchResult, KernelSelector, RandomSearchConfig, SearchBox};
pub use weights::{
    weights_from_kernel_params, weights_laplace_beltrami, weights_sgg_apriori, KernelParams,
};
