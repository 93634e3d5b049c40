//! Settings of the reference numerical studies, in one place.
//!
//! | constant            | value                         |
//! |---------------------|-------------------------------|
//! | degree M            | 30                            |
//! | grid                | `alpha_i = 8 * 0.8^i`, i=1..60 |
//! | omega               | 0.002                         |
//! | SGG decay `a_k`     | `1.2^{-k}`                    |
//! | uniform noise       | sup norm 0.05                 |
//! | Gaussian noise      | sigma 0.5                     |
//! | random search       | 10 runs x 10 steps on [0,5]²  |
//! | simulations         | 50                            |

use crate::params::{BalancingConfig, NormBoundKind, RandomSearchConfig, SearchBox};

pub const DEGREE: usize = 30;
pub const GRID_ANCHOR: f64 = 8.0;
pub const GRID_RATIO: f64 = 0.8;
pub const GRID_LEN: usize = 60;
pub const OMEGA: f64 = 0.002;
pub const SGG_DECAY_BASE: f64 = 1.2;
pub const UNIFORM_NOISE_LEVEL: f64 = 0.05;
pub const GAUSSIAN_SIGMA: f64 = 0.5;
pub const SEARCH_RUNS: usize = 10;
pub const SEARCH_STEPS: usize = 10;
pub const SEARCH_BOX: [f64; 2] = [0.0, 5.0];
pub const SIMULATIONS: usize = 50;
/// Tolerance used when certifying a rule read from disk.
pub const RULE_EXACTNESS_TOL: f64 = 1e-9;

/// Balancing configuration on the default grid for noise level `delta`.
pub fn balancing(delta: f64) -> BalancingConfig {
    BalancingConfig {
        alpha0: GRID_ANCHOR,
        q: GRID_RATIO,
        grid_len: GRID_LEN,
        omega: OMEGA,
        delta,
        probe_resolution: None,
        norm_bound: NormBoundKind::GridMax,
    }
}

pub fn random_search(seed: u64) -> RandomSearchConfig {
    RandomSearchConfig {
        runs: SEARCH_RUNS,
        steps_per_run: SEARCH_STEPS,
        search_box: SearchBox::square(SEARCH_BOX[0], SEARCH_BOX[1]),
        seed,
    }
}
