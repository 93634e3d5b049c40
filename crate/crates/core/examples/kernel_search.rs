// Random search over the kernel family `beta_k² = e^{l1 (k+1)} (k+1)^{l2}`,
// scoring each candidate by the penalized functional at its balancing alpha.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spherefit::approx::SampleSet;
use spherefit::cubature::gauss_legendre_rule;
use spherefit::defaults;
use spherefit::experiments::{add_noise_with_rng, franke_cap_eval, NoiseKind};
use spherefit::params::{kernel_select, KernelSearchResult, RandomSearchConfig, SearchBox};

pub fn run_example() -> spherefit::Result<KernelSearchResult> {
    let m = 12;
    let rule = gauss_legendre_rule(m)?;
    let clean: Vec<f64> = rule.points().iter().map(franke_cap_eval).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (noisy, delta) = add_noise_with_rng(&clean, NoiseKind::Gaussian, 0.5, &mut rng)?;
    let samples = SampleSet::new(&rule, noisy)?;
    let search = RandomSearchConfig {
        runs: 4,
        steps_per_run: 5,
        search_box: SearchBox::square(0.0, 5.0),
        seed: 21,
    };
    let r = kernel_select(&samples, m, &search, &defaults::balancing(delta))?;
    for (p, v) in r.per_run.iter().zip(&r.objective_values) {
        println!("run winner ({:.3}, {:.3}) objective {v:.4}", p.lambda1, p.lambda2);
    }
    println!(
        "mean of winners ({:.3}, {:.3}), objective {:.4} at alpha {:.3e}",
        r.best.lambda1, r.best.lambda2, r.best_objective, r.alpha_at_best
    );
    Ok(r)
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
