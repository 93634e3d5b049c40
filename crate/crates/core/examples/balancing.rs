// Balancing-principle choice of alpha for noisy Franke+cap data, with the
// full comparison trace.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spherefit::approx::SampleSet;
use spherefit::cubature::gauss_legendre_rule;
use spherefit::defaults;
use spherefit::experiments::{add_noise_with_rng, franke_cap_eval, NoiseKind};
use spherefit::params::{balancing_principle, weights_laplace_beltrami, BalancingOutcome, NormBoundKind};

pub fn run_example() -> spherefit::Result<Vec<BalancingOutcome>> {
    let m = 16;
    let rule = gauss_legendre_rule(m)?;
    let clean: Vec<f64> = rule.points().iter().map(franke_cap_eval).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (noisy, delta) = add_noise_with_rng(&clean, NoiseKind::Gaussian, 0.5, &mut rng)?;
    let samples = SampleSet::new(&rule, noisy)?;
    let beta = weights_laplace_beltrami(m);

    let mut out = Vec::new();
    for kind in [NormBoundKind::GridMax, NormBoundKind::GridTermwise, NormBoundKind::Crude] {
        let mut cfg = defaults::balancing(delta);
        cfg.norm_bound = kind;
        let o = balancing_principle(&samples, m, &beta, &cfg)?;
        println!(
            "{kind:?}: alpha* = {:.3e} after {} comparisons (triggered: {})",
            o.alpha_star,
            o.steps.len(),
            o.triggered
        );
        if let Some(last) = o.steps.last() {
            println!("  last step: difference {:.4} vs threshold {:.4}", last.difference, last.threshold);
        }
        out.push(o);
    }
    Ok(out)
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
