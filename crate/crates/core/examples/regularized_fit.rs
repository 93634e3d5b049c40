// Tikhonov-regularized fit of noisy samples: the closed form agrees with a
// dense solve of the normal equations, and larger alpha shrinks the
// coefficients.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spherefit::approx::{regularized_fit, regularized_fit_via_solver, SampleSet};
use spherefit::cubature::gauss_legendre_rule;
use spherefit::experiments::{add_noise_with_rng, franke_cap_eval, NoiseKind};
use spherefit::params::weights_laplace_beltrami;

pub fn run_example() -> spherefit::Result<f64> {
    let m = 8;
    let rule = gauss_legendre_rule(m)?;
    let clean: Vec<f64> = rule.points().iter().map(franke_cap_eval).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (noisy, _) = add_noise_with_rng(&clean, NoiseKind::Gaussian, 0.1, &mut rng)?;
    let samples = SampleSet::new(&rule, noisy)?;
    let beta = weights_laplace_beltrami(m);

    let mut worst = 0.0f64;
    for alpha in [0.0, 1e-4, 1e-2, 1.0] {
        let closed = regularized_fit(&samples, m, alpha, &beta)?;
        let dense = regularized_fit_via_solver(&samples, m, alpha, &beta)?;
        let diff = closed
            .values()
            .iter()
            .zip(dense.values())
            .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
        worst = worst.max(diff / closed.norm());
        println!("alpha {alpha:>7.0e}: |gamma| = {:.6}, closed vs dense {diff:.1e}", closed.norm());
    }
    Ok(worst)
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
