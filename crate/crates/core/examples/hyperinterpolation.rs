// With alpha = 0 the fit is hyperinterpolation and reproduces every
// polynomial of degree M from its samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spherefit::approx::{evaluate, regularized_fit, HarmonicCoefficients, PenalizationWeights, SampleSet};
use spherefit::cubature::gauss_legendre_rule;
use spherefit::harmonics::basis_len;

pub fn run_example() -> spherefit::Result<f64> {
    let m = 12;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let truth = HarmonicCoefficients::new(m, (0..basis_len(m)).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
    let rule = gauss_legendre_rule(m)?;
    let samples = SampleSet::from_fn(&rule, |x| evaluate(&truth, x))?;
    let fit = regularized_fit(&samples, m, 0.0, &PenalizationWeights::ones(m))?;
    let err = fit
        .values()
        .iter()
        .zip(truth.values())
        .fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
    println!("degree {m}, {} nodes, max coefficient error {err:.2e}", rule.len());
    Ok(err)
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
