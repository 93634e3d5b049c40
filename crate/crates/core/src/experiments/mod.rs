//! Synthetic data, error metrics, and the three reference studies.
//!
//! Every study is a pure function of its [`ExperimentConfig`]; the config is
//! echoed into every report so that a report can be re-run bit for bit.
//! Randomness comes from ChaCha8 streams keyed by `(seed, stream index)`.

mod franke;
mod noise;
mod report;
mod runs;
mod sgg;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use franke::{cap_center, cap_eval, franke_cap_eval, franke_eval, CAP_RADIUS};
pub use noise::{add_noise, add_noise_with_rng, NoiseKind, NoiseSpec};
pub use report::{write_curves_csv, CurveRow, ExperimentOutput, ExperimentReport, PlotData};
pub use runs::{
    run_experiment, run_experiment_1, run_experiment_2, run_experiment_3, BalancingSettings, ExperimentConfig,
    FrankeExperimentConfig, KernelExperimentConfig, SggExperimentConfig, KERNEL_BP, LB_BP, ONES_BEST, PLAIN_LS, SGG_BEST,
    SGG_BP,
};
pub use sgg::{
    downward_continuation_factors, geometric_decay, sgg_generate, sgg_generate_with_rng, sgg_recover, SggModel,
};

use crate::approx::HarmonicCoefficients;
use crate::error::{Error, Result};

/// Name of the generator recorded in reports.
pub const RNG_NAME: &str = "ChaCha8";

/// Independent generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `||estimate - truth||_2 / ||truth||_2`.
pub fn relative_error_l2(estimate: &HarmonicCoefficients, truth: &HarmonicCoefficients) -> Result<f64> {
    if estimate.degree() != truth.degree() {
        return Err(Error::DegreeMismatch {
            expected: truth.degree(),
            got: estimate.degree(),
        });
    }
    let denom = truth.norm();
    if denom == 0.0 {
        return Err(Error::InvalidParameter("relative error against a zero vector".into()));
    }
    let num = estimate
        .values()
        .iter()
        .zip(truth.values())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    Ok(num / denom)
}

/// Weighted relative L2 error of sampled values.
pub fn relative_error_weighted(estimate: &[f64], truth: &[f64], weights: &[f64]) -> Result<f64> {
    if estimate.len() != truth.len() || weights.len() != truth.len() {
        return Err(Error::LengthMismatch {
            what: "values",
            expected: truth.len(),
            got: estimate.len().min(weights.len()),
        });
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for ((e, t), w) in estimate.iter().zip(truth).zip(weights) {
        num += w * (e - t) * (e - t);
        den += w * t * t;
    }
    if den == 0.0 {
        return Err(Error::InvalidParameter("relative error against a zero function".into()));
    }
    Ok((num / den).sqrt())
}

/// `max_i |a_i - b_i|`.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_error_examples() {
        let t = HarmonicCoefficients::new(1, vec![1.0, -2.0, 0.5, 3.0]).unwrap();
        assert_eq!(relative_error_l2(&t, &t).unwrap(), 0.0);
        assert_eq!(relative_error_l2(&HarmonicCoefficients::zeros(1), &t).unwrap(), 1.0);
        let twice = t.scale_degrees(&[2.0, 2.0]);
        assert!((relative_error_l2(&twice, &t).unwrap() - 1.0).abs() < 1e-15);
        assert!(relative_error_l2(&t, &HarmonicCoefficients::zeros(1)).is_err());
        assert!(relative_error_l2(&HarmonicCoefficients::zeros(2), &t).is_err());
    }

    #[test]
    fn streams_differ() {
        use rand::Rng;
        let a: u64 = stream_rng(1, 0).gen();
        let b: u64 = stream_rng(1, 1).gen();
        let c: u64 = stream_rng(1, 0).gen();
        assert_ne!(a, b);
        assert_eq!(a, c);
    }
}
