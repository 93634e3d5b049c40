use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    /// `U[-1, 1]` draws rescaled so the vector's sup norm equals the level.
    UniformSupnorm,
    /// i.i.d. `N(0, level²)`.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub level: f64,
    pub seed: u64,
}

/// Noisy copy of `clean` and the realized `max |noise_i|`.
pub fn add_noise(clean: &[f64], spec: &NoiseSpec) -> Result<(Vec<f64>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    add_noise_with_rng(clean, spec.kind, spec.level, &mut rng)
}

pub fn add_noise_with_rng(clean: &[f64], kind: NoiseKind, level: f64, rng: &mut impl Rng) -> Result<(Vec<f64>, f64)> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::InvalidParameter(format!("noise level must be finite and >= 0, got {level}")));
    }
    if level == 0.0 || clean.is_empty() {
        return Ok((clean.to_vec(), 0.0));
    }
    let noise: Vec<f64> = match kind {
        NoiseKind::UniformSupnorm => {
            let raw: Vec<f64> = clean.iter().map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let (imax, peak) = raw
                .iter()
                .enumerate()
                .fold((0, 0.0f64), |(i, m), (j, v)| if v.abs() > m { (j, v.abs()) } else { (i, m) });
            if peak == 0.0 {
                return Err(Error::InvalidParameter("degenerate uniform noise draw".into()));
            }
            let mut scaled: Vec<f64> = raw.iter().map(|v| v * (level / peak)).collect();
            // the extreme component carries the level exactly
            scaled[imax] = level.copysign(raw[imax]);
            scaled
        }
        NoiseKind::Gaussian => {
            let normal = Normal::new(0.0, level).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            clean.iter().map(|_| normal.sample(rng)).collect()
        }
    };
    let eps_sup = noise.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let noisy = clean.iter().zip(&noise).map(|(c, e)| c + e).collect();
    Ok((noisy, eps_sup))
}
