//! Synthetic satellite gravity gradiometry data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::approx::HarmonicCoefficients;
use crate::error::{Error, Result};
use crate::harmonics::basis_len;

/// Ground truth `g_{k,j}` and the degree factors linking it to the data:
/// `<Y_{k,j}, y> = a_k g_{k,j} / rho`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SggModel {
    pub degree: usize,
    pub a: Vec<f64>,
    pub rho: f64,
    pub g_true: HarmonicCoefficients,
}

impl SggModel {
    /// Coefficients of the data function `y`.
    pub fn data_coefficients(&self) -> HarmonicCoefficients {
        let factors: Vec<f64> = self.a.iter().map(|a| a / self.rho).collect();
        self.g_true.scale_degrees(&factors)
    }
}

/// Truncated degree factors `a_k = base^{-k}`.
pub fn geometric_decay(degree: usize, base: f64) -> Result<Vec<f64>> {
    if !(base > 1.0 && base.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay base must exceed 1, got {base}")));
    }
    Ok((0..=degree).map(|k| base.powi(-(k as i32))).collect())
}

/// Full factors `a_k = (R/rho)^k (k+1)(k+2) / rho²` for Earth radius `R`
/// and orbit radius `rho`.
pub fn downward_continuation_factors(degree: usize, earth_radius: f64, orbit_radius: f64) -> Result<Vec<f64>> {
    if !(earth_radius > 0.0 && orbit_radius > earth_radius) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < R < rho, got R = {earth_radius}, rho = {orbit_radius}"
        )));
    }
    let ratio = earth_radius / orbit_radius;
    Ok((0..=degree)
        .map(|k| {
            let kf = k as f64;
            ratio.powi(k as i32) * (kf + 1.0) * (kf + 2.0) / (orbit_radius * orbit_radius)
        })
        .collect())
}

/// Draws `g_{k,j} = (k + 1/2)^{-3/2} u_{k,j}`, `u ~ U[0, 1]`, with
/// `a_k = decay_base^{-k}` and `rho = 1`.
pub fn sgg_generate(degree: usize, decay_base: f64, seed: u64) -> Result<SggModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sgg_generate_with_rng(degree, decay_base, &mut rng)
}

pub fn sgg_generate_with_rng(degree: usize, decay_base: f64, rng: &mut impl Rng) -> Result<SggModel> {
    let a = geometric_decay(degree, decay_base)?;
    let mut g = Vec::with_capacity(basis_len(degree));
    for k in 0..=degree {
        let scale = (k as f64 + 0.5).powf(-1.5);
        for _ in 0..2 * k + 1 {
            g.push(scale * rng.gen::<f64>());
        }
    }
    Ok(SggModel {
        degree,
        a,
        rho: 1.0,
        g_true: HarmonicCoefficients::new(degree, g)?,
    })
}

/// `g_{k,j} = rho gamma_{k,j} / a_k`.
pub fn sgg_recover(gamma: &HarmonicCoefficients, model: &SggModel) -> Result<HarmonicCoefficients> {
    if gamma.degree() != model.degree {
        return Err(Error::DegreeMismatch {
            expected: model.degree,
            got: gamma.degree(),
        });
    }
    if let Some(k) = model.a.iter().position(|a| *a == 0.0) {
        return Err(Error::InvalidParameter(format!("a_{k} = 0 cannot be inverted")));
    }
    let factors: Vec<f64> = model.a.iter().map(|a| model.rho / a).collect();
    Ok(gamma.scale_degrees(&factors))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decay_values() {
        let a = geometric_decay(30, 1.2).unwrap();
        assert_eq!(a[0], 1.0);
        assert!((a[30] - 0.004_213).abs() < 1e-6);
        assert!(geometric_decay(3, 1.0).is_err());
    }

    #[test]
    fn leading_term_bounds() {
        for seed in 0..20 {
            let m = sgg_generate(4, 1.2, seed).unwrap();
            let t = m.a[0] * m.g_true.values()[0];
            assert!((0.0..=2f64.powf(1.5)).contains(&t));
        }
    }

    #[test]
    fn seeded_generation_is_bitwise_stable() {
        let a = sgg_generate(10, 1.2, 77).unwrap();
        let b = sgg_generate(10, 1.2, 77).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.g_true, sgg_generate(10, 1.2, 78).unwrap().g_true);
    }

    #[test]
    fn recover_inverts_data_map() {
        let m = sgg_generate(6, 1.2, 1).unwrap();
        let back = sgg_recover(&m.data_coefficients(), &m).unwrap();
        for (x, y) in back.values().iter().zip(m.g_true.values()) {
            assert!((x - y).abs() <= 1e-14 * y.abs().max(1.0));
        }
        let zero = HarmonicCoefficients::zeros(6);
        assert_eq!(sgg_recover(&zero, &m).unwrap(), zero);
        let ident = SggModel {
            a: vec![1.0; 7],
            ..m.clone()
        };
        assert_eq!(sgg_recover(&m.g_true, &ident).unwrap(), m.g_true);
        let broken = SggModel {
            a: vec![0.0; 7],
            ..m
        };
        assert!(sgg_recover(&zero, &broken).is_err());
    }

    #[test]
    fn continuation_factors() {
        let a = downward_continuation_factors(3, 1.0, 1.1).unwrap();
        assert!((a[0] - 2.0 / 1.21).abs() < 1e-15);
        assert!(downward_continuation_factors(3, 2.0, 1.0).is_err());
    }
}
