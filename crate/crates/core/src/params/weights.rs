use serde::{Deserialize, Serialize};

use crate::approx::PenalizationWeights;
use crate::error::{Error, Result};

/// A priori weights for downward continuation with degree factors `a_k`:
/// `beta_k = a_k^{-1/2} (k + 1/2)^{3/4}`.
pub fn weights_sgg_apriori(degree: usize, a: &[f64]) -> Result<PenalizationWeights> {
    if a.len() != degree + 1 {
        return Err(Error::LengthMismatch {
            what: "degree factors",
            expected: degree + 1,
            got: a.len(),
        });
    }
    if let Some((k, ak)) = a.iter().enumerate().find(|(_, ak)| !(**ak > 0.0 && ak.is_finite())) {
        return Err(Error::InvalidWeights(format!("a_{k} = {ak} must be positive")));
    }
    let beta = a
        .iter()
        .enumerate()
        .map(|(k, ak)| ak.powf(-0.5) * (k as f64 + 0.5).powf(0.75))
        .collect();
    PenalizationWeights::new(beta)
}

/// Laplace-Beltrami weights `beta_k = k(k+1)`.
pub fn weights_laplace_beltrami(degree: usize) -> PenalizationWeights {
    PenalizationWeights::new((0..=degree).map(|k| (k * (k + 1)) as f64).collect())
        .expect("k(k+1) is non-negative and increasing")
}

/// Rates of the kernel family `beta_k² = exp(lambda1 (k+1)) (k+1)^lambda2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelParams {
    pub lambda1: f64,
    pub lambda2: f64,
}

impl KernelParams {
    pub fn new(lambda1: f64, lambda2: f64) -> Result<Self> {
        let p = Self { lambda1, lambda2 };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda1 >= 0.0 && self.lambda1.is_finite() && self.lambda2 >= 0.0 && self.lambda2.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "kernel rates must be finite and >= 0, got ({}, {})",
                self.lambda1, self.lambda2
            )));
        }
        Ok(())
    }
}

/// `beta_k = exp(lambda1 (k+1) / 2) (k+1)^{lambda2 / 2}`.
pub fn weights_from_kernel_params(degree: usize, p: KernelParams) -> Result<PenalizationWeights> {
    p.validate()?;
    let beta = (0..=degree)
        .map(|k| {
            let kp1 = k as f64 + 1.0;
            (0.5 * p.lambda1 * kp1).exp() * kp1.powf(0.5 * p.lambda2)
        })
        .collect();
    PenalizationWeights::new(beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn sgg_weights() {
        let a: Vec<f64> = (0..=3).map(|k| 1.2f64.powi(-k)).collect();
        let b = weights_sgg_apriori(3, &a).unwrap();
        assert_abs_diff_eq!(b.beta()[0], 0.5f64.powf(0.75), epsilon = 1e-15);
        assert_abs_diff_eq!(b.beta()[0], 0.5946, epsilon = 1e-4);
        assert_abs_diff_eq!(b.beta()[2], 1.2 * 2.5f64.powf(0.75), epsilon = 1e-14);
        assert_abs_diff_eq!(b.beta()[2], 2.3858, epsilon = 1e-4);
        let flat = weights_sgg_apriori(3, &[1.0; 4]).unwrap();
        for (k, v) in flat.beta().iter().enumerate() {
            assert_abs_diff_eq!(*v, (k as f64 + 0.5).powf(0.75), epsilon = 1e-15);
        }
    }

    #[test]
    fn sgg_weight_errors() {
        assert!(weights_sgg_apriori(2, &[1.0, 0.0, 0.5]).is_err());
        assert!(weights_sgg_apriori(2, &[1.0, 0.5]).is_err());
        // rapidly growing a_k breaks monotonicity
        assert!(matches!(
            weights_sgg_apriori(2, &[1.0, 10.0, 100.0]),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn laplace_beltrami() {
        let b = weights_laplace_beltrami(30);
        assert_eq!(b.beta()[0], 0.0);
        assert_eq!(b.beta()[1], 2.0);
        assert_eq!(b.beta()[30], 930.0);
        assert_eq!(b.beta()[30].powi(2), 864_900.0);
    }

    #[test]
    fn kernel_weights() {
        let ones = weights_from_kernel_params(4, KernelParams::new(0.0, 0.0).unwrap()).unwrap();
        assert!(ones.beta().iter().all(|b| *b == 1.0));
        let poly = weights_from_kernel_params(4, KernelParams::new(0.0, 2.0).unwrap()).unwrap();
        assert_abs_diff_eq!(poly.beta()[3], 4.0, epsilon = 1e-14);
        let expo = weights_from_kernel_params(4, KernelParams::new(4f64.ln(), 0.0).unwrap()).unwrap();
        assert_abs_diff_eq!(expo.beta()[1], 4.0, epsilon = 1e-14);
        assert!(KernelParams::new(-0.1, 1.0).is_err());
        assert!(weights_from_kernel_params(3, KernelParams { lambda1: 1.0, lambda2: -1.0 }).is_err());
    }
}
