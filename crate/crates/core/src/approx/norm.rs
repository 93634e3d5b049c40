use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{check_alpha, PenalizationWeights};
use crate::cubature::CubatureRule;
use crate::error::{Error, Result};
use crate::harmonics::SpherePoint;

type CacheKey = (bool, u64, Vec<u64>);

/// Grid estimate of the sup-norm operator norm of the regularized fit, and
/// the analytic bound `sum_k (2k+1)/(1 + alpha beta_k²)` above it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorNormBound {
    pub estimate: f64,
    pub crude_upper: f64,
}

/// Evaluates `max_x sum_i w_i |sum_k c_k P_k(x . x_i)|`,
/// `c_k = (2k+1) / (4 pi (1 + alpha beta_k²))`, over a probe set.
///
/// Probes are folded through the symmetry group of product rules, which
/// leaves the maximized function unchanged, and results are memoized per
/// `(alpha, beta)`.
#[derive(Debug)]
pub struct OperatorNormEstimator {
    degree: usize,
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
    probes: Vec<SpherePoint>,
    probe_count: usize,
    cache: Mutex<HashMap<CacheKey, f64>>,
}

impl OperatorNormEstimator {
    pub fn new(rule: &CubatureRule, degree: usize, probes: &[SpherePoint]) -> Result<Self> {
        if probes.is_empty() {
            return Err(Error::InvalidParameter("probe set is empty".into()));
        }
        let reduced = match rule.symmetry() {
            Some(sym) => fold_probes(probes, sym.azimuths),
            None => probes.to_vec(),
        };
        Ok(Self {
            degree,
            nodes: rule.points().to_vec(),
            weights: rule.weights().to_vec(),
            probes: reduced,
            probe_count: probes.len(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    /// Same as [`OperatorNormEstimator::new`] but evaluating every probe.
    pub fn without_folding(rule: &CubatureRule, degree: usize, probes: &[SpherePoint]) -> Result<Self> {
        if probes.is_empty() {
            return Err(Error::InvalidParameter("probe set is empty".into()));
        }
        Ok(Self {
            degree,
            nodes: rule.points().to_vec(),
            weights: rule.weights().to_vec(),
            probes: probes.to_vec(),
            probe_count: probes.len(),
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Number of probes as supplied.
    pub fn probe_count(&self) -> usize {
        self.probe_count
    }

    /// Number of probes actually evaluated after folding.
    pub fn evaluated_probes(&self) -> usize {
        self.probes.len()
    }

    pub fn bound(&self, alpha: f64, beta: &PenalizationWeights) -> Result<OperatorNormBound> {
        Ok(OperatorNormBound {
            estimate: self.estimate(alpha, beta)?,
            crude_upper: operator_norm_crude(alpha, beta),
        })
    }

    pub fn estimate(&self, alpha: f64, beta: &PenalizationWeights) -> Result<f64> {
        self.cached(alpha, beta, false)
    }

    /// Grid maximum of the termwise bound
    /// `sum_i w_i sum_k c_k |P_k(x . x_i)|`, which lies between
    /// [`OperatorNormEstimator::estimate`] and [`operator_norm_crude`].
    pub fn estimate_termwise(&self, alpha: f64, beta: &PenalizationWeights) -> Result<f64> {
        self.cached(alpha, beta, true)
    }

    fn cached(&self, alpha: f64, beta: &PenalizationWeights, termwise: bool) -> Result<f64> {
        check_alpha(alpha)?;
        beta.check_degree(self.degree)?;
        let key = (
            termwise,
            alpha.to_bits(),
            beta.beta().iter().map(|b| b.to_bits()).collect::<Vec<_>>(),
        );
        if let Some(v) = self.cache.lock().expect("norm cache poisoned").get(&key) {
            return Ok(*v);
        }
        let value = if termwise {
            self.compute_termwise(alpha, beta)
        } else {
            self.compute(alpha, beta)
        };
        self.cache.lock().expect("norm cache poisoned").insert(key, value);
        Ok(value)
    }

    fn compute_termwise(&self, alpha: f64, beta: &PenalizationWeights) -> f64 {
        let coef: Vec<f64> = beta
            .filter(alpha)
            .iter()
            .enumerate()
            .map(|(k, f)| (2.0 * k as f64 + 1.0) / (4.0 * PI) * f)
            .collect();
        let mut best = 0.0f64;
        for x in &self.probes {
            let mut acc = 0.0;
            for (node, w) in self.nodes.iter().zip(&self.weights) {
                let t = x.dot(node);
                let mut prev = 1.0;
                let mut cur = t;
                let mut s = coef[0];
                for (k, c) in coef.iter().enumerate().skip(1) {
                    if k > 1 {
                        let kf = k as f64;
                        let next = ((2.0 * kf - 1.0) * t * cur - (kf - 1.0) * prev) / kf;
                        prev = cur;
                        cur = next;
                    }
                    s += c * cur.abs();
                }
                acc += w * s;
            }
            best = best.max(acc);
        }
        best
    }

    fn compute(&self, alpha: f64, beta: &PenalizationWeights) -> f64 {
        let mut coef: Vec<f64> = beta
            .filter(alpha)
            .iter()
            .enumerate()
            .map(|(k, f)| (2.0 * k as f64 + 1.0) / (4.0 * PI) * f)
            .collect();
        // trailing degrees that cannot move the result at double precision
        let total: f64 = coef.iter().map(|c| c.abs()).sum();
        let mut dropped = 0.0;
        while coef.len() > 1 {
            let last = coef[coef.len() - 1].abs();
            if dropped + last > 1e-17 * total {
                break;
            }
            dropped += last;
            coef.pop();
        }
        let top = coef.len() - 1;
        // Clenshaw coefficients for P_{k+1} = (2k+1)/(k+1) t P_k - k/(k+1) P_{k-1}
        let a: Vec<f64> = (0..=top).map(|k| (2.0 * k as f64 + 1.0) / (k as f64 + 1.0)).collect();
        let b: Vec<f64> = (0..=top + 1).map(|k| (k as f64 + 1.0) / (k as f64 + 2.0)).collect();

        let mut best = 0.0f64;
        for x in &self.probes {
            let mut acc = 0.0;
            for (node, w) in self.nodes.iter().zip(&self.weights) {
                let t = x.dot(node);
                let mut b1 = 0.0;
                let mut b2 = 0.0;
                for k in (0..=top).rev() {
                    let b0 = coef[k] + a[k] * t * b1 - b[k] * b2;
                    b2 = b1;
                    b1 = b0;
                }
                acc += w * b1.abs();
            }
            best = best.max(acc);
        }
        best
    }
}

/// `sum_k (2k+1) / (1 + alpha beta_k²)`.
pub fn operator_norm_crude(alpha: f64, beta: &PenalizationWeights) -> f64 {
    beta.filter(alpha)
        .iter()
        .enumerate()
        .map(|(k, f)| (2.0 * k as f64 + 1.0) * f)
        .sum()
}

/// One-shot version of [`OperatorNormEstimator::bound`].
pub fn operator_norm_bound(
    rule: &CubatureRule,
    degree: usize,
    alpha: f64,
    beta: &PenalizationWeights,
    probes: &[SpherePoint],
) -> Result<OperatorNormBound> {
    OperatorNormEstimator::new(rule, degree, probes)?.bound(alpha, beta)
}

/// Maps probes to representatives in `x3 >= 0`, `0 <= phi <= pi/azimuths`
/// and drops duplicates.
fn fold_probes(probes: &[SpherePoint], azimuths: usize) -> Vec<SpherePoint> {
    let period = 2.0 * PI / azimuths as f64;
    let mut seen = BTreeMap::new();
    for p in probes {
        let t = p.x3().abs();
        let mut psi = p.azimuth().rem_euclid(period);
        if psi > period / 2.0 {
            psi = period - psi;
        }
        let key = ((t * 1e12).round() as i64, (psi * 1e12).round() as i64);
        seen.entry(key).or_insert_with(|| SpherePoint::from_polar(t, psi));
    }
    seen.into_values().collect()
}
