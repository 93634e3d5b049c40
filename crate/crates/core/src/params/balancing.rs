//! Balancing principle over a geometric grid of regularization parameters.
//!
//! Starting from the smallest grid value, successive fits are compared in the
//! (probe-grid) sup norm. The first `alpha_z` whose distance to the fit at
//! `alpha_{z+1}` exceeds `omega * delta * ||T_{alpha_{z+1}}||` is returned.
//! If that never happens the largest grid value is returned and the outcome
//! is flagged as not triggered.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::approx::{
    analyze, operator_norm_crude, HarmonicCoefficients, OperatorNormEstimator, PenalizationWeights, ProbeSynthesis,
    SampleSet,
};
use crate::cubature::{probe_grid, CubatureRule};
use crate::error::{Error, Result};
use crate::harmonics::SpherePoint;

/// Which bound on `||T_alpha||` enters the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormBoundKind {
    /// Maximum of the kernel Lebesgue function over the probe grid.
    #[default]
    GridMax,
    /// Grid maximum of the same sum with `|P_k|` taken termwise.
    GridTermwise,
    /// `sum_k (2k+1) / (1 + alpha beta_k²)`.
    Crude,
}

impl std::str::FromStr for NormBoundKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.replace('_', "-").as_str() {
            "grid-max" => Ok(Self::GridMax),
            "grid-termwise" => Ok(Self::GridTermwise),
            "crude" => Ok(Self::Crude),
            _ => Err(format!("expected grid-max, grid-termwise or crude, got {s:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancingConfig {
    /// Grid anchor; the grid is `alpha_i = q^i alpha0`, `i = 1..=grid_len`.
    pub alpha0: f64,
    pub q: f64,
    pub grid_len: usize,
    pub omega: f64,
    /// Sup norm of the data noise.
    pub delta: f64,
    /// Degree of the probe grid; `None` means `2M`.
    #[serde(default)]
    pub probe_resolution: Option<usize>,
    #[serde(default)]
    pub norm_bound: NormBoundKind,
}

impl BalancingConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if !(self.alpha0 > 0.0 && self.alpha0.is_finite()) {
            return bad(format!("grid anchor must be positive, got {}", self.alpha0));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return bad(format!("grid ratio must lie in (0, 1), got {}", self.q));
        }
        if self.grid_len < 2 {
            return bad(format!("grid needs at least 2 values, got {}", self.grid_len));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return bad(format!("omega must be positive, got {}", self.omega));
        }
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return bad(format!("noise level must be finite and >= 0, got {}", self.delta));
        }
        if self.probe_resolution == Some(0) {
            return bad("probe resolution must be at least 1".into());
        }
        Ok(())
    }

    /// `[alpha_1, ..., alpha_L]`, strictly decreasing.
    pub fn grid(&self) -> Vec<f64> {
        (1..=self.grid_len).map(|i| self.alpha0 * self.q.powi(i as i32)).collect()
    }

    pub fn probe_resolution_for(&self, degree: usize) -> usize {
        self.probe_resolution.unwrap_or((2 * degree).max(1))
    }

    pub fn with_delta(&self, delta: f64) -> Self {
        Self {
            delta,
            ..self.clone()
        }
    }
}

/// One comparison made by the balancing principle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BalancingStep {
    /// `alpha_z`, the candidate being tested.
    pub alpha: f64,
    /// `||T_{alpha_z} y - T_{alpha_{z+1}} y||` on the probe grid.
    pub difference: f64,
    /// `omega * delta * ||T_{alpha_{z+1}}||`.
    pub threshold: f64,
    pub triggered: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancingOutcome {
    pub alpha_star: f64,
    /// False when the inequality never held and `alpha_1` was returned.
    pub triggered: bool,
    pub steps: Vec<BalancingStep>,
    pub probe_resolution: usize,
    pub norm_bound: NormBoundKind,
}

/// Probe grid and norm estimator for one rule and degree, reusable across
/// data sets and penalization weights.
#[derive(Debug)]
pub struct Balancer {
    degree: usize,
    probe_resolution: usize,
    probes: Vec<SpherePoint>,
    norms: OperatorNormEstimator,
}

impl Balancer {
    pub fn new(rule: &CubatureRule, degree: usize, cfg: &BalancingConfig) -> Result<Self> {
        cfg.validate()?;
        rule.require_exactness(2 * degree)?;
        let probe_resolution = cfg.probe_resolution_for(degree);
        let probes = probe_grid(probe_resolution)?;
        let norms = OperatorNormEstimator::new(rule, degree, &probes)?;
        Ok(Self {
            degree,
            probe_resolution,
            probes,
            norms,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn probes(&self) -> &[SpherePoint] {
        &self.probes
    }

    pub fn norms(&self) -> &OperatorNormEstimator {
        &self.norms
    }

    /// Partial sums of `analysis` on this balancer's probe grid.
    pub fn synthesize(&self, analysis: &HarmonicCoefficients) -> Result<ProbeSynthesis> {
        if analysis.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                got: analysis.degree(),
            });
        }
        Ok(ProbeSynthesis::new(analysis, &self.probes))
    }

    pub fn select(
        &self,
        analysis: &HarmonicCoefficients,
        beta: &PenalizationWeights,
        cfg: &BalancingConfig,
    ) -> Result<BalancingOutcome> {
        let synth = self.synthesize(analysis)?;
        self.select_with(&synth, beta, cfg)
    }

    /// Runs the principle on data already synthesized on the probe grid.
    pub fn select_with(
        &self,
        synth: &ProbeSynthesis,
        beta: &PenalizationWeights,
        cfg: &BalancingConfig,
    ) -> Result<BalancingOutcome> {
        cfg.validate()?;
        beta.check_degree(self.degree)?;
        if synth.degree() != self.degree || synth.len() != self.probes.len() {
            return Err(Error::InvalidParameter(
                "probe synthesis does not match this balancer".into(),
            ));
        }
        if cfg.probe_resolution_for(self.degree) != self.probe_resolution {
            return Err(Error::InvalidParameter(format!(
                "balancer was built for probe resolution {}, config asks for {}",
                self.probe_resolution,
                cfg.probe_resolution_for(self.degree)
            )));
        }

        let grid = cfg.grid();
        let len = grid.len();
        let mut steps = Vec::with_capacity(len - 1);
        let mut upper = beta.filter(grid[len - 1]);
        for z in (1..len).rev() {
            // grid[z - 1] is alpha_z, grid[z] is alpha_{z+1}
            let alpha_z = grid[z - 1];
            let alpha_next = grid[z];
            let lower = beta.filter(alpha_z);
            let diff: Vec<f64> = lower.iter().zip(&upper).map(|(a, b)| a - b).collect();
            let difference = synth.sup_norm(&diff);
            let norm = if cfg.delta == 0.0 {
                0.0
            } else {
                match cfg.norm_bound {
                    NormBoundKind::GridMax => self.norms.estimate(alpha_next, beta)?,
                    NormBoundKind::GridTermwise => self.norms.estimate_termwise(alpha_next, beta)?,
                    NormBoundKind::Crude => operator_norm_crude(alpha_next, beta),
                }
            };
            let threshold = cfg.omega * cfg.delta * norm;
            let triggered = difference > threshold;
            steps.push(BalancingStep {
                alpha: alpha_z,
                difference,
                threshold,
                triggered,
            });
            if triggered {
                return Ok(BalancingOutcome {
                    alpha_star: alpha_z,
                    triggered: true,
                    steps,
                    probe_resolution: self.probe_resolution,
                    norm_bound: cfg.norm_bound,
                });
            }
            upper = lower;
        }
        Ok(BalancingOutcome {
            alpha_star: grid[0],
            triggered: false,
            steps,
            probe_resolution: self.probe_resolution,
            norm_bound: cfg.norm_bound,
        })
    }
}

/// Balancing principle for a single data set.
pub fn balancing_principle(
    samples: &SampleSet<'_>,
    degree: usize,
    beta: &PenalizationWeights,
    cfg: &BalancingConfig,
) -> Result<BalancingOutcome> {
    let balancer = Balancer::new(samples.rule(), degree, cfg)?;
    let analysis = analyze(samples, degree)?;
    balancer.select(&analysis, beta, cfg)
}

/// Writes the trace as CSV `alpha,difference,threshold,triggered`.
pub fn write_trace_csv<W: Write>(outcome: &BalancingOutcome, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "difference", "threshold", "triggered"])?;
    for s in &outcome.steps {
        w.write_record([
            crate::io::fmt_f64(s.alpha),
            crate::io::fmt_f64(s.difference),
            crate::io::fmt_f64(s.threshold),
            s.triggered.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
