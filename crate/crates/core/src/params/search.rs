//! A posteriori kernel choice by random search over `(lambda1, lambda2)`.
//!
//! A candidate is scored by the penalized functional at its own regularized
//! fit, with `alpha` picked by the balancing principle for that candidate's
//! weights. Each run draws `steps_per_run` uniform points in the box and
//! keeps its best; the reported choice is the coordinate-wise mean of the
//! per-run winners.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::balancing::{Balancer, BalancingConfig};
use super::weights::{weights_from_kernel_params, KernelParams};
use crate::approx::{analyze, damp, penalized_functional, HarmonicCoefficients, ProbeSynthesis, SampleSet};
use crate::error::{Error, Result};

/// Axis-aligned search rectangle; a side may have zero width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lambda1: [f64; 2],
    pub lambda2: [f64; 2],
}

impl SearchBox {
    pub fn square(lo: f64, hi: f64) -> Self {
        Self {
            lambda1: [lo, hi],
            lambda2: [lo, hi],
        }
    }

    pub fn point(lambda1: f64, lambda2: f64) -> Self {
        Self {
            lambda1: [lambda1, lambda1],
            lambda2: [lambda2, lambda2],
        }
    }

    pub fn contains(&self, p: &KernelParams) -> bool {
        (self.lambda1[0]..=self.lambda1[1]).contains(&p.lambda1) && (self.lambda2[0]..=self.lambda2[1]).contains(&p.lambda2)
    }

    fn validate(&self) -> Result<()> {
        for (name, [lo, hi]) in [("lambda1", self.lambda1), ("lambda2", self.lambda2)] {
            if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "search range for {name} must satisfy 0 <= lo <= hi < inf, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }

    fn sample(&self, rng: &mut impl Rng) -> KernelParams {
        let [lo1, hi1] = self.lambda1;
        let [lo2, hi2] = self.lambda2;
        let lambda1 = lo1 + (hi1 - lo1) * rng.gen::<f64>();
        let lambda2 = lo2 + (hi2 - lo2) * rng.gen::<f64>();
        KernelParams { lambda1, lambda2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomSearchConfig {
    pub runs: usize,
    pub steps_per_run: usize,
    #[serde(rename = "box")]
    pub search_box: SearchBox,
    pub seed: u64,
}

impl RandomSearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.steps_per_run == 0 {
            return Err(Error::InvalidParameter(format!(
                "random search needs runs >= 1 and steps >= 1, got {} x {}",
                self.runs, self.steps_per_run
            )));
        }
        self.search_box.validate()
    }
}

/// Outcome of [`kernel_select`]; serializes to the kernel search report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSearchResult {
    pub best: KernelParams,
    /// Objective at `best` (the mean of the run winners need not be one of them).
    pub best_objective: f64,
    pub alpha_at_best: f64,
    pub per_run: Vec<KernelParams>,
    /// Objective value of each run's winner.
    pub objective_values: Vec<f64>,
    pub runs: usize,
    pub steps_per_run: usize,
    pub seed: u64,
}

/// Objective evaluator for one data set.
#[derive(Debug)]
pub struct KernelSelector<'a, 'r> {
    samples: &'a SampleSet<'r>,
    analysis: HarmonicCoefficients,
    balancer: Balancer,
    synth: ProbeSynthesis,
    bp: BalancingConfig,
}

impl<'a, 'r> KernelSelector<'a, 'r> {
    pub fn new(samples: &'a SampleSet<'r>, degree: usize, bp: &BalancingConfig) -> Result<Self> {
        let analysis = analyze(samples, degree)?;
        let balancer = Balancer::new(samples.rule(), degree, bp)?;
        let synth = balancer.synthesize(&analysis)?;
        Ok(Self {
            samples,
            analysis,
            balancer,
            synth,
            bp: bp.clone(),
        })
    }

    /// `(objective, alpha)` for one candidate.
    pub fn objective(&self, p: KernelParams) -> Result<(f64, f64)> {
        let beta = weights_from_kernel_params(self.analysis.degree(), p)?;
        let alpha = self.balancer.select_with(&self.synth, &beta, &self.bp)?.alpha_star;
        let fit = damp(&self.analysis, alpha, &beta)?;
        Ok((penalized_functional(self.samples, &fit, alpha, &beta)?, alpha))
    }

    pub fn search(&self, cfg: &RandomSearchConfig) -> Result<KernelSearchResult> {
        cfg.validate()?;
        let mut per_run = Vec::with_capacity(cfg.runs);
        let mut objective_values = Vec::with_capacity(cfg.runs);
        for run in 0..cfg.runs {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(run as u64);
            let mut best: Option<(KernelParams, f64)> = None;
            for _ in 0..cfg.steps_per_run {
                let p = cfg.search_box.sample(&mut rng);
                let (value, _) = self.objective(p)?;
                if best.is_none_or(|(_, v)| value < v) {
                    best = Some((p, value));
                }
            }
            let (p, v) = best.expect("at least one step per run");
            per_run.push(p);
            objective_values.push(v);
        }
        let n = per_run.len() as f64;
        let mean = KernelParams {
            lambda1: per_run.iter().map(|p| p.lambda1).sum::<f64>() / n,
            lambda2: per_run.iter().map(|p| p.lambda2).sum::<f64>() / n,
        };
        // keep a collapsed box exact under averaging
        let best = KernelParams {
            lambda1: mean.lambda1.clamp(cfg.search_box.lambda1[0], cfg.search_box.lambda1[1]),
            lambda2: mean.lambda2.clamp(cfg.search_box.lambda2[0], cfg.search_box.lambda2[1]),
        };
        let (best_objective, alpha_at_best) = self.objective(best)?;
        Ok(KernelSearchResult {
            best,
            best_objective,
            alpha_at_best,
            per_run,
            objective_values,
            runs: cfg.runs,
            steps_per_run: cfg.steps_per_run,
            seed: cfg.seed,
        })
    }
}

/// Random-search kernel selection for one data set.
pub fn kernel_select(
    samples: &SampleSet<'_>,
    degree: usize,
    search: &RandomSearchConfig,
    bp: &BalancingConfig,
) -> Result<KernelSearchResult> {
    search.validate()?;
    KernelSelector::new(samples, degree, bp)?.search(search)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::gauss_legendre_rule;
    use crate::params::NormBoundKind;

    fn bp() -> BalancingConfig {
        BalancingConfig {
            alpha0: 8.0,
            q: 0.8,
            grid_len: 40,
            omega: 0.002,
            delta: 0.2,
            probe_resolution: None,
            norm_bound: NormBoundKind::GridMax,
        }
    }

    fn data(rule: &crate::cubature::CubatureRule) -> SampleSet<'_> {
        SampleSet::from_fn(rule, |x| {
            let c = x.x1() * 12.9898 + x.x2() * 78.233 + x.x3() * 37.719;
            (2.0 * x.x3()).exp() + 0.2 * ((c.sin() * 43758.5453).fract() - 0.5)
        })
        .unwrap()
    }

    #[test]
    fn collapsed_box_returns_the_point() {
        let rule = gauss_legendre_rule(6).unwrap();
        let s = data(&rule);
        for seed in [1, 99] {
            let cfg = RandomSearchConfig {
                runs: 3,
                steps_per_run: 2,
                search_box: SearchBox::point(0.7, 1.3),
                seed,
            };
            let r = kernel_select(&s, 6, &cfg, &bp()).unwrap();
            assert_eq!(r.best, KernelParams { lambda1: 0.7, lambda2: 1.3 });
        }
    }

    #[test]
    fn single_step_search() {
        let rule = gauss_legendre_rule(6).unwrap();
        let s = data(&rule);
        let cfg = RandomSearchConfig {
            runs: 1,
            steps_per_run: 1,
            search_box: SearchBox::square(0.0, 5.0),
            seed: 17,
        };
        let r = kernel_select(&s, 6, &cfg, &bp()).unwrap();
        assert_eq!(r.per_run.len(), 1);
        assert_eq!(r.best, r.per_run[0]);
        assert!(cfg.search_box.contains(&r.best));
    }

    #[test]
    fn deterministic_and_nonnegative() {
        let rule = gauss_legendre_rule(6).unwrap();
        let s = data(&rule);
        let cfg = RandomSearchConfig {
            runs: 3,
            steps_per_run: 3,
            search_box: SearchBox::square(0.0, 5.0),
            seed: 5,
        };
        let a = kernel_select(&s, 6, &cfg, &bp()).unwrap();
        let b = kernel_select(&s, 6, &cfg, &bp()).unwrap();
        assert_eq!(a, b);
        assert!(a.objective_values.iter().all(|v| *v >= 0.0));
        assert!(a.best_objective >= 0.0);
    }

    #[test]
    fn rejects_bad_config() {
        let rule = gauss_legendre_rule(3).unwrap();
        let s = data(&rule);
        let mut cfg = RandomSearchConfig {
            runs: 0,
            steps_per_run: 1,
            search_box: SearchBox::square(0.0, 5.0),
            seed: 0,
        };
        assert!(kernel_select(&s, 3, &cfg, &bp()).is_err());
        cfg.runs = 1;
        cfg.search_box = SearchBox::square(-1.0, 5.0);
        assert!(kernel_select(&s, 3, &cfg, &bp()).is_err());
        cfg.search_box = SearchBox::square(3.0, 2.0);
        assert!(kernel_select(&s, 3, &cfg, &bp()).is_err());
    }
}
