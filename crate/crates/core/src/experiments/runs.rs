//! Drivers of the three reference studies.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::report::{curves_from_reports, median_sorted, ExperimentOutput, ExperimentReport, PlotData};
use super::{
    add_noise_with_rng, franke_cap_eval, relative_error_l2, relative_error_weighted, sgg_generate_with_rng, sgg_recover,
    stream_rng, sup_distance, NoiseKind, RNG_NAME,
};
use crate::approx::{analyze, damp, evaluate_grid, PenalizationWeights, SampleSet};
use crate::cubature::{gauss_legendre_rule, CubatureRule};
use crate::defaults;
use crate::error::{Error, Result};
use crate::params::{
    kernel_select, weights_from_kernel_params, weights_laplace_beltrami, weights_sgg_apriori, Balancer,
    BalancingConfig, NormBoundKind, RandomSearchConfig,
};

/// Balancing settings without the noise level, which each data set supplies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BalancingSettings {
    pub alpha0: f64,
    pub q: f64,
    pub grid_len: usize,
    pub omega: f64,
    #[serde(default)]
    pub probe_resolution: Option<usize>,
    #[serde(default)]
    pub norm_bound: NormBoundKind,
}

impl Default for BalancingSettings {
    fn default() -> Self {
        let b = defaults::balancing(0.0);
        Self {
            alpha0: b.alpha0,
            q: b.q,
            grid_len: b.grid_len,
            omega: b.omega,
            probe_resolution: b.probe_resolution,
            norm_bound: b.norm_bound,
        }
    }
}

impl BalancingSettings {
    pub fn config(&self, delta: f64) -> BalancingConfig {
        BalancingConfig {
            alpha0: self.alpha0,
            q: self.q,
            grid_len: self.grid_len,
            omega: self.omega,
            delta,
            probe_resolution: self.probe_resolution,
            norm_bound: self.norm_bound,
        }
    }
}

/// SGG study: four methods on simulated gradiometry data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SggExperimentConfig {
    pub seed: u64,
    pub simulations: usize,
    pub degree: usize,
    pub decay_base: f64,
    /// Sup norm of the uniform noise.
    pub noise_level: f64,
    pub balancing: BalancingSettings,
    pub rng: String,
}

impl SggExperimentConfig {
    pub fn new(simulations: usize, seed: u64) -> Self {
        Self {
            seed,
            simulations,
            degree: defaults::DEGREE,
            decay_base: defaults::SGG_DECAY_BASE,
            noise_level: defaults::UNIFORM_NOISE_LEVEL,
            balancing: BalancingSettings::default(),
            rng: RNG_NAME.into(),
        }
    }
}

/// Franke+cap study: one balancing-principle reconstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrankeExperimentConfig {
    pub seed: u64,
    pub degree: usize,
    /// Standard deviation of the Gaussian noise.
    pub sigma: f64,
    pub balancing: BalancingSettings,
    /// Use this alpha for the reconstruction instead of the balancing choice.
    #[serde(default)]
    pub alpha_override: Option<f64>,
    pub rng: String,
}

impl FrankeExperimentConfig {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            degree: defaults::DEGREE,
            sigma: defaults::GAUSSIAN_SIGMA,
            balancing: BalancingSettings::default(),
            alpha_override: None,
            rng: RNG_NAME.into(),
        }
    }
}

/// Kernel study: random-search kernel choice, then Laplace-Beltrami versus
/// the chosen kernel over repeated noise draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelExperimentConfig {
    pub seed: u64,
    pub simulations: usize,
    pub degree: usize,
    pub sigma: f64,
    pub balancing: BalancingSettings,
    pub search: RandomSearchConfig,
    pub rng: String,
}

impl KernelExperimentConfig {
    pub fn new(simulations: usize, seed: u64) -> Self {
        Self {
            seed,
            simulations,
            degree: defaults::DEGREE,
            sigma: defaults::GAUSSIAN_SIGMA,
            balancing: BalancingSettings::default(),
            search: defaults::random_search(seed),
            rng: RNG_NAME.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ExperimentConfig {
    Sgg(SggExperimentConfig),
    Franke(FrankeExperimentConfig),
    Kernel(KernelExperimentConfig),
}

impl ExperimentConfig {
    /// Study number, 1 to 3.
    pub fn number(&self) -> u8 {
        match self {
            Self::Sgg(_) => 1,
            Self::Franke(_) => 2,
            Self::Kernel(_) => 3,
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            Self::Sgg(c) => c.seed,
            Self::Franke(c) => c.seed,
            Self::Kernel(c) => c.seed,
        }
    }

    fn rng(&self) -> &str {
        match self {
            Self::Sgg(c) => &c.rng,
            Self::Franke(c) => &c.rng,
            Self::Kernel(c) => &c.rng,
        }
    }
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    if config.rng() != RNG_NAME {
        return Err(Error::InvalidParameter(format!(
            "unsupported generator {:?}, only {RNG_NAME} is available",
            config.rng()
        )));
    }
    match config {
        ExperimentConfig::Sgg(c) => run_sgg(c),
        ExperimentConfig::Franke(c) => run_franke(c),
        ExperimentConfig::Kernel(c) => run_kernel(c),
    }
}

/// SGG study with default settings.
pub fn run_experiment_1(simulations: usize, seed: u64) -> Result<ExperimentOutput> {
    run_experiment(&ExperimentConfig::Sgg(SggExperimentConfig::new(simulations, seed)))
}

/// Franke+cap study with default settings.
pub fn run_experiment_2(seed: u64) -> Result<ExperimentOutput> {
    run_experiment(&ExperimentConfig::Franke(FrankeExperimentConfig::new(seed)))
}

/// Kernel study with default settings.
pub fn run_experiment_3(simulations: usize, seed: u64) -> Result<ExperimentOutput> {
    run_experiment(&ExperimentConfig::Kernel(KernelExperimentConfig::new(simulations, seed)))
}

pub const PLAIN_LS: &str = "plain_ls";
pub const SGG_BP: &str = "sgg_bp";
pub const ONES_BEST: &str = "ones_best";
pub const SGG_BEST: &str = "sgg_best";
pub const LB_BP: &str = "laplace_beltrami_bp";
pub const KERNEL_BP: &str = "kernel_bp";

fn require_simulations(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one simulation".into()));
    }
    Ok(())
}

fn echo(config: ExperimentConfig) -> Result<(ExperimentConfig, serde_json::Value)> {
    let v = serde_json::to_value(&config)?;
    Ok((config, v))
}

fn base_report(prefix: &str, sim: usize, seed: u64, method: &str, config: &serde_json::Value) -> ExperimentReport {
    ExperimentReport {
        run_id: format!("{prefix}-{method}-{sim}"),
        seed,
        method: method.into(),
        alpha_star: 0.0,
        lambda1: None,
        lambda2: None,
        rel_error: 0.0,
        sup_error: None,
        config: config.clone(),
        diagnostics: BTreeMap::new(),
    }
}

/// Index of the first minimum.
fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}

fn run_sgg(cfg: &SggExperimentConfig) -> Result<ExperimentOutput> {
    require_simulations(cfg.simulations)?;
    let (config, echo_value) = echo(ExperimentConfig::Sgg(cfg.clone()))?;
    let m = cfg.degree;
    let rule = gauss_legendre_rule(m)?;
    let bp0 = cfg.balancing.config(cfg.noise_level);
    bp0.validate()?;
    let balancer = Balancer::new(&rule, m, &bp0)?;
    let grid = bp0.grid();
    let ones = PenalizationWeights::ones(m);
    // a_k does not depend on the draw, so neither do the weights
    let a = super::geometric_decay(m, cfg.decay_base)?;
    let beta_sgg = weights_sgg_apriori(m, &a)?;

    let mut reports = Vec::with_capacity(4 * cfg.simulations);
    for sim in 0..cfg.simulations {
        let mut rng = stream_rng(cfg.seed, sim as u64);
        let model = sgg_generate_with_rng(m, cfg.decay_base, &mut rng)?;
        let clean = evaluate_grid(&model.data_coefficients(), rule.points());
        let (noisy, eps_sup) = add_noise_with_rng(&clean, NoiseKind::UniformSupnorm, cfg.noise_level, &mut rng)?;
        let samples = SampleSet::new(&rule, noisy)?;
        let analysis = analyze(&samples, m)?;
        let error = |alpha: f64, beta: &PenalizationWeights| -> Result<f64> {
            relative_error_l2(&sgg_recover(&damp(&analysis, alpha, beta)?, &model)?, &model.g_true)
        };

        let mut plain = base_report("sgg", sim, cfg.seed, PLAIN_LS, &echo_value);
        plain.rel_error = error(0.0, &ones)?;
        reports.push(plain);

        let outcome = balancer.select(&analysis, &beta_sgg, &bp0.with_delta(eps_sup))?;
        let mut bp = base_report("sgg", sim, cfg.seed, SGG_BP, &echo_value);
        bp.alpha_star = outcome.alpha_star;
        bp.rel_error = error(outcome.alpha_star, &beta_sgg)?;
        bp.diagnostics.insert("eps_sup".into(), eps_sup);
        bp.diagnostics.insert("triggered".into(), f64::from(u8::from(outcome.triggered)));
        reports.push(bp);

        for (method, beta) in [(ONES_BEST, &ones), (SGG_BEST, &beta_sgg)] {
            let errs = grid.iter().map(|al| error(*al, beta)).collect::<Result<Vec<_>>>()?;
            let i = argmin(&errs);
            let mut r = base_report("sgg", sim, cfg.seed, method, &echo_value);
            r.alpha_star = grid[i];
            r.rel_error = errs[i];
            reports.push(r);
        }
    }
    for r in &reports {
        r.check_finite()?;
    }

    let methods = [PLAIN_LS, SGG_BP, ONES_BEST, SGG_BEST];
    let curves = curves_from_reports(&reports, &methods);
    let mut summary = BTreeMap::new();
    for m in methods {
        let v: Vec<f64> = reports.iter().filter(|r| r.method == m).map(|r| r.rel_error).collect();
        summary.insert(format!("median_{m}"), median_sorted(&v).unwrap_or(f64::NAN));
    }
    summary.insert(
        "ratio_plain_ls_to_sgg_best".into(),
        summary["median_plain_ls"] / summary["median_sgg_best"],
    );
    summary.insert(
        "ratio_sgg_bp_to_sgg_best".into(),
        summary["median_sgg_bp"] / summary["median_sgg_best"],
    );
    summary.insert("simulations".into(), cfg.simulations as f64);
    Ok(ExperimentOutput {
        config,
        reports,
        curves,
        summary,
        trace: None,
        kernel_search: None,
        plot: None,
    })
}

/// Rule, probe rule, and the noise-free Franke+cap values on both.
struct FrankeSetup {
    rule: CubatureRule,
    probe_rule: CubatureRule,
    clean: Vec<f64>,
    truth: Vec<f64>,
}

impl FrankeSetup {
    fn new(degree: usize, bp: &BalancingConfig) -> Result<Self> {
        let rule = gauss_legendre_rule(degree)?;
        let probe_rule = gauss_legendre_rule(bp.probe_resolution_for(degree))?;
        let clean = rule.points().iter().map(franke_cap_eval).collect();
        let truth = probe_rule.points().iter().map(franke_cap_eval).collect();
        Ok(Self {
            rule,
            probe_rule,
            clean,
            truth,
        })
    }
}

fn run_franke(cfg: &FrankeExperimentConfig) -> Result<ExperimentOutput> {
    let (config, echo_value) = echo(ExperimentConfig::Franke(cfg.clone()))?;
    let m = cfg.degree;
    let bp0 = cfg.balancing.config(0.0);
    bp0.validate()?;
    let setup = FrankeSetup::new(m, &bp0)?;
    let balancer = Balancer::new(&setup.rule, m, &bp0)?;
    let beta = weights_laplace_beltrami(m);

    let mut rng = stream_rng(cfg.seed, 0);
    let (noisy, eps_sup) = add_noise_with_rng(&setup.clean, NoiseKind::Gaussian, cfg.sigma, &mut rng)?;
    let samples = SampleSet::new(&setup.rule, noisy.clone())?;
    let analysis = analyze(&samples, m)?;
    let synth = balancer.synthesize(&analysis)?;
    let outcome = balancer.select_with(&synth, &beta, &bp0.with_delta(eps_sup))?;
    let alpha = match cfg.alpha_override {
        Some(a) if !(a >= 0.0 && a.is_finite()) => {
            return Err(Error::InvalidParameter(format!("alpha override must be >= 0, got {a}")))
        }
        Some(a) => a,
        None => outcome.alpha_star,
    };

    let sup_at = |a: f64| sup_distance(&synth.values(&beta.filter(a)), &setup.truth);
    let reconstruction = synth.values(&beta.filter(alpha));
    let sup_error = sup_distance(&reconstruction, &setup.truth);
    let rel_error = relative_error_weighted(&reconstruction, &setup.truth, setup.probe_rule.weights())?;
    let grid = bp0.grid();
    let grid_sup: Vec<f64> = grid.iter().map(|a| sup_at(*a)).collect();
    let best = argmin(&grid_sup);

    let mut r = base_report("franke", 0, cfg.seed, LB_BP, &echo_value);
    r.alpha_star = alpha;
    r.rel_error = rel_error;
    r.sup_error = Some(sup_error);
    let d = &mut r.diagnostics;
    d.insert("bp_alpha".into(), outcome.alpha_star);
    d.insert("triggered".into(), f64::from(u8::from(outcome.triggered)));
    d.insert("noisy_sup_error".into(), eps_sup);
    d.insert("best_alpha".into(), grid[best]);
    d.insert("best_sup_error".into(), grid_sup[best]);
    d.insert("hyperinterpolation_sup_error".into(), sup_at(0.0));
    r.check_finite()?;

    let mut summary = BTreeMap::new();
    summary.insert("alpha_star".into(), alpha);
    summary.insert("sup_error".into(), sup_error);
    summary.insert("noisy_sup_error".into(), eps_sup);
    summary.insert("rel_error".into(), rel_error);
    summary.insert("best_alpha".into(), grid[best]);

    let plot = PlotData {
        probes: setup.probe_rule.points().to_vec(),
        truth: setup.truth.clone(),
        reconstruction,
        nodes: setup.rule.points().to_vec(),
        clean: setup.clean.clone(),
        noisy,
    };
    Ok(ExperimentOutput {
        config,
        reports: vec![r],
        curves: Vec::new(),
        summary,
        trace: Some(outcome),
        kernel_search: None,
        plot: Some(plot),
    })
}

fn run_kernel(cfg: &KernelExperimentConfig) -> Result<ExperimentOutput> {
    require_simulations(cfg.simulations)?;
    cfg.search.validate()?;
    let (config, echo_value) = echo(ExperimentConfig::Kernel(cfg.clone()))?;
    let m = cfg.degree;
    let bp0 = cfg.balancing.config(0.0);
    bp0.validate()?;
    let setup = FrankeSetup::new(m, &bp0)?;

    // stream 0 drives the search; simulation s uses stream s + 1
    let mut rng = stream_rng(cfg.seed, 0);
    let (noisy, eps_sup) = add_noise_with_rng(&setup.clean, NoiseKind::Gaussian, cfg.sigma, &mut rng)?;
    let search_data = SampleSet::new(&setup.rule, noisy)?;
    let search = kernel_select(&search_data, m, &cfg.search, &bp0.with_delta(eps_sup))?;

    let balancer = Balancer::new(&setup.rule, m, &bp0)?;
    let beta_lb = weights_laplace_beltrami(m);
    let beta_kernel = weights_from_kernel_params(m, search.best)?;
    let mut reports = Vec::with_capacity(2 * cfg.simulations);
    for sim in 0..cfg.simulations {
        let mut rng = stream_rng(cfg.seed, sim as u64 + 1);
        let (noisy, eps_sup) = add_noise_with_rng(&setup.clean, NoiseKind::Gaussian, cfg.sigma, &mut rng)?;
        let samples = SampleSet::new(&setup.rule, noisy)?;
        let synth = balancer.synthesize(&analyze(&samples, m)?)?;
        let bp = bp0.with_delta(eps_sup);
        for (method, beta) in [(LB_BP, &beta_lb), (KERNEL_BP, &beta_kernel)] {
            let outcome = balancer.select_with(&synth, beta, &bp)?;
            let values = synth.values(&beta.filter(outcome.alpha_star));
            let mut r = base_report("kernel", sim, cfg.seed, method, &echo_value);
            r.alpha_star = outcome.alpha_star;
            r.rel_error = relative_error_weighted(&values, &setup.truth, setup.probe_rule.weights())?;
            r.sup_error = Some(sup_distance(&values, &setup.truth));
            if method == KERNEL_BP {
                r.lambda1 = Some(search.best.lambda1);
                r.lambda2 = Some(search.best.lambda2);
            }
            r.check_finite()?;
            reports.push(r);
        }
    }

    let methods = [LB_BP, KERNEL_BP];
    let curves = curves_from_reports(&reports, &methods);
    let mut summary = BTreeMap::new();
    for m in methods {
        let v: Vec<f64> = reports.iter().filter(|r| r.method == m).map(|r| r.rel_error).collect();
        summary.insert(format!("median_{m}"), median_sorted(&v).unwrap_or(f64::NAN));
    }
    summary.insert("lambda1".into(), search.best.lambda1);
    summary.insert("lambda2".into(), search.best.lambda2);
    summary.insert("runs".into(), search.runs as f64);
    summary.insert("steps_per_run".into(), search.steps_per_run as f64);
    summary.insert("simulations".into(), cfg.simulations as f64);
    Ok(ExperimentOutput {
        config,
        reports,
        curves,
        summary,
        trace: None,
        kernel_search: Some(search),
        plot: None,
    })
}
