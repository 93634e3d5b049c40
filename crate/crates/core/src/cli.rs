//! The `spherefit` command line.
//!
//! Every option can also come from a JSON file passed with `--config`;
//! command-line flags win over the file, the file wins over the built-in
//! defaults of [`crate::defaults`].

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::approx::{analyze, damp, penalized_functional, PenalizationWeights, SampleSet};
use crate::cubature::{gauss_legendre_rule, CubatureRule};
use crate::defaults;
use crate::error::{Error, Result};
use crate::experiments::{
    geometric_decay, run_experiment, ExperimentConfig, FrankeExperimentConfig, KernelExperimentConfig,
    SggExperimentConfig,
};
use crate::io::{load_json, load_rule, load_samples, save_coefficients, save_json, save_rule};
use crate::params::{
    weights_from_kernel_params, weights_laplace_beltrami, weights_sgg_apriori, write_trace_csv, Balancer,
    BalancingConfig, KernelParams, NormBoundKind,
};

/// Penalization weight family selected on the command line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaChoice {
    Ones,
    /// `(k + 1/2)^{3/4} / sqrt(a_k)` with the default geometric decay.
    Sgg,
    LaplaceBeltrami,
    Kernel(KernelParams),
}

impl BetaChoice {
    pub fn weights(&self, degree: usize) -> Result<PenalizationWeights> {
        match self {
            Self::Ones => Ok(PenalizationWeights::ones(degree)),
            Self::Sgg => weights_sgg_apriori(degree, &geometric_decay(degree, defaults::SGG_DECAY_BASE)?),
            Self::LaplaceBeltrami => Ok(weights_laplace_beltrami(degree)),
            Self::Kernel(p) => weights_from_kernel_params(degree, *p),
        }
    }
}

impl FromStr for BetaChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "ones" => return Ok(Self::Ones),
            "sgg" => return Ok(Self::Sgg),
            "laplace-beltrami" => return Ok(Self::LaplaceBeltrami),
            _ => {}
        }
        let bad = || format!("expected ones, sgg, laplace-beltrami or kernel:L1,L2, got {s:?}");
        let rest = s.strip_prefix("kernel:").ok_or_else(bad)?;
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let l1: f64 = a.trim().parse().map_err(|_| bad())?;
        let l2: f64 = b.trim().parse().map_err(|_| bad())?;
        KernelParams::new(l1, l2).map(Self::Kernel).map_err(|e| e.to_string())
    }
}

impl fmt::Display for BetaChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Ones => f.write_str("ones"),
            Self::Sgg => f.write_str("sgg"),
            Self::LaplaceBeltrami => f.write_str("laplace-beltrami"),
            Self::Kernel(p) => write!(f, "kernel:{},{}", p.lambda1, p.lambda2),
        }
    }
}

impl Serialize for BetaChoice {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BetaChoice {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Contents of a `--config` file. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    pub command: Option<String>,
    pub degree: Option<usize>,
    pub rule: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    pub beta: Option<BetaChoice>,
    pub alpha: Option<f64>,
    pub bp: Option<bool>,
    pub omega: Option<f64>,
    pub grid_anchor: Option<f64>,
    pub grid_ratio: Option<f64>,
    pub grid_len: Option<usize>,
    pub noise_level: Option<f64>,
    pub probe_resolution: Option<usize>,
    pub norm_bound: Option<NormBoundKind>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub experiment: Option<u8>,
    pub simulations: Option<usize>,
    pub search_runs: Option<usize>,
    pub search_steps: Option<usize>,
}

#[derive(Debug, Parser)]
#[command(name = "spherefit", version, about = "Regularized least-squares approximation on the sphere")]
pub struct Cli {
    /// JSON file with default values for any option.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a Gauss-Legendre product rule as CSV `x1,x2,x3,w`.
    GenRule(GenRuleArgs),
    /// Fit coefficients to samples on a rule.
    Fit(FitArgs),
    /// Run one of the reference studies.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Args)]
pub struct GenRuleArgs {
    /// Reconstruction degree M.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Output CSV file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Balancing parameter omega.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Grid anchor alpha0 in alpha_i = alpha0 q^i.
    #[arg(long)]
    pub grid_anchor: Option<f64>,
    /// Grid ratio q.
    #[arg(long)]
    pub grid_ratio: Option<f64>,
    /// Number of grid values.
    #[arg(long)]
    pub grid_len: Option<usize>,
    /// Probe grid degree for sup norms (default 2M).
    #[arg(long)]
    pub probe_resolution: Option<usize>,
    /// Operator norm in the threshold: grid-max | grid-termwise | crude.
    #[arg(long)]
    pub norm_bound: Option<NormBoundKind>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Polynomial degree M.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Rule CSV `x1,x2,x3,w`; a Gauss-Legendre rule is generated if absent.
    #[arg(long)]
    pub rule: Option<PathBuf>,
    /// Sample CSV with a `value` column, one row per rule node.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// ones | sgg | laplace-beltrami | kernel:L1,L2
    #[arg(long)]
    pub beta: Option<BetaChoice>,
    /// Fixed regularization parameter.
    #[arg(long, conflicts_with = "bp")]
    pub alpha: Option<f64>,
    /// Choose alpha by the balancing principle (needs --noise-level).
    #[arg(long)]
    pub bp: bool,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Sup norm of the data noise.
    #[arg(long)]
    pub noise_level: Option<f64>,
    /// Accepted for uniformity; fitting is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Study number: 1 (SGG), 2 (Franke+cap), 3 (kernel search).
    #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
    pub which: Option<u8>,
    /// Re-run the study echoed in a `config.json` written earlier.
    #[arg(long, value_name = "FILE", conflicts_with = "which")]
    pub replay: Option<PathBuf>,
    /// Reconstruction degree M (studies use their reference value if absent).
    #[arg(long)]
    pub degree: Option<usize>,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Uniform noise sup norm (study 1) or Gaussian sigma (studies 2, 3).
    #[arg(long)]
    pub noise_level: Option<f64>,
    /// Master seed for all random streams.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of simulations (studies 1, 3).
    #[arg(long)]
    pub simulations: Option<usize>,
    /// Random-search runs (study 3).
    #[arg(long)]
    pub search_runs: Option<usize>,
    /// Random-search steps per run (study 3).
    #[arg(long)]
    pub search_steps: Option<usize>,
    /// Fixed alpha for the reconstruction (study 2).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

fn check_command(file: &CliConfig, name: &str) -> Result<()> {
    match &file.command {
        Some(c) if c != name => Err(invalid(format!(
            "config file is for command {c:?}, not {name:?}"
        ))),
        _ => Ok(()),
    }
}

fn balancing_from(grid: &GridArgs, file: &CliConfig, delta: f64) -> BalancingConfig {
    let d = defaults::balancing(delta);
    BalancingConfig {
        alpha0: grid.grid_anchor.or(file.grid_anchor).unwrap_or(d.alpha0),
        q: grid.grid_ratio.or(file.grid_ratio).unwrap_or(d.q),
        grid_len: grid.grid_len.or(file.grid_len).unwrap_or(d.grid_len),
        omega: grid.omega.or(file.omega).unwrap_or(d.omega),
        delta,
        probe_resolution: grid.probe_resolution.or(file.probe_resolution),
        norm_bound: grid.norm_bound.or(file.norm_bound).unwrap_or(d.norm_bound),
    }
}

fn require_out(out: Option<PathBuf>) -> Result<PathBuf> {
    out.ok_or_else(|| invalid("missing --out"))
}

pub fn gen_rule(args: &GenRuleArgs, file: &CliConfig) -> Result<String> {
    check_command(file, "gen-rule")?;
    let degree = args.degree.or(file.degree).unwrap_or(defaults::DEGREE);
    let out = require_out(args.out.clone().or_else(|| file.out.clone()))?;
    let rule = gauss_legendre_rule(degree)?;
    save_rule(&rule, &out)?;
    let sum: f64 = rule.weights().iter().sum();
    Ok(format!(
        "wrote {} nodes to {}; weight sum {:.15} (4 pi = {:.15})",
        rule.len(),
        out.display(),
        sum,
        4.0 * std::f64::consts::PI
    ))
}

/// JSON summary written by `fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub degree: usize,
    pub nodes: usize,
    pub beta: BetaChoice,
    pub alpha: f64,
    pub alpha_source: String,
    pub norm_bound_estimate: f64,
    pub penalized_functional: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_level: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bp_triggered: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
}

pub fn fit(args: &FitArgs, file: &CliConfig) -> Result<String> {
    check_command(file, "fit")?;
    let degree = args.degree.or(file.degree).unwrap_or(defaults::DEGREE);
    let out = require_out(args.out.clone().or_else(|| file.out.clone()))?;
    let samples_path = args
        .samples
        .clone()
        .or_else(|| file.samples.clone())
        .ok_or_else(|| invalid("missing --samples"))?;
    let beta_choice = args.beta.or(file.beta).unwrap_or(BetaChoice::LaplaceBeltrami);
    let noise_level = args.noise_level.or(file.noise_level);
    // an explicit flag beats anything in the file
    let alpha = if let Some(a) = args.alpha {
        Some(a)
    } else if args.bp {
        None
    } else if file.bp == Some(true) {
        if file.alpha.is_some() {
            return Err(invalid("config file sets both alpha and bp"));
        }
        None
    } else {
        file.alpha
    };

    let rule: CubatureRule = match args.rule.clone().or_else(|| file.rule.clone()) {
        Some(p) => load_rule(&p, degree, defaults::RULE_EXACTNESS_TOL)?,
        None => gauss_legendre_rule(degree)?,
    };
    let values = load_samples(&samples_path)?;
    if values.len() != rule.len() {
        return Err(Error::LengthMismatch {
            what: "samples (rule nodes vs sample rows)",
            expected: rule.len(),
            got: values.len(),
        });
    }
    let samples = SampleSet::new(&rule, values)?;
    let beta = beta_choice.weights(degree)?;
    let analysis = analyze(&samples, degree)?;
    let bp_cfg = balancing_from(&args.grid, file, noise_level.unwrap_or(0.0));
    bp_cfg.validate()?;
    let balancer = Balancer::new(&rule, degree, &bp_cfg)?;

    std::fs::create_dir_all(&out).map_err(|source| Error::Io {
        path: out.clone(),
        source,
    })?;
    let mut summary = FitSummary {
        degree,
        nodes: rule.len(),
        beta: beta_choice,
        alpha: 0.0,
        alpha_source: "fixed".into(),
        norm_bound_estimate: 0.0,
        penalized_functional: 0.0,
        noise_level,
        bp_triggered: None,
        trace: None,
    };
    match alpha {
        Some(a) => summary.alpha = a,
        None => {
            if noise_level.is_none() {
                return Err(invalid(
                    "the balancing principle needs --noise-level (sup norm of the noise); or pass --alpha",
                ));
            }
            let outcome = balancer.select(&analysis, &beta, &bp_cfg)?;
            let trace = out.join("trace.csv");
            write_trace_csv(&outcome, crate::io::create_file(&trace)?)?;
            summary.alpha = outcome.alpha_star;
            summary.alpha_source = "balancing".into();
            summary.bp_triggered = Some(outcome.triggered);
            summary.trace = Some(trace.display().to_string());
        }
    }
    let coeffs = damp(&analysis, summary.alpha, &beta)?;
    summary.norm_bound_estimate = balancer.norms().estimate(summary.alpha, &beta)?;
    summary.penalized_functional = penalized_functional(&samples, &coeffs, summary.alpha, &beta)?;
    save_coefficients(&coeffs, &out.join("coefficients.csv"))?;
    save_json(&summary, &out.join("summary.json"))?;
    Ok(format!(
        "alpha = {:e} ({}); wrote {}",
        summary.alpha,
        summary.alpha_source,
        out.display()
    ))
}

/// Study configuration from flags, file and defaults.
pub fn experiment_config(args: &ExperimentArgs, file: &CliConfig) -> Result<ExperimentConfig> {
    check_command(file, "experiment")?;
    if let Some(p) = &args.replay {
        return load_json(p);
    }
    let which = args
        .which
        .or(file.experiment)
        .ok_or_else(|| invalid("missing study number (1, 2 or 3)"))?;
    let seed = args.seed.or(file.seed).unwrap_or(0);
    let degree = args.degree.or(file.degree).unwrap_or(defaults::DEGREE);
    let noise = args.noise_level.or(file.noise_level);
    let simulations = args.simulations.or(file.simulations).unwrap_or(defaults::SIMULATIONS);
    let bp = balancing_from(&args.grid, file, 0.0);
    let settings = crate::experiments::BalancingSettings {
        alpha0: bp.alpha0,
        q: bp.q,
        grid_len: bp.grid_len,
        omega: bp.omega,
        probe_resolution: bp.probe_resolution,
        norm_bound: bp.norm_bound,
    };
    Ok(match which {
        1 => ExperimentConfig::Sgg(SggExperimentConfig {
            degree,
            noise_level: noise.unwrap_or(defaults::UNIFORM_NOISE_LEVEL),
            balancing: settings,
            ..SggExperimentConfig::new(simulations, seed)
        }),
        2 => ExperimentConfig::Franke(FrankeExperimentConfig {
            degree,
            sigma: noise.unwrap_or(defaults::GAUSSIAN_SIGMA),
            balancing: settings,
            alpha_override: args.alpha.or(file.alpha),
            ..FrankeExperimentConfig::new(seed)
        }),
        3 => {
            let mut c = KernelExperimentConfig {
                degree,
                sigma: noise.unwrap_or(defaults::GAUSSIAN_SIGMA),
                balancing: settings,
                ..KernelExperimentConfig::new(simulations, seed)
            };
            c.search.runs = args.search_runs.or(file.search_runs).unwrap_or(c.search.runs);
            c.search.steps_per_run = args.search_steps.or(file.search_steps).unwrap_or(c.search.steps_per_run);
            ExperimentConfig::Kernel(c)
        }
        n => return Err(invalid(format!("study number must be 1, 2 or 3, got {n}"))),
    })
}

pub fn experiment(args: &ExperimentArgs, file: &CliConfig) -> Result<String> {
    let config = experiment_config(args, file)?;
    let out = require_out(args.out.clone().or_else(|| file.out.clone()))?;
    let start = std::time::Instant::now();
    let output = run_experiment(&config)?;
    eprintln!("study {} finished in {:.1?}", config.number(), start.elapsed());
    let files = output.write(&out)?;
    let mut msg = format!("wrote {} files to {}", files.len(), out.display());
    for (k, v) in &output.summary {
        msg.push_str(&format!("\n  {k} = {v:e}"));
    }
    Ok(msg)
}

fn load_config(path: Option<&Path>) -> Result<CliConfig> {
    match path {
        Some(p) => load_json(p),
        None => Ok(CliConfig::default()),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the message to print.
pub fn run<I, T>(args: I) -> std::result::Result<String, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(CliError::Usage)?;
    let file = load_config(cli.config.as_deref())?;
    let msg = match &cli.command {
        Command::GenRule(a) => gen_rule(a, &file)?,
        Command::Fit(a) => fit(a, &file)?,
        Command::Experiment(a) => experiment(a, &file)?,
    };
    Ok(msg)
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments, or `--help` / `--version`.
    Usage(clap::Error),
    Run(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Run(e)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(e) => write!(f, "{e}"),
            Self::Run(e) => write!(f, "error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}
