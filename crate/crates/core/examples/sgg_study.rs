// Simulated gradiometry data: plain least squares against balancing and
// best-on-grid regularization, a few simulations at reduced degree.

use spherefit::experiments::{
    run_experiment, ExperimentConfig, ExperimentOutput, SggExperimentConfig, ONES_BEST, PLAIN_LS, SGG_BEST, SGG_BP,
};

pub fn run_example() -> spherefit::Result<ExperimentOutput> {
    let cfg = SggExperimentConfig {
        degree: 16,
        ..SggExperimentConfig::new(8, 2024)
    };
    let out = run_experiment(&ExperimentConfig::Sgg(cfg))?;
    for m in [PLAIN_LS, SGG_BP, ONES_BEST, SGG_BEST] {
        println!("{m:>10}: median relative error {:.4}", out.median(m).unwrap_or(f64::NAN));
    }
    Ok(out)
}

fn main() -> spherefit::Result<()> {
    let out = run_example()?;
    let dir = std::env::temp_dir().join("spherefit_sgg_study");
    for p in out.write(&dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
