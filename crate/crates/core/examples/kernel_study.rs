// Kernel chosen by random search against Laplace-Beltrami weights over
// repeated noise draws, at reduced size.

use spherefit::experiments::{run_experiment, ExperimentConfig, ExperimentOutput, KernelExperimentConfig, KERNEL_BP, LB_BP};

pub fn run_example() -> spherefit::Result<ExperimentOutput> {
    let mut cfg = KernelExperimentConfig {
        degree: 16,
        ..KernelExperimentConfig::new(6, 3)
    };
    cfg.search.runs = 3;
    cfg.search.steps_per_run = 4;
    let out = run_experiment(&ExperimentConfig::Kernel(cfg))?;
    let k = out.kernel_search.as_ref().expect("kernel study reports its search");
    println!("selected (lambda1, lambda2) = ({:.3}, {:.3})", k.best.lambda1, k.best.lambda2);
    for m in [LB_BP, KERNEL_BP] {
        println!("{m:>20}: median relative error {:.4}", out.median(m).unwrap_or(f64::NAN));
    }
    Ok(out)
}

fn main() -> spherefit::Result<()> {
    let out = run_example()?;
    let dir = std::env::temp_dir().join("spherefit_kernel_study");
    for p in out.write(&dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
