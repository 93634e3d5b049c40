// Franke+cap reconstruction from Gaussian-noise samples with
// Laplace-Beltrami weights and the balancing principle.

use spherefit::experiments::{run_experiment_2, ExperimentOutput};

pub fn run_example() -> spherefit::Result<ExperimentOutput> {
    let out = run_experiment_2(7)?;
    for (k, v) in &out.summary {
        println!("{k:>16} = {v:.4e}");
    }
    Ok(out)
}

fn main() -> spherefit::Result<()> {
    let out = run_example()?;
    let dir = std::env::temp_dir().join("spherefit_franke_study");
    for p in out.write(&dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
