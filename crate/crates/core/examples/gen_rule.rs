// Builds the Gauss-Legendre product rule for M = 30, checks its exactness
// and writes it as CSV.

use spherefit::cubature::gauss_legendre_rule;
use spherefit::io::{load_rule, save_rule};

pub fn run_example() -> spherefit::Result<(usize, f64)> {
    let rule = gauss_legendre_rule(30)?;
    let defect = rule.exactness_defect(60);
    println!("nodes: {}", rule.len());
    println!("sum of weights - 4 pi: {:.2e}", rule.weights().iter().sum::<f64>() - 4.0 * std::f64::consts::PI);
    println!("exactness defect through degree 60: {defect:.2e}");

    let path = std::env::temp_dir().join(format!("spherefit_rule_{}.csv", std::process::id()));
    save_rule(&rule, &path)?;
    let back = load_rule(&path, 30, 1e-9)?;
    println!("round trip through {}: {} nodes", path.display(), back.len());
    let _ = std::fs::remove_file(&path);
    Ok((rule.len(), defect))
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
