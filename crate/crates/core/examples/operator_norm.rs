// Sup-norm operator norm of the regularized fit on a probe grid, compared
// with the termwise and crude analytic bounds.

use spherefit::approx::{operator_norm_crude, OperatorNormEstimator};
use spherefit::cubature::{gauss_legendre_rule, probe_grid};
use spherefit::params::weights_laplace_beltrami;

pub fn run_example() -> spherefit::Result<Vec<(f64, f64, f64, f64)>> {
    let m = 16;
    let rule = gauss_legendre_rule(m)?;
    let est = OperatorNormEstimator::new(&rule, m, &probe_grid(2 * m)?)?;
    let beta = weights_laplace_beltrami(m);
    println!("{} probes, {} after symmetry folding", est.probe_count(), est.evaluated_probes());
    let mut rows = Vec::new();
    for alpha in [0.0, 1e-5, 1e-4, 1e-3, 1e-2] {
        let grid = est.estimate(alpha, &beta)?;
        let termwise = est.estimate_termwise(alpha, &beta)?;
        let crude = operator_norm_crude(alpha, &beta);
        println!("alpha {alpha:>6.0e}: grid {grid:8.3}  termwise {termwise:8.3}  crude {crude:8.3}");
        rows.push((alpha, grid, termwise, crude));
    }
    Ok(rows)
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
