// The C¹ spline filter keeps degrees up to M/2, tapers the rest, and so
// reproduces low-degree polynomials exactly.

use spherefit::approx::{filtered_approx, HarmonicCoefficients, FilterSpec};
use spherefit::harmonics::HarmonicIndex;

pub fn run_example() -> spherefit::Result<Vec<f64>> {
    let m = 8;
    let filter = FilterSpec::SplineC1;
    for t in [0.0, 0.5, 0.625, 0.75, 0.875, 1.0, 1.2] {
        println!("h({t:.3}) = {:.4}", filter.eval(t));
    }
    let mut factors = Vec::new();
    for k in 0..=m {
        let unit = HarmonicCoefficients::unit(m, HarmonicIndex::new(k, 1)?)?;
        let f = filtered_approx(&unit, filter, m)?;
        factors.push(f.get(HarmonicIndex::new(k, 1)?));
    }
    println!("degree factors for M = {m}: {factors:.3?}");
    Ok(factors)
}

fn main() -> spherefit::Result<()> {
    run_example().map(|_| ())
}
