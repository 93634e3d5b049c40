use super::HarmonicCoefficients;
use crate::harmonics::{basis_len, sph_harm_all, SpherePoint};

/// Per-degree partial sums `S_k(x) = sum_j gamma_{k,j} Y_{k,j}(x)` on a fixed
/// point set.
///
/// Any degree-wise rescaling of `gamma` (in particular every regularized fit
/// built from the same analysis) evaluates on the points in `O(M)` per point.
#[derive(Debug, Clone)]
pub struct ProbeSynthesis {
    degree: usize,
    points: usize,
    partials: Vec<f64>,
}

impl ProbeSynthesis {
    pub fn new(coeffs: &HarmonicCoefficients, points: &[SpherePoint]) -> Self {
        let degree = coeffs.degree();
        let stride = degree + 1;
        let mut partials = vec![0.0; points.len() * stride];
        let mut buf = vec![0.0; basis_len(degree)];
        for (p, row) in points.iter().zip(partials.chunks_exact_mut(stride)) {
            sph_harm_all(degree, p, &mut buf);
            for (k, slot) in row.iter_mut().enumerate() {
                let range = k * k..(k + 1) * (k + 1);
                *slot = coeffs.values()[range.clone()]
                    .iter()
                    .zip(&buf[range])
                    .map(|(c, y)| c * y)
                    .sum();
            }
        }
        Self {
            degree,
            points: points.len(),
            partials,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    /// Values of `sum_k factors[k] S_k(x)` at every point.
    pub fn values(&self, factors: &[f64]) -> Vec<f64> {
        assert_eq!(factors.len(), self.degree + 1);
        self.partials
            .chunks_exact(self.degree + 1)
            .map(|row| row.iter().zip(factors).map(|(s, f)| s * f).sum())
            .collect()
    }

    /// `max_x |sum_k factors[k] S_k(x)|`.
    pub fn sup_norm(&self, factors: &[f64]) -> f64 {
        self.values(factors).into_iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::evaluate_grid;
    use crate::cubature::probe_grid;

    #[test]
    fn matches_direct_evaluation() {
        let degree = 6;
        let values = (0..basis_len(degree)).map(|i| ((i * 7919) % 13) as f64 / 13.0 - 0.4).collect();
        let c = HarmonicCoefficients::new(degree, values).unwrap();
        let pts = probe_grid(5).unwrap();
        let synth = ProbeSynthesis::new(&c, &pts);
        let factors: Vec<f64> = (0..=degree).map(|k| 1.0 / (1.0 + k as f64)).collect();
        let direct = evaluate_grid(&c.scale_degrees(&factors), &pts);
        for (a, b) in synth.values(&factors).iter().zip(&direct) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
