use nalgebra::{DMatrix, DVector};

use super::{check_alpha, HarmonicCoefficients, PenalizationWeights, SampleSet};
use crate::error::{Error, Result};
use crate::harmonics::{basis_len, sph_harm_all};

/// Default cap on the degree for which the dense system is assembled.
pub const SOLVER_DEGREE_LIMIT: usize = 40;

/// Solves `(Y W Yᵀ + alpha B Y W Yᵀ B) gamma = Y W y` by dense Cholesky.
///
/// Independent of the diagonal closed form; used to cross-check it.
pub fn regularized_fit_via_solver(
    samples: &SampleSet<'_>,
    degree: usize,
    alpha: f64,
    beta: &PenalizationWeights,
) -> Result<HarmonicCoefficients> {
    regularized_fit_via_solver_with_limit(samples, degree, alpha, beta, SOLVER_DEGREE_LIMIT)
}

pub fn regularized_fit_via_solver_with_limit(
    samples: &SampleSet<'_>,
    degree: usize,
    alpha: f64,
    beta: &PenalizationWeights,
    degree_limit: usize,
) -> Result<HarmonicCoefficients> {
    check_alpha(alpha)?;
    beta.check_degree(degree)?;
    if degree > degree_limit {
        return Err(Error::SystemTooLarge {
            size: basis_len(degree),
            limit: degree_limit,
        });
    }
    let rule = samples.rule();
    let dim = basis_len(degree);
    let n = rule.len();

    // Y_M with one column per node
    let mut y_mat = DMatrix::<f64>::zeros(dim, n);
    let mut buf = vec![0.0; dim];
    for (i, p) in rule.points().iter().enumerate() {
        sph_harm_all(degree, p, &mut buf);
        y_mat.column_mut(i).copy_from_slice(&buf);
    }
    let mut yw = y_mat.clone();
    for (i, w) in rule.weights().iter().enumerate() {
        yw.column_mut(i).scale_mut(*w);
    }
    let gram = &yw * y_mat.transpose();
    let b_diag = DVector::from_iterator(
        dim,
        (0..=degree).flat_map(|k| std::iter::repeat_n(beta.beta()[k], 2 * k + 1)),
    );
    let mut penalty = gram.clone();
    for r in 0..dim {
        for c in 0..dim {
            penalty[(r, c)] *= b_diag[r] * b_diag[c];
        }
    }
    let system = gram + penalty * alpha;
    let rhs = &yw * DVector::from_column_slice(samples.values());

    let chol = system.cholesky().ok_or(Error::NotPositiveDefinite)?;
    let gamma = chol.solve(&rhs);
    HarmonicCoefficients::new(degree, gamma.as_slice().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::approx::{analyze, regularized_fit};
    use crate::cubature::gauss_legendre_rule;
    use std::f64::consts::PI;

    #[test]
    fn matches_closed_form() {
        let rule = gauss_legendre_rule(5).unwrap();
        let s = SampleSet::from_fn(&rule, |x| (2.0 * x.x1() + x.x3()).cos() + 0.1 * x.x2()).unwrap();
        let b = PenalizationWeights::new((0..=5).map(|k| k as f64 + 1.0).collect()).unwrap();
        let direct = regularized_fit(&s, 5, 0.1, &b).unwrap();
        let solved = regularized_fit_via_solver(&s, 5, 0.1, &b).unwrap();
        let diff: f64 = direct
            .values()
            .iter()
            .zip(solved.values())
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-8 * direct.norm());

        let plain = analyze(&s, 5).unwrap();
        let solved0 = regularized_fit_via_solver(&s, 5, 0.0, &b).unwrap();
        for (a, b) in plain.values().iter().zip(solved0.values()) {
            assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn scalar_case() {
        let rule = gauss_legendre_rule(0).unwrap();
        let c = 1.7;
        let s = SampleSet::from_fn(&rule, |_| c).unwrap();
        let b = PenalizationWeights::new(vec![2.0]).unwrap();
        let alpha = 0.3;
        let g = regularized_fit_via_solver(&s, 0, alpha, &b).unwrap();
        let want = c * (4.0 * PI).sqrt() / (1.0 + alpha * 4.0);
        assert!((g.values()[0] - want).abs() < 1e-12);
    }

    #[test]
    fn respects_degree_limit() {
        let rule = gauss_legendre_rule(3).unwrap();
        let s = SampleSet::from_fn(&rule, |_| 1.0).unwrap();
        let b = PenalizationWeights::ones(3);
        assert!(matches!(
            regularized_fit_via_solver_with_limit(&s, 3, 0.1, &b, 2),
            Err(Error::SystemTooLarge { .. })
        ));
    }
}
