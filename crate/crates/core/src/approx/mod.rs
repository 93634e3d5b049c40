//! Regularized least-squares approximation by spherical polynomials.
//!
//! On a cubature rule exact to degree `2M` the discrete normal equations
//! diagonalize, so the regularized fit is the hyperinterpolant multiplied
//! degree-by-degree by `1 / (1 + alpha beta_k²)`. [`regularized_fit_via_solver`]
//! assembles and solves the dense system instead and is kept as an
//! independent check of that identity.

mod filter;
mod norm;
mod solver;
mod synthesis;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

pub use filter::{filtered_approx, FilterSpec};
pub use norm::{operator_norm_bound, operator_norm_crude, OperatorNormBound, OperatorNormEstimator};
pub use solver::{regularized_fit_via_solver, regularized_fit_via_solver_with_limit, SOLVER_DEGREE_LIMIT};
pub use synthesis::ProbeSynthesis;

use crate::cubature::CubatureRule;
use crate::error::{Error, Result};
use crate::harmonics::{basis_len, legendre_fill, sph_harm_all, HarmonicIndex, SpherePoint};

/// Coefficients `gamma_{k,j}` of a spherical polynomial of degree `M` in the
/// real orthonormal basis, flat layout `k² + j - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicCoefficients {
    degree: usize,
    values: Vec<f64>,
}

impl HarmonicCoefficients {
    pub fn new(degree: usize, values: Vec<f64>) -> Result<Self> {
        if values.len() != basis_len(degree) {
            return Err(Error::LengthMismatch {
                what: "coefficients",
                expected: basis_len(degree),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("coefficients"));
        }
        Ok(Self { degree, values })
    }

    pub fn zeros(degree: usize) -> Self {
        Self {
            degree,
            values: vec![0.0; basis_len(degree)],
        }
    }

    /// Coefficient vector of the single harmonic `Y_idx`.
    pub fn unit(degree: usize, idx: HarmonicIndex) -> Result<Self> {
        if idx.degree() > degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: idx.degree(),
            });
        }
        let mut c = Self::zeros(degree);
        c.values[idx.flat()] = 1.0;
        Ok(c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn get(&self, idx: HarmonicIndex) -> f64 {
        self.values.get(idx.flat()).copied().unwrap_or(0.0)
    }

    /// The `2k+1` coefficients of degree `k`.
    pub fn degree_block(&self, k: usize) -> &[f64] {
        &self.values[k * k..(k + 1) * (k + 1)]
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Multiplies every degree-`k` block by `factors[k]`.
    pub fn scale_degrees(&self, factors: &[f64]) -> Self {
        debug_assert_eq!(factors.len(), self.degree + 1);
        let mut values = self.values.clone();
        for (k, f) in factors.iter().enumerate() {
            for v in &mut values[k * k..(k + 1) * (k + 1)] {
                *v *= f;
            }
        }
        Self {
            degree: self.degree,
            values,
        }
    }

    /// `(k, j, value)` triples in layout order.
    pub fn iter_indexed(&self) -> impl Iterator<Item = (HarmonicIndex, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(flat, v)| (HarmonicIndex::from_flat(flat), *v))
    }
}

/// Per-degree penalization weights `beta_0..beta_M` (the diagonal of `B_M`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenalizationWeights {
    degree: usize,
    beta: Vec<f64>,
}

impl PenalizationWeights {
    /// Validates `beta_k >= 0`, finiteness, and monotonicity in `k`.
    pub fn new(beta: Vec<f64>) -> Result<Self> {
        if beta.is_empty() {
            return Err(Error::InvalidWeights("need at least beta_0".into()));
        }
        if let Some((k, b)) = beta.iter().enumerate().find(|(_, b)| !(b.is_finite() && **b >= 0.0)) {
            return Err(Error::InvalidWeights(format!("beta_{k} = {b} is not a finite non-negative number")));
        }
        if let Some(k) = (1..beta.len()).find(|&k| beta[k] < beta[k - 1]) {
            return Err(Error::InvalidWeights(format!(
                "weights must be non-decreasing, but beta_{k} = {} < beta_{} = {}",
                beta[k],
                k - 1,
                beta[k - 1]
            )));
        }
        Ok(Self {
            degree: beta.len() - 1,
            beta,
        })
    }

    /// `beta_k = 1` for all `k`.
    pub fn ones(degree: usize) -> Self {
        Self {
            degree,
            beta: vec![1.0; degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    /// Errors unless every weight is strictly positive (needed wherever
    /// `beta_k^{-2}` appears, i.e. in kernel sections).
    pub fn require_positive(&self) -> Result<()> {
        match self.beta.iter().position(|b| *b <= 0.0) {
            Some(k) => Err(Error::InvalidWeights(format!(
                "beta_{k} = 0 but a reproducing kernel needs beta_k > 0"
            ))),
            None => Ok(()),
        }
    }

    /// Filter factors `1 / (1 + alpha beta_k²)`.
    pub fn filter(&self, alpha: f64) -> Vec<f64> {
        self.beta.iter().map(|b| 1.0 / (1.0 + alpha * b * b)).collect()
    }

    pub(crate) fn check_degree(&self, degree: usize) -> Result<()> {
        if self.degree != degree {
            return Err(Error::DegreeMismatch {
                expected: degree,
                got: self.degree,
            });
        }
        Ok(())
    }
}

/// Noisy values `y(x_i)` at the nodes of a cubature rule.
#[derive(Debug, Clone)]
pub struct SampleSet<'r> {
    rule: &'r CubatureRule,
    values: Vec<f64>,
}

impl<'r> SampleSet<'r> {
    pub fn new(rule: &'r CubatureRule, values: Vec<f64>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::LengthMismatch {
                what: "samples",
                expected: rule.len(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("samples"));
        }
        Ok(Self { rule, values })
    }

    /// Samples `f` at every node.
    pub fn from_fn<F: FnMut(&SpherePoint) -> f64>(rule: &'r CubatureRule, f: F) -> Result<Self> {
        let values = rule.points().iter().map(f).collect();
        Self::new(rule, values)
    }

    pub fn rule(&self) -> &'r CubatureRule {
        self.rule
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Hyperinterpolation coefficients `sum_i w_i Y_{k,j}(x_i) y(x_i)`.
pub fn analyze(samples: &SampleSet<'_>, degree: usize) -> Result<HarmonicCoefficients> {
    let rule = samples.rule();
    rule.require_exactness(2 * degree)?;
    let mut acc = vec![0.0; basis_len(degree)];
    let mut buf = vec![0.0; basis_len(degree)];
    for ((p, w), y) in rule.points().iter().zip(rule.weights()).zip(samples.values()) {
        sph_harm_all(degree, p, &mut buf);
        let wy = w * y;
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += wy * b;
        }
    }
    HarmonicCoefficients::new(degree, acc)
}

/// Closed-form minimizer of the weighted, penalized least-squares problem:
/// the hyperinterpolant damped by `1 / (1 + alpha beta_k²)` per degree.
pub fn regularized_fit(
    samples: &SampleSet<'_>,
    degree: usize,
    alpha: f64,
    beta: &PenalizationWeights,
) -> Result<HarmonicCoefficients> {
    check_alpha(alpha)?;
    beta.check_degree(degree)?;
    let raw = analyze(samples, degree)?;
    Ok(raw.scale_degrees(&beta.filter(alpha)))
}

/// Same as [`regularized_fit`] but starting from precomputed analysis
/// coefficients.
pub fn damp(analysis: &HarmonicCoefficients, alpha: f64, beta: &PenalizationWeights) -> Result<HarmonicCoefficients> {
    check_alpha(alpha)?;
    beta.check_degree(analysis.degree())?;
    Ok(analysis.scale_degrees(&beta.filter(alpha)))
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "regularization parameter must be finite and >= 0, got {alpha}"
        )));
    }
    Ok(())
}

/// `p(x) = sum_{k,j} gamma_{k,j} Y_{k,j}(x)`.
pub fn evaluate(coeffs: &HarmonicCoefficients, x: &SpherePoint) -> f64 {
    let mut buf = vec![0.0; basis_len(coeffs.degree())];
    evaluate_with(coeffs, x, &mut buf)
}

fn evaluate_with(coeffs: &HarmonicCoefficients, x: &SpherePoint, buf: &mut [f64]) -> f64 {
    sph_harm_all(coeffs.degree(), x, buf);
    coeffs.values().iter().zip(buf.iter()).map(|(c, y)| c * y).sum()
}

/// [`evaluate`] at every point.
pub fn evaluate_grid(coeffs: &HarmonicCoefficients, points: &[SpherePoint]) -> Vec<f64> {
    let mut buf = vec![0.0; basis_len(coeffs.degree())];
    points.iter().map(|p| evaluate_with(coeffs, p, &mut buf)).collect()
}

/// Evaluates the regularized approximant through its zonal-kernel form
/// `sum_k (2k+1)/(4 pi (1 + alpha beta_k²)) sum_i w_i P_k(x . x_i) y(x_i)`,
/// without forming harmonic coefficients.
pub fn evaluate_kernel_form(
    samples: &SampleSet<'_>,
    degree: usize,
    alpha: f64,
    beta: &PenalizationWeights,
    x: &SpherePoint,
) -> Result<f64> {
    check_alpha(alpha)?;
    beta.check_degree(degree)?;
    let coef: Vec<f64> = beta
        .filter(alpha)
        .iter()
        .enumerate()
        .map(|(k, f)| (2.0 * k as f64 + 1.0) / (4.0 * PI) * f)
        .collect();
    let rule = samples.rule();
    let mut p = vec![0.0; degree + 1];
    let mut total = 0.0;
    for ((node, w), y) in rule.points().iter().zip(rule.weights()).zip(samples.values()) {
        legendre_fill(x.dot(node), &mut p);
        let kern: f64 = coef.iter().zip(&p).map(|(c, pk)| c * pk).sum();
        total += w * y * kern;
    }
    Ok(total)
}

/// RKHS inner product `sum_k beta_k² sum_j a_{k,j} b_{k,j}`.
pub fn rkhs_inner(a: &HarmonicCoefficients, b: &HarmonicCoefficients, beta: &PenalizationWeights) -> Result<f64> {
    if a.degree() != b.degree() {
        return Err(Error::DegreeMismatch {
            expected: a.degree(),
            got: b.degree(),
        });
    }
    beta.check_degree(a.degree())?;
    let mut total = 0.0;
    for (k, bk) in beta.beta().iter().enumerate() {
        let dot: f64 = a.degree_block(k).iter().zip(b.degree_block(k)).map(|(x, y)| x * y).sum();
        if dot != 0.0 {
            total += bk * bk * dot;
        }
    }
    Ok(total)
}

/// Squared RKHS norm `sum_k beta_k² sum_j gamma_{k,j}²`.
pub fn rkhs_norm_sq(coeffs: &HarmonicCoefficients, beta: &PenalizationWeights) -> Result<f64> {
    rkhs_inner(coeffs, coeffs, beta)
}

/// Coefficients of the kernel section `K(., x) = sum_k beta_k^{-2} sum_j Y_{k,j}(x) Y_{k,j}`.
pub fn kernel_section(beta: &PenalizationWeights, x: &SpherePoint) -> Result<HarmonicCoefficients> {
    beta.require_positive()?;
    let degree = beta.degree();
    let mut values = vec![0.0; basis_len(degree)];
    sph_harm_all(degree, x, &mut values);
    let inv: Vec<f64> = beta.beta().iter().map(|b| 1.0 / (b * b)).collect();
    HarmonicCoefficients::new(degree, values).map(|c| c.scale_degrees(&inv))
}

/// `sum_i w_i (p(x_i) - y(x_i))² + alpha ||p||²_K`.
pub fn penalized_functional(
    samples: &SampleSet<'_>,
    coeffs: &HarmonicCoefficients,
    alpha: f64,
    beta: &PenalizationWeights,
) -> Result<f64> {
    check_alpha(alpha)?;
    let rule = samples.rule();
    let fitted = evaluate_grid(coeffs, rule.points());
    let residual: f64 = fitted
        .iter()
        .zip(samples.values())
        .zip(rule.weights())
        .map(|((p, y), w)| w * (p - y) * (p - y))
        .sum();
    let penalty = if alpha == 0.0 { 0.0 } else { alpha * rkhs_norm_sq(coeffs, beta)? };
    Ok(residual + penalty)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubature::gauss_legendre_rule;
    use crate::harmonics::sph_harm_eval;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_coeffs(degree: usize, rng: &mut impl Rng) -> HarmonicCoefficients {
        let v = (0..basis_len(degree)).map(|_| rng.gen_range(-1.0..1.0)).collect();
        HarmonicCoefficients::new(degree, v).unwrap()
    }

    fn random_point(rng: &mut impl Rng) -> SpherePoint {
        loop {
            let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            let n = v.iter().map(|a| a * a).sum::<f64>();
            if n > 1e-3 && n <= 1.0 {
                return SpherePoint::new(v[0], v[1], v[2]).unwrap();
            }
        }
    }

    #[test]
    fn analyze_constant() {
        let rule = gauss_legendre_rule(4).unwrap();
        let s = SampleSet::from_fn(&rule, |_| 1.0).unwrap();
        let c = analyze(&s, 4).unwrap();
        assert_abs_diff_eq!(c.values()[0], (4.0 * PI).sqrt(), epsilon = 1e-10);
        assert_abs_diff_eq!(c.values()[0], 3.544_907_7, epsilon = 1e-7);
        for v in &c.values()[1..] {
            assert_abs_diff_eq!(*v, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn analyze_single_harmonic() {
        let rule = gauss_legendre_rule(3).unwrap();
        let idx = HarmonicIndex::new(3, 2).unwrap();
        let s = SampleSet::from_fn(&rule, |x| sph_harm_eval(idx, x)).unwrap();
        let c = analyze(&s, 3).unwrap();
        let e = HarmonicCoefficients::unit(3, idx).unwrap();
        for (a, b) in c.values().iter().zip(e.values()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
        }
    }

    #[test]
    fn analyze_reproduces_polynomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rule = gauss_legendre_rule(6).unwrap();
        let p = random_coeffs(6, &mut rng);
        let s = SampleSet::from_fn(&rule, |x| evaluate(&p, x)).unwrap();
        let c = analyze(&s, 6).unwrap();
        for (a, b) in c.values().iter().zip(p.values()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-9);
        }
    }

    #[test]
    fn analyze_rejects_weak_rule() {
        let rule = gauss_legendre_rule(3).unwrap();
        let s = SampleSet::from_fn(&rule, |_| 1.0).unwrap();
        assert!(matches!(analyze(&s, 4), Err(Error::InsufficientExactness { .. })));
    }

    #[test]
    fn regularized_fit_examples() {
        let rule = gauss_legendre_rule(5).unwrap();
        let idx = HarmonicIndex::new(2, 4).unwrap();
        let s = SampleSet::from_fn(&rule, |x| sph_harm_eval(idx, x) + 0.3 * x.x1()).unwrap();
        let plain = analyze(&s, 5).unwrap();
        let b = PenalizationWeights::new((0..=5).map(|k| k as f64 + 1.0).collect()).unwrap();
        assert_eq!(regularized_fit(&s, 5, 0.0, &b).unwrap(), plain);

        let single = SampleSet::from_fn(&rule, |x| sph_harm_eval(idx, x)).unwrap();
        let two = PenalizationWeights::new(vec![1.0, 1.5, 2.0, 2.0, 3.0, 3.0]).unwrap();
        let g = regularized_fit(&single, 5, 1.0, &two).unwrap();
        for (i, v) in g.iter_indexed() {
            let want = if i == idx { 0.2 } else { 0.0 };
            assert_abs_diff_eq!(v, want, epsilon = 1e-10);
        }

        let heavy = regularized_fit(&s, 5, 1e12, &b).unwrap();
        for (h, p) in heavy.values().iter().zip(plain.values()) {
            assert!(h.abs() <= 1e-9 * p.abs() + 1e-300);
        }
    }

    #[test]
    fn fit_degree_mismatch() {
        let rule = gauss_legendre_rule(5).unwrap();
        let s = SampleSet::from_fn(&rule, |_| 1.0).unwrap();
        let b = PenalizationWeights::ones(4);
        assert!(matches!(regularized_fit(&s, 5, 0.1, &b), Err(Error::DegreeMismatch { .. })));
        assert!(regularized_fit(&s, 5, -1.0, &PenalizationWeights::ones(5)).is_err());
    }

    #[test]
    fn zero_beta_allowed_in_fit() {
        let rule = gauss_legendre_rule(3).unwrap();
        let s = SampleSet::from_fn(&rule, |x| x.x3()).unwrap();
        let b = PenalizationWeights::new(vec![0.0, 2.0, 6.0, 12.0]).unwrap();
        assert!(regularized_fit(&s, 3, 0.5, &b).is_ok());
        let x = SpherePoint::new(0.0, 0.0, 1.0).unwrap();
        assert!(kernel_section(&b, &x).is_err());
    }

    #[test]
    fn weights_validation() {
        assert!(PenalizationWeights::new(vec![1.0, 0.5]).is_err());
        assert!(PenalizationWeights::new(vec![-1.0, 0.5]).is_err());
        assert!(PenalizationWeights::new(vec![]).is_err());
        assert!(PenalizationWeights::new(vec![0.0, 0.0, 3.0]).is_ok());
    }

    #[test]
    fn evaluate_examples() {
        let x = SpherePoint::new(0.1, 0.2, 0.3).unwrap();
        let e = HarmonicCoefficients::unit(3, HarmonicIndex::new(0, 1).unwrap()).unwrap();
        assert_abs_diff_eq!(evaluate(&e, &x), 1.0 / (4.0 * PI).sqrt(), epsilon = 1e-15);
        assert_eq!(evaluate(&HarmonicCoefficients::zeros(4), &x), 0.0);
        assert!(evaluate_grid(&e, &[]).is_empty());
        assert_eq!(evaluate_grid(&e, &[x]), vec![evaluate(&e, &x)]);
    }

    #[test]
    fn odd_zonal_parity() {
        let c = HarmonicCoefficients::unit(3, HarmonicIndex::new(3, 4).unwrap()).unwrap();
        let x = SpherePoint::new(0.3, -0.5, 0.6).unwrap();
        let y = SpherePoint::new(-0.3, 0.5, -0.6).unwrap();
        let v = evaluate_grid(&c, &[x, y]);
        assert!(v[0] * v[1] < 0.0);
        assert_abs_diff_eq!(v[0], -v[1], epsilon = 1e-14);
    }

    #[test]
    fn kernel_form_matches_harmonic_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rule = gauss_legendre_rule(8).unwrap();
        let s = SampleSet::from_fn(&rule, |x| (3.0 * x.x1()).sin() + x.x2() * x.x3()).unwrap();
        let b = PenalizationWeights::new((0..=8).map(|k| (k * (k + 1)) as f64).collect()).unwrap();
        let g = regularized_fit(&s, 8, 0.01, &b).unwrap();
        for _ in 0..20 {
            let x = random_point(&mut rng);
            let direct = evaluate(&g, &x);
            let kern = evaluate_kernel_form(&s, 8, 0.01, &b, &x).unwrap();
            assert_abs_diff_eq!(direct, kern, epsilon = 1e-9);
        }
    }

    #[test]
    fn rkhs_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_coeffs(3, &mut rng);
        let ones = PenalizationWeights::ones(3);
        assert_abs_diff_eq!(rkhs_norm_sq(&c, &ones).unwrap(), c.norm().powi(2), epsilon = 1e-12);
        let e = HarmonicCoefficients::unit(3, HarmonicIndex::new(2, 1).unwrap()).unwrap();
        let b = PenalizationWeights::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(rkhs_norm_sq(&e, &b).unwrap(), 9.0);
        assert_eq!(rkhs_norm_sq(&HarmonicCoefficients::zeros(3), &b).unwrap(), 0.0);
        // zero weight times zero block
        let lb = PenalizationWeights::new(vec![0.0, 2.0, 6.0, 12.0]).unwrap();
        assert_eq!(rkhs_norm_sq(&e, &lb).unwrap(), 36.0);
    }

    #[test]
    fn reproducing_property() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let b = PenalizationWeights::new((0..=6).map(|k| ((k + 1) as f64).powf(1.3)).collect()).unwrap();
        for _ in 0..10 {
            let p = random_coeffs(6, &mut rng);
            let x = random_point(&mut rng);
            let kx = kernel_section(&b, &x).unwrap();
            assert_abs_diff_eq!(rkhs_inner(&p, &kx, &b).unwrap(), evaluate(&p, &x), epsilon = 1e-9);
        }
    }

    #[test]
    fn functional_examples() {
        let rule = gauss_legendre_rule(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let p = random_coeffs(4, &mut rng);
        let s = SampleSet::from_fn(&rule, |x| evaluate(&p, x)).unwrap();
        let b = PenalizationWeights::ones(4);
        let fit = analyze(&s, 4).unwrap();
        assert_abs_diff_eq!(penalized_functional(&s, &fit, 0.0, &b).unwrap(), 0.0, epsilon = 1e-9);
        let zero = HarmonicCoefficients::zeros(4);
        let want: f64 = s.values().iter().zip(rule.weights()).map(|(y, w)| w * y * y).sum();
        assert_abs_diff_eq!(penalized_functional(&s, &zero, 0.3, &b).unwrap(), want, epsilon = 1e-12);
    }
}
