//! Positive-weight cubature rules on S² and probe grids.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::harmonics::{basis_len, legendre_fill, sph_harm_all, SpherePoint};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;
const WEIGHT_SUM_TOL: f64 = 1e-10;

/// Symmetry of a product rule: invariant under rotation by `2 pi / azimuths`
/// about the x3-axis, under `x3 -> -x3`, and under `phi -> -phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProductSymmetry {
    pub azimuths: usize,
}

/// Nodes and positive weights on S² reproducing the integral of every
/// spherical polynomial up to `exactness`.
#[derive(Debug, Clone)]
pub struct CubatureRule {
    degree: usize,
    exactness: usize,
    points: Vec<SpherePoint>,
    weights: Vec<f64>,
    symmetry: Option<ProductSymmetry>,
}

impl CubatureRule {
    /// Assembles a rule from explicit nodes and weights. `degree` is the
    /// reconstruction degree M the rule is meant for; the caller vouches that
    /// it integrates `P_{2M}` exactly (see [`CubatureRule::exactness_defect`]).
    pub fn from_parts(degree: usize, points: Vec<SpherePoint>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                what: "weights",
                expected: points.len(),
                got: weights.len(),
            });
        }
        if points.is_empty() {
            return Err(Error::InvalidParameter("cubature rule has no nodes".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "cubature weights must be positive and finite, found {w}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 4.0 * PI).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidParameter(format!(
                "cubature weights sum to {sum}, expected 4 pi"
            )));
        }
        Ok(Self {
            degree,
            exactness: 2 * degree,
            points,
            weights,
            symmetry: None,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Highest polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        self.exactness
    }

    pub fn points(&self) -> &[SpherePoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn symmetry(&self) -> Option<ProductSymmetry> {
        self.symmetry
    }

    /// Fails unless the rule integrates polynomials of degree `needed` exactly.
    pub fn require_exactness(&self, needed: usize) -> Result<()> {
        if self.exactness < needed {
            return Err(Error::InsufficientExactness {
                have: self.exactness,
                need: needed,
            });
        }
        Ok(())
    }

    /// Largest deviation from exactness over `P_degree`: the maximum of
    /// `|sum w_i Y_{k,j}(x_i)|` over `1 <= k <= degree` together with
    /// `|sum w_i - 4 pi|`.
    pub fn exactness_defect(&self, degree: usize) -> f64 {
        let mut sums = vec![0.0; basis_len(degree)];
        let mut buf = vec![0.0; basis_len(degree)];
        for (p, w) in self.points.iter().zip(&self.weights) {
            sph_harm_all(degree, p, &mut buf);
            for (s, y) in sums.iter_mut().zip(&buf) {
                *s += w * y;
            }
        }
        let mut defect = (self.weights.iter().sum::<f64>() - 4.0 * PI).abs();
        for s in &sums[1..] {
            defect = defect.max(s.abs());
        }
        defect
    }
}

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
pub fn gauss_legendre_nodes(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    let mut p = vec![0.0; n + 1];
    // roots are symmetric; solve for the non-negative half and mirror
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            legendre_fill(t, &mut p);
            let deriv = nf * (t * p[n] - p[n - 1]) / (t * t - 1.0);
            let step = p[n] / deriv;
            t -= step;
            if step.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NodeConvergence { nodes: n });
        }
        if 2 * i + 1 == n {
            t = 0.0;
        }
        legendre_fill(t, &mut p);
        let deriv = nf * (t * p[n] - p[n - 1]) / (t * t - 1.0);
        let w = 2.0 / ((1.0 - t * t) * deriv * deriv);
        nodes[n - 1 - i] = t;
        weights[n - 1 - i] = w;
        nodes[i] = -t;
        weights[i] = w;
    }
    Ok((nodes, weights))
}

/// Gauss-Legendre product rule for reconstruction degree `degree`:
/// `degree+1` Gauss-Legendre nodes in `x3` times `2(degree+1)` equispaced
/// azimuths `pi r/(degree+1)`. `N = 2(degree+1)²`, exact through degree
/// `2 degree + 1`.
pub fn gauss_legendre_rule(degree: usize) -> Result<CubatureRule> {
    let n = degree + 1;
    let (nodes, gl_weights) = gauss_legendre_nodes(n)?;
    let azimuths = 2 * n;
    let scale = PI / n as f64;
    let mut points = Vec::with_capacity(n * azimuths);
    let mut weights = Vec::with_capacity(n * azimuths);
    for (t, v) in nodes.iter().zip(&gl_weights) {
        for r in 0..azimuths {
            points.push(SpherePoint::from_polar(*t, scale * r as f64));
            weights.push(scale * v);
        }
    }
    Ok(CubatureRule {
        degree,
        exactness: 2 * degree + 1,
        points,
        weights,
        symmetry: Some(ProductSymmetry { azimuths }),
    })
}

/// Nodes of `gauss_legendre_rule(resolution_degree)`, used as a finite
/// surrogate for maxima over the sphere.
pub fn probe_grid(resolution_degree: usize) -> Result<Vec<SpherePoint>> {
    if resolution_degree == 0 {
        return Err(Error::InvalidParameter("probe resolution must be at least 1".into()));
    }
    Ok(gauss_legendre_rule(resolution_degree)?.points)
}

/// `sum_i w_i f(x_i)`.
pub fn integrate<F>(rule: &CubatureRule, mut f: F) -> f64
where
    F: FnMut(&SpherePoint) -> f64,
{
    rule.points
        .iter()
        .zip(&rule.weights)
        .map(|(p, w)| w * f(p))
        .sum()
}

/// Fallible variant of [`integrate`].
pub fn try_integrate<F, E>(rule: &CubatureRule, mut f: F) -> std::result::Result<f64, E>
where
    F: FnMut(&SpherePoint) -> std::result::Result<f64, E>,
{
    let mut acc = 0.0;
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        acc += w * f(p)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::{sph_harm_eval, HarmonicIndex};
    use approx::assert_abs_diff_eq;

    #[test]
    fn degree_zero_rule() {
        let rule = gauss_legendre_rule(0).unwrap();
        assert_eq!(rule.len(), 2);
        for (p, w) in rule.points().iter().zip(rule.weights()) {
            assert_abs_diff_eq!(p.x3(), 0.0, epsilon = 1e-16);
            assert_abs_diff_eq!(*w, 2.0 * PI, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(rule.points()[1].x1(), -1.0, epsilon = 1e-15);
    }

    #[test]
    fn degree_one_rule() {
        let rule = gauss_legendre_rule(1).unwrap();
        assert_eq!(rule.len(), 8);
        let t = 1.0 / 3f64.sqrt();
        for (p, w) in rule.points().iter().zip(rule.weights()) {
            assert_abs_diff_eq!(p.x3().abs(), t, epsilon = 1e-15);
            assert_abs_diff_eq!(*w, PI / 2.0, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(rule.weights().iter().sum::<f64>(), 4.0 * PI, epsilon = 1e-12);
    }

    #[test]
    fn point_counts() {
        assert_eq!(gauss_legendre_rule(30).unwrap().len(), 1922);
        assert_eq!(probe_grid(30).unwrap().len(), 1922);
        assert_eq!(probe_grid(1).unwrap().len(), 8);
        assert_eq!(probe_grid(60).unwrap().len(), 7442);
        assert!(probe_grid(0).is_err());
    }

    #[test]
    fn gl_node_symmetry() {
        for n in [1, 2, 5, 16, 31, 64, 201] {
            let (t, v) = gauss_legendre_nodes(n).unwrap();
            for i in 0..n {
                assert_eq!(t[i], -t[n - 1 - i]);
                assert!((v[i] - v[n - 1 - i]).abs() <= 1e-14);
                assert!(t[i].abs() < 1.0);
            }
            if n % 2 == 1 {
                assert_eq!(t[n / 2], 0.0);
            }
            assert_abs_diff_eq!(v.iter().sum::<f64>(), 2.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn large_rule_converges() {
        let (t, v) = gauss_legendre_nodes(2001).unwrap();
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert_abs_diff_eq!(v.iter().sum::<f64>(), 2.0, epsilon = 1e-11);
    }

    #[test]
    fn integrate_examples() {
        let rule = gauss_legendre_rule(5).unwrap();
        assert_abs_diff_eq!(integrate(&rule, |_| 1.0), 4.0 * PI, epsilon = 1e-10);
        for (k, j) in [(1, 1), (3, 5), (5, 2)] {
            let idx = HarmonicIndex::new(k, j).unwrap();
            assert_abs_diff_eq!(integrate(&rule, |x| sph_harm_eval(idx, x)), 0.0, epsilon = 1e-9);
        }
        let idx = HarmonicIndex::new(5, 3).unwrap();
        assert_abs_diff_eq!(
            integrate(&rule, |x| sph_harm_eval(idx, x).powi(2)),
            1.0,
            epsilon = 1e-9
        );
    }

    #[test]
    fn exactness_defect_small_for_gl() {
        let rule = gauss_legendre_rule(8).unwrap();
        assert!(rule.exactness_defect(16) < 1e-12);
        assert!(rule.exactness_defect(17) < 1e-12);
        // degree 18 is beyond the rule
        assert!(rule.exactness_defect(18) > 1e-3);
    }

    #[test]
    fn from_parts_validates() {
        let rule = gauss_legendre_rule(2).unwrap();
        let pts = rule.points().to_vec();
        let mut w = rule.weights().to_vec();
        assert!(CubatureRule::from_parts(2, pts.clone(), w.clone()).is_ok());
        w[0] = -w[0];
        assert!(CubatureRule::from_parts(2, pts.clone(), w).is_err());
        assert!(CubatureRule::from_parts(2, pts, vec![1.0; 3]).is_err());
    }

    #[test]
    fn try_integrate_propagates() {
        let rule = gauss_legendre_rule(1).unwrap();
        let r: std::result::Result<f64, &str> = try_integrate(&rule, |_| Err("boom"));
        assert_eq!(r, Err("boom"));
    }
}
