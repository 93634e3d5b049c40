//! Legendre polynomials and a real orthonormal spherical harmonic basis.
//!
//! Degree-`k` harmonics are indexed by `j = 1..=2k+1` with order
//! `m = j - k - 1`. The real basis is
//!
//! ```text
//! Y_{k,m}(x) = N_{k,|m|} P_k^{|m|}(x3) * { sqrt(2) cos(m phi)    m > 0
//!                                         { 1                    m = 0
//!                                         { sqrt(2) sin(|m| phi) m < 0
//! ```
//!
//! without the Condon-Shortley phase. The normalized associated Legendre
//! functions are built by a diagonal-then-vertical recurrence with the
//! normalization folded into every step, so no factorials are formed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const DOMAIN_SLACK: f64 = 1e-14;
const UNIT_TOL: f64 = 1e-12;

/// A point on the unit sphere S².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    x: [f64; 3],
}

impl SpherePoint {
    /// Builds a point from Cartesian coordinates, normalizing to unit length.
    ///
    /// Rejects non-finite and zero vectors.
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite() && x3.is_finite()) {
            return Err(Error::InvalidPoint(format!("({x1}, {x2}, {x3}) is not finite")));
        }
        let norm = (x1 * x1 + x2 * x2 + x3 * x3).sqrt();
        if norm == 0.0 {
            return Err(Error::InvalidPoint("zero vector".into()));
        }
        if (norm - 1.0).abs() <= UNIT_TOL {
            return Ok(Self { x: [x1, x2, x3] });
        }
        Ok(Self {
            x: [x1 / norm, x2 / norm, x3 / norm],
        })
    }

    /// Point with polar coordinate `cos(theta) = t` and azimuth `phi`.
    pub fn from_polar(t: f64, phi: f64) -> Self {
        let t = t.clamp(-1.0, 1.0);
        let s = (1.0 - t * t).sqrt();
        Self {
            x: [s * phi.cos(), s * phi.sin(), t],
        }
    }

    pub fn coords(&self) -> [f64; 3] {
        self.x
    }

    pub fn x1(&self) -> f64 {
        self.x[0]
    }

    pub fn x2(&self) -> f64 {
        self.x[1]
    }

    pub fn x3(&self) -> f64 {
        self.x[2]
    }

    /// Dot product, clamped to [-1, 1].
    pub fn dot(&self, other: &SpherePoint) -> f64 {
        let d = self.x[0] * other.x[0] + self.x[1] * other.x[1] + self.x[2] * other.x[2];
        d.clamp(-1.0, 1.0)
    }

    /// Azimuth in (-pi, pi]; zero at the poles.
    pub fn azimuth(&self) -> f64 {
        if self.x[0] == 0.0 && self.x[1] == 0.0 {
            0.0
        } else {
            self.x[1].atan2(self.x[0])
        }
    }
}

/// Index `(k, j)` of a real spherical harmonic, `1 <= j <= 2k+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HarmonicIndex {
    k: usize,
    j: usize,
}

impl HarmonicIndex {
    pub fn new(k: usize, j: usize) -> Result<Self> {
        if j == 0 || j > 2 * k + 1 {
            return Err(Error::InvalidIndex { k, j });
        }
        Ok(Self { k, j })
    }

    /// Index from degree and order `m` in `[-k, k]`.
    pub fn from_order(k: usize, m: i64) -> Result<Self> {
        let j = m + k as i64 + 1;
        if j < 1 {
            return Err(Error::InvalidIndex { k, j: 0 });
        }
        Self::new(k, j as usize)
    }

    /// Inverse of [`HarmonicIndex::flat`].
    pub fn from_flat(flat: usize) -> Self {
        let k = (flat as f64).sqrt() as usize;
        // guard against rounding in the square root
        let k = if (k + 1) * (k + 1) <= flat {
            k + 1
        } else if k * k > flat {
            k - 1
        } else {
            k
        };
        Self {
            k,
            j: flat - k * k + 1,
        }
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn order(&self) -> i64 {
        self.j as i64 - self.k as i64 - 1
    }

    /// Position in the flat layout (k ascending, j ascending): `k² + j - 1`.
    pub fn flat(&self) -> usize {
        self.k * self.k + self.j - 1
    }
}

/// Number of harmonics of degree at most `degree`.
pub fn basis_len(degree: usize) -> usize {
    (degree + 1) * (degree + 1)
}

fn check_domain(t: f64) -> Result<()> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail
    if !(t.abs() <= 1.0 + DOMAIN_SLACK) {
        return Err(Error::Domain { value: t });
    }
    Ok(())
}

/// Legendre polynomial `P_k(t)` by the three-term recurrence.
pub fn legendre_eval(k: usize, t: f64) -> Result<f64> {
    check_domain(t)?;
    let t = t.clamp(-1.0, 1.0);
    let mut prev = 1.0;
    if k == 0 {
        return Ok(prev);
    }
    let mut cur = t;
    for n in 1..k {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0) * t * cur - nf * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `P_0(t), ..., P_{k_max}(t)`, sharing the recurrence of [`legendre_eval`].
pub fn legendre_batch(k_max: usize, t: f64) -> Result<Vec<f64>> {
    check_domain(t)?;
    let mut out = vec![0.0; k_max + 1];
    legendre_fill(t.clamp(-1.0, 1.0), &mut out);
    Ok(out)
}

/// Fills `out[k] = P_k(t)` for `k < out.len()`. `t` must already lie in [-1, 1].
pub(crate) fn legendre_fill(t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = t;
    for n in 1..out.len() - 1 {
        let nf = n as f64;
        out[n + 1] = ((2.0 * nf + 1.0) * t * out[n] - nf * out[n - 1]) / (nf + 1.0);
    }
}

/// Normalized associated Legendre function `N_{k,m} P_k^m(t)` for a single
/// `(k, m)`, `m <= k`.
fn normalized_alf(k: usize, m: usize, t: f64) -> f64 {
    let s = (1.0 - t * t).max(0.0).sqrt();
    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for i in 1..=m {
        let fi = i as f64;
        pmm *= ((2.0 * fi + 1.0) / (2.0 * fi)).sqrt() * s;
    }
    if k == m {
        return pmm;
    }
    let mf = m as f64;
    let mut prev = pmm;
    let mut cur = (2.0 * mf + 3.0).sqrt() * t * pmm;
    for n in (m + 2)..=k {
        let (a, b) = vertical_coeffs(n, m);
        let next = a * (t * cur - b * prev);
        prev = cur;
        cur = next;
    }
    cur
}

#[inline]
fn vertical_coeffs(n: usize, m: usize) -> (f64, f64) {
    let nf = n as f64;
    let mf = m as f64;
    let a = ((4.0 * nf * nf - 1.0) / (nf * nf - mf * mf)).sqrt();
    let b = (((nf - 1.0) * (nf - 1.0) - mf * mf) / (4.0 * (nf - 1.0) * (nf - 1.0) - 1.0)).sqrt();
    (a, b)
}

/// Value of the real orthonormal harmonic `Y_{k,j}` at `x`.
pub fn sph_harm_eval(idx: HarmonicIndex, x: &SpherePoint) -> f64 {
    let m = idx.order();
    let am = m.unsigned_abs() as usize;
    let p = normalized_alf(idx.degree(), am, x.x3());
    let phi = x.azimuth();
    match m {
        0 => p,
        m if m > 0 => std::f64::consts::SQRT_2 * p * (m as f64 * phi).cos(),
        _ => std::f64::consts::SQRT_2 * p * (am as f64 * phi).sin(),
    }
}

/// Evaluates every harmonic of degree `<= degree` at `x` into `out`
/// (length `(degree+1)²`, flat layout).
pub fn sph_harm_all(degree: usize, x: &SpherePoint, out: &mut [f64]) {
    assert_eq!(out.len(), basis_len(degree), "output buffer has wrong length");
    let t = x.x3().clamp(-1.0, 1.0);
    let s = (1.0 - t * t).max(0.0).sqrt();
    let phi = x.azimuth();

    let mut pmm = (1.0 / (4.0 * PI)).sqrt();
    for m in 0..=degree {
        if m > 0 {
            let fm = m as f64;
            pmm *= ((2.0 * fm + 1.0) / (2.0 * fm)).sqrt() * s;
        }
        let (cos_m, sin_m) = if m == 0 {
            (1.0, 0.0)
        } else {
            let a = m as f64 * phi;
            (
                std::f64::consts::SQRT_2 * a.cos(),
                std::f64::consts::SQRT_2 * a.sin(),
            )
        };
        let mut store = |k: usize, p: f64| {
            let centre = k * k + k;
            if m == 0 {
                out[centre] = p;
            } else {
                out[centre + m] = p * cos_m;
                out[centre - m] = p * sin_m;
            }
        };
        store(m, pmm);
        if m == degree {
            break;
        }
        let mut prev = pmm;
        let mut cur = (2.0 * m as f64 + 3.0).sqrt() * t * pmm;
        store(m + 1, cur);
        for n in (m + 2)..=degree {
            let (a, b) = vertical_coeffs(n, m);
            let next = a * (t * cur - b * prev);
            prev = cur;
            cur = next;
            store(n, cur);
        }
    }
}

/// Zonal kernel `(2k+1)/(4 pi) P_k(x . z)`, equal to `sum_j Y_{k,j}(x) Y_{k,j}(z)`.
pub fn addition_kernel(k: usize, x: &SpherePoint, z: &SpherePoint) -> f64 {
    // dot() is clamped, so the domain check cannot fail
    let p = legendre_eval(k, x.dot(z)).unwrap_or(f64::NAN);
    (2.0 * k as f64 + 1.0) / (4.0 * PI) * p
}
