use serde::{Deserialize, Serialize};

use super::HarmonicCoefficients;
use crate::error::{Error, Result};

/// Filter `h` applied as `h(k/M)` to degree-`k` coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterSpec {
    /// C¹ quadratic spline: 1 on [0, 1/2], `1 - 8(t - 1/2)²` on [1/2, 3/4],
    /// `8(1 - t)²` on [3/4, 1], 0 beyond.
    SplineC1,
    /// 1 on [0, 1], 0 beyond (plain partial sum).
    FourierPartialSum,
}

impl FilterSpec {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            FilterSpec::SplineC1 => {
                if t <= 0.5 {
                    1.0
                } else if t <= 0.75 {
                    1.0 - 8.0 * (t - 0.5) * (t - 0.5)
                } else if t <= 1.0 {
                    8.0 * (1.0 - t) * (1.0 - t)
                } else {
                    0.0
                }
            }
            FilterSpec::FourierPartialSum => {
                if t <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FilterSpec::SplineC1 => "spline_c1",
            FilterSpec::FourierPartialSum => "fourier_partial_sum",
        }
    }
}

impl std::str::FromStr for FilterSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "spline_c1" => Ok(FilterSpec::SplineC1),
            "fourier_partial_sum" => Ok(FilterSpec::FourierPartialSum),
            other => Err(Error::InvalidParameter(format!("unknown filter {other:?}"))),
        }
    }
}

/// Multiplies degree-`k` coefficients by `h(k/M)`.
pub fn filtered_approx(coeffs: &HarmonicCoefficients, filter: FilterSpec, degree: usize) -> Result<HarmonicCoefficients> {
    if coeffs.degree() != degree {
        return Err(Error::DegreeMismatch {
            expected: degree,
            got: coeffs.degree(),
        });
    }
    let factors: Vec<f64> = (0..=degree)
        .map(|k| if degree == 0 { 1.0 } else { filter.eval(k as f64 / degree as f64) })
        .collect();
    Ok(coeffs.scale_degrees(&factors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harmonics::basis_len;

    #[test]
    fn spline_values() {
        let h = FilterSpec::SplineC1;
        for t in [0.0, 0.2, 0.5] {
            assert_eq!(h.eval(t), 1.0);
        }
        assert_eq!(h.eval(0.75), 0.5);
        assert_eq!(h.eval(1.0), 0.0);
        assert_eq!(h.eval(1.3), 0.0);
        for i in 0..=200 {
            let v = h.eval(i as f64 / 100.0);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn filtered_coefficients() {
        let m = 8;
        let c = HarmonicCoefficients::new(m, vec![1.0; basis_len(m)]).unwrap();
        let f = filtered_approx(&c, FilterSpec::SplineC1, m).unwrap();
        for k in 0..=4 {
            assert!(f.degree_block(k).iter().all(|v| *v == 1.0));
        }
        assert!(f.degree_block(6).iter().all(|v| *v == 0.5));
        assert!(f.degree_block(8).iter().all(|v| *v == 0.0));
        let id = filtered_approx(&c, FilterSpec::FourierPartialSum, m).unwrap();
        assert_eq!(id, c);
        assert!(filtered_approx(&c, FilterSpec::SplineC1, 7).is_err());
    }

    #[test]
    fn names_round_trip() {
        for f in [FilterSpec::SplineC1, FilterSpec::FourierPartialSum] {
            assert_eq!(f.name().parse::<FilterSpec>().unwrap(), f);
            let json = serde_json::to_string(&f).unwrap();
            assert_eq!(json, format!("\"{}\"", f.name()));
        }
        assert!("box".parse::<FilterSpec>().is_err());
    }
}
