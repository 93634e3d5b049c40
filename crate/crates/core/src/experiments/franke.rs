//! Franke-type test function plus a spherical cap.

use std::f64::consts::PI;

use crate::harmonics::SpherePoint;

/// Cap centre `(-1/2, -1/2, 1/sqrt(2))`.
pub fn cap_center() -> SpherePoint {
    SpherePoint::new(-0.5, -0.5, std::f64::consts::FRAC_1_SQRT_2).expect("unit vector")
}

/// Angular radius of the cap.
pub const CAP_RADIUS: f64 = 0.5;

/// Four-Gaussian Franke-type function, with the second term's linear
/// `x2` and `x3` exponents kept as published.
pub fn franke_eval(x: &SpherePoint) -> f64 {
    let [x1, x2, x3] = x.coords();
    let (a, b, c) = (9.0 * x1, 9.0 * x2, 9.0 * x3);
    0.75 * (-(a - 2.0).powi(2) / 4.0 - (b - 2.0).powi(2) / 4.0 - (c - 2.0).powi(2) / 4.0).exp()
        + 0.75 * (-(a + 1.0).powi(2) / 49.0 - (b + 1.0) / 49.0 - (c + 1.0) / 10.0).exp()
        + 0.5 * (-(a - 7.0).powi(2) / 4.0 - (b - 3.0).powi(2) / 4.0 - (c - 5.0).powi(2) / 4.0).exp()
        - 0.2 * (-(a - 4.0).powi(2) - (b - 7.0).powi(2) - (c - 5.0).powi(2)).exp()
}

/// `2 cos(pi arccos(x_c . x))` inside the cap, 0 outside.
pub fn cap_eval(x: &SpherePoint) -> f64 {
    let d = cap_center().dot(x);
    if d >= CAP_RADIUS.cos() {
        2.0 * (PI * d.acos()).cos()
    } else {
        0.0
    }
}

pub fn franke_cap_eval(x: &SpherePoint) -> f64 {
    franke_eval(x) + cap_eval(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cap_centre_and_edge() {
        assert!((cap_eval(&cap_center()) - 2.0).abs() < 1e-12);
        // a point at angular distance exactly 0.5 from the centre
        let c = cap_center();
        let [c1, c2, c3] = c.coords();
        // tangent direction orthogonal to c
        let u = SpherePoint::new(1.0, -1.0, 0.0).unwrap();
        let [u1, u2, u3] = u.coords();
        let (s, co) = CAP_RADIUS.sin_cos();
        let edge = SpherePoint::new(co * c1 + s * u1, co * c2 + s * u2, co * c3 + s * u3).unwrap();
        let v = cap_eval(&edge);
        assert!(v.abs() < 1e-7, "edge value {v}");
        let far = SpherePoint::new(0.5, 0.5, -0.7).unwrap();
        assert_eq!(cap_eval(&far), 0.0);
    }

    #[test]
    fn franke_direct_substitution() {
        let x = SpherePoint::new(1.0, 0.0, 0.0).unwrap();
        // x = (1, 0, 0): 9x = (9, 0, 0)
        let t1 = 0.75 * (-(49.0f64) / 4.0 - 1.0 - 1.0).exp();
        let t2 = 0.75 * (-(100.0f64) / 49.0 - 1.0 / 49.0 - 1.0 / 10.0).exp();
        let t3 = 0.5 * (-(1.0f64) - 9.0 / 4.0 - 25.0 / 4.0).exp();
        let t4 = -0.2 * (-(25.0f64) - 49.0 - 25.0).exp();
        let want = t1 + t2 + t3 + t4;
        assert!((franke_eval(&x) - want).abs() < 1e-15);
        assert!((franke_cap_eval(&x) - want).abs() < 1e-15);
    }
}
