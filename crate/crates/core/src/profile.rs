//! Radial profiles: warp functions `w(r)` and densities `φ(r)`, `f(r)`.

use alloc::vec::Vec;

use crate::error::Error;
use crate::jet::Jet;

/// A smooth function of the radial coordinate.
///
/// Closed-form families evaluate exactly to every order through [`Jet`];
/// sampled data goes through a cubic spline.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Constant(f64),
    /// `amplitude * sin(frequency * r)`
    Sine { amplitude: f64, frequency: f64 },
    /// `Σ_k coeffs[k] * cos(frequency * r)^k`
    CosPolynomial { coeffs: Vec<f64>, frequency: f64 },
    Spline(CubicSpline),
    Sum(Vec<Profile>),
    Product(Vec<Profile>),
}

impl Profile {
    /// Warp of the round sphere of the given radius, `ρ sin(r/ρ)`.
    pub fn round_sphere(radius: f64) -> Self {
        Profile::Sine { amplitude: radius, frequency: 1.0 / radius }
    }

    /// `amplitude * cos(frequency * r)`.
    pub fn cosine(amplitude: f64, frequency: f64) -> Self {
        Profile::CosPolynomial { coeffs: alloc::vec![0.0, amplitude], frequency }
    }

    pub fn zero() -> Self {
        Profile::Constant(0.0)
    }

    pub fn value(&self, r: f64) -> f64 {
        match self {
            Profile::Constant(c) => *c,
            Profile::Sine { amplitude, frequency } => amplitude * libm::sin(frequency * r),
            Profile::CosPolynomial { coeffs, frequency } => {
                let x = libm::cos(frequency * r);
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            }
            Profile::Spline(s) => s.value(r),
            Profile::Sum(parts) => parts.iter().map(|p| p.value(r)).sum(),
            Profile::Product(parts) => parts.iter().map(|p| p.value(r)).product(),
        }
    }

    /// Taylor jet about `r`.
    pub fn jet(&self, r: f64) -> Jet {
        match self {
            Profile::Constant(c) => Jet::constant(*c),
            Profile::Sine { amplitude, frequency } => {
                (Jet::variable(r) * *frequency).sin_cos().0 * *amplitude
            }
            Profile::CosPolynomial { coeffs, frequency } => {
                let x = (Jet::variable(r) * *frequency).sin_cos().1;
                coeffs
                    .iter()
                    .rev()
                    .fold(Jet::constant(0.0), |acc, &c| acc * x + c)
            }
            Profile::Spline(s) => s.jet(r),
            Profile::Sum(parts) => parts.iter().fold(Jet::constant(0.0), |acc, p| acc + p.jet(r)),
            Profile::Product(parts) => {
                parts.iter().fold(Jet::constant(1.0), |acc, p| acc * p.jet(r))
            }
        }
    }

    /// Value and first two derivatives.
    pub fn derivs(&self, r: f64) -> [f64; 3] {
        let j = self.jet(r);
        [j.value(), j.derivative_at(1), j.derivative_at(2)]
    }

    /// The same profile plus a constant.
    pub fn shifted(&self, shift: f64) -> Profile {
        match self {
            Profile::Constant(c) => Profile::Constant(c + shift),
            Profile::CosPolynomial { coeffs, frequency } => {
                let mut coeffs = coeffs.clone();
                if coeffs.is_empty() {
                    coeffs.push(0.0);
                }
                coeffs[0] += shift;
                Profile::CosPolynomial { coeffs, frequency: *frequency }
            }
            Profile::Spline(s) => Profile::Spline(s.shifted(shift)),
            Profile::Sum(parts) => {
                let mut parts = parts.clone();
                parts.push(Profile::Constant(shift));
                Profile::Sum(parts)
            }
            other => Profile::Sum(alloc::vec![other.clone(), Profile::Constant(shift)]),
        }
    }

    /// True when the profile is the zero function by construction.
    pub fn is_identically_zero(&self) -> bool {
        match self {
            Profile::Constant(c) => *c == 0.0,
            Profile::Sine { amplitude, .. } => *amplitude == 0.0,
            Profile::CosPolynomial { coeffs, .. } => coeffs.iter().all(|&c| c == 0.0),
            Profile::Spline(s) => s.values.iter().all(|&v| v == 0.0),
            Profile::Sum(parts) => parts.iter().all(Profile::is_identically_zero),
            Profile::Product(parts) => parts.iter().any(Profile::is_identically_zero),
        }
    }
}

/// End condition of a [`CubicSpline`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplineEnd {
    /// Zero second derivative at both ends. This is the odd-reflection
    /// condition, appropriate for a warp sampled up to a pole.
    Natural,
    /// Prescribed first derivatives at the two ends. Zero slopes give the
    /// even-reflection condition, appropriate for densities.
    Clamped { start: f64, end: f64 },
}

/// Interpolating cubic spline on strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>, end: SplineEnd) -> Result<Self, Error> {
        let n = knots.len();
        if n < 3 || values.len() != n {
            return Err(Error::InvalidProfile("spline needs at least 3 matching knots and values"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("spline knots must be strictly increasing, values finite"));
        }
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (values[i + 1] - values[i]) / h[i]).collect();

        // Tridiagonal system for the knot second derivatives.
        let mut lower = alloc::vec![0.0; n];
        let mut diag = alloc::vec![0.0; n];
        let mut upper = alloc::vec![0.0; n];
        let mut rhs = alloc::vec![0.0; n];
        for i in 1..n - 1 {
            lower[i] = h[i - 1];
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            upper[i] = h[i];
            rhs[i] = 6.0 * (slope[i] - slope[i - 1]);
        }
        match end {
            SplineEnd::Natural => {
                diag[0] = 1.0;
                diag[n - 1] = 1.0;
            }
            SplineEnd::Clamped { start, end } => {
                diag[0] = 2.0 * h[0];
                upper[0] = h[0];
                rhs[0] = 6.0 * (slope[0] - start);
                lower[n - 1] = h[n - 2];
                diag[n - 1] = 2.0 * h[n - 2];
                rhs[n - 1] = 6.0 * (end - slope[n - 2]);
            }
        }
        let second = thomas(&lower, &diag, &upper, rhs);
        Ok(Self { knots, values, second })
    }

    fn segment(&self, r: f64) -> usize {
        let idx = self.knots.partition_point(|&k| k <= r);
        idx.clamp(1, self.knots.len() - 1) - 1
    }

    /// Cubic coefficients of segment `i` in powers of `(r - knots[i])`.
    fn cubic(&self, i: usize) -> [f64; 4] {
        let h = self.knots[i + 1] - self.knots[i];
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        [
            y0,
            (y1 - y0) / h - h * (2.0 * m0 + m1) / 6.0,
            m0 / 2.0,
            (m1 - m0) / (6.0 * h),
        ]
    }

    pub fn value(&self, r: f64) -> f64 {
        let i = self.segment(r);
        let p = self.cubic(i);
        let s = r - self.knots[i];
        ((p[3] * s + p[2]) * s + p[1]) * s + p[0]
    }

    pub fn jet(&self, r: f64) -> Jet {
        let i = self.segment(r);
        let p = self.cubic(i);
        let s = r - self.knots[i];
        let mut c = [0.0; crate::jet::JET_LEN];
        c[0] = ((p[3] * s + p[2]) * s + p[1]) * s + p[0];
        c[1] = (3.0 * p[3] * s + 2.0 * p[2]) * s + p[1];
        c[2] = 3.0 * p[3] * s + p[2];
        c[3] = p[3];
        Jet::from_coeffs(c)
    }

    /// The spline of `r -> s(r / factor)`.
    pub(crate) fn rescaled(&self, factor: f64) -> Self {
        Self {
            knots: self.knots.iter().map(|k| k * factor).collect(),
            values: self.values.clone(),
            second: self.second.iter().map(|m| m / (factor * factor)).collect(),
        }
    }

    fn shifted(&self, shift: f64) -> Self {
        Self {
            knots: self.knots.clone(),
            values: self.values.iter().map(|v| v + shift).collect(),
            second: self.second.clone(),
        }
    }
}

/// Solves a diagonally dominant tridiagonal system without pivoting.
fn thomas(lower: &[f64], diag: &[f64], upper: &[f64], mut rhs: Vec<f64>) -> Vec<f64> {
    let n = diag.len();
    let mut c = alloc::vec![0.0; n];
    c[0] = upper[0] / diag[0];
    rhs[0] /= diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = upper[i] / m;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        rhs[i] -= c[i] * rhs[i + 1];
    }
    rhs
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn round_sphere_warp_derivatives() {
        let w = Profile::round_sphere(2.0);
        let [v, d1, d2] = w.derivs(1.0);
        assert!((v - 2.0 * (0.5f64).sin()).abs() < 1e-15);
        assert!((d1 - (0.5f64).cos()).abs() < 1e-15);
        assert!((d2 + 0.5 * (0.5f64).sin()).abs() < 1e-15);
    }

    #[test]
    fn cos_polynomial_matches_value_path() {
        let p = Profile::CosPolynomial { coeffs: alloc::vec![0.2, -0.5, 0.3], frequency: 1.0 };
        for &r in &[0.0, 0.4, 1.7, PI] {
            assert!((p.jet(r).value() - p.value(r)).abs() < 1e-15);
        }
        // d/dr of -0.5 cos r + 0.3 cos^2 r
        let r = 0.9f64;
        let want = 0.5 * r.sin() - 0.6 * r.cos() * r.sin();
        assert!((p.derivs(r)[1] - want).abs() < 1e-14);
    }

    #[test]
    fn product_and_shift() {
        let p = Profile::Product(alloc::vec![
            Profile::round_sphere(1.0),
            Profile::CosPolynomial { coeffs: alloc::vec![1.2, 0.0, -0.2], frequency: 1.0 },
        ]);
        let r = 0.3f64;
        let want = r.sin() * (1.2 - 0.2 * r.cos().powi(2));
        assert!((p.value(r) - want).abs() < 1e-15);
        assert!((p.shifted(0.5).value(r) - want - 0.5).abs() < 1e-15);
        assert!(Profile::zero().is_identically_zero());
        assert!(!Profile::cosine(0.1, 1.0).is_identically_zero());
    }

    #[test]
    fn clamped_spline_reproduces_cubic() {
        let knots: Vec<f64> = (0..9).map(|i| i as f64 * 0.25).collect();
        let f = |x: f64| 1.0 - 2.0 * x + 0.5 * x * x * x;
        let df = |x: f64| -2.0 + 1.5 * x * x;
        let values = knots.iter().map(|&x| f(x)).collect();
        let s = CubicSpline::new(knots, values, SplineEnd::Clamped { start: df(0.0), end: df(2.0) })
            .unwrap();
        for &x in &[0.1, 0.77, 1.31, 1.99] {
            assert!((s.value(x) - f(x)).abs() < 1e-12);
            assert!((s.jet(x).derivative_at(1) - df(x)).abs() < 1e-11);
        }
    }

    #[test]
    fn natural_spline_has_flat_curvature_at_ends() {
        let knots: Vec<f64> = (0..=50).map(|i| i as f64 * PI / 50.0).collect();
        let values = knots.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::new(knots, values, SplineEnd::Natural).unwrap();
        assert!(s.jet(0.0).derivative_at(2).abs() < 1e-14);
        assert!((s.jet(0.0).derivative_at(1) - 1.0).abs() < 1e-3);
        assert!((s.value(1.0) - 1f64.sin()).abs() < 1e-5);
    }

    #[test]
    fn spline_rejects_bad_knots() {
        let r = CubicSpline::new(alloc::vec![0.0, 1.0, 1.0], alloc::vec![0.0; 3], SplineEnd::Natural);
        assert!(r.is_err());
    }
}
