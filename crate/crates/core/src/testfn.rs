//! Comparison functions for the level-set gradient estimate.
//!
//! ```text
//! ξ(t) = (cos²t + 2t sin t cos t + t² - π²/4) / cos²t
//! η(t) = ((4/π)t + (4/π) cos t sin t - 2 sin t) / cos²t
//! ```
//!
//! on `[-π/2, π/2]`. Both are 0/0 at the endpoints; near them the numerator
//! and denominator are expanded about the endpoint, the common factor `s²`
//! is divided out, and the quotient is re-expanded about `t`.
//!
//! They satisfy `½ξ''cos²t - ξ' cos t sin t - ξ = 2cos²t` and
//! `½η''cos²t - η' cos t sin t - η = -sin t`, which is what makes the
//! barriers below touch the test inequality with equality.

use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::Error;
use crate::jet::{Jet, JET_LEN};
use crate::quadrature::integrate;

/// Distance from `±π/2` inside which the endpoint expansion is used.
pub const ENDPOINT_WINDOW: f64 = 0.05;
const DOMAIN_SLACK: f64 = 1e-12;

fn xi_parts(t: Jet) -> (Jet, Jet) {
    let (s, c) = t.sin_cos();
    let num = c * c + t * s * c * 2.0 + t * t - PI * PI / 4.0;
    (num, c * c)
}

fn eta_parts(t: Jet) -> (Jet, Jet) {
    let (s, c) = t.sin_cos();
    let num = t * (4.0 / PI) + c * s * (4.0 / PI) - s * 2.0;
    (num, c * c)
}

fn quotient_jet(parts: fn(Jet) -> (Jet, Jet), t: f64) -> Result<Jet, Error> {
    if !(t.abs() <= FRAC_PI_2 + DOMAIN_SLACK) {
        return Err(Error::Domain { value: t, domain: "[-π/2, π/2]" });
    }
    let endpoint = if FRAC_PI_2 - t < ENDPOINT_WINDOW {
        Some(FRAC_PI_2)
    } else if t + FRAC_PI_2 < ENDPOINT_WINDOW {
        Some(-FRAC_PI_2)
    } else {
        None
    };
    match endpoint {
        None => {
            let (num, den) = parts(Jet::variable(t));
            Ok(num / den)
        }
        Some(e) => {
            let (num, den) = parts(Jet::variable(e));
            let q = num.shift_down().shift_down() / den.shift_down().shift_down();
            Ok(recenter(&q, t - e))
        }
    }
}

/// Re-expands the jet about `x0 + offset`.
fn recenter(j: &Jet, offset: f64) -> Jet {
    let a = j.coeffs();
    let mut out = [0.0; JET_LEN];
    for (k, slot) in out.iter_mut().enumerate() {
        // Σ_{m≥k} C(m, k) a_m offset^{m-k}
        let mut acc = 0.0;
        let mut binom = 1.0;
        let mut pow = 1.0;
        for m in k..JET_LEN {
            acc += binom * a[m] * pow;
            binom = binom * (m + 1) as f64 / (m + 1 - k) as f64;
            pow *= offset;
        }
        *slot = acc;
    }
    Jet::from_coeffs(out)
}

/// Taylor jet of `ξ` about `t`.
pub fn xi_jet(t: f64) -> Result<Jet, Error> {
    quotient_jet(xi_parts, t)
}

/// Taylor jet of `η` about `t`.
pub fn eta_jet(t: f64) -> Result<Jet, Error> {
    quotient_jet(eta_parts, t)
}

pub fn xi(t: f64) -> Result<f64, Error> {
    xi_jet(t).map(|j| j.value())
}

pub fn eta(t: f64) -> Result<f64, Error> {
    eta_jet(t).map(|j| j.value())
}

/// Value and first two derivatives of a barrier at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSample {
    pub z: f64,
    pub dz: f64,
    pub ddz: f64,
}

/// Which comparison function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BarrierKind {
    /// `1 + cη + μδξ`
    Standard { mu: f64 },
    /// `1 + cη + (δ - σc²)ξ`
    Sigma { sigma: f64 },
}

/// `z(t) = 1 + c η(t) + κ ξ(t)` with `c = a/b` and `κ` set by the kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierFamily {
    pub a: f64,
    pub b: f64,
    pub delta: f64,
    pub kind: BarrierKind,
}

impl BarrierFamily {
    /// The standard barrier; requires `a ≥ 0`, `b > 1`, `δ ∈ (0, 1/2]`, `μ ∈ (0, 1]`.
    pub fn standard(a: f64, b: f64, delta: f64, mu: f64) -> Result<Self, Error> {
        check_common(a, b, delta)?;
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(Error::InvalidArgument("μ must lie in (0, 1]"));
        }
        Ok(Self { a, b, delta, kind: BarrierKind::Standard { mu } })
    }

    /// `y(t) = 1 + δξ(t)`, the symmetric-case barrier.
    pub fn symmetric(delta: f64) -> Result<Self, Error> {
        Self::standard(0.0, 1.0 + f64::EPSILON * 4.0, delta, 1.0)
    }

    /// The σ-barrier for the smallest-`a` case; `σ` is an explicit input.
    pub fn sigma(a: f64, b: f64, delta: f64, sigma: f64) -> Result<Self, Error> {
        check_common(a, b, delta)?;
        if !sigma.is_finite() {
            return Err(Error::InvalidArgument("σ must be finite"));
        }
        Ok(Self { a, b, delta, kind: BarrierKind::Sigma { sigma } })
    }

    pub fn c(&self) -> f64 {
        self.a / self.b
    }

    /// Coefficient of `ξ`.
    pub fn xi_coefficient(&self) -> f64 {
        match self.kind {
            BarrierKind::Standard { mu } => mu * self.delta,
            BarrierKind::Sigma { sigma } => self.delta - sigma * self.c() * self.c(),
        }
    }

    /// `[-asin(1/b), asin(1/b)]`
    pub fn domain(&self) -> (f64, f64) {
        let t = libm::asin(1.0 / self.b);
        (-t, t)
    }

    pub fn jet(&self, t: f64) -> Result<Jet, Error> {
        Ok(eta_jet(t)?.scale(self.c()) + xi_jet(t)?.scale(self.xi_coefficient()) + 1.0)
    }

    pub fn value(&self, t: f64) -> Result<f64, Error> {
        self.jet(t).map(|j| j.value())
    }

    pub fn sample(&self, t: f64) -> Result<BarrierSample, Error> {
        let j = self.jet(t)?;
        Ok(BarrierSample { z: j.value(), dz: j.derivative_at(1), ddz: j.derivative_at(2) })
    }

    /// `∫_{-π/2}^{π/2} z dt` by quadrature.
    pub fn integral(&self) -> f64 {
        integrate(|t| self.value(t).expect("inside domain"), -FRAC_PI_2, FRAC_PI_2, 64)
    }

    /// Smallest value of `z` over a uniform sweep of `[-π/2, π/2]`.
    pub fn min_value(&self, samples: usize) -> f64 {
        let samples = samples.max(2);
        (0..samples)
            .map(|k| -FRAC_PI_2 + PI * k as f64 / (samples - 1) as f64)
            .map(|t| self.value(t).expect("inside domain"))
            .fold(f64::INFINITY, f64::min)
    }

    /// The `ξ` coefficient is non-negative and `z > 0` on a dense sweep.
    pub fn is_admissible(&self) -> bool {
        self.xi_coefficient() >= 0.0 && self.min_value(2001) > 0.0
    }
}

fn check_common(a: f64, b: f64, delta: f64) -> Result<(), Error> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::InvalidArgument("a must be non-negative"));
    }
    if !(b > 1.0 && b.is_finite()) {
        return Err(Error::InvalidArgument("b must exceed 1"));
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::InvalidArgument("δ must lie in (0, 1/2]"));
    }
    Ok(())
}

/// `z = 1 + (a/b) η(t) + μ δ ξ(t)`.
pub fn barrier_z(t: f64, a: f64, b: f64, delta: f64, mu: f64) -> Result<f64, Error> {
    BarrierFamily::standard(a, b, delta, mu)?.value(t)
}

/// `z = 1 + c η(t) + (δ - σ c²) ξ(t)`, `c = a/b`.
pub fn barrier_z_case_b2b2(t: f64, a: f64, b: f64, delta: f64, sigma: f64) -> Result<f64, Error> {
    BarrierFamily::sigma(a, b, delta, sigma)?.value(t)
}

/// Right-hand sides of the maximum-principle test inequality at a touching point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestEstimate {
    /// Full form, including the `ż/(4z)` correction term.
    pub full: f64,
    /// Simplified form, present when `ż ≥ 0` and `1 - c ≤ z ≤ 1 + a`.
    pub cor6: Option<f64>,
    /// Symmetric form, present when `a = 0`, `ż sin t ≥ 0` and `z ≤ 1`.
    pub cor7: Option<f64>,
}

pub fn test_estimate_residual(
    sample: BarrierSample,
    t0: f64,
    a: f64,
    c: f64,
    delta: f64,
) -> Result<TestEstimate, Error> {
    let BarrierSample { z, dz, ddz } = sample;
    if !(z > 0.0) {
        return Err(Error::Hypothesis("z(t0) must be positive"));
    }
    let (s, co) = (libm::sin(t0), libm::cos(t0));
    let core = 0.5 * ddz * co * co - dz * co * s - z + 1.0;
    let six = core + c * s - 2.0 * delta * co * co;
    let full = six - dz / (4.0 * z) * co * (dz * co - 2.0 * z * s + 2.0 * s + 2.0 * c);
    let cor6 = (dz >= 0.0 && 1.0 - c <= z && z <= 1.0 + a).then_some(six);
    let cor7 = (a == 0.0 && dz * s >= 0.0 && z <= 1.0).then_some(core - 2.0 * delta * co * co);
    Ok(TestEstimate { full, cor6, cor7 })
}
