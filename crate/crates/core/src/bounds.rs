//! Closed-form eigenvalue and diameter bounds.
//!
//! The rational constants are kept exact. Threshold tests compare an
//! `f64` against a rational by cross-multiplying integer mantissas, so no
//! rounding enters the case split.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_integer::Roots;
use num_rational::Ratio;

use crate::error::Error;

pub type Q = Ratio<i64>;

/// 31/100, the coefficient of `(n-1)K` in the diameter-eigenvalue bound.
pub fn ling_coefficient() -> Q {
    Q::new(31, 100)
}

/// 31/50, the same constant as a multiple of `α = (n-1)K/2`.
pub fn alpha_floor() -> Q {
    Q::new(31, 50)
}

/// 153/200 = 0.765
pub fn large_a_threshold() -> Q {
    Q::new(153, 200)
}

/// 153/100 = 1.53
pub fn small_a_ratio() -> Q {
    Q::new(153, 100)
}

pub fn to_f64(q: Q) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn split(x: f64) -> (i128, i32) {
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = (bits & ((1u64 << 52) - 1)) as i128;
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1i128 << 52), exp - 1075)
    }
}

/// Exact `x·p ≥ y·q` for finite `x, y ≥ 0` and small positive integers `p, q`.
fn products_ge(x: f64, p: i64, y: f64, q: i64) -> bool {
    debug_assert!(x >= 0.0 && y >= 0.0 && p > 0 && q > 0 && p < 1 << 16 && q < 1 << 16);
    let (mx, ex) = split(x);
    let (my, ey) = split(y);
    let (lhs, rhs) = (mx * p as i128, my * q as i128);
    if lhs == 0 || rhs == 0 {
        return rhs == 0;
    }
    // Both sides are below 2^70; beyond a 2^60 exponent gap the larger exponent wins.
    let shift = ex - ey;
    if shift >= 60 {
        true
    } else if shift <= -60 {
        false
    } else if shift >= 0 {
        lhs << shift >= rhs
    } else {
        lhs >= rhs << -shift
    }
}

/// Exact `x ≥ q` for `x ≥ 0` and a positive rational with small terms.
pub fn ge_exact(x: f64, q: Q) -> bool {
    products_ge(x, *q.denom(), 1.0, *q.numer())
}

/// Exact `x ≥ q·y` for non-negative `x, y`.
pub fn ge_scaled_exact(x: f64, q: Q, y: f64) -> bool {
    products_ge(x, *q.denom(), y, *q.numer())
}

fn check_nk(n: usize, k: f64) -> Result<(), Error> {
    if n < 2 {
        return Err(Error::Inapplicable("dimension must be at least 2"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Inapplicable("needs K > 0"));
    }
    Ok(())
}

fn check_d(d: f64) -> Result<(), Error> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::Inapplicable("needs a positive finite diameter"));
    }
    Ok(())
}

/// `λ ≥ (n-1)K`.
pub fn lichnerowicz_be(n: usize, k: f64) -> Result<f64, Error> {
    check_nk(n, k)?;
    Ok((n - 1) as f64 * k)
}

/// `λ ≥ π²/d² + (31/100)(n-1)K`.
pub fn ling_be_bound(n: usize, k: f64, d: f64) -> Result<f64, Error> {
    check_nk(n, k)?;
    check_d(d)?;
    Ok(PI * PI / (d * d) + to_f64(ling_coefficient()) * (n - 1) as f64 * k)
}

/// `λ ≥ π²/d² + μα`, valid for `a > 0`, `μ ∈ (0, 1]` and `μδ ≤ 4a/π²`.
pub fn prop8_bound(n: usize, k: f64, d: f64, mu: f64, a: f64, delta: f64) -> Result<f64, Error> {
    check_nk(n, k)?;
    check_d(d)?;
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Inapplicable("needs 0 < a < 1"));
    }
    if !(mu > 0.0 && mu <= 1.0) {
        return Err(Error::Inapplicable("needs μ in (0, 1]"));
    }
    // A few ulps of slack so that μ = 4a/(π²δ) passes after rounding.
    let cap = 4.0 * a / (PI * PI);
    if mu * delta > cap * (1.0 + 4.0 * f64::EPSILON) {
        return Err(Error::Inapplicable("needs μδ ≤ 4a/π²"));
    }
    Ok(PI * PI / (d * d) + mu * 0.5 * (n - 1) as f64 * k)
}

/// `λ ≥ π²/d² + (1/2)(n-1)K`, the symmetric case `a = 0`.
pub fn prop9_bound(n: usize, k: f64, d: f64) -> Result<f64, Error> {
    check_nk(n, k)?;
    check_d(d)?;
    Ok(PI * PI / (d * d) + 0.5 * (n - 1) as f64 * k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LingCase {
    A,
    B1,
    B2a,
    B2b1,
    B2b2,
}

impl LingCase {
    pub const ALL: [LingCase; 5] = [LingCase::A, LingCase::B1, LingCase::B2a, LingCase::B2b1, LingCase::B2b2];

    pub fn label(self) -> &'static str {
        match self {
            LingCase::A => "A",
            LingCase::B1 => "B-1",
            LingCase::B2a => "B-2-a",
            LingCase::B2b1 => "B-2-b1",
            LingCase::B2b2 => "B-2-b2",
        }
    }
}

/// Outcome of the case split for given `(a, δ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseVerdict {
    pub case: LingCase,
    /// Barrier weight used in the case, if the case goes through the `μ` barrier.
    pub mu: Option<f64>,
    /// Additive constant in `λ ≥ π²/d² + m·α`, as the multiple `m`.
    pub multiple: f64,
}

/// Case split for `a ∈ [0, 1)`, `δ ∈ (0, 1/2]`.
pub fn ling_case(a: f64, delta: f64) -> Result<CaseVerdict, Error> {
    if !(0.0..1.0).contains(&a) {
        return Err(Error::Domain { value: a, domain: "a in [0, 1)" });
    }
    if !(delta > 0.0 && delta <= 0.5) {
        return Err(Error::Domain { value: delta, domain: "δ in (0, 1/2]" });
    }
    let pi2 = PI * PI;
    let verdict = if a == 0.0 {
        CaseVerdict { case: LingCase::A, mu: Some(1.0), multiple: 1.0 }
    } else if pi2 * delta / 4.0 <= a {
        CaseVerdict { case: LingCase::B1, mu: Some(1.0), multiple: 1.0 }
    } else if ge_exact(a, large_a_threshold()) {
        // μ-barrier plus λ ≥ 2α gives λ ≥ π²/d² + (8a/π²)α.
        let mu = 4.0 * a / (pi2 * delta);
        CaseVerdict { case: LingCase::B2a, mu: Some(mu), multiple: 8.0 * a / pi2 }
    } else if ge_scaled_exact(a, small_a_ratio(), delta) {
        let mu = 4.0 * a / (pi2 * delta);
        CaseVerdict { case: LingCase::B2b1, mu: Some(mu), multiple: mu }
    } else {
        CaseVerdict { case: LingCase::B2b2, mu: None, multiple: to_f64(alpha_floor()) }
    };
    Ok(verdict)
}

/// `π √((n-1)/γ)`
pub fn myers_upper(n: usize, gamma: f64) -> Result<f64, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument("dimension must be at least 2"));
    }
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument("γ must be positive"));
    }
    Ok(PI * libm::sqrt((n - 1) as f64 / gamma))
}

/// From `2γ ≥ π²/d² + (31/100)γ`: `d√γ ≥ π/√(2 - 31/100)`. Returns the
/// reduced pair `(p, q)` with `d√γ ≥ pπ/q`, computed in integers only.
pub fn derive_diameter_bound() -> (i64, i64) {
    let slack = Q::from_integer(2) - ling_coefficient();
    let (num, den) = (*slack.numer(), *slack.denom());
    let (rn, rd) = (num.sqrt(), den.sqrt());
    assert!(rn * rn == num && rd * rd == den, "2 - 31/100 is a rational square");
    let r = Q::new(rd, rn);
    (*r.numer(), *r.denom())
}

/// `10π / (13√γ)`
pub fn soliton_diameter_lower(gamma: f64) -> Result<f64, Error> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidArgument("γ must be positive"));
    }
    let (p, q) = derive_diameter_bound();
    Ok(p as f64 * PI / (q as f64 * libm::sqrt(gamma)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GapVerdict {
    MustBeEinstein,
    NontrivialSolitonPossible,
}

impl GapVerdict {
    pub fn label(self) -> &'static str {
        match self {
            GapVerdict::MustBeEinstein => "must-be-Einstein",
            GapVerdict::NontrivialSolitonPossible => "nontrivial-soliton-possible",
        }
    }
}

/// A shrinker with `d < 10π/(13√γ)` is Einstein; equality is not enough.
pub fn gap_classifier(d: f64, gamma: f64) -> Result<GapVerdict, Error> {
    check_d(d)?;
    let lower = soliton_diameter_lower(gamma)?;
    Ok(if d < lower { GapVerdict::MustBeEinstein } else { GapVerdict::NontrivialSolitonPossible })
}

/// Nontrivial compact shrinkers are only claimed in dimension four and up.
pub fn soliton_dimension_note(n: usize) -> Option<&'static str> {
    (n < 4).then_some("soliton diameter statement is made for n >= 4; lower-dimensional result is informational")
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundEntry {
    pub name: &'static str,
    pub formula: &'static str,
    pub value: f64,
    /// `measured - value`
    pub margin: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundInputs {
    pub n: usize,
    pub k: f64,
    pub d: f64,
    pub gamma: Option<f64>,
    pub a: Option<f64>,
    pub delta: Option<f64>,
}

/// Every bound that applies to the inputs, with margins against `measured`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub measured: Option<f64>,
    pub case: Option<CaseVerdict>,
    pub entries: Vec<BoundEntry>,
    pub notes: Vec<&'static str>,
}

impl BoundReport {
    pub fn new(inputs: BoundInputs, measured: Option<f64>) -> Self {
        let BoundInputs { n, k, d, gamma, a, delta } = inputs.clone();
        let mut entries = Vec::new();
        let mut push = |name, formula, r: Result<f64, Error>| {
            if let Ok(value) = r {
                entries.push(BoundEntry { name, formula, value, margin: measured.map(|m| m - value) });
            }
        };
        push("lichnerowicz", "(n-1)K", lichnerowicz_be(n, k));
        push("ling", "pi^2/d^2 + (31/100)(n-1)K", ling_be_bound(n, k, d));
        let case = match (a, delta) {
            (Some(a), Some(delta)) => ling_case(a, delta).ok(),
            _ => None,
        };
        if a == Some(0.0) {
            push("symmetric", "pi^2/d^2 + (1/2)(n-1)K", prop9_bound(n, k, d));
        }
        if let (Some(a), Some(delta), Some(CaseVerdict { mu: Some(mu), .. })) = (a, delta, case) {
            if a > 0.0 {
                push("barrier", "pi^2/d^2 + mu(n-1)K/2", prop8_bound(n, k, d, mu, a, delta));
            }
        }
        let mut notes = Vec::new();
        if let Some(g) = gamma {
            push("myers", "pi sqrt((n-1)/gamma)", myers_upper(n, g));
            push("soliton-diameter", "10 pi / (13 sqrt(gamma))", soliton_diameter_lower(g));
            notes.extend(soliton_dimension_note(n));
        }
        Self { inputs, measured, case, entries, notes }
    }

    pub fn get(&self, name: &str) -> Option<&BoundEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        assert_eq!(lichnerowicz_be(2, 1.0).unwrap(), 1.0);
        assert!((lichnerowicz_be(4, 1.0 / 3.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(lichnerowicz_be(3, 0.0), Err(Error::Inapplicable(_))));
        assert!((ling_be_bound(2, 1.0, PI).unwrap() - 1.31).abs() < 1e-14);
        assert!((ling_be_bound(5, 1.0, PI).unwrap() - 2.24).abs() < 1e-14);
        assert!((ling_be_bound(2, 0.5, PI).unwrap() - 1.155).abs() < 1e-14);
        assert!((prop9_bound(2, 1.0, PI).unwrap() - 1.5).abs() < 1e-14);
        assert!((prop9_bound(3, 1.0, PI).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn barrier_bound_hypotheses() {
        assert!((prop8_bound(2, 1.0, PI, 1.0, 0.9, 0.3).unwrap() - 1.5).abs() < 1e-14);
        assert!(prop8_bound(2, 1.0, PI, 1.0, 0.1, 0.3).is_err());
        for &(a, d) in &[(0.3, 0.4), (0.5, 0.3), (0.01, 0.5), (0.7, 0.29)] {
            let mu = 4.0 * a / (PI * PI * d);
            if mu <= 1.0 {
                assert!(prop8_bound(3, 1.0, 2.0, mu, a, d).is_ok());
            }
        }
    }

    #[test]
    fn case_examples() {
        let v = ling_case(0.0, 0.3).unwrap();
        assert_eq!((v.case, v.multiple), (LingCase::A, 1.0));
        assert_eq!(ling_case(0.8, 0.25).unwrap().case, LingCase::B1);
        let v = ling_case(0.5, 0.3).unwrap();
        assert_eq!(v.case, LingCase::B2b1);
        assert!((v.mu.unwrap() - 0.675_474_557_051_9).abs() < 1e-9);
        assert_eq!(ling_case(0.78, 0.4).unwrap().case, LingCase::B2a);
        assert_eq!(ling_case(0.1, 0.4).unwrap().case, LingCase::B2b2);
        assert!(ling_case(1.0, 0.3).is_err());
        assert!(ling_case(0.5, 0.0).is_err());
    }

    #[test]
    fn exact_thresholds() {
        let below = |x: f64| f64::from_bits(x.to_bits() - 1);
        // The nearest double to 0.765 lies just above 153/200.
        assert!(ge_exact(0.765, large_a_threshold()));
        assert!(!ge_exact(below(0.765), large_a_threshold()));
        assert!(ge_exact(0.5, Q::new(1, 2)));
        assert!(!ge_exact(below(0.5), Q::new(1, 2)));
        assert!(ge_scaled_exact(0.75, Q::new(3, 2), 0.5));
        assert!(!ge_scaled_exact(below(0.75), Q::new(3, 2), 0.5));
        assert!(ge_scaled_exact(1e-300, Q::new(3, 2), 1e-310));
        assert!(!ge_scaled_exact(1e-310, Q::new(3, 2), 1e-300));
        // 1.53 · 0.25 exactly on the boundary lands in B-2-b1.
        assert_eq!(ling_case(0.3825, 0.25).unwrap().case, LingCase::B2b1);
    }

    #[test]
    fn diameter_constants() {
        assert_eq!(derive_diameter_bound(), (10, 13));
        assert_eq!(soliton_diameter_lower(1.0).unwrap(), 10.0 * PI / 13.0);
        assert!((soliton_diameter_lower(4.0).unwrap() - 5.0 * PI / 13.0).abs() < 1e-15);
        assert!((soliton_diameter_lower(100.0).unwrap() - PI / 13.0).abs() < 1e-15);
        assert!((myers_upper(2, 1.0).unwrap() - PI).abs() < 1e-15);
        assert!((myers_upper(4, 3.0).unwrap() - PI).abs() < 1e-15);
    }

    #[test]
    fn gap_is_strict() {
        assert_eq!(gap_classifier(2.0, 1.0).unwrap(), GapVerdict::MustBeEinstein);
        assert_eq!(gap_classifier(3.0, 1.0).unwrap(), GapVerdict::NontrivialSolitonPossible);
        let edge = soliton_diameter_lower(1.0).unwrap();
        assert_eq!(gap_classifier(edge, 1.0).unwrap(), GapVerdict::NontrivialSolitonPossible);
    }

    #[test]
    fn report_margins() {
        let inputs = BoundInputs { n: 2, k: 1.0, d: PI, a: Some(0.0), delta: Some(0.25), gamma: Some(1.0) };
        let r = BoundReport::new(inputs, Some(2.0));
        assert!((r.get("lichnerowicz").unwrap().margin.unwrap() - 1.0).abs() < 1e-15);
        assert!((r.get("symmetric").unwrap().margin.unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(r.case.unwrap().case, LingCase::A);
        assert_eq!(r.notes.len(), 1);
    }
}
