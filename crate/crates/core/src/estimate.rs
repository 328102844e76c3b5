//! Normalized eigenfunctions and the pointwise checks run on them:
//! the gradient estimate, the level-set maximum `Z(t)`, barrier
//! dominance and the length-integral chain.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use crate::error::Error;
use crate::quadrature::integrate;
use crate::spectral::EigenField;

pub const DEFAULT_B: f64 = 1.01;
pub const DEFAULT_BINS: usize = 200;

/// `v = (u - (1-k)/2) / ((1+k)/2)` after scaling `u` to `max u = 1`, `min u = -k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedEigenfunction {
    pub mode: usize,
    pub values: Vec<f64>,
    /// `|∇v|²` at the same points.
    pub grad_sq: Vec<f64>,
    pub lambda: f64,
    pub k: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha: f64,
    pub delta: f64,
    /// Relative residual of `Δ_φ v + λ(v + a) = 0` on the grid.
    pub residual: f64,
}

/// `alpha` is `(n-1)K/2` for the lower bound `K` in use.
pub fn normalize(field: &EigenField, lambda: f64, b: f64, alpha: f64) -> Result<NormalizedEigenfunction, Error> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument("λ must be positive"));
    }
    if !(b > 1.0) {
        return Err(Error::InvalidArgument("b must exceed 1"));
    }
    let (lo, hi) = field
        .points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.value), hi.max(p.value)));
    let spread = hi - lo;
    if !(spread > 1e-12 * hi.abs().max(lo.abs())) {
        return Err(Error::DegenerateEigenfunction);
    }
    let (sign, top, bottom) = if -lo > hi { (-1.0, -lo, -hi) } else { (1.0, hi, lo) };
    let k = -bottom / top;
    if !(k > 0.0) {
        return Err(Error::Hypothesis("eigenfunction must change sign"));
    }
    let k = k.min(1.0);
    let half = 0.5 * (1.0 + k);
    let shift = 0.5 * (1.0 - k);
    let scale = sign / top;
    let values = field.points.iter().map(|p| (scale * p.value - shift) / half).collect();
    let grad_sq = field.points.iter().map(|p| p.grad_sq * (scale / half) * (scale / half)).collect();
    let a = (1.0 - k) / (1.0 + k);
    Ok(NormalizedEigenfunction {
        mode: field.mode,
        values,
        grad_sq,
        lambda,
        k,
        a,
        b,
        c: a / b,
        alpha,
        delta: alpha / lambda,
        // v + a is a multiple of u, so the relative residual carries over.
        residual: field.operator_residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientEstimate {
    /// `max |∇v|²/(b² - v²)`
    pub max_ratio: f64,
    /// `λ(1 + a)`
    pub bound: f64,
    pub margin: f64,
}

pub fn gradient_estimate_margin(v: &NormalizedEigenfunction) -> GradientEstimate {
    let b2 = v.b * v.b;
    let max_ratio = v
        .values
        .iter()
        .zip(&v.grad_sq)
        .map(|(x, g)| g / (b2 - x * x))
        .fold(0.0, f64::max);
    let bound = v.lambda * (1.0 + v.a);
    GradientEstimate { max_ratio, bound, margin: bound - max_ratio }
}

/// Per-bin maxima of `|∇v|²/(λ(b² - v²))` over level sets `t = asin(v/b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZProfile {
    pub t_max: f64,
    pub edges: Vec<f64>,
    /// `None` where no sample fell in the bin.
    pub values: Vec<Option<f64>>,
    /// The `t` of the sample attaining each bin's maximum.
    pub argmax: Vec<Option<f64>>,
}

impl ZProfile {
    pub fn filled(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.argmax.iter().zip(&self.values).filter_map(|(t, z)| Some(((*t)?, (*z)?)))
    }
}

#[allow(non_snake_case)]
pub fn compute_Z(v: &NormalizedEigenfunction, bins: usize) -> Result<ZProfile, Error> {
    if bins == 0 {
        return Err(Error::InvalidArgument("need at least one bin"));
    }
    let t_max = libm::asin(1.0 / v.b);
    let width = 2.0 * t_max / bins as f64;
    let edges = (0..=bins).map(|i| -t_max + width * i as f64).collect();
    let mut values: Vec<Option<f64>> = alloc::vec![None; bins];
    let mut argmax: Vec<Option<f64>> = alloc::vec![None; bins];
    let b2 = v.b * v.b;
    for (x, g) in v.values.iter().zip(&v.grad_sq) {
        let t = libm::asin(x / v.b);
        let idx = (((t + t_max) / width) as usize).min(bins - 1);
        let q = g / (v.lambda * (b2 - x * x));
        if values[idx].is_none_or(|cur| q > cur) {
            values[idx] = Some(q);
            argmax[idx] = Some(t);
        }
    }
    if values.iter().all(Option::is_none) {
        return Err(Error::Degenerate("no sample fell in any bin"));
    }
    Ok(ZProfile { t_max, edges, values, argmax })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dominance {
    /// `min (z(t) - Z(t))` over non-empty bins.
    pub margin: f64,
    pub worst_t: f64,
    pub bins_checked: usize,
    pub margins: Vec<Option<f64>>,
}

/// Compares `Z` against `z` at each bin's maximizing `t`.
pub fn barrier_dominance_check<F: FnMut(f64) -> f64>(z_profile: &ZProfile, mut z: F) -> Dominance {
    let margins: Vec<Option<f64>> = z_profile
        .argmax
        .iter()
        .zip(&z_profile.values)
        .map(|(t, zz)| match (t, zz) {
            (Some(t), Some(zz)) => Some(z(*t) - zz),
            _ => None,
        })
        .collect();
    let (mut margin, mut worst_t, mut bins_checked) = (f64::INFINITY, 0.0, 0);
    for (m, t) in margins.iter().zip(&z_profile.argmax) {
        if let (Some(m), Some(t)) = (m, t) {
            bins_checked += 1;
            if *m < margin {
                margin = *m;
                worst_t = *t;
            }
        }
    }
    Dominance { margin, worst_t, bins_checked, margins }
}

/// `√λ·d ≥ ∫ dt/√z ≥ (π³/∫ z)^{1/2}` over `[-π/2, π/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LengthLedger {
    pub sqrt_lambda_d: f64,
    pub inverse_root_integral: f64,
    pub holder_bound: f64,
    pub z_integral: f64,
    /// `√λ·d - ∫ dt/√z`
    pub length_margin: f64,
    /// `∫ dt/√z - (π³/∫ z)^{1/2}`, non-negative by Hölder.
    pub holder_margin: f64,
    /// `√λ·d - (π³/∫ z)^{1/2}`
    pub total_margin: f64,
}

pub fn length_integral_check<F: Fn(f64) -> f64>(lambda: f64, d: f64, z: F) -> Result<LengthLedger, Error> {
    if !(lambda > 0.0 && d > 0.0) {
        return Err(Error::InvalidArgument("λ and d must be positive"));
    }
    let mut positive = true;
    let inverse_root_integral = integrate(
        |t| {
            let v = z(t);
            positive &= v > 0.0;
            1.0 / libm::sqrt(v)
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        64,
    );
    if !positive {
        return Err(Error::Hypothesis("barrier must be positive on [-π/2, π/2]"));
    }
    let z_integral = integrate(&z, -FRAC_PI_2, FRAC_PI_2, 64);
    let holder_bound = libm::sqrt(PI * PI * PI / z_integral);
    let sqrt_lambda_d = libm::sqrt(lambda) * d;
    Ok(LengthLedger {
        sqrt_lambda_d,
        inverse_root_integral,
        holder_bound,
        z_integral,
        length_margin: sqrt_lambda_d - inverse_root_integral,
        holder_margin: inverse_root_integral - holder_bound,
        total_margin: sqrt_lambda_d - holder_bound,
    })
}
