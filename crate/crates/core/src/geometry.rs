//! Rotationally symmetric weighted manifolds.
//!
//! An interval-sphere model is the warped product `dr² + w(r)² g_{S^{n-1}}`
//! over `[0, L]`, closed up at both ends by regular poles; a circle model is
//! `[0, L)` with periodic identification. Both carry a radial density `φ(r)`
//! and the weighted volume `e^{-φ} dV`.

use alloc::vec::Vec;

use crate::error::{Error, Pole};
use crate::jet::Jet;
use crate::profile::Profile;
use crate::quadrature::gauss8;

/// Tolerance on `| |w'(pole)| - 1 |`.
pub const POLE_SLOPE_TOL: f64 = 1e-4;
/// Tolerance on `|w(pole)|`, `|w''(pole)|` and `|φ'(pole)|`, relative to `L`.
pub const POLE_VALUE_TOL: f64 = 1e-6;
/// Nodes within this many spacings of a pole use series evaluation.
pub const POLE_WINDOW_SPACINGS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    IntervalSphere,
    Circle,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WarpedManifold {
    topology: Topology,
    dim: usize,
    length: f64,
    warp: Option<Profile>,
    density: Profile,
}

impl WarpedManifold {
    /// Warped product over `[0, length]` with regular poles at both ends.
    pub fn interval_sphere(
        dim: usize,
        length: f64,
        warp: Profile,
        density: Profile,
    ) -> Result<Self, Error> {
        if dim < 2 {
            return Err(Error::InvalidModel("interval-sphere dimension must be at least 2"));
        }
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidModel("length must be positive and finite"));
        }
        let model = Self { topology: Topology::IntervalSphere, dim, length, warp: Some(warp), density };
        model.validate()?;
        Ok(model)
    }

    /// Circle of circumference `length`. Its dimension is 1.
    pub fn circle(length: f64, density: Profile) -> Result<Self, Error> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidModel("length must be positive and finite"));
        }
        let model = Self { topology: Topology::Circle, dim: 1, length, warp: None, density };
        model.validate()?;
        Ok(model)
    }

    /// Unit round sphere `S^n` with density `φ`.
    pub fn round_sphere(dim: usize, density: Profile) -> Result<Self, Error> {
        Self::interval_sphere(dim, core::f64::consts::PI, Profile::round_sphere(1.0), density)
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn warp(&self) -> Option<&Profile> {
        self.warp.as_ref()
    }

    pub fn density(&self) -> &Profile {
        &self.density
    }

    /// Same metric, different density.
    pub fn with_density(&self, density: Profile) -> Result<Self, Error> {
        let model = Self { density, ..self.clone() };
        model.validate()?;
        Ok(model)
    }

    /// The metric scaled by `factor²`: `w -> c w(r/c)`, `L -> cL`, `φ -> φ(r/c)`.
    pub fn scaled(&self, factor: f64) -> Result<Self, Error> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::InvalidArgument("scale factor must be positive"));
        }
        let model = Self {
            topology: self.topology,
            dim: self.dim,
            length: self.length * factor,
            warp: self.warp.as_ref().map(|w| {
                Profile::Product(alloc::vec![Profile::Constant(factor), rescale(w, factor)])
            }),
            density: rescale(&self.density, factor),
        };
        model.validate()?;
        Ok(model)
    }

    fn validate(&self) -> Result<(), Error> {
        let l = self.length;
        match self.topology {
            Topology::Circle => {
                let [v0, d0, _] = self.density.derivs(0.0);
                let [v1, d1, _] = self.density.derivs(l);
                if (v0 - v1).abs() > POLE_VALUE_TOL * (1.0 + v0.abs())
                    || (d0 - d1).abs() * l > POLE_VALUE_TOL * (1.0 + d0.abs() * l)
                {
                    return Err(Error::InvalidModel("circle density is not periodic"));
                }
            }
            Topology::IntervalSphere => {
                let warp = self.warp.as_ref().ok_or(Error::InvalidModel("missing warp"))?;
                for (pole, r, sign) in [(Pole::Start, 0.0, 1.0), (Pole::End, l, -1.0)] {
                    let [w, dw, ddw] = warp.derivs(r);
                    if w.abs() > POLE_VALUE_TOL * l {
                        return Err(Error::PoleRegularity { pole, detail: "warp does not vanish", value: w });
                    }
                    if (dw - sign).abs() > POLE_SLOPE_TOL {
                        return Err(Error::PoleRegularity { pole, detail: "warp slope is not unit", value: dw });
                    }
                    if ddw.abs() * l > POLE_VALUE_TOL {
                        return Err(Error::PoleRegularity {
                            pole,
                            detail: "warp second derivative does not vanish",
                            value: ddw,
                        });
                    }
                    let dphi = self.density.derivs(r)[1];
                    if dphi.abs() * l > POLE_VALUE_TOL {
                        return Err(Error::PoleRegularity { pole, detail: "density slope does not vanish", value: dphi });
                    }
                }
                const PROBES: usize = 256;
                for k in 1..PROBES {
                    let r = l * k as f64 / PROBES as f64;
                    let w = warp.value(r);
                    if !(w > 0.0 && w.is_finite()) {
                        return Err(Error::InvalidModel("warp must be positive inside the interval"));
                    }
                    if !self.density.value(r).is_finite() {
                        return Err(Error::InvalidModel("density must be finite"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Weighted density `Vol(S^{n-1}) w^{n-1} e^{-φ}` at `r`; `e^{-φ}` on the circle.
    pub fn radial_density(&self, r: f64) -> f64 {
        let weight = libm::exp(-self.density.value(self.wrap(r)));
        match &self.warp {
            Some(w) => sphere_volume(self.dim - 1) * libm::pow(w.value(r), (self.dim - 1) as f64) * weight,
            None => weight,
        }
    }

    pub(crate) fn wrap(&self, r: f64) -> f64 {
        match self.topology {
            Topology::Circle => {
                let m = libm::fmod(r, self.length);
                if m < 0.0 { m + self.length } else { m }
            }
            Topology::IntervalSphere => r,
        }
    }
}

fn rescale(p: &Profile, factor: f64) -> Profile {
    match p {
        Profile::Constant(c) => Profile::Constant(*c),
        Profile::Sine { amplitude, frequency } => {
            Profile::Sine { amplitude: *amplitude, frequency: frequency / factor }
        }
        Profile::CosPolynomial { coeffs, frequency } => {
            Profile::CosPolynomial { coeffs: coeffs.clone(), frequency: frequency / factor }
        }
        Profile::Spline(s) => Profile::Spline(s.rescaled(factor)),
        Profile::Sum(parts) => Profile::Sum(parts.iter().map(|q| rescale(q, factor)).collect()),
        Profile::Product(parts) => Profile::Product(parts.iter().map(|q| rescale(q, factor)).collect()),
    }
}

/// Volume of the unit sphere `S^m`.
pub fn sphere_volume(m: usize) -> f64 {
    use core::f64::consts::PI;
    let (mut vol, start) = if m.is_multiple_of(2) { (2.0, 0) } else { (2.0 * PI, 1) };
    let mut k = start;
    while k < m {
        k += 2;
        vol *= 2.0 * PI / (k - 1) as f64;
    }
    vol
}

/// Uniform radial grid with measure weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    spacing: f64,
    periodic: bool,
}

impl Grid {
    /// `count` nodes. Interval-sphere grids include both poles; circle grids
    /// place `count` nodes on `[0, L)`.
    pub fn uniform(model: &WarpedManifold, count: usize) -> Result<Self, Error> {
        if count < 4 {
            return Err(Error::InvalidArgument("grid needs at least 4 nodes"));
        }
        let l = model.length();
        let (spacing, periodic) = match model.topology() {
            Topology::IntervalSphere => (l / (count - 1) as f64, false),
            Topology::Circle => (l / count as f64, true),
        };
        let nodes: Vec<f64> = (0..count)
            .map(|i| if !periodic && i == count - 1 { l } else { i as f64 * spacing })
            .collect();
        let mut grid = Self { nodes, weights: Vec::new(), spacing, periodic };
        grid.weights = weighted_measure(model, &grid);
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn pole_window(&self) -> f64 {
        POLE_WINDOW_SPACINGS * self.spacing
    }

    /// Extent of the control cell around node `i`.
    pub fn cell(&self, i: usize) -> (f64, f64) {
        let r = self.nodes[i];
        let half = 0.5 * self.spacing;
        if self.periodic {
            (r - half, r + half)
        } else {
            let end = self.nodes[self.nodes.len() - 1];
            ((r - half).max(0.0), (r + half).min(end))
        }
    }

    /// `Σ q_i u_i v_i`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        self.weights.iter().zip(u).zip(v).map(|((q, a), b)| q * a * b).sum()
    }

    /// `Σ q_i u_i`.
    pub fn integrate(&self, u: &[f64]) -> f64 {
        self.weights.iter().zip(u).map(|(q, a)| q * a).sum()
    }
}

/// Control-volume weights `q_i = ∫_{cell i} Vol(S^{n-1}) w^{n-1} e^{-φ} dr`.
///
/// Each half-cell is integrated with an 8-point Gauss rule, so `Σ q_i`
/// reproduces the total weighted volume to quadrature accuracy, and
/// `Σ q_i u(r_i)` integrates `u` to second order.
pub fn weighted_measure(model: &WarpedManifold, grid: &Grid) -> Vec<f64> {
    (0..grid.len())
        .map(|i| {
            let (lo, hi) = grid.cell(i);
            let mid = grid.nodes()[i];
            let rho = |r: f64| model.radial_density(r);
            gauss8(rho, lo, mid) + gauss8(rho, mid, hi)
        })
        .collect()
}

/// Local Taylor data of the warp around a sample point.
///
/// Away from the poles the expansion is about the point itself. Within the
/// pole window it is about the pole, with the vanishing leading terms of
/// `w`, `w''` and `1 - w'^2` divided out so every quotient is regular.
pub(crate) struct WarpExpansion {
    center: f64,
    offset: f64,
    at_pole: bool,
    dim: usize,
    w: Jet,
    dw: Jet,
    /// `w''/w`
    wdd_over_w: Jet,
    /// `(1 - w'^2)/w^2`
    tangential: Jet,
}

impl WarpExpansion {
    pub(crate) fn new(model: &WarpedManifold, r: f64, window: f64) -> Option<Self> {
        let warp = model.warp()?;
        let l = model.length();
        let pole = if r < window {
            Some(0.0)
        } else if l - r < window {
            Some(l)
        } else {
            None
        };
        let center = pole.unwrap_or(r);
        let w = warp.jet(center);
        let dw = w.derivative();
        let ddw = dw.derivative();
        let one_minus = Jet::constant(1.0) - dw * dw;
        let (wdd_over_w, tangential) = if pole.is_some() {
            let g = w.shift_down();
            (ddw.shift_down() / g, one_minus.shift_down().shift_down() / (g * g))
        } else {
            (ddw / w, one_minus / (w * w))
        };
        Some(Self {
            center,
            offset: r - center,
            at_pole: pole.is_some(),
            dim: model.dim(),
            w,
            dw,
            wdd_over_w,
            tangential,
        })
    }

    /// `g' w'/w` as a jet about the expansion center.
    fn slope_ratio(&self, g: &Profile) -> Jet {
        let dg = g.jet(self.center).derivative();
        if self.at_pole {
            dg.shift_down() * self.dw / self.w.shift_down()
        } else {
            dg * self.dw / self.w
        }
    }

    fn n(&self) -> f64 {
        self.dim as f64
    }

    pub(crate) fn ric_radial(&self) -> Jet {
        self.wdd_over_w.scale(-(self.n() - 1.0))
    }

    pub(crate) fn ric_tangential(&self) -> Jet {
        -self.wdd_over_w + self.tangential.scale(self.n() - 2.0)
    }

    pub(crate) fn scalar(&self) -> Jet {
        let n = self.n();
        self.wdd_over_w.scale(-2.0 * (n - 1.0)) + self.tangential.scale((n - 1.0) * (n - 2.0))
    }

    /// Hessian of a radial function: `(g'', g' w'/w)`.
    pub(crate) fn hessian(&self, g: &Profile) -> (Jet, Jet) {
        let ddg = g.jet(self.center).derivative().derivative();
        (ddg, self.slope_ratio(g))
    }

    /// `Δg = g'' + (n-1) g' w'/w`.
    pub(crate) fn laplacian(&self, g: &Profile) -> Jet {
        let (rr, tan) = self.hessian(g);
        rr + tan.scale(self.n() - 1.0)
    }

    /// Evaluates a jet from this expansion at the sample point.
    pub(crate) fn at(&self, j: &Jet) -> f64 {
        j.eval(self.offset)
    }

    pub(crate) fn slope_at(&self, j: &Jet) -> f64 {
        j.derivative().eval(self.offset)
    }
}

/// Curvature sampled on grid nodes.
///
/// The tangential fields are empty for circle models.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureProfile {
    pub radius: Vec<f64>,
    pub ric_radial: Vec<f64>,
    pub ric_tangential: Vec<f64>,
    pub be_radial: Vec<f64>,
    pub be_tangential: Vec<f64>,
    pub scalar: Vec<f64>,
}

impl CurvatureProfile {
    /// Smaller eigenvalue of `Ric_φ` at node `i`.
    pub fn be_min(&self, i: usize) -> f64 {
        match self.be_tangential.get(i) {
            Some(&t) => self.be_radial[i].min(t),
            None => self.be_radial[i],
        }
    }
}

/// Ricci, Bakry-Émery Ricci and scalar curvature on the grid.
pub fn curvature(model: &WarpedManifold, grid: &Grid) -> CurvatureProfile {
    let nodes = grid.nodes().to_vec();
    let count = nodes.len();
    let mut out = CurvatureProfile {
        radius: nodes.clone(),
        ric_radial: Vec::with_capacity(count),
        ric_tangential: Vec::new(),
        be_radial: Vec::with_capacity(count),
        be_tangential: Vec::new(),
        scalar: Vec::with_capacity(count),
    };
    let phi = model.density();
    for &r in &nodes {
        match WarpExpansion::new(model, r, grid.pole_window()) {
            Some(e) => {
                let (h_rr, h_tan) = e.hessian(phi);
                let ric_rr = e.at(&e.ric_radial());
                let ric_tan = e.at(&e.ric_tangential());
                out.ric_radial.push(ric_rr);
                out.ric_tangential.push(ric_tan);
                out.be_radial.push(ric_rr + e.at(&h_rr));
                out.be_tangential.push(ric_tan + e.at(&h_tan));
                out.scalar.push(e.at(&e.scalar()));
            }
            None => {
                let ddphi = phi.jet(model.wrap(r)).derivative_at(2);
                out.ric_radial.push(0.0);
                out.be_radial.push(ddphi);
                out.scalar.push(0.0);
            }
        }
    }
    out
}

/// Lower bound `Ric_φ >= (n-1) K_eff g` read off the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciLowerBound {
    pub k_eff: f64,
    /// Radius where the smallest eigenvalue of `Ric_φ` is attained.
    pub radius: f64,
    /// `K_eff > 0`, as needed by the eigenvalue bounds.
    pub positive: bool,
}

pub fn be_ricci_lower_bound(model: &WarpedManifold, grid: &Grid) -> Result<RicciLowerBound, Error> {
    if model.topology() == Topology::Circle {
        return Err(Error::Inapplicable("a circle has no (n-1)K normalization"));
    }
    let curv = curvature(model, grid);
    let (idx, min) = (0..curv.radius.len())
        .map(|i| (i, curv.be_min(i)))
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    let k_eff = min / (model.dim() - 1) as f64;
    Ok(RicciLowerBound { k_eff, radius: curv.radius[idx], positive: k_eff > 0.0 })
}

/// Intrinsic diameter. Pole to pole for interval-spheres, half the
/// circumference for circles.
pub fn diameter(model: &WarpedManifold) -> f64 {
    match model.topology() {
        Topology::IntervalSphere => model.length(),
        Topology::Circle => 0.5 * model.length(),
    }
}
