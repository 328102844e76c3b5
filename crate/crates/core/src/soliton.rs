//! Gradient shrinking soliton checks for rotationally symmetric candidates.
//!
//! A candidate `(g, f, γ)` solves `Ric - γg + Hess f = 0`. For a warped
//! product and radial `f` this splits into a radial and a tangential
//! equation; the identities derived from it are checked separately so a
//! failing candidate shows which consequence breaks.

use alloc::vec::Vec;

use crate::error::{Error, Pole};
use crate::geometry::{Grid, Topology, WarpExpansion, WarpedManifold, POLE_VALUE_TOL};
use crate::profile::Profile;
use crate::quadrature::integrate;
use crate::spectral::{spectrum_contains, Membership};

#[derive(Debug, Clone, PartialEq)]
pub struct SolitonCandidate {
    model: WarpedManifold,
    f: Profile,
    gamma: f64,
}

impl SolitonCandidate {
    pub fn new(model: WarpedManifold, f: Profile, gamma: f64) -> Result<Self, Error> {
        if model.topology() != Topology::IntervalSphere {
            return Err(Error::Inapplicable("soliton checks need an interval-sphere model"));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument("γ must be positive"));
        }
        let l = model.length();
        for (pole, r) in [(Pole::Start, 0.0), (Pole::End, l)] {
            let df = f.derivs(r)[1];
            if df.abs() * l > POLE_VALUE_TOL {
                return Err(Error::PoleRegularity { pole, detail: "potential slope does not vanish", value: df });
            }
        }
        Ok(Self { model, f, gamma })
    }

    pub fn model(&self) -> &WarpedManifold {
        &self.model
    }

    pub fn potential(&self) -> &Profile {
        &self.f
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn with_potential(&self, f: Profile) -> Result<Self, Error> {
        Self::new(self.model.clone(), f, self.gamma)
    }

    fn expansions<'a>(&'a self, grid: &'a Grid) -> impl Iterator<Item = (f64, WarpExpansion)> + 'a {
        grid.nodes().iter().map(move |&r| {
            let e = WarpExpansion::new(&self.model, r, grid.pole_window()).expect("interval-sphere has a warp");
            (r, e)
        })
    }
}

/// Sup norms of `Ric_rr - γ + f''` and `Ric_tan - γ + f'w'/w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonResidual {
    pub radial: f64,
    pub tangential: f64,
}

impl SolitonResidual {
    pub fn max(&self) -> f64 {
        self.radial.max(self.tangential)
    }
}

pub fn soliton_residual(c: &SolitonCandidate, grid: &Grid) -> SolitonResidual {
    let mut out = SolitonResidual { radial: 0.0, tangential: 0.0 };
    for (_, e) in c.expansions(grid) {
        let (h_rr, h_tan) = e.hessian(&c.f);
        let rr = e.at(&e.ric_radial()) - c.gamma + e.at(&h_rr);
        let tan = e.at(&e.ric_tangential()) - c.gamma + e.at(&h_tan);
        out.radial = out.radial.max(rr.abs());
        out.tangential = out.tangential.max(tan.abs());
    }
    out
}

/// `f + s` with `∫ (f+s) e^{-(f+s)} dV = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedPotential {
    pub shift: f64,
    pub f: Profile,
}

/// The constraint is `e^{-s}(∫ f e^{-f} + s ∫ e^{-f}) = 0`, so the shift is
/// a ratio of two weighted integrals.
pub fn normalize_f(c: &SolitonCandidate, grid: &Grid) -> ShiftedPotential {
    let model = &c.model;
    let warp = model.warp().expect("interval-sphere has a warp");
    let exponent = (model.dim() - 1) as f64;
    let weight = |r: f64| libm::pow(warp.value(r), exponent) * libm::exp(-c.f.value(r));
    let panels = grid.len().max(64);
    let l = model.length();
    let mass = integrate(weight, 0.0, l, panels);
    let moment = integrate(|r| c.f.value(r) * weight(r), 0.0, l, panels);
    let shift = -moment / mass;
    ShiftedPotential { shift, f: c.f.shifted(shift) }
}

/// Residuals of the identities that follow from the soliton equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonIdentities {
    /// `sup |R' - 2 Ric_rr f'|`, i.e. `∇R = 2 Ric(∇f)`.
    pub bianchi: f64,
    /// Standard deviation of `R - 2γf + |∇f|²` over the grid nodes.
    pub constancy: f64,
    /// `sup |R - nγ + Δf|`.
    pub trace: f64,
}

pub fn hamilton_identities(c: &SolitonCandidate, grid: &Grid) -> HamiltonIdentities {
    let n = c.model.dim() as f64;
    let mut bianchi = 0.0f64;
    let mut trace = 0.0f64;
    let mut level = Vec::with_capacity(grid.len());
    for (r, e) in c.expansions(grid) {
        let [f, df, _] = c.f.derivs(r);
        let scalar = e.scalar();
        let big_r = e.at(&scalar);
        bianchi = bianchi.max((e.slope_at(&scalar) - 2.0 * e.at(&e.ric_radial()) * df).abs());
        trace = trace.max((big_r - n * c.gamma + e.at(&e.laplacian(&c.f))).abs());
        level.push(big_r - 2.0 * c.gamma * f + df * df);
    }
    let mean = level.iter().sum::<f64>() / level.len() as f64;
    let var = level.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / level.len() as f64;
    HamiltonIdentities { bianchi, constancy: libm::sqrt(var), trace }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenIdentity {
    /// `sup |Δ_f f + 2γ f|` with `Δ_f = Δ - ∇f·∇`.
    pub residual: f64,
    /// Whether `-2γ` appears in the computed spectrum of `Δ_f`.
    pub membership: Membership,
    /// `f ≡ 0`: the identity holds trivially and membership says nothing.
    pub vacuous: bool,
}

/// Expects `f` already normalized by [`normalize_f`].
pub fn eigenfunction_identity(c: &SolitonCandidate, grid: &Grid, tol: f64) -> Result<EigenIdentity, Error> {
    let mut residual = 0.0f64;
    for (r, e) in c.expansions(grid) {
        let [f, df, _] = c.f.derivs(r);
        let drift = e.at(&e.laplacian(&c.f)) - df * df;
        residual = residual.max((drift + 2.0 * c.gamma * f).abs());
    }
    let weighted = c.model.with_density(c.f.clone())?;
    let membership = spectrum_contains(&weighted, grid, -2.0 * c.gamma, tol)?;
    Ok(EigenIdentity { residual, membership, vacuous: c.f.is_identically_zero() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn sphere(n: usize) -> WarpedManifold {
        WarpedManifold::round_sphere(n, Profile::zero()).unwrap()
    }

    #[test]
    fn einstein_spheres_are_trivial_solitons() {
        for n in 2..=5 {
            let m = sphere(n);
            let g = Grid::uniform(&m, 401).unwrap();
            let c = SolitonCandidate::new(m, Profile::zero(), (n - 1) as f64).unwrap();
            assert!(soliton_residual(&c, &g).max() < 1e-8);
            let h = hamilton_identities(&c, &g);
            assert!(h.bianchi < 1e-8 && h.constancy < 1e-8 && h.trace < 1e-8, "{h:?}");
        }
    }

    #[test]
    fn cosine_perturbation() {
        let m = sphere(2);
        let g = Grid::uniform(&m, 401).unwrap();
        let c = SolitonCandidate::new(m, Profile::cosine(0.1, 1.0), 1.0).unwrap();
        let s = soliton_residual(&c, &g);
        assert!((s.radial - 0.1).abs() < 1e-10 && (s.tangential - 0.1).abs() < 1e-10);
        assert!((hamilton_identities(&c, &g).trace - 0.2).abs() < 1e-10);
    }

    #[test]
    fn wrong_gamma_shows_in_trace() {
        let m = sphere(3);
        let g = Grid::uniform(&m, 101).unwrap();
        let c = SolitonCandidate::new(m, Profile::zero(), 1.5).unwrap();
        assert!((hamilton_identities(&c, &g).trace - 3.0 * 0.5).abs() < 1e-10);
    }

    #[test]
    fn shift_is_idempotent() {
        let m = sphere(2);
        let g = Grid::uniform(&m, 201).unwrap();
        let c = SolitonCandidate::new(m, Profile::cosine(1.0, 1.0), 1.0).unwrap();
        let first = normalize_f(&c, &g);
        let again = normalize_f(&c.with_potential(first.f.clone()).unwrap(), &g);
        assert!(again.shift.abs() < 1e-14);

        let constant = SolitonCandidate::new(sphere(3), Profile::Constant(5.0), 2.0).unwrap();
        assert!((normalize_f(&constant, &g).shift + 5.0).abs() < 1e-13);
    }

    #[test]
    fn pole_slope_is_checked() {
        let f = Profile::Sine { amplitude: 0.1, frequency: 1.0 };
        assert!(matches!(SolitonCandidate::new(sphere(2), f, 1.0), Err(Error::PoleRegularity { .. })));
    }

    #[test]
    fn trivial_eigen_identity_is_vacuous() {
        let m = sphere(2);
        let g = Grid::uniform(&m, 401).unwrap();
        let c = SolitonCandidate::new(m, Profile::zero(), 1.0).unwrap();
        let e = eigenfunction_identity(&c, &g, 1e-3).unwrap();
        assert!(e.vacuous && e.residual == 0.0);
        assert!(e.membership.contains);
    }

    #[test]
    fn scaled_sphere_matches_scaled_gamma() {
        let m = sphere(3).scaled(0.5).unwrap();
        assert!((m.length() - PI / 2.0).abs() < 1e-15);
        let g = Grid::uniform(&m, 201).unwrap();
        let c = SolitonCandidate::new(m, Profile::zero(), 8.0).unwrap();
        assert!(soliton_residual(&c, &g).max() < 1e-8);
    }
}
