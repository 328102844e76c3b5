//! Discrete drift Laplacian and its low spectrum.
//!
//! Separating variables `u(r, θ) = R(r) Y_l(θ)` with `Y_l` a degree-`l`
//! spherical harmonic on the fiber reduces `Δ_φ u = -λ u` to
//!
//! ```text
//! (1/ρ) (ρ R')' - l(l+n-2)/w² R = -λ R,    ρ = w^{n-1} e^{-φ},
//! ```
//!
//! discretized by control volumes: fluxes `ρ(r_{i±1/2})/h` on half nodes,
//! cell masses `q_i` from [`weighted_measure`](crate::geometry::weighted_measure).
//! The stiffness matrix is symmetric, so the operator is self-adjoint in
//! `⟨u, v⟩ = Σ q_i u_i v_i` exactly up to rounding.

use alloc::vec::Vec;

use crate::error::Error;
use crate::geometry::{Grid, Topology, WarpedManifold};
use crate::quadrature::gauss8;
use crate::tridiag::SymTridiagonal;

/// Highest angular mode searched for the first eigenvalue by default.
pub const DEFAULT_MAX_MODE: usize = 2;
/// Latitudes sampled when expanding a non-radial eigenfunction.
pub const DEFAULT_LATITUDES: usize = 181;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Pole regularity for radial functions: no-flux ghost node, `R'(pole) = 0`.
    Regular,
    Dirichlet,
    Periodic,
}

#[derive(Debug, Clone)]
pub struct SpectralProblem<'a> {
    model: &'a WarpedManifold,
    grid: &'a Grid,
    mode: usize,
    boundary: [Boundary; 2],
    /// First grid node carried as an unknown.
    first: usize,
    stiffness: SymTridiagonal,
    mass: Vec<f64>,
}

/// Assembles mode `l` with the boundary conditions regularity demands:
/// regular poles for `l = 0`, Dirichlet poles otherwise. On a circle the
/// mode index is ignored.
pub fn assemble<'a>(model: &'a WarpedManifold, grid: &'a Grid, mode: usize) -> Result<SpectralProblem<'a>, Error> {
    let boundary = match (model.topology(), mode) {
        (Topology::Circle, _) => [Boundary::Periodic; 2],
        (Topology::IntervalSphere, 0) => [Boundary::Regular; 2],
        (Topology::IntervalSphere, _) => [Boundary::Dirichlet; 2],
    };
    assemble_with_boundary(model, grid, mode, boundary)
}

pub fn assemble_with_boundary<'a>(
    model: &'a WarpedManifold,
    grid: &'a Grid,
    mode: usize,
    boundary: [Boundary; 2],
) -> Result<SpectralProblem<'a>, Error> {
    let n_nodes = grid.len();
    let h = grid.spacing();
    let flux = |r: f64| model.radial_density(r) / h;
    match model.topology() {
        Topology::Circle => {
            if boundary != [Boundary::Periodic; 2] {
                return Err(Error::Assembly("circle models are periodic"));
            }
            let kappa: Vec<f64> = grid.nodes().iter().map(|&r| flux(r + 0.5 * h)).collect();
            let diag = (0..n_nodes).map(|i| kappa[i] + kappa[(i + n_nodes - 1) % n_nodes]).collect();
            let off = kappa[..n_nodes - 1].iter().map(|k| -k).collect();
            let stiffness = SymTridiagonal::cyclic(diag, off, -kappa[n_nodes - 1])?;
            Ok(SpectralProblem {
                model,
                grid,
                mode,
                boundary,
                first: 0,
                stiffness,
                mass: grid.weights().to_vec(),
            })
        }
        Topology::IntervalSphere => {
            if boundary.contains(&Boundary::Periodic) {
                return Err(Error::Assembly("interval-sphere poles cannot be periodic"));
            }
            if mode > 0 && boundary.contains(&Boundary::Regular) {
                return Err(Error::Assembly("angular potential is singular at a pole without a Dirichlet condition"));
            }
            let warp = model.warp().ok_or(Error::Assembly("missing warp"))?;
            let n = model.dim() as f64;
            let eig_fiber = (mode as f64) * (mode as f64 + n - 2.0);
            let first = usize::from(boundary[0] == Boundary::Dirichlet);
            let last = n_nodes - 1 - usize::from(boundary[1] == Boundary::Dirichlet);
            let kappa: Vec<f64> = grid.nodes()[..n_nodes - 1].iter().map(|&r| flux(r + 0.5 * h)).collect();
            let mut diag = Vec::with_capacity(last + 1 - first);
            for i in first..=last {
                let mut d = 0.0;
                if i > 0 {
                    d += kappa[i - 1];
                }
                if i + 1 < n_nodes {
                    d += kappa[i];
                }
                if eig_fiber > 0.0 {
                    let (lo, hi) = grid.cell(i);
                    let r_i = grid.nodes()[i];
                    let potential = |r: f64| {
                        let w = warp.value(r);
                        model.radial_density(r) / (w * w)
                    };
                    let p = eig_fiber * (gauss8(potential, lo, r_i) + gauss8(potential, r_i, hi));
                    if !p.is_finite() {
                        return Err(Error::Assembly("angular potential overflowed"));
                    }
                    d += p;
                }
                diag.push(d);
            }
            let off = (first..last).map(|i| -kappa[i]).collect();
            let stiffness = SymTridiagonal::new(diag, off)?;
            Ok(SpectralProblem {
                model,
                grid,
                mode,
                boundary,
                first,
                stiffness,
                mass: grid.weights()[first..=last].to_vec(),
            })
        }
    }
}

impl<'a> SpectralProblem<'a> {
    pub fn mode(&self) -> usize {
        self.mode
    }

    pub fn boundary(&self) -> [Boundary; 2] {
        self.boundary
    }

    pub fn model(&self) -> &'a WarpedManifold {
        self.model
    }

    pub fn grid(&self) -> &'a Grid {
        self.grid
    }

    /// Grid nodes carried as unknowns.
    pub fn unknowns(&self) -> core::ops::Range<usize> {
        self.first..self.first + self.mass.len()
    }

    pub fn stiffness(&self) -> &SymTridiagonal {
        &self.stiffness
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// The discrete operator `-M⁻¹ S` applied to unknown values.
    pub fn apply(&self, u: &[f64]) -> Vec<f64> {
        self.stiffness.apply(u).iter().zip(&self.mass).map(|(s, m)| -s / m).collect()
    }

    /// `M^{-1/2} S M^{-1/2}`, whose eigenvalues are `λ = -μ`.
    pub fn symmetrized(&self) -> SymTridiagonal {
        let root: Vec<f64> = self.mass.iter().map(|m| libm::sqrt(*m)).collect();
        let s = &self.stiffness;
        let diag = s.diag().iter().zip(&self.mass).map(|(d, m)| d / m).collect();
        let off = s.off().iter().enumerate().map(|(i, e)| e / (root[i] * root[i + 1])).collect();
        let n = root.len();
        match s.corner() {
            Some(c) => SymTridiagonal::cyclic(diag, off, c / (root[0] * root[n - 1])),
            None => SymTridiagonal::new(diag, off),
        }
        .expect("shape preserved")
    }

    /// Spreads unknown values over the full grid, zero at Dirichlet nodes.
    pub fn embed(&self, u: &[f64]) -> Vec<f64> {
        let mut full = alloc::vec![0.0; self.grid.len()];
        full[self.unknowns()].copy_from_slice(u);
        full
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenmode {
    /// `μ ≤ 0` with `Δ_φ u = μ u`.
    pub eigenvalue: f64,
    pub mode: usize,
    /// Radial samples on the full grid, orthonormal in the grid weights.
    pub samples: Vec<f64>,
}

impl Eigenmode {
    pub fn lambda(&self) -> f64 {
        -self.eigenvalue
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Sorted by `|μ|`, ties by mode.
    pub modes: Vec<Eigenmode>,
    /// Largest Gershgorin magnitude among the solved operators.
    pub scale: f64,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.eigenvalue).collect()
    }

    fn merge(parts: Vec<Spectrum>) -> Spectrum {
        let scale = parts.iter().map(|s| s.scale).fold(0.0, f64::max);
        let mut modes: Vec<Eigenmode> = parts.into_iter().flat_map(|s| s.modes).collect();
        modes.sort_by(|a, b| {
            a.eigenvalue
                .abs()
                .total_cmp(&b.eigenvalue.abs())
                .then(a.mode.cmp(&b.mode))
        });
        Spectrum { modes, scale }
    }
}

/// The `count` eigenvalues of smallest magnitude of one assembled mode.
pub fn solve_eigen(problem: &SpectralProblem<'_>, count: usize) -> Result<Spectrum, Error> {
    let sym = problem.symmetrized();
    let count = count.min(sym.len());
    let pairs = sym.smallest(count)?;
    let modes = pairs
        .into_iter()
        .map(|p| {
            let mut u: Vec<f64> = p.vector.iter().zip(problem.mass()).map(|(x, m)| x / libm::sqrt(*m)).collect();
            // Deterministic sign: largest entry positive.
            let peak = u.iter().copied().fold(0.0, |acc: f64, x| if x.abs() > acc.abs() { x } else { acc });
            if peak < 0.0 {
                u.iter_mut().for_each(|x| *x = -*x);
            }
            Eigenmode { eigenvalue: -p.value, mode: problem.mode(), samples: problem.embed(&u) }
        })
        .collect();
    Ok(Spectrum { modes, scale: sym.scale() })
}

/// Merged spectrum over angular modes `0..=max_mode`, `per_mode` each.
pub fn merged_spectrum(model: &WarpedManifold, grid: &Grid, max_mode: usize, per_mode: usize) -> Result<Spectrum, Error> {
    let modes = match model.topology() {
        Topology::Circle => 0..=0,
        Topology::IntervalSphere => 0..=max_mode,
    };
    let parts = modes
        .map(|l| assemble(model, grid, l).and_then(|p| solve_eigen(&p, per_mode)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Spectrum::merge(parts))
}

/// Search settings for [`first_nonzero_eigenvalue`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstEigenOptions {
    pub max_mode: usize,
    pub latitudes: usize,
    /// Solve a half-resolution grid for the Richardson error estimate.
    pub richardson: bool,
}

impl Default for FirstEigenOptions {
    fn default() -> Self {
        Self { max_mode: DEFAULT_MAX_MODE, latitudes: DEFAULT_LATITUDES, richardson: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FirstEigen {
    /// `λ > 0` with `Δ_φ u = -λ u`.
    pub lambda: f64,
    pub mode: usize,
    pub field: EigenField,
    /// `|λ_N - λ_{N/2}| / 3`; zero when disabled.
    pub error_estimate: f64,
    /// Candidates from every searched mode, `(mode, λ)`.
    pub candidates: Vec<(usize, f64)>,
    /// Another mode lies within the error estimate of `λ`.
    pub ambiguous: bool,
}

fn first_in_mode(model: &WarpedManifold, grid: &Grid, mode: usize) -> Result<(f64, Eigenmode, f64), Error> {
    let problem = assemble(model, grid, mode)?;
    let radial = mode == 0;
    let spec = solve_eigen(&problem, if radial { 2 } else { 1 })?;
    let m = spec.modes.into_iter().next_back().expect("at least one eigenpair");
    let residual = operator_residual(&problem, &m);
    Ok((m.lambda(), m, residual))
}

fn operator_residual(problem: &SpectralProblem<'_>, m: &Eigenmode) -> f64 {
    let u = &m.samples[problem.unknowns()];
    let au = problem.apply(u);
    let peak = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let lambda = m.lambda();
    let worst = au.iter().zip(u).map(|(a, x)| (a + lambda * x).abs()).fold(0.0, f64::max);
    worst / (lambda.abs().max(f64::MIN_POSITIVE) * peak.max(f64::MIN_POSITIVE))
}

/// Smallest positive eigenvalue of `-Δ_φ` over angular modes `0..=max_mode`.
pub fn first_nonzero_eigenvalue(
    model: &WarpedManifold,
    grid: &Grid,
    options: FirstEigenOptions,
) -> Result<FirstEigen, Error> {
    let modes = match model.topology() {
        Topology::Circle => 0..=0,
        Topology::IntervalSphere => 0..=options.max_mode,
    };
    let mut candidates = Vec::new();
    let mut best: Option<(f64, Eigenmode, f64)> = None;
    for l in modes {
        let (lambda, mode, residual) = first_in_mode(model, grid, l)?;
        candidates.push((l, lambda));
        if best.as_ref().is_none_or(|b| lambda < b.0) {
            best = Some((lambda, mode, residual));
        }
    }
    let (lambda, mode, residual) = best.expect("at least one mode");

    let error_estimate = if options.richardson {
        let coarse_count = match model.topology() {
            Topology::IntervalSphere => grid.len().div_ceil(2),
            Topology::Circle => grid.len() / 2,
        };
        let coarse = Grid::uniform(model, coarse_count.max(4))?;
        let (coarse_lambda, _, _) = first_in_mode(model, &coarse, mode.mode)?;
        (lambda - coarse_lambda).abs() / 3.0
    } else {
        0.0
    };
    let ambiguous = candidates
        .iter()
        .filter(|(l, _)| *l != mode.mode)
        .any(|(_, other)| other - lambda < error_estimate);
    let field = EigenField::new(model, grid, &mode, options.latitudes, residual)?;
    Ok(FirstEigen { lambda, mode: mode.mode, field, error_estimate, candidates, ambiguous })
}

/// First non-constant eigenpair of a single angular mode, without
/// comparing modes or estimating the discretization error.
pub fn first_in_single_mode(model: &WarpedManifold, grid: &Grid, mode: usize, latitudes: usize) -> Result<FirstEigen, Error> {
    let (lambda, m, residual) = first_in_mode(model, grid, mode)?;
    let field = EigenField::new(model, grid, &m, latitudes, residual)?;
    Ok(FirstEigen { lambda, mode, field, error_estimate: 0.0, candidates: alloc::vec![(mode, lambda)], ambiguous: false })
}

/// Result of [`spectrum_contains`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub contains: bool,
    pub nearest: f64,
    pub gap: f64,
}

/// Is `target` (a `μ ≤ 0`) within `tol * max(1, |target|)` of the computed spectrum?
pub fn spectrum_contains(model: &WarpedManifold, grid: &Grid, target: f64, tol: f64) -> Result<Membership, Error> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive"));
    }
    let spec = merged_spectrum(model, grid, DEFAULT_MAX_MODE, 6)?;
    let nearest = spec
        .modes
        .iter()
        .map(|m| m.eigenvalue)
        .min_by(|a, b| (a - target).abs().total_cmp(&(b - target).abs()))
        .expect("non-empty spectrum");
    let gap = (nearest - target).abs();
    Ok(Membership { contains: gap <= tol * target.abs().max(1.0), nearest, gap })
}

/// A sample of an eigenfunction on the manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldPoint {
    pub r: f64,
    /// Polar angle on the fiber sphere; zero for radial fields.
    pub theta: f64,
    pub value: f64,
    /// `|∇u|²`
    pub grad_sq: f64,
}

/// An eigenfunction `R(r) Y_l(θ)` sampled over the manifold.
///
/// Radial modes are sampled once per grid node; higher modes on a
/// node × latitude lattice using the zonal harmonic of degree `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenField {
    pub mode: usize,
    pub radial: Vec<f64>,
    pub radial_slope: Vec<f64>,
    pub points: Vec<FieldPoint>,
    /// `max |A R + λ R| / (λ max |R|)` for the discrete operator `A`.
    pub operator_residual: f64,
}

impl EigenField {
    pub fn new(
        model: &WarpedManifold,
        grid: &Grid,
        mode: &Eigenmode,
        latitudes: usize,
        operator_residual: f64,
    ) -> Result<Self, Error> {
        let radial = mode.samples.clone();
        let slope = radial_slope(grid, &radial, mode.mode);
        let points = match model.topology() {
            Topology::Circle => grid
                .nodes()
                .iter()
                .zip(&radial)
                .zip(&slope)
                .map(|((&r, &u), &du)| FieldPoint { r, theta: 0.0, value: u, grad_sq: du * du })
                .collect(),
            Topology::IntervalSphere if mode.mode == 0 => grid
                .nodes()
                .iter()
                .zip(&radial)
                .zip(&slope)
                .map(|((&r, &u), &du)| FieldPoint { r, theta: 0.0, value: u, grad_sq: du * du })
                .collect(),
            Topology::IntervalSphere => {
                if latitudes < 2 {
                    return Err(Error::InvalidArgument("need at least 2 latitudes"));
                }
                let warp = model.warp().expect("interval-sphere has a warp");
                let last = grid.len() - 1;
                let mut pts = Vec::with_capacity(grid.len() * latitudes);
                for (i, &r) in grid.nodes().iter().enumerate() {
                    // R/w, by its limit R'/w' at the poles.
                    let over_w = if i == 0 || i == last {
                        slope[i] / warp.derivs(r)[1]
                    } else {
                        radial[i] / warp.value(r)
                    };
                    for j in 0..latitudes {
                        let theta = core::f64::consts::PI * j as f64 / (latitudes - 1) as f64;
                        let (y, dy) = zonal_harmonic(model.dim(), mode.mode, theta);
                        pts.push(FieldPoint {
                            r,
                            theta,
                            value: radial[i] * y,
                            grad_sq: sq(slope[i] * y) + sq(over_w * dy),
                        });
                    }
                }
                pts
            }
        };
        Ok(Self { mode: mode.mode, radial, radial_slope: slope, points, operator_residual })
    }
}

fn sq(x: f64) -> f64 {
    x * x
}

fn radial_slope(grid: &Grid, u: &[f64], mode: usize) -> Vec<f64> {
    let n = u.len();
    let h = grid.spacing();
    let mut du = alloc::vec![0.0; n];
    if grid.is_periodic() {
        for i in 0..n {
            du[i] = (u[(i + 1) % n] - u[(i + n - 1) % n]) / (2.0 * h);
        }
        return du;
    }
    for i in 1..n - 1 {
        du[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    }
    if mode > 0 {
        du[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
        du[n - 1] = (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h);
    }
    du
}

/// Zonal spherical harmonic of degree `l` on `S^{n-1}` and its `θ`-derivative.
///
/// Gegenbauer `C_l^{(n-2)/2}(cos θ)`; Chebyshev `cos(lθ)` when `n = 2`.
pub fn zonal_harmonic(dim: usize, l: usize, theta: f64) -> (f64, f64) {
    if dim == 2 {
        let lf = l as f64;
        return (libm::cos(lf * theta), -lf * libm::sin(lf * theta));
    }
    let alpha = (dim as f64 - 2.0) / 2.0;
    let x = libm::cos(theta);
    let value = gegenbauer(l, alpha, x);
    let deriv = if l == 0 { 0.0 } else { 2.0 * alpha * gegenbauer(l - 1, alpha + 1.0, x) };
    (value, -libm::sin(theta) * deriv)
}

fn gegenbauer(l: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if l == 0 {
        return prev;
    }
    let mut cur = 2.0 * alpha * x;
    for k in 1..l {
        let kf = k as f64;
        let next = (2.0 * x * (kf + alpha) * cur - (kf + 2.0 * alpha - 1.0) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;
    use core::f64::consts::PI;

    fn sphere(n: usize) -> WarpedManifold {
        WarpedManifold::round_sphere(n, Profile::zero()).unwrap()
    }

    #[test]
    fn radial_rows_sum_to_zero() {
        let m = sphere(2);
        let g = Grid::uniform(&m, 101).unwrap();
        let p = assemble(&m, &g, 0).unwrap();
        let ones = alloc::vec![1.0; p.mass().len()];
        let row_sums = p.stiffness().apply(&ones);
        assert!(row_sums.iter().all(|s| s.abs() < 1e-9));
        assert_eq!(p.boundary(), [Boundary::Regular; 2]);
    }

    #[test]
    fn first_mode_uses_dirichlet_poles_and_inverse_square_potential() {
        let m = sphere(2);
        let g = Grid::uniform(&m, 101).unwrap();
        let p = assemble(&m, &g, 1).unwrap();
        assert_eq!(p.boundary(), [Boundary::Dirichlet; 2]);
        assert_eq!(p.unknowns(), 1..100);
        // potential part of the diagonal ≈ q_i / sin² r_i
        let p0 = assemble(&m, &g, 0).unwrap();
        let i = 50;
        let extra = p.stiffness().diag()[i - 1] - p0.stiffness().diag()[i];
        let want = g.weights()[i] / g.nodes()[i].sin().powi(2);
        assert!((extra - want).abs() < 2e-3 * want);
    }

    #[test]
    fn regular_boundary_with_angular_mode_is_rejected() {
        let m = sphere(3);
        let g = Grid::uniform(&m, 50).unwrap();
        let r = assemble_with_boundary(&m, &g, 1, [Boundary::Regular; 2]);
        assert!(matches!(r, Err(Error::Assembly(_))));
    }

    #[test]
    fn circle_is_periodic_second_difference() {
        let m = WarpedManifold::circle(2.0 * PI, Profile::zero()).unwrap();
        let g = Grid::uniform(&m, 64).unwrap();
        let p = assemble(&m, &g, 3).unwrap();
        let h = g.spacing();
        assert!(p.stiffness().corner().is_some());
        let sym = p.symmetrized();
        assert!(sym.diag().iter().all(|d| (d - 2.0 / (h * h)).abs() < 1e-9));
        assert!(sym.off().iter().all(|e| (e + 1.0 / (h * h)).abs() < 1e-9));
        assert!((sym.corner().unwrap() + 1.0 / (h * h)).abs() < 1e-9);
    }

    #[test]
    fn weighted_symmetry() {
        let m = WarpedManifold::round_sphere(3, Profile::cosine(0.4, 1.0)).unwrap();
        let g = Grid::uniform(&m, 120).unwrap();
        for l in 0..=2 {
            let p = assemble(&m, &g, l).unwrap();
            let k = p.mass().len();
            let u: Vec<f64> = (0..k).map(|i| (0.37 * i as f64).sin()).collect();
            let v: Vec<f64> = (0..k).map(|i| (0.11 * i as f64).cos() + 0.2).collect();
            let (au, av) = (p.apply(&u), p.apply(&v));
            let ip = |a: &[f64], b: &[f64]| -> f64 { p.mass().iter().zip(a).zip(b).map(|((m, x), y)| m * x * y).sum() };
            let lhs = ip(&au, &v);
            let rhs = ip(&u, &av);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()));
        }
    }

    #[test]
    fn radial_ground_state_is_constant() {
        let m = WarpedManifold::round_sphere(2, Profile::cosine(0.5, 1.0)).unwrap();
        let g = Grid::uniform(&m, 200).unwrap();
        let spec = solve_eigen(&assemble(&m, &g, 0).unwrap(), 3).unwrap();
        let ground = &spec.modes[0];
        assert!(ground.eigenvalue.abs() < 1e-10 * spec.scale);
        let c = ground.samples[0];
        assert!(ground.samples.iter().all(|x| (x - c).abs() < 1e-8 * c.abs()));
        for a in &spec.modes {
            for b in &spec.modes {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((g.inner(&a.samples, &b.samples) - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn zonal_harmonics_match_closed_forms() {
        let t = 0.8f64;
        let (y, dy) = zonal_harmonic(4, 1, t);
        // C_1^{1}(x) = 2x
        assert!((y - 2.0 * t.cos()).abs() < 1e-15 && (dy + 2.0 * t.sin()).abs() < 1e-15);
        let (y, _) = zonal_harmonic(3, 2, t);
        // C_2^{1/2} = P_2 = (3x² - 1)/2
        assert!((y - (3.0 * t.cos().powi(2) - 1.0) / 2.0).abs() < 1e-15);
        let (y, dy) = zonal_harmonic(2, 2, t);
        assert!((y - (2.0 * t).cos()).abs() < 1e-15 && (dy + 2.0 * (2.0 * t).sin()).abs() < 1e-15);
    }

    #[test]
    fn membership_on_s2() {
        let m = sphere(2);
        let g = Grid::uniform(&m, 800).unwrap();
        assert!(spectrum_contains(&m, &g, -2.0, 1e-3).unwrap().contains);
        let miss = spectrum_contains(&m, &g, -3.0, 1e-3).unwrap();
        assert!(!miss.contains);
        assert!((miss.gap - 1.0).abs() < 1e-3);
        assert!(spectrum_contains(&m, &g, 0.0, 1e-6).unwrap().contains);
        assert!(spectrum_contains(&m, &g, 0.0, 0.0).is_err());
    }
}
