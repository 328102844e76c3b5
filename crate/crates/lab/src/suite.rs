//! The reference check suite behind `verify-paper`: ten numbered criteria,
//! each expanded into rows with a value, a target, a tolerance and a
//! signed margin. Wall-clock rows keep their value out of the CSV so that
//! repeated runs are byte-identical.

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::Instant;

use be_spectral::bounds::{
    alpha_floor, derive_diameter_bound, ge_exact, ling_case, ling_coefficient, myers_upper, soliton_diameter_lower,
    to_f64, LingCase,
};
use be_spectral::estimate::{compute_Z, gradient_estimate_margin, barrier_dominance_check, normalize};
use be_spectral::geometry::{be_ricci_lower_bound, diameter};
use be_spectral::quadrature::integrate;
use be_spectral::soliton::{eigenfunction_identity, hamilton_identities, normalize_f, soliton_residual, SolitonCandidate};
use be_spectral::spectral::{first_in_single_mode, first_nonzero_eigenvalue, FirstEigenOptions, DEFAULT_LATITUDES};
use be_spectral::testfn::{eta, xi, BarrierFamily};
use be_spectral::{Grid, Profile, WarpedManifold};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ToleranceProfile;
use crate::report::{fmt_f64, write_csv, REPORT_SCHEMA_VERSION};
use crate::LabError;

pub const EPSILONS: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];
pub const WEIGHTED_DIMS: [usize; 3] = [2, 3, 4];
pub const CONVERGENCE_GRIDS: [usize; 4] = [250, 500, 1000, 2000];
pub const FINE_GRID: usize = 4000;
pub const DEFAULT_GRID: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    /// Grid for the weighted-sphere and level-set criteria.
    pub grid: usize,
    pub workers: Option<usize>,
    pub tolerance_profile: ToleranceProfile,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { grid: DEFAULT_GRID, workers: None, tolerance_profile: ToleranceProfile::Default }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub criterion: u8,
    pub check: String,
    pub value: Option<f64>,
    pub target: Option<f64>,
    pub tolerance: Option<f64>,
    /// Non-negative exactly when the check passes.
    pub margin: Option<f64>,
    pub passed: bool,
    /// Wall-clock measurement; value and margin are left out of the CSV.
    pub timing: bool,
}

impl CheckRow {
    /// `value ≥ target - tol`
    fn at_least(criterion: u8, check: String, value: f64, target: f64, tol: f64) -> Self {
        let margin = value - target + tol;
        Self::with_margin(criterion, check, value, target, tol, margin)
    }

    /// `value ≤ target + tol`
    fn at_most(criterion: u8, check: String, value: f64, target: f64, tol: f64) -> Self {
        let margin = target + tol - value;
        Self::with_margin(criterion, check, value, target, tol, margin)
    }

    /// `|value - target| ≤ tol`
    fn within(criterion: u8, check: String, value: f64, target: f64, tol: f64) -> Self {
        let margin = tol - (value - target).abs();
        Self::with_margin(criterion, check, value, target, tol, margin)
    }

    fn with_margin(criterion: u8, check: String, value: f64, target: f64, tol: f64, margin: f64) -> Self {
        Self {
            criterion,
            check,
            value: Some(value),
            target: Some(target),
            tolerance: Some(tol),
            margin: Some(margin),
            passed: margin >= 0.0,
            timing: false,
        }
    }

    fn flag(criterion: u8, check: String, passed: bool) -> Self {
        Self { criterion, check, value: None, target: None, tolerance: None, margin: None, passed, timing: false }
    }

    fn runtime(criterion: u8, check: String, seconds: f64, limit: f64) -> Self {
        let mut row = Self::at_most(criterion, check, seconds, limit, 0.0);
        row.timing = true;
        row
    }

    fn record(&self) -> Vec<String> {
        let hide = |x: Option<f64>| if self.timing { String::new() } else { fmt_f64(x) };
        vec![
            self.criterion.to_string(),
            self.check.clone(),
            hide(self.value),
            fmt_f64(self.target),
            fmt_f64(self.tolerance),
            hide(self.margin),
            if self.passed { "pass" } else { "fail" }.into(),
            REPORT_SCHEMA_VERSION.to_string(),
        ]
    }
}

pub const SUITE_HEADER: [&str; 8] =
    ["criterion", "check", "value", "target", "tolerance", "margin", "passed", "schema_version"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub version: String,
    pub grid: usize,
    pub tolerance_profile: ToleranceProfile,
    pub rows: Vec<CheckRow>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }

    /// `(criterion, all rows passed)` for criteria 1..=10 that have rows.
    pub fn criteria(&self) -> Vec<(u8, bool)> {
        (1..=10)
            .filter_map(|c| {
                let rows: Vec<_> = self.rows.iter().filter(|r| r.criterion == c).collect();
                (!rows.is_empty()).then(|| (c, rows.iter().all(|r| r.passed)))
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<String, LabError> {
        write_csv(&SUITE_HEADER, self.rows.iter().map(CheckRow::record))
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        serde_json::to_string_pretty(self).map_err(|e| LabError::Io(e.to_string()))
    }
}

type CriterionJob = dyn Fn() -> Result<Vec<CheckRow>, LabError> + Send + Sync;

/// Criteria 1 to 9.
pub fn run_checks(opts: &SuiteOptions) -> Result<SuiteReport, LabError> {
    if opts.grid < 8 {
        return Err(LabError::Config("grid must be at least 8".into()));
    }
    let grid = opts.grid;
    let jobs: Vec<Box<CriterionJob>> = vec![
        Box::new(sphere_spectra),
        Box::new(move || weighted_spheres(grid)),
        Box::new(move || zonal_level_sets(grid)),
        Box::new(comparison_functions),
        Box::new(|| Ok(exact_constants())),
        Box::new(soliton_checks),
        Box::new(|| Ok(case_split_grid())),
    ];
    let parts = crate::with_workers(opts.workers, || jobs.par_iter().map(|job| job()).collect::<Vec<_>>())?;
    let mut rows = Vec::new();
    for part in parts {
        rows.extend(part?);
    }
    rows.sort_by_key(|r| r.criterion);
    Ok(SuiteReport {
        schema_version: REPORT_SCHEMA_VERSION,
        version: crate::VERSION.into(),
        grid,
        tolerance_profile: opts.tolerance_profile,
        rows,
    })
}

/// All ten criteria. The tenth reruns 1 to 9 on a single worker and
/// compares the two CSV renderings byte for byte.
pub fn verify(opts: &SuiteOptions) -> Result<SuiteReport, LabError> {
    let mut first = run_checks(opts)?;
    let second = run_checks(&SuiteOptions { workers: Some(1), ..*opts })?;
    let identical = first.to_csv()? == second.to_csv()?;
    first.rows.push(CheckRow::flag(10, "csv byte-identical across two runs".into(), identical));
    Ok(first)
}

fn solver(e: be_spectral::Error) -> LabError {
    LabError::Solver(e.to_string())
}

fn sphere(n: usize, density: Profile) -> Result<WarpedManifold, LabError> {
    WarpedManifold::round_sphere(n, density).map_err(solver)
}

/// Least-squares slope of `log|err|` against `log h`.
pub fn convergence_order(samples: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(h, e)| (h.ln(), e.abs().ln())).collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    num / den
}

fn first_lambda(m: &WarpedManifold, count: usize) -> Result<(f64, f64), LabError> {
    let g = Grid::uniform(m, count).map_err(solver)?;
    let opts = FirstEigenOptions { richardson: false, ..FirstEigenOptions::default() };
    let fe = first_nonzero_eigenvalue(m, &g, opts).map_err(solver)?;
    Ok((g.spacing(), fe.lambda))
}

fn sphere_spectra() -> Result<Vec<CheckRow>, LabError> {
    let start = Instant::now();
    let per_dim = (2..=5usize)
        .into_par_iter()
        .map(|n| {
            let m = sphere(n, Profile::zero())?;
            let (_, fine) = first_lambda(&m, FINE_GRID)?;
            let errors = CONVERGENCE_GRIDS
                .iter()
                .map(|&count| first_lambda(&m, count).map(|(h, l)| (h, l - n as f64)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok((n, fine, convergence_order(&errors)))
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut rows = Vec::new();
    for (n, fine, order) in per_dim {
        rows.push(CheckRow::within(1, format!("first eigenvalue of S^{n} at N={FINE_GRID}"), fine, n as f64, 1e-3));
        rows.push(CheckRow::within(1, format!("convergence order on S^{n}"), order, 2.0, 0.2));
    }
    rows.push(CheckRow::runtime(1, "runtime seconds".into(), start.elapsed().as_secs_f64(), 60.0));
    Ok(rows)
}

struct WeightedInstance {
    n: usize,
    eps: f64,
    lambda: f64,
    k_eff: f64,
    d: f64,
    max_ratio: f64,
    gradient_bound: f64,
}

fn weighted_instance(n: usize, eps: f64, grid: usize) -> Result<WeightedInstance, LabError> {
    let m = sphere(n, Profile::cosine(eps, 1.0))?;
    let g = Grid::uniform(&m, grid).map_err(solver)?;
    let fe = first_nonzero_eigenvalue(&m, &g, FirstEigenOptions::default()).map_err(solver)?;
    let k_eff = be_ricci_lower_bound(&m, &g).map_err(solver)?.k_eff;
    let alpha = 0.5 * (n - 1) as f64 * k_eff;
    let v = normalize(&fe.field, fe.lambda, 1.01, alpha).map_err(solver)?;
    let ge = gradient_estimate_margin(&v);
    Ok(WeightedInstance {
        n,
        eps,
        lambda: fe.lambda,
        k_eff,
        d: diameter(&m),
        max_ratio: ge.max_ratio,
        gradient_bound: ge.bound,
    })
}

fn weighted_spheres(grid: usize) -> Result<Vec<CheckRow>, LabError> {
    let start = Instant::now();
    let cells: Vec<(usize, f64)> = WEIGHTED_DIMS.iter().flat_map(|&n| EPSILONS.iter().map(move |&e| (n, e))).collect();
    let instances = cells
        .par_iter()
        .map(|&(n, eps)| weighted_instance(n, eps, grid))
        .collect::<Result<Vec<_>, _>>()?;
    let elapsed = start.elapsed().as_secs_f64();
    let c = to_f64(ling_coefficient());
    let mut rows = Vec::new();
    for w in &instances {
        let tag = format!("n={} eps={}", w.n, w.eps);
        let nk = (w.n - 1) as f64 * w.k_eff;
        rows.push(CheckRow::at_least(2, format!("lambda >= (n-1)K_eff, {tag}"), w.lambda, nk, 1e-6));
    }
    for w in &instances {
        let tag = format!("n={} eps={}", w.n, w.eps);
        let nk = (w.n - 1) as f64 * w.k_eff;
        let target = PI * PI / (w.d * w.d) + c * nk;
        rows.push(CheckRow::at_least(3, format!("lambda >= pi^2/d^2 + 0.31(n-1)K_eff, {tag}"), w.lambda, target, 1e-6));
    }
    rows.push(CheckRow::runtime(3, "runtime seconds".into(), elapsed, 120.0));
    for w in &instances {
        let tag = format!("n={} eps={}", w.n, w.eps);
        let target = w.gradient_bound * (1.0 + 1e-2);
        rows.push(CheckRow::at_most(4, format!("max |grad v|^2/(b^2-v^2) <= lambda(1+a), {tag}"), w.max_ratio, target, 0.0));
    }
    Ok(rows)
}

fn zonal_level_sets(grid: usize) -> Result<Vec<CheckRow>, LabError> {
    let delta = 0.25;
    let m = sphere(2, Profile::zero())?;
    let g = Grid::uniform(&m, grid).map_err(solver)?;
    let fe = first_in_single_mode(&m, &g, 0, DEFAULT_LATITUDES).map_err(solver)?;
    let v = normalize(&fe.field, fe.lambda, 1.01, 0.5).map_err(solver)?;
    let z = compute_Z(&v, 200).map_err(solver)?;
    let barrier = BarrierFamily::symmetric(delta).map_err(solver)?;
    let dom = barrier_dominance_check(&z, |t| barrier.value(t).unwrap_or(f64::NAN));
    Ok(vec![
        CheckRow::at_least(5, "bins with samples".into(), dom.bins_checked as f64, 1.0, 0.0),
        CheckRow::at_least(5, "min over bins of 1 + delta xi(t) - Z(t)".into(), dom.margin, 0.0, 1e-2),
    ])
}

fn xi_closed(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    (c * c + 2.0 * t * s * c + t * t - PI * PI / 4.0) / (c * c)
}

fn eta_closed(t: f64) -> f64 {
    let (s, c) = t.sin_cos();
    ((4.0 / PI) * t + (4.0 / PI) * c * s - 2.0 * s) / (c * c)
}

/// `lim_{h→0} g(h)` by polynomial extrapolation through `h = k·step`.
pub fn extrapolate<G: Fn(f64) -> f64>(g: G, step: f64, count: usize) -> f64 {
    let hs: Vec<f64> = (1..=count).map(|k| k as f64 * step).collect();
    let mut p: Vec<f64> = hs.iter().map(|&h| g(h)).collect();
    for level in 1..count {
        for i in 0..count - level {
            p[i] = (hs[i + level] * p[i] - hs[i] * p[i + 1]) / (hs[i + level] - hs[i]);
        }
    }
    p[0]
}

fn comparison_functions() -> Result<Vec<CheckRow>, LabError> {
    let e = |r: Result<f64, be_spectral::Error>| r.map_err(solver);
    let int = |f: fn(f64) -> Result<f64, be_spectral::Error>| integrate(|t| f(t).unwrap_or(f64::NAN), -FRAC_PI_2, FRAC_PI_2, 64);
    let mut rows = vec![
        CheckRow::within(6, "integral of xi".into(), int(xi), -PI, 1e-8),
        CheckRow::within(6, "integral of eta".into(), int(eta), 0.0, 1e-8),
    ];
    for (sign, label) in [(1.0, "+pi/2"), (-1.0, "-pi/2")] {
        let end = sign * FRAC_PI_2;
        let xi_end = e(xi(end))?;
        let eta_end = e(eta(end))?;
        let xi_lim = extrapolate(|h| xi_closed(end - sign * h), 0.01, 6);
        let eta_lim = extrapolate(|h| eta_closed(end - sign * h), 0.01, 6);
        rows.push(CheckRow::within(6, format!("xi({label})"), xi_end, 0.0, 1e-8));
        rows.push(CheckRow::within(6, format!("eta({label})"), eta_end, sign, 1e-8));
        rows.push(CheckRow::within(6, format!("xi({label}) against extrapolated limit"), xi_end, xi_lim, 1e-8));
        rows.push(CheckRow::within(6, format!("eta({label}) against extrapolated limit"), eta_end, eta_lim, 1e-8));
    }
    for mu in [0.25, 0.5, 1.0] {
        for delta in [0.1, 0.25, 0.5] {
            let fam = BarrierFamily::standard(0.0, 1.01, delta, mu).map_err(solver)?;
            let check = format!("integral of z, mu={mu} delta={delta}");
            rows.push(CheckRow::within(6, check, fam.integral(), (1.0 - mu * delta) * PI, 1e-8));
        }
    }
    Ok(rows)
}

fn exact_constants() -> Vec<CheckRow> {
    let (p, q) = derive_diameter_bound();
    let lower = soliton_diameter_lower(1.0);
    let rational = p as f64 * PI / q as f64;
    let myers = myers_upper(4, 1.0);
    let expected = PI * 3f64.sqrt();
    vec![
        CheckRow::flag(7, format!("diameter constant (p, q) = ({p}, {q}) equals (10, 13)"), (p, q) == (10, 13)),
        CheckRow::flag(
            7,
            "soliton diameter lower bound at gamma=1 is bitwise 10pi/13".into(),
            lower.as_ref().is_ok_and(|l| l.to_bits() == rational.to_bits() && (10.0 * PI / 13.0).to_bits() == l.to_bits()),
        ),
        match myers {
            Ok(m) => CheckRow::at_most(7, "relative error of Myers bound, n=4 gamma=1".into(), ((m - expected) / expected).abs(), 0.0, 1e-15),
            Err(_) => CheckRow::flag(7, "Myers bound, n=4 gamma=1".into(), false),
        },
    ]
}

fn soliton_checks() -> Result<Vec<CheckRow>, LabError> {
    let mut rows = Vec::new();
    for n in 2..=5usize {
        let m = sphere(n, Profile::zero())?;
        let g = Grid::uniform(&m, 400).map_err(solver)?;
        let c = SolitonCandidate::new(m, Profile::zero(), (n - 1) as f64).map_err(solver)?;
        let res = soliton_residual(&c, &g).max();
        let ids = hamilton_identities(&c, &g);
        let eig = eigenfunction_identity(&c, &g, 1e-3).map_err(solver)?;
        let worst = res.max(ids.bianchi).max(ids.constancy).max(ids.trace).max(eig.residual);
        rows.push(CheckRow::at_most(8, format!("largest residual, S^{n} with f=0, gamma={}", n - 1), worst, 1e-8, 0.0));
    }
    let m = sphere(2, Profile::zero())?;
    let g = Grid::uniform(&m, 400).map_err(solver)?;
    let c = SolitonCandidate::new(m, Profile::cosine(0.1, 1.0), 1.0).map_err(solver)?;
    let res = soliton_residual(&c, &g).max();
    let trace = hamilton_identities(&c, &g).trace;
    rows.push(CheckRow::within(8, "soliton residual, S^2 with f=0.1cos r".into(), res, 0.1, 1e-3));
    rows.push(CheckRow::within(8, "trace residual, S^2 with f=0.1cos r".into(), trace, 0.2, 1e-3));
    let once = normalize_f(&c, &g);
    let twice = normalize_f(&c.with_potential(once.f).map_err(solver)?, &g);
    rows.push(CheckRow::at_most(8, "second potential shift".into(), twice.shift.abs(), 0.0, 1e-14));
    Ok(rows)
}

/// The case predicates written out with integer arithmetic on
/// `a = i/100`, `δ = j/100`.
fn grid_case(i: u32, j: u32) -> [bool; 5] {
    let a = i as f64 / 100.0;
    let delta = j as f64 / 100.0;
    let b1 = i > 0 && PI * PI * delta / 4.0 <= a;
    // a ≥ 153/200  ⟺  200 i ≥ 15300;  a ≥ (153/100) δ  ⟺  100 i ≥ 153 j
    let large = 200 * i >= 15300;
    let steep = 100 * i >= 153 * j;
    [
        i == 0,
        b1,
        i > 0 && !b1 && large,
        i > 0 && !b1 && !large && steep,
        i > 0 && !b1 && !large && !steep,
    ]
}

fn case_split_grid() -> Vec<CheckRow> {
    let (mut exactly_one, mut agree, mut floor_ok, mut errors) = (0usize, 0usize, 0usize, 0usize);
    let mut min_multiple = f64::INFINITY;
    let floor = alpha_floor();
    for i in 0..100u32 {
        for j in 1..=50u32 {
            let preds = grid_case(i, j);
            if preds.iter().filter(|&&p| p).count() == 1 {
                exactly_one += 1;
            }
            match ling_case(i as f64 / 100.0, j as f64 / 100.0) {
                Ok(v) => {
                    let idx = LingCase::ALL.iter().position(|c| *c == v.case).expect("listed case");
                    agree += usize::from(preds[idx]);
                    // B-2-b2 carries 31/50 itself, stored as its nearest double.
                    let at_floor = v.case == LingCase::B2b2 && v.multiple == to_f64(floor);
                    floor_ok += usize::from(at_floor || ge_exact(v.multiple, floor));
                    min_multiple = min_multiple.min(v.multiple);
                }
                Err(_) => errors += 1,
            }
        }
    }
    let cells = 5000.0;
    vec![
        CheckRow::within(9, "cells with exactly one case".into(), exactly_one as f64, cells, 0.0),
        CheckRow::within(9, "cells where the classifier agrees".into(), agree as f64, cells, 0.0),
        CheckRow::within(9, "cells with multiple >= 31/50 (exact)".into(), floor_ok as f64, cells, 0.0),
        CheckRow::within(9, "classifier errors".into(), errors as f64, 0.0, 0.0),
        CheckRow::at_least(9, "smallest multiple".into(), min_multiple, to_f64(floor), 0.0),
    ]
}
