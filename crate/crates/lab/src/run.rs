//! Expands a configuration into instances and evaluates them in parallel.

use std::f64::consts::PI;

use be_spectral::bounds::{self, CaseVerdict, LingCase};
use be_spectral::estimate::{barrier_dominance_check, compute_Z, gradient_estimate_margin, normalize, NormalizedEigenfunction};
use be_spectral::geometry::{be_ricci_lower_bound, diameter};
use be_spectral::soliton::{eigenfunction_identity, hamilton_identities, normalize_f, soliton_residual, SolitonCandidate};
use be_spectral::spectral::{first_nonzero_eigenvalue, FirstEigen, FirstEigenOptions};
use be_spectral::testfn::BarrierFamily;
use be_spectral::{Error, Grid, Profile, Topology, WarpedManifold};
use rayon::prelude::*;

use crate::config::{Check, ExperimentConfig, FamilyConfig, RunSettings, Tolerances};
use crate::report::{Environment, InstanceRow, RunReport, Verdict};
use crate::LabError;

/// Tolerance for "−2γ is in the spectrum".
const MEMBERSHIP_TOL: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Instance<'a> {
    pub family: &'a FamilyConfig,
    pub n: usize,
    pub epsilon: Option<f64>,
    pub density: Profile,
}

/// Instances in family order, then dimension, then density parameter.
pub fn instances(cfg: &ExperimentConfig) -> Vec<Instance<'_>> {
    let mut out = Vec::new();
    for family in &cfg.families {
        let dims = if family.manifold.is_circle() { vec![1] } else { family.dims.clone() };
        for &n in &dims {
            for (epsilon, density) in family.density.instances() {
                out.push(Instance { family, n, epsilon, density });
            }
        }
    }
    out
}

pub fn run(cfg: &ExperimentConfig, command: &str) -> Result<RunReport, LabError> {
    let settings = &cfg.run;
    let tol = settings.tolerance_profile.tolerances();
    let work = instances(cfg);
    let evaluate_all = || work.par_iter().map(|inst| evaluate(inst, settings, &tol)).collect::<Vec<_>>();
    let rows = crate::with_workers(settings.workers, evaluate_all)?;
    let environment = Environment {
        version: crate::VERSION.into(),
        grid: settings.grid,
        b: settings.b,
        bins: settings.bins,
        tolerance_profile: format!("{:?}", settings.tolerance_profile).to_lowercase(),
        checks: settings.checks.iter().map(|c| format!("{c:?}").to_lowercase()).collect(),
    };
    Ok(RunReport::new(command, environment, rows))
}

struct Ctx<'a> {
    row: InstanceRow,
    failures: Vec<&'a str>,
}

impl<'a> Ctx<'a> {
    fn require(&mut self, ok: bool, what: &'a str) {
        if !ok {
            self.failures.push(what);
        }
    }
}

fn classify(e: &Error) -> Verdict {
    match e {
        Error::InvalidModel(_) | Error::InvalidProfile(_) | Error::PoleRegularity { .. } | Error::InvalidArgument(_) => {
            Verdict::ModelError
        }
        _ => Verdict::SolverError,
    }
}

pub fn evaluate(inst: &Instance<'_>, settings: &RunSettings, tol: &Tolerances) -> InstanceRow {
    let row = InstanceRow {
        family: inst.family.name.clone(),
        manifold: inst.family.manifold.label().into(),
        n: inst.n,
        epsilon: inst.epsilon,
        grid: settings.grid,
        gamma: inst.family.gamma,
        ..InstanceRow::default()
    };
    let mut ctx = Ctx { row, failures: Vec::new() };
    match evaluate_inner(inst, settings, tol, &mut ctx) {
        Ok(()) => {
            let verdict = if ctx.failures.is_empty() { Verdict::Pass } else { Verdict::Fail };
            ctx.row.verdict = Some(verdict);
            let mut notes: Vec<String> = ctx.failures.iter().map(|f| format!("failed: {f}")).collect();
            if !ctx.row.message.is_empty() {
                notes.insert(0, std::mem::take(&mut ctx.row.message));
            }
            ctx.row.message = notes.join("; ");
        }
        Err(e) => {
            ctx.row.verdict = Some(classify(&e));
            ctx.row.message = e.to_string();
        }
    }
    ctx.row
}

fn note(row: &mut InstanceRow, text: &str) {
    if !row.message.is_empty() {
        row.message.push_str("; ");
    }
    row.message.push_str(text);
}

fn evaluate_inner(inst: &Instance<'_>, settings: &RunSettings, tol: &Tolerances, ctx: &mut Ctx<'_>) -> Result<(), Error> {
    let model = inst.family.manifold.build(inst.n, inst.density.clone())?;
    let grid = Grid::uniform(&model, settings.grid)?;
    let checks = &settings.checks;
    ctx.row.diameter = Some(diameter(&model));

    let needs_spectrum = checks.iter().any(|c| matches!(c, Check::Spectrum | Check::Bounds | Check::Estimates));
    if needs_spectrum {
        let fe = first_nonzero_eigenvalue(&model, &grid, FirstEigenOptions::default())?;
        ctx.row.lambda = Some(fe.lambda);
        ctx.row.lambda_error = Some(fe.error_estimate);
        ctx.row.mode = Some(fe.mode);
        if fe.ambiguous {
            note(&mut ctx.row, "first eigenvalue shared by several modes within the error estimate");
        }
        ctx.require(fe.lambda.is_finite() && fe.lambda > 0.0, "spectrum");
        if checks.iter().any(|c| matches!(c, Check::Bounds | Check::Estimates)) {
            certify(&model, &grid, &fe, settings, tol, ctx)?;
        }
    }
    if checks.contains(&Check::Soliton) {
        match inst.family.gamma {
            Some(gamma) if model.topology() == Topology::IntervalSphere => {
                soliton(&model, &grid, &inst.density, gamma, tol, ctx)?;
            }
            Some(_) => note(&mut ctx.row, "soliton checks need an interval-sphere"),
            None => note(&mut ctx.row, "no gamma given; soliton checks skipped"),
        }
    }
    Ok(())
}

fn certify(
    model: &WarpedManifold,
    grid: &Grid,
    fe: &FirstEigen,
    settings: &RunSettings,
    tol: &Tolerances,
    ctx: &mut Ctx<'_>,
) -> Result<(), Error> {
    if model.topology() == Topology::Circle {
        note(&mut ctx.row, "bounds and estimates need dimension at least 2");
        return Ok(());
    }
    let n = model.dim();
    let k = be_ricci_lower_bound(model, grid)?.k_eff;
    let d = diameter(model);
    ctx.row.k_eff = Some(k);
    if !(k > 0.0) {
        note(&mut ctx.row, "K_eff is not positive; bounds inapplicable");
        return Ok(());
    }
    let lambda = fe.lambda;
    let checks = &settings.checks;
    if checks.contains(&Check::Bounds) {
        let lich = bounds::lichnerowicz_be(n, k)?;
        let ling = bounds::ling_be_bound(n, k, d)?;
        ctx.row.bound_lichnerowicz = Some(lich);
        ctx.row.margin_lichnerowicz = Some(lambda - lich);
        ctx.row.bound_ling = Some(ling);
        ctx.row.margin_ling = Some(lambda - ling);
        ctx.require(lambda - lich >= -tol.bound, "lichnerowicz bound");
        ctx.require(lambda - ling >= -tol.bound, "diameter bound");
    }

    let alpha = 0.5 * (n - 1) as f64 * k;
    let v = normalize(&fe.field, lambda, settings.b, alpha)?;
    // a is zero up to discretization in the symmetric case.
    let a = if v.a < tol.symmetric_a { 0.0 } else { v.a };
    ctx.row.a = Some(v.a);
    ctx.row.delta = Some(v.delta);
    let verdict = bounds::ling_case(a, v.delta).ok();
    if let Some(cv) = verdict {
        ctx.row.case = Some(cv.case.label().into());
        ctx.row.mu = cv.mu;
        if checks.contains(&Check::Bounds) {
            let b = case_bound(n, k, d, a, v.delta, &cv)?;
            ctx.row.bound_case = Some(b);
            ctx.row.margin_case = Some(lambda - b);
            ctx.require(lambda - b >= -tol.bound, "case bound");
        }
    } else {
        note(&mut ctx.row, "δ outside (0, 1/2]; case split skipped");
    }

    if checks.contains(&Check::Estimates) {
        let g = gradient_estimate_margin(&v);
        ctx.row.gradient_ratio = Some(g.max_ratio);
        ctx.row.gradient_bound = Some(g.bound);
        ctx.row.gradient_margin = Some(g.margin);
        ctx.require(g.max_ratio <= g.bound * (1.0 + tol.gradient), "gradient estimate");
        match verdict.and_then(|cv| barrier_for(&v, a, &cv, settings.sigma)) {
            Some(barrier) => {
                let z = compute_Z(&v, settings.bins)?;
                let dom = barrier_dominance_check(&z, |t| barrier.value(t).unwrap_or(f64::NAN));
                ctx.row.dominance_margin = Some(dom.margin);
                ctx.require(dom.margin >= -tol.dominance, "barrier dominance");
            }
            None => note(&mut ctx.row, "no barrier for this case; dominance skipped"),
        }
    }
    Ok(())
}

/// The lower bound delivered by the case the split lands in.
fn case_bound(n: usize, k: f64, d: f64, a: f64, delta: f64, cv: &CaseVerdict) -> Result<f64, Error> {
    match cv.case {
        LingCase::A => bounds::prop9_bound(n, k, d),
        LingCase::B1 | LingCase::B2b1 => bounds::prop8_bound(n, k, d, cv.mu.unwrap_or(1.0), a, delta),
        LingCase::B2a => Ok(PI * PI / (d * d) + cv.multiple * 0.5 * (n - 1) as f64 * k),
        LingCase::B2b2 => bounds::ling_be_bound(n, k, d),
    }
}

fn barrier_for(v: &NormalizedEigenfunction, a: f64, cv: &CaseVerdict, sigma: Option<f64>) -> Option<BarrierFamily> {
    let delta = v.delta;
    match (cv.case, cv.mu) {
        (LingCase::B2b2, _) => BarrierFamily::sigma(a, v.b, delta, sigma?).ok(),
        (_, Some(mu)) => BarrierFamily::standard(a, v.b, delta, mu.min(1.0)).ok(),
        _ => None,
    }
}

fn soliton(
    model: &WarpedManifold,
    grid: &Grid,
    f: &Profile,
    gamma: f64,
    tol: &Tolerances,
    ctx: &mut Ctx<'_>,
) -> Result<(), Error> {
    let candidate = SolitonCandidate::new(model.clone(), f.clone(), gamma)?;
    let shifted = normalize_f(&candidate, grid);
    let candidate = candidate.with_potential(shifted.f)?;
    let res = soliton_residual(&candidate, grid).max();
    let ids = hamilton_identities(&candidate, grid);
    let eig = eigenfunction_identity(&candidate, grid, MEMBERSHIP_TOL)?;
    ctx.row.potential_shift = Some(shifted.shift);
    ctx.row.soliton_residual = Some(res);
    ctx.row.identity_bianchi = Some(ids.bianchi);
    ctx.row.identity_constancy = Some(ids.constancy);
    ctx.row.identity_trace = Some(ids.trace);
    ctx.row.eigen_residual = Some(eig.residual);
    ctx.row.eigen_membership = Some(eig.membership.contains);
    ctx.row.gap_verdict = Some(bounds::gap_classifier(diameter(model), gamma)?.label().into());
    if eig.vacuous {
        note(&mut ctx.row, "potential vanishes; spectrum membership is vacuous");
    }
    if let Some(n) = bounds::soliton_dimension_note(model.dim()) {
        note(&mut ctx.row, n);
    }
    // A solution of the soliton equation must satisfy every derived identity.
    if res < tol.soliton {
        let worst = ids.bianchi.max(ids.constancy).max(ids.trace).max(eig.residual);
        ctx.require(worst < tol.soliton, "soliton identities");
    }
    Ok(())
}
