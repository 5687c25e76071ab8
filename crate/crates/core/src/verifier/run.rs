//! The verification pipeline and suite runner.

use super::catalog::{builtin_catalog, Body, Functional, IdentitySpec};
use super::relations::Relation;
use super::report::{
    ContextInfo, MultiplierEvidence, Rational, RelationEvidence, ResidualStats, SuiteEntry,
    SuiteReport, Verdict, VerificationReport, ZeroEvidence,
};
use crate::contour::cell_coords;
use crate::error::{Error, Result};
use crate::lattice::lattice_new;
use crate::qp::{
    check_zero_symbolic, eval_expr, expr_multiplier, predicted_zero_count, Bindings, EvalContext,
    Expr, Family, Multiplier,
};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Residuals this far above tolerance count as evidence against the identity.
pub const FALSIFY_FACTOR: f64 = 1e3;
/// Below this `Im τ` the theta series lose enough accuracy that a pass is
/// reported as inconclusive.
pub const MIN_IM_TAU: f64 = 0.3;
/// Parameter pairs closer than this (in cell units, modulo the lattice) are
/// redrawn.
pub const DEGENERACY_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyParams {
    pub seed: u64,
    pub samples: usize,
    /// Family default when unset.
    pub tol: Option<f64>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams {
            seed: 42,
            samples: 200,
            tol: None,
        }
    }
}

pub fn default_tolerance(family: Family) -> f64 {
    match family {
        Family::Theta => 1e-10,
        Family::Sigma => 1e-9,
    }
}

/// The three lattices the suite runs on by default.
pub fn default_contexts() -> Vec<EvalContext> {
    [
        (C64::new(PI / 2.0, 0.0), C64::new(0.0, PI / 2.0)),
        (C64::new(1.0, 0.0), C64::new(0.3, 0.9)),
        (C64::new(1.0, 0.2), C64::new(-0.4, 1.1)),
    ]
    .into_iter()
    .map(|(w1, w3)| EvalContext::Lattice(lattice_new(w1, w3).expect("default lattices are valid")))
    .collect()
}

/// Generators of the basic period cell of a family, as numbers.
fn cell_basis(family: Family, ctx: &EvalContext) -> Result<(C64, C64)> {
    Ok(match family {
        Family::Sigma => {
            let lat = ctx.lattice()?;
            (2.0 * lat.omega1(), 2.0 * lat.omega3())
        }
        Family::Theta => (C64::new(PI, 0.0), ctx.tau_nome().pi_tau()),
    })
}

/// Uniform draws `u·λ₁ + v·λ₂` with `(u, v)` in `(0.05, 0.95)²`.
struct Sampler {
    rng: ChaCha8Rng,
    basis: (C64, C64),
}

impl Sampler {
    fn new(seed: u64, basis: (C64, C64)) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            basis,
        }
    }

    fn point(&mut self) -> C64 {
        let u: f64 = self.rng.gen_range(0.05..0.95);
        let v: f64 = self.rng.gen_range(0.05..0.95);
        u * self.basis.0 + v * self.basis.1
    }

    fn congruent(&self, p: C64, q: C64) -> bool {
        let (u, v) = cell_coords(p - q, self.basis.0, self.basis.1);
        (u - u.round()).abs() < DEGENERACY_RADIUS && (v - v.round()).abs() < DEGENERACY_RADIUS
    }

    /// Binds the variable (if any) and every parameter, redrawing parameter
    /// sets that contain a congruent pair. Returns the number of redraws.
    fn bindings(
        &mut self,
        var: Option<&str>,
        params: &[String],
        out: &mut Bindings,
    ) -> Result<usize> {
        let mut rejected = 0;
        loop {
            out.clear();
            if let Some(v) = var {
                out.insert(v.to_string(), self.point());
            }
            let values: Vec<C64> = params.iter().map(|_| self.point()).collect();
            let degenerate = values
                .iter()
                .enumerate()
                .any(|(i, p)| values[..i].iter().any(|q| self.congruent(*p, *q)));
            if !degenerate {
                out.extend(params.iter().cloned().zip(values));
                return Ok(rejected);
            }
            rejected += 1;
            if rejected > 1000 {
                return Err(Error::Degenerate(
                    "could not draw non-congruent parameters".into(),
                ));
            }
        }
    }
}

fn relative(value: C64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        value.norm() / scale
    }
}

/// Largest relative residual of `expr` over `samples` draws of all symbols.
fn expr_residuals(
    expr: &Expr,
    var: Option<&str>,
    ctx: &EvalContext,
    basis: (C64, C64),
    seed: u64,
    samples: usize,
) -> Result<ResidualStats> {
    let params: Vec<String> = expr.collect_parameters();
    let mut sampler = Sampler::new(seed, basis);
    let mut bindings = Bindings::new();
    let mut stats = ResidualStats {
        samples,
        seed,
        max_rel: 0.0,
        rejected: 0,
    };
    for _ in 0..samples {
        stats.rejected += sampler.bindings(var, &params, &mut bindings)?;
        let s = eval_expr(expr, &bindings, ctx)?;
        let r = relative(s.value, s.scale);
        if !r.is_finite() {
            return Err(Error::Degenerate(format!(
                "non-finite residual at {bindings:?}"
            )));
        }
        stats.max_rel = stats.max_rel.max(r);
    }
    Ok(stats)
}

fn multiplier_evidence(gen: &crate::qp::LinForm, m: &Result<Multiplier>) -> MultiplierEvidence {
    match m {
        Ok(m) => MultiplierEvidence {
            generator: gen.to_string(),
            matched: true,
            scalar: Some(m.scalar_string()),
            alpha: Some(m.alpha_string()),
            beta: Some(m.beta_string()),
            detail: None,
        },
        Err(e) => MultiplierEvidence {
            generator: gen.to_string(),
            matched: false,
            scalar: None,
            alpha: None,
            beta: None,
            detail: Some(e.to_string()),
        },
    }
}

fn blank_report(
    spec: &IdentitySpec,
    ctx: &EvalContext,
    tol: f64,
    stats: ResidualStats,
) -> VerificationReport {
    VerificationReport {
        identity: spec.name.clone(),
        context: ContextInfo::from(ctx),
        tolerance: tol,
        multipliers: Vec::new(),
        predicted_n: None,
        zeros: Vec::new(),
        zero_excess: false,
        residuals: stats,
        confirmation: None,
        relations: Vec::new(),
        verdict: Verdict::Inconclusive,
        notes: Vec::new(),
    }
}

fn verify_functional(
    spec: &IdentitySpec,
    f: &Functional,
    ctx: &EvalContext,
    params: &VerifyParams,
    tol: f64,
) -> Result<VerificationReport> {
    let basis = cell_basis(spec.family, ctx)?;
    let var = f.variable.as_str();

    let m1 = expr_multiplier(&f.expr, var, &f.generators.0);
    let m2 = expr_multiplier(&f.expr, var, &f.generators.1);
    let evidence = vec![
        multiplier_evidence(&f.generators.0, &m1),
        multiplier_evidence(&f.generators.1, &m2),
    ];
    let mismatch = [&m1, &m2]
        .iter()
        .any(|m| matches!(m, Err(Error::MultiplierMismatch { .. })));

    let mut notes = Vec::new();
    let predicted = match (&m1, &m2) {
        (Ok(a), Ok(b)) => match predicted_zero_count(a, b, &f.generators.0, &f.generators.1) {
            Ok(n) => Some(n),
            Err(e) => {
                notes.push(format!("zero count unavailable: {e}"));
                None
            }
        },
        _ => None,
    };
    let integral = predicted.is_some_and(|n| n.is_integer());
    if predicted.is_some() && !integral {
        notes.push("predicted zero count is not an integer".into());
    }

    let mut zeros = Vec::with_capacity(f.candidates.len());
    for (i, cand) in f.candidates.iter().enumerate() {
        let symbolic =
            check_zero_symbolic(&f.expr, &BTreeMap::from([(var.to_string(), cand.clone())]));
        let at = f.expr.substitute(var, cand);
        let seed = params.seed.wrapping_add(1000 + i as u64);
        let stats = expr_residuals(&at, None, ctx, basis, seed, params.samples)?;
        zeros.push(ZeroEvidence {
            candidate: cand.to_string(),
            symbolic,
            residual: stats.max_rel,
        });
    }
    if let Some(note) = &f.candidate_note {
        notes.push(note.clone());
    }

    let stats = expr_residuals(&f.expr, Some(var), ctx, basis, params.seed, params.samples)?;
    let mut report = blank_report(spec, ctx, tol, stats);
    report.multipliers = evidence;
    report.predicted_n = predicted.map(Rational);
    report.zeros = zeros;
    report.notes = notes;
    if integral {
        let n = predicted.map_or(0, |n| *n.numer());
        report.zero_excess = report.verified_candidates() as i64 > n;
    }

    if report.residuals.max_rel > FALSIFY_FACTOR * tol {
        let rerun = expr_residuals(
            &f.expr,
            Some(var),
            ctx,
            basis,
            params.seed.wrapping_add(1),
            2 * params.samples,
        )?;
        let confirmed = rerun.max_rel > FALSIFY_FACTOR * tol;
        report.confirmation = Some(rerun);
        if confirmed {
            report.verdict = Verdict::Falsified;
        }
    }
    if mismatch {
        report.verdict = Verdict::Falsified;
        for (ev, m) in report.multipliers.iter().zip([&m1, &m2]) {
            if let Err(e @ Error::MultiplierMismatch { .. }) = m {
                report
                    .notes
                    .push(format!("generator {}: {e}", ev.generator));
            }
        }
    } else if report.verdict != Verdict::Falsified
        && report.multipliers.iter().all(|m| m.matched)
        && integral
        && report.residuals.max_rel < tol
    {
        report.verdict = Verdict::Verified;
    }
    Ok(report)
}

fn relation_residuals(
    rels: &[Relation],
    ctx: &EvalContext,
    basis: (C64, C64),
    seed: u64,
    samples: usize,
) -> Result<Vec<f64>> {
    let mut sampler = Sampler::new(seed, basis);
    let mut worst = vec![0.0f64; rels.len()];
    for s in 0..samples {
        let z = sampler.point();
        for (w, r) in worst.iter_mut().zip(rels) {
            if r.sampled || s == 0 {
                let res = r.residual(ctx, z)?;
                if !res.is_finite() {
                    return Err(Error::Degenerate(format!(
                        "{}: non-finite residual",
                        r.label
                    )));
                }
                *w = w.max(res);
            }
        }
    }
    Ok(worst)
}

fn verify_relations(
    spec: &IdentitySpec,
    rels: &[Relation],
    ctx: &EvalContext,
    params: &VerifyParams,
    tol: f64,
) -> Result<VerificationReport> {
    let basis = cell_basis(spec.family, ctx)?;
    let tols: Vec<f64> = rels.iter().map(|r| r.tolerance.unwrap_or(tol)).collect();
    let worst = relation_residuals(rels, ctx, basis, params.seed, params.samples)?;
    let stats = ResidualStats {
        samples: params.samples,
        seed: params.seed,
        max_rel: worst.iter().copied().fold(0.0, f64::max),
        rejected: 0,
    };
    let mut report = blank_report(spec, ctx, tol, stats);
    report.relations = rels
        .iter()
        .zip(&worst)
        .zip(&tols)
        .map(|((r, &max_rel), &tolerance)| RelationEvidence {
            relation: r.label.clone(),
            max_rel,
            tolerance,
        })
        .collect();
    report
        .notes
        .push("closed-form relations: no multiplier or zero-count layer".into());

    let suspicious = worst
        .iter()
        .zip(&tols)
        .any(|(w, t)| *w > FALSIFY_FACTOR * t);
    if suspicious {
        let seed = params.seed.wrapping_add(1);
        let rerun = relation_residuals(rels, ctx, basis, seed, 2 * params.samples)?;
        let confirmed = rerun
            .iter()
            .zip(&tols)
            .any(|(w, t)| *w > FALSIFY_FACTOR * t);
        report.confirmation = Some(ResidualStats {
            samples: 2 * params.samples,
            seed,
            max_rel: rerun.iter().copied().fold(0.0, f64::max),
            rejected: 0,
        });
        if confirmed {
            report.verdict = Verdict::Falsified;
        }
    } else if worst.iter().zip(&tols).all(|(w, t)| w < t) {
        report.verdict = Verdict::Verified;
    }
    Ok(report)
}

/// Runs every layer of the method on one identity in one context.
pub fn verify(
    spec: &IdentitySpec,
    ctx: &EvalContext,
    params: &VerifyParams,
) -> Result<VerificationReport> {
    if params.samples == 0 {
        return Err(Error::Domain("at least one sample is required".into()));
    }
    let tol = params.tol.unwrap_or_else(|| default_tolerance(spec.family));
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    if spec.family == Family::Sigma {
        ctx.lattice()?;
    }
    let mut report = match &spec.body {
        Body::Functional(f) => verify_functional(spec, f, ctx, params, tol)?,
        Body::Relations(rels) => verify_relations(spec, rels, ctx, params, tol)?,
    };
    if report.verdict == Verdict::Verified && ctx.tau_nome().tau().im < MIN_IM_TAU {
        report.verdict = Verdict::Inconclusive;
        report.notes.push(format!(
            "Im tau below {MIN_IM_TAU}: series accuracy not guaranteed"
        ));
    }
    Ok(report)
}

/// Every catalog entry over every context, in catalog-major order.
pub fn run_suite_with_catalog(
    catalog: &[IdentitySpec],
    ctxs: &[EvalContext],
    params: &VerifyParams,
) -> SuiteReport {
    let jobs: Vec<(&IdentitySpec, &EvalContext)> = catalog
        .iter()
        .flat_map(|s| ctxs.iter().map(move |c| (s, c)))
        .collect();
    let entries = jobs
        .par_iter()
        .map(|(spec, ctx)| {
            let (report, error) = match verify(spec, ctx, params) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            SuiteEntry {
                identity: spec.name.clone(),
                context: ContextInfo::from(*ctx),
                report,
                error,
            }
        })
        .collect();
    SuiteReport::new(entries)
}

pub fn run_suite(ctxs: &[EvalContext], params: &VerifyParams) -> SuiteReport {
    run_suite_with_catalog(&builtin_catalog(), ctxs, params)
}
