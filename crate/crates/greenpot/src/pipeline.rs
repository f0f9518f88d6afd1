//! Scenario execution: checks in dependency order, one report out.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::conditions::{check_cor12, check_thm11, iterated_check, lemma_norm_checks};
use crate::domain::{DomainKind, Point};
use crate::energy::{lemma31_check, lemma32_check};
use crate::error::{Error, Result};
use crate::field::{EvalSet, Field};
use crate::potential::potential_field;
use crate::report::{
    CheckOutcome, ChecksBlock, IteratedResult, Report, SolveSummary, VerifyBlock,
};
use crate::sampling::halton_in_domain;
use crate::scenario::Scenario;
use crate::solver::{lower_bound_field, picard_solve, verify_solution, SolverConfig, SolverTrace};

/// Command-line overrides applied before a run.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub tolerance_overrides: Vec<(String, f64)>,
    pub profiles_dir: Option<PathBuf>,
}

/// Number of low-discrepancy sample points for the iterated inequalities.
const ITERATED_SAMPLES: usize = 100;

/// Execute a scenario and return the report; profile tables are written as a
/// side effect when requested.
pub fn run_scenario(scenario: &Scenario, opts: &RunOptions) -> Result<Report> {
    // fold overrides into the effective scenario so the report echo is exact
    let mut effective = scenario.clone();
    for (k, v) in &opts.tolerance_overrides {
        effective.tolerances.insert(k.clone(), *v);
    }
    if let Some(seed) = opts.seed {
        effective.seed = seed;
    }

    let built = effective.build()?;
    let mut checks = ChecksBlock::default();
    let mut timings = BTreeMap::new();
    let mut satisfied = true;
    let total_start = Instant::now();

    let thm11 = {
        let t = Instant::now();
        let rep = check_thm11(&built.domain, &built.sigma, &built.mu, &built.exps)?;
        timings.insert("thm11".into(), t.elapsed().as_secs_f64());
        rep
    };
    if built.checks.thm11 {
        satisfied &= thm11.satisfied;
        checks.thm11 = Some(thm11.clone());
    }

    if built.checks.cor12 {
        let t = Instant::now();
        let rep = check_cor12(&built.domain, &built.sigma, &built.mu, &built.exps)?;
        timings.insert("cor12".into(), t.elapsed().as_secs_f64());
        satisfied &= rep.satisfied;
        checks.cor12 = Some(rep);
    }

    if let Some(ts) = &built.checks.iterated {
        let t = Instant::now();
        let pts = sample_points(&built);
        let mut results = Vec::with_capacity(ts.len());
        for &texp in ts {
            let violation = iterated_check(&built.domain, &built.sigma, texp, &pts)?;
            let tol = if (texp - 1.0).abs() < 1e-12 {
                1e-10
            } else {
                built.iterated_tolerance
            };
            let ok = violation <= tol;
            satisfied &= ok;
            results.push(IteratedResult {
                t: texp,
                violation,
                satisfied: ok,
            });
        }
        timings.insert("iterated".into(), t.elapsed().as_secs_f64());
        checks.iterated = Some(results);
    }

    if built.checks.lemma26_27_28 {
        let t = Instant::now();
        if thm11.satisfied || built.sigma.is_zero() {
            let rep = lemma_norm_checks(
                &built.domain,
                &built.sigma,
                &built.mu,
                &built.exps,
                &built.eval,
                built.seed,
            )?;
            checks.lemma26_27_28 = Some(CheckOutcome::Ok(rep));
        } else {
            checks.lemma26_27_28 = Some(CheckOutcome::Skipped {
                skipped: "integrability conditions fail; interaction norms undefined".into(),
            });
            satisfied = false;
        }
        timings.insert("lemma26_27_28".into(), t.elapsed().as_secs_f64());
    }

    let mut trace: Option<SolverTrace> = None;
    if built.checks.solve {
        let t = Instant::now();
        let cfg = SolverConfig {
            q: built.exps.q,
            max_iter: built.max_iter,
            rel_tol: built.rel_tol,
            eval_set: built.eval.clone(),
        };
        let solved = picard_solve(&built.domain, &built.sigma, &built.mu, &cfg)?;
        timings.insert("solve".into(), t.elapsed().as_secs_f64());
        satisfied &= solved.converged;
        checks.solve = Some(summarize(&solved));
        trace = Some(solved);
    }

    if built.checks.verify {
        let t = Instant::now();
        let trace = trace.as_ref().expect("verify requires solve");
        if trace.converged {
            let diag = verify_solution(
                trace,
                &built.domain,
                &built.sigma,
                &built.mu,
                built.exps.q,
                &built.exps,
            )?;
            let ok = diag.lower_bound_margin >= -built.margin_tolerance
                && diag.lp_norm_dx.is_finite()
                && diag.lp_norm_dsigma.is_finite()
                && diag.residual <= built.residual_tolerance.max(diag.residual_bound);
            satisfied &= ok;
            checks.verify = Some(CheckOutcome::Ok(VerifyBlock {
                diagnostics: diag,
                satisfied: ok,
            }));
        } else {
            checks.verify = Some(CheckOutcome::Skipped {
                skipped: "solver did not converge".into(),
            });
            satisfied = false;
        }
        timings.insert("verify".into(), t.elapsed().as_secs_f64());
    }

    if built.checks.lemma31 {
        let t = Instant::now();
        let grid = built
            .riesz_grid
            .as_ref()
            .expect("validated: lemma31 needs a grid");
        let rep = lemma31_check(
            &built.domain,
            &built.mu,
            built.exps.gamma,
            built.exps.q,
            grid,
        )?;
        timings.insert("lemma31".into(), t.elapsed().as_secs_f64());
        checks.lemma31 = Some(rep);
    }

    if built.checks.lemma32 {
        let t = Instant::now();
        let rep = lemma32_check(&built.domain, &built.mu, built.exps.gamma, &built.eval)?;
        timings.insert("lemma32".into(), t.elapsed().as_secs_f64());
        checks.lemma32 = Some(rep);
    }

    if let Some(dir) = &opts.profiles_dir {
        write_profiles(dir, &built, trace.as_ref())?;
    }

    timings.insert("total".into(), total_start.elapsed().as_secs_f64());
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        scenario: effective,
        exponents: built.exps,
        checks,
        satisfied,
        timings,
    })
}

fn summarize(trace: &SolverTrace) -> SolveSummary {
    let origin = Point::origin(trace.solution.domain().dim() as usize);
    let value_at_origin = trace.solution.eval(&origin).ok();
    SolveSummary {
        converged: trace.converged,
        iterations: trace.iterations(),
        final_rel_change: trace.residuals.last().copied().unwrap_or(0.0),
        equation_residual: trace.equation_residual,
        residual_bound: trace.residual_bound,
        max_monotonicity_violation: trace.max_monotonicity_violation(),
        sup_norm: trace.solution.sup_norm(),
        value_at_origin,
    }
}

fn sample_points(built: &crate::scenario::BuiltScenario) -> Vec<Point> {
    let cap = match built.domain.kind() {
        DomainKind::UnitBall => 0.9,
        _ => 1.0,
    };
    halton_in_domain(&built.domain, ITERATED_SAMPLES, cap)
}

/// Radial profile tables (columns r,value) of **G**σ, **G**μ, the pointwise
/// lower bound and the solution.
fn write_profiles(
    dir: &Path,
    built: &crate::scenario::BuiltScenario,
    trace: Option<&SolverTrace>,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let radii: Vec<f64> = match &built.eval {
        EvalSet::Radial { nodes, .. } => nodes.clone(),
        _ => (0..=256).map(|i| i as f64 / 256.0).collect(),
    };
    let n = built.domain.dim() as usize;
    let along_axis = |r: f64| match built.domain.kind() {
        // half-space profiles climb the interior normal
        DomainKind::HalfSpace => {
            let mut c = vec![0.0; n];
            c[n - 1] = r.max(1e-9);
            Point::new(c).unwrap()
        }
        _ => Point::radial(r, n),
    };
    let profile_of_field = |f: &Field| -> Result<Vec<(f64, f64)>> {
        radii
            .iter()
            .map(|&r| Ok((r, f.eval(&along_axis(r))?)))
            .collect()
    };
    let pts: Vec<Point> = radii.iter().map(|&r| along_axis(r)).collect();
    let eval = EvalSet::points(&built.domain, pts)?;

    let gsigma = potential_field(&built.domain, &built.sigma, &eval)?;
    let gmu = potential_field(&built.domain, &built.mu, &eval)?;
    let lb = lower_bound_field(&built.domain, &built.sigma, built.exps.q, &eval)?;
    let columns: Vec<(&str, Vec<(f64, f64)>)> = {
        let by_index = |f: &Field| -> Vec<(f64, f64)> {
            radii
                .iter()
                .zip(f.values().iter())
                .map(|(&r, &v)| (r, v))
                .collect()
        };
        let mut cols = vec![
            ("gsigma.csv", by_index(&gsigma)),
            ("gmu.csv", by_index(&gmu)),
            ("lower_bound.csv", by_index(&lb)),
        ];
        if let Some(trace) = trace {
            cols.push(("solution.csv", profile_of_field(&trace.solution)?));
        }
        cols
    };
    for (file, rows) in columns {
        let mut text = String::from("r,value\n");
        for (r, v) in rows {
            text.push_str(&format!("{r},{v}\n"));
        }
        std::fs::write(dir.join(file), text)?;
    }
    Ok(())
}

/// Exit-code mapping of the CLI contract.
pub fn exit_code_for(outcome: &Result<Report>) -> i32 {
    match outcome {
        Ok(report) if report.satisfied => 0,
        Ok(_) => 2,
        Err(Error::Validation(_)) | Err(Error::Io(_)) | Err(Error::Json(_)) => 1,
        Err(_) => 1,
    }
}
