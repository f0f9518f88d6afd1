//! Machine-readable run reports and their JSON conventions.
//!
//! Extended reals serialize as plain numbers when finite and as the string
//! "+inf" when infinite, so a report never contains JSON null or a lossy
//! encoding of an infinity.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::conditions::{ConditionReport, DensityConditionReport, Exponents, LemmaNormReport};
use crate::energy::EnergyReport;
use crate::scenario::Scenario;
use crate::solver::SolutionDiagnostics;

/// serde adapter for extended nonnegative reals.
pub mod ext_real {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if *v == f64::INFINITY {
            s.serialize_str("+inf")
        } else {
            s.serialize_str("-inf")
        }
    }
}

/// serde adapter for `Option<f64>` fields that may hold infinities.
pub mod ext_real_opt {
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => super::ext_real::serialize(x, s),
            None => s.serialize_none(),
        }
    }
}

/// A requested check either produced a result or was skipped because its
/// precondition failed (the reason says which).
#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum CheckOutcome<T> {
    Ok(T),
    Skipped { skipped: String },
}

impl<T> CheckOutcome<T> {
    pub fn as_ok(&self) -> Option<&T> {
        match self {
            CheckOutcome::Ok(t) => Some(t),
            CheckOutcome::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IteratedResult {
    pub t: f64,
    /// Max signed violation over the sample points (positive = violation).
    pub violation: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub converged: bool,
    pub iterations: usize,
    /// Last sup-norm relative change.
    pub final_rel_change: f64,
    /// Relative residual of the integral equation at the solution.
    #[serde(with = "ext_real_opt")]
    pub equation_residual: Option<f64>,
    pub residual_bound: f64,
    pub max_monotonicity_violation: f64,
    pub sup_norm: f64,
    /// Solution value at the origin when the evaluation set contains it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value_at_origin: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyBlock {
    #[serde(flatten)]
    pub diagnostics: SolutionDiagnostics,
    pub satisfied: bool,
}

/// One entry per requested check, in pipeline order.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ChecksBlock {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm11: Option<ConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cor12: Option<DensityConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterated: Option<Vec<IteratedResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma26_27_28: Option<CheckOutcome<LemmaNormReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma31: Option<EnergyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemma32: Option<EnergyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solve: Option<SolveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<CheckOutcome<VerifyBlock>>,
}

/// The full run report. Deterministic for a fixed effective scenario except
/// for the timings block, which regression comparisons strip.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub version: String,
    pub scenario: Scenario,
    pub exponents: Exponents,
    pub checks: ChecksBlock,
    /// True iff every requested satisfied-flag is true and the solver (when
    /// requested) converged.
    pub satisfied: bool,
    /// Wall-clock seconds per stage; the only nondeterministic block.
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn to_json(&self) -> crate::error::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// The published JSON schema for reports.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");
