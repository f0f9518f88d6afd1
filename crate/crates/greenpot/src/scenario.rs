//! Scenario files: the JSON description of one batch run.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::conditions::{exponents, Exponents};
use crate::domain::{Domain, DomainKind, Point};
use crate::error::{Error, Result};
use crate::field::EvalSet;
use crate::measure::{GridSpec, Measure};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub dim: u32,
}

/// Either one constant value or an explicit per-node list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueSpec {
    Constant(f64),
    PerNode(Vec<f64>),
}

/// Measure description. Grid and radial kinds are densities; a constant grid
/// value applies on the cells whose centers fall inside the domain.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    Atomic {
        points: Vec<Vec<f64>>,
        weights: Vec<f64>,
    },
    Grid {
        h: f64,
        extent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
        value: ValueSpec,
    },
    Radial {
        rmax: f64,
        nodes: usize,
        value: ValueSpec,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RieszGridSpec {
    pub h: f64,
    pub extent: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum EvalSetSpec {
    Grid { h: f64, extent: f64 },
    Radial { rmax: f64, resolution: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckName {
    Thm11,
    Cor12,
    Iterated,
    #[serde(rename = "lemma26_27_28")]
    Lemma26_27_28,
    Lemma31,
    Lemma32,
    Solve,
    Verify,
}

/// A check request: a bare name, or `{"iterated": [t, ...]}` to pin the
/// exponent list of the iterated-inequality check.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckSpec {
    Named(CheckName),
    Iterated { iterated: Vec<f64> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub domain: DomainSpec,
    pub sigma: MeasureSpec,
    pub mu: MeasureSpec,
    pub q: f64,
    pub p: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<RieszGridSpec>,
    pub eval_set: EvalSetSpec,
    pub checks: Vec<CheckSpec>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub seed: u64,
}

/// Checks resolved from the scenario, with defaults applied.
#[derive(Debug, Clone, Default)]
pub struct ResolvedChecks {
    pub thm11: bool,
    pub cor12: bool,
    pub iterated: Option<Vec<f64>>,
    pub lemma26_27_28: bool,
    pub lemma31: bool,
    pub lemma32: bool,
    pub solve: bool,
    pub verify: bool,
}

/// A scenario materialized into domain objects, measures and exponents.
#[derive(Debug)]
pub struct BuiltScenario {
    pub domain: Domain,
    pub sigma: Measure,
    pub mu: Measure,
    pub exps: Exponents,
    pub eval: EvalSet,
    pub riesz_grid: Option<GridSpec>,
    pub checks: ResolvedChecks,
    pub rel_tol: f64,
    pub max_iter: usize,
    pub iterated_tolerance: f64,
    pub margin_tolerance: f64,
    pub residual_tolerance: f64,
    pub seed: u64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        serde_json::from_str(text)
            .map_err(|e| Error::Validation(format!("scenario does not parse: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)?;
        Scenario::from_json(&text)
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    /// Validate and materialize. Validation failures name the violated
    /// requirement; they map to CLI exit 1.
    pub fn build(&self) -> Result<BuiltScenario> {
        let domain = Domain::new(self.domain.kind, self.domain.dim)
            .map_err(|e| Error::Validation(e.to_string()))?;
        let exps = match exponents(self.domain.dim, self.p, self.q) {
            Ok(e) => e,
            Err(e) => {
                return Err(Error::Validation(format!(
                    "inadmissible exponents in scenario '{}': {e}",
                    self.name
                )))
            }
        };
        let sigma = build_measure(&domain, &self.sigma)
            .map_err(|e| Error::Validation(format!("sigma: {e}")))?;
        let mu = build_measure(&domain, &self.mu)
            .map_err(|e| Error::Validation(format!("mu: {e}")))?;
        let eval = match &self.eval_set {
            EvalSetSpec::Grid { h, extent } => {
                let grid = cube_grid(&domain, *h, *extent, None)
                    .map_err(|e| Error::Validation(format!("eval_set: {e}")))?;
                EvalSet::grid_in_domain(&domain, grid)
                    .map_err(|e| Error::Validation(format!("eval_set: {e}")))?
            }
            EvalSetSpec::Radial { rmax, resolution } => {
                EvalSet::radial_uniform(&domain, *rmax, *resolution)
                    .map_err(|e| Error::Validation(format!("eval_set: {e}")))?
            }
        };
        let riesz_grid = match &self.grid {
            Some(g) => Some(
                cube_grid(&domain, g.h, g.extent, None)
                    .map_err(|e| Error::Validation(format!("grid: {e}")))?,
            ),
            None => None,
        };

        let mut checks = ResolvedChecks::default();
        for spec in &self.checks {
            match spec {
                CheckSpec::Named(name) => {
                    let slot = match name {
                        CheckName::Thm11 => &mut checks.thm11,
                        CheckName::Cor12 => &mut checks.cor12,
                        CheckName::Iterated => {
                            if checks.iterated.is_some() {
                                return Err(Error::Validation(
                                    "check 'iterated' requested twice".into(),
                                ));
                            }
                            checks.iterated = Some(vec![0.5, 1.0, 2.0]);
                            continue;
                        }
                        CheckName::Lemma26_27_28 => &mut checks.lemma26_27_28,
                        CheckName::Lemma31 => &mut checks.lemma31,
                        CheckName::Lemma32 => &mut checks.lemma32,
                        CheckName::Solve => &mut checks.solve,
                        CheckName::Verify => &mut checks.verify,
                    };
                    if *slot {
                        return Err(Error::Validation(format!(
                            "check {name:?} requested twice"
                        )));
                    }
                    *slot = true;
                }
                CheckSpec::Iterated { iterated } => {
                    if checks.iterated.is_some() {
                        return Err(Error::Validation(
                            "check 'iterated' requested twice".into(),
                        ));
                    }
                    if iterated.is_empty() {
                        return Err(Error::Validation(
                            "iterated check needs at least one exponent".into(),
                        ));
                    }
                    checks.iterated = Some(iterated.clone());
                }
            }
        }
        if checks.verify && !checks.solve {
            return Err(Error::Validation(
                "check 'verify' requires check 'solve'".into(),
            ));
        }
        if (checks.lemma31 || checks.riesz_needed()) && riesz_grid.is_none() {
            return Err(Error::Validation(
                "check 'lemma31' needs the scenario 'grid' block".into(),
            ));
        }

        Ok(BuiltScenario {
            domain,
            sigma,
            mu,
            exps,
            eval,
            riesz_grid,
            checks,
            rel_tol: self.tolerance("rel_tol", 1e-8),
            max_iter: self.tolerance("max_iter", 200.0) as usize,
            iterated_tolerance: self.tolerance("iterated_violation", 1e-3),
            margin_tolerance: self.tolerance("lower_bound_margin", 1e-6),
            residual_tolerance: self.tolerance("equation_residual", 1e-4),
            seed: self.seed,
        })
    }
}

impl ResolvedChecks {
    fn riesz_needed(&self) -> bool {
        self.lemma31
    }
}

/// Cube grid with integer cell count per axis derived from h and extent.
fn cube_grid(domain: &Domain, h: f64, extent: f64, center: Option<&[f64]>) -> Result<GridSpec> {
    if !(h > 0.0 && h.is_finite() && extent > 0.0 && extent.is_finite()) {
        return Err(Error::InvalidArgument(
            "grid needs positive finite h and extent".into(),
        ));
    }
    let cells_f = 2.0 * extent / h;
    let cells = cells_f.round() as usize;
    if cells == 0 || (cells_f - cells as f64).abs() > 1e-9 * cells_f {
        return Err(Error::InvalidArgument(format!(
            "2·extent/h = {cells_f} is not an integer cell count"
        )));
    }
    let default_center = vec![0.0; domain.dim() as usize];
    let center = center.unwrap_or(&default_center);
    if center.len() != domain.dim() as usize {
        return Err(Error::InvalidArgument(
            "grid center has the wrong dimension".into(),
        ));
    }
    GridSpec::cube(center, extent, cells)
}

fn build_measure(domain: &Domain, spec: &MeasureSpec) -> Result<Measure> {
    match spec {
        MeasureSpec::Atomic { points, weights } => {
            let pts = points
                .iter()
                .map(|c| Point::new(c.clone()))
                .collect::<Result<Vec<_>>>()?;
            Measure::atomic(domain, pts, weights.clone())
        }
        MeasureSpec::Grid {
            h,
            extent,
            center,
            value,
        } => {
            let grid = cube_grid(domain, *h, *extent, center.as_deref())?;
            match value {
                ValueSpec::Constant(v) => Measure::constant_on_grid(domain, grid, *v),
                ValueSpec::PerNode(values) => {
                    Measure::grid_density(domain, grid, values.clone())
                }
            }
        }
        MeasureSpec::Radial { rmax, nodes, value } => match value {
            ValueSpec::Constant(v) => Measure::constant_radial(domain, *rmax, *nodes, *v),
            ValueSpec::PerNode(values) => {
                if values.len() != *nodes {
                    return Err(Error::InvalidArgument(format!(
                        "radial value list has {} entries for {} nodes",
                        values.len(),
                        nodes
                    )));
                }
                let node_radii = (0..*nodes)
                    .map(|i| rmax * i as f64 / (*nodes - 1) as f64)
                    .collect();
                Measure::radial_density(domain, node_radii, values.clone())
            }
        },
    }
}
