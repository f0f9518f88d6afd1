//! Scalar fields held as values on an evaluation set plus an evaluation rule.

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, DomainKind, Point};
use crate::error::{Error, Result};
use crate::measure::{GridSpec, Measure};
use crate::special::sphere_area;

/// How a field extends from its stored nodes to arbitrary points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalRule {
    Nearest,
    RadialLinear,
}

/// An evaluation point set. Grid and radial sets are quadrature-complete
/// (they carry Lebesgue weights); a bare point cloud is not.
#[derive(Debug, Clone, PartialEq)]
pub enum EvalSet {
    /// Centers of the `cells` (linear indices) of `grid` that lie in the domain.
    Grid { grid: GridSpec, cells: Vec<usize> },
    /// Radial nodes; the closure radius (e.g. r = 1 on the ball) is allowed.
    Radial { dim: u32, nodes: Vec<f64> },
    /// Arbitrary interior points; no Lebesgue quadrature attached.
    Points(Vec<Point>),
}

impl EvalSet {
    /// Grid evaluation set over the cells of `grid` whose centers lie in the
    /// domain interior.
    pub fn grid_in_domain(domain: &Domain, grid: GridSpec) -> Result<Self> {
        if grid.dim() != domain.dim() as usize {
            return Err(Error::InvalidArgument(
                "grid dimension does not match the domain".into(),
            ));
        }
        let cells: Vec<usize> = (0..grid.num_cells())
            .filter(|&k| domain.contains(&grid.center(k)))
            .collect();
        if cells.is_empty() {
            return Err(Error::InvalidArgument(
                "no grid cell centers fall inside the domain".into(),
            ));
        }
        Ok(EvalSet::Grid { grid, cells })
    }

    pub fn radial(domain: &Domain, nodes: Vec<f64>) -> Result<Self> {
        match domain.kind() {
            DomainKind::UnitBall | DomainKind::WholeSpace => {}
            DomainKind::HalfSpace => {
                return Err(Error::InvalidArgument(
                    "radial evaluation sets require the unit ball or whole space".into(),
                ))
            }
        }
        if nodes.len() < 2
            || !nodes.iter().all(|r| r.is_finite() && *r >= 0.0)
            || !nodes.windows(2).all(|w| w[0] < w[1])
        {
            return Err(Error::InvalidArgument(
                "radial nodes must be at least two, finite, nonnegative, increasing".into(),
            ));
        }
        if domain.kind() == DomainKind::UnitBall && *nodes.last().unwrap() > 1.0 {
            return Err(Error::InvalidArgument(
                "radial nodes must not leave the closed unit ball".into(),
            ));
        }
        Ok(EvalSet::Radial {
            dim: domain.dim(),
            nodes,
        })
    }

    /// `count` equispaced radial nodes spanning [0, rmax].
    pub fn radial_uniform(domain: &Domain, rmax: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidArgument("need at least two radial nodes".into()));
        }
        let nodes = (0..count)
            .map(|i| rmax * i as f64 / (count - 1) as f64)
            .collect();
        EvalSet::radial(domain, nodes)
    }

    pub fn points(domain: &Domain, pts: Vec<Point>) -> Result<Self> {
        for p in &pts {
            domain.check_contains_closure(p)?;
        }
        if pts.is_empty() {
            return Err(Error::InvalidArgument("empty evaluation set".into()));
        }
        Ok(EvalSet::Points(pts))
    }

    pub fn len(&self) -> usize {
        match self {
            EvalSet::Grid { cells, .. } => cells.len(),
            EvalSet::Radial { nodes, .. } => nodes.len(),
            EvalSet::Points(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, i: usize) -> Point {
        match self {
            EvalSet::Grid { grid, cells } => grid.center(cells[i]),
            EvalSet::Radial { dim, nodes } => Point::radial(nodes[i], *dim as usize),
            EvalSet::Points(p) => p[i].clone(),
        }
    }

    pub fn all_points(&self) -> Vec<Point> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Lebesgue quadrature weights, when the set is quadrature-complete.
    pub fn dx_weights(&self) -> Option<Vec<f64>> {
        match self {
            EvalSet::Grid { grid, cells } => {
                Some(vec![grid.cell_volume(); cells.len()])
            }
            EvalSet::Radial { dim, nodes } => {
                let area = sphere_area(*dim);
                let deltas = Measure::radial_deltas(nodes);
                Some(
                    nodes
                        .iter()
                        .zip(deltas.iter())
                        .map(|(&r, &d)| area * r.powi(*dim as i32 - 1) * d)
                        .collect(),
                )
            }
            EvalSet::Points(_) => None,
        }
    }
}

/// Nonnegative scalar field on an evaluation set; +∞ is a legal value.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    domain: Domain,
    eval_set: EvalSet,
    values: Vec<f64>,
    rule: EvalRule,
}

impl Field {
    pub fn new(domain: Domain, eval_set: EvalSet, values: Vec<f64>, rule: EvalRule) -> Result<Self> {
        if values.len() != eval_set.len() {
            return Err(Error::InvalidArgument(format!(
                "field needs {} values, got {}",
                eval_set.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| v.is_nan() || *v < 0.0) {
            return Err(Error::InvalidArgument(
                "field values must be nonnegative (possibly +inf), not NaN".into(),
            ));
        }
        if rule == EvalRule::RadialLinear && !matches!(eval_set, EvalSet::Radial { .. }) {
            return Err(Error::InvalidArgument(
                "radial_linear rule requires a radial evaluation set".into(),
            ));
        }
        Ok(Field {
            domain,
            eval_set,
            values,
            rule,
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn eval_set(&self) -> &EvalSet {
        &self.eval_set
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rule(&self) -> EvalRule {
        self.rule
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Pointwise map; the result must stay nonnegative.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Field> {
        Field::new(
            self.domain,
            self.eval_set.clone(),
            self.values.iter().map(|&v| f(v)).collect(),
            self.rule,
        )
    }

    /// Evaluate at an arbitrary point through the field's rule.
    pub fn eval(&self, x: &Point) -> Result<f64> {
        match self.rule {
            EvalRule::RadialLinear => self.eval_radial_linear(x.norm()),
            EvalRule::Nearest => self.eval_nearest(x),
        }
    }

    fn eval_radial_linear(&self, r: f64) -> Result<f64> {
        let nodes = match &self.eval_set {
            EvalSet::Radial { nodes, .. } => nodes,
            _ => unreachable!("rule checked at construction"),
        };
        let last = *nodes.last().unwrap();
        let first = nodes[0];
        // tolerate round-off overshoot at the ends
        let tol = 1e-9 * last.max(1.0);
        if r > last + tol || r < first - tol {
            return Err(Error::Capability(format!(
                "radius {r} outside the field's radial range [{first}, {last}]"
            )));
        }
        let r = r.clamp(first, last);
        let j = match nodes.binary_search_by(|a| a.partial_cmp(&r).unwrap()) {
            Ok(j) => return Ok(self.values[j]),
            Err(j) => j,
        };
        // r strictly between nodes[j-1] and nodes[j]
        let (r0, r1) = (nodes[j - 1], nodes[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        let t = (r - r0) / (r1 - r0);
        Ok(v0 + t * (v1 - v0))
    }

    fn eval_nearest(&self, x: &Point) -> Result<f64> {
        match &self.eval_set {
            EvalSet::Grid { grid, cells } => {
                if let Some(k) = grid.cell_of(x) {
                    if let Ok(pos) = cells.binary_search(&k) {
                        return Ok(self.values[pos]);
                    }
                }
                // off the active cells: fall back to the nearest active center
                let mut best = (f64::INFINITY, 0usize);
                for (i, &k) in cells.iter().enumerate() {
                    let d = grid.center(k).dist(x);
                    if d < best.0 {
                        best = (d, i);
                    }
                }
                Ok(self.values[best.1])
            }
            EvalSet::Radial { nodes, .. } => {
                let r = x.norm();
                let j = nodes
                    .binary_search_by(|a| a.partial_cmp(&r).unwrap())
                    .unwrap_or_else(|j| j);
                let lo = j.saturating_sub(1);
                let hi = j.min(nodes.len() - 1);
                if (nodes[hi] - r).abs() <= (r - nodes[lo]).abs() {
                    Ok(self.values[hi])
                } else {
                    Ok(self.values[lo])
                }
            }
            EvalSet::Points(pts) => {
                let mut best = (f64::INFINITY, 0usize);
                for (i, p) in pts.iter().enumerate() {
                    let d = p.dist(x);
                    if d < best.0 {
                        best = (d, i);
                    }
                }
                Ok(self.values[best.1])
            }
        }
    }
}
