//! Nonnegative Radon measures: atoms, tensor-grid densities, radial densities.
//!
//! Quadrature nodes are frozen at construction (atoms, cell centers, radial
//! nodes), so reweighting composes exactly with integration on the same
//! nodes. That exactness is what makes the monotone solver iteration hold to
//! round-off rather than to discretization error.

use serde::{Deserialize, Serialize};

use crate::domain::{Domain, DomainKind, Point};
use crate::error::{Error, Result};
use crate::special::sphere_area;

/// Tensor grid of cells: cell (i₁,…,iₙ) covers
/// ∏ₐ [originₐ + iₐ·hₐ, originₐ + (iₐ+1)·hₐ], with the midpoint node at its
/// center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub counts: Vec<usize>,
}

impl GridSpec {
    pub fn new(origin: Vec<f64>, spacing: Vec<f64>, counts: Vec<usize>) -> Result<Self> {
        let dim = origin.len();
        if dim == 0 || spacing.len() != dim || counts.len() != dim {
            return Err(Error::InvalidArgument(
                "grid origin/spacing/counts must share a nonzero dimension".into(),
            ));
        }
        if !origin.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument("grid origin must be finite".into()));
        }
        if !spacing.iter().all(|h| h.is_finite() && *h > 0.0) {
            return Err(Error::InvalidArgument("grid spacing must be positive".into()));
        }
        if counts.iter().any(|c| *c == 0) {
            return Err(Error::InvalidArgument("grid counts must be positive".into()));
        }
        Ok(GridSpec {
            origin,
            spacing,
            counts,
        })
    }

    /// Cube grid centered at `center` with half-extent `half` and `cells`
    /// cells per axis.
    pub fn cube(center: &[f64], half: f64, cells: usize) -> Result<Self> {
        if !(half.is_finite() && half > 0.0) {
            return Err(Error::InvalidArgument("cube half-extent must be positive".into()));
        }
        let origin = center.iter().map(|c| c - half).collect();
        let spacing = vec![2.0 * half / cells as f64; center.len()];
        GridSpec::new(origin, spacing, vec![cells; center.len()])
    }

    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    pub fn num_cells(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing.iter().product()
    }

    /// Center of the cell with linear index `k` (row-major, last axis fastest).
    pub fn center(&self, k: usize) -> Point {
        let mut coords = vec![0.0; self.dim()];
        let mut rem = k;
        for a in (0..self.dim()).rev() {
            let i = rem % self.counts[a];
            rem /= self.counts[a];
            coords[a] = self.origin[a] + (i as f64 + 0.5) * self.spacing[a];
        }
        Point::new(coords).expect("grid centers are finite")
    }

    /// Linear index of the cell containing `x`, if any.
    pub fn cell_of(&self, x: &Point) -> Option<usize> {
        if x.dim() != self.dim() {
            return None;
        }
        let mut k = 0usize;
        for a in 0..self.dim() {
            let t = (x.coords()[a] - self.origin[a]) / self.spacing[a];
            if t < 0.0 {
                return None;
            }
            let i = t.floor() as usize;
            if i >= self.counts[a] {
                return None;
            }
            k = k * self.counts[a] + i;
        }
        Some(k)
    }

    /// Multi-index from a linear index.
    pub fn multi_index(&self, k: usize) -> Vec<usize> {
        let mut rem = k;
        let mut idx = vec![0usize; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = rem % self.counts[a];
            rem /= self.counts[a];
        }
        idx
    }

    pub fn linear_index(&self, idx: &[usize]) -> usize {
        idx.iter()
            .zip(self.counts.iter())
            .fold(0usize, |acc, (i, c)| acc * c + i)
    }

    /// Per-axis center coordinates, useful for tight evaluation loops.
    pub fn axis_centers(&self, axis: usize) -> Vec<f64> {
        (0..self.counts[axis])
            .map(|i| self.origin[axis] + (i as f64 + 0.5) * self.spacing[axis])
            .collect()
    }
}

/// A nonnegative Radon measure in one of three concrete representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// Finite sum of weighted Dirac atoms.
    Atomic { points: Vec<Point>, weights: Vec<f64> },
    /// Density w.r.t. Lebesgue measure, piecewise constant on grid cells;
    /// integration is the midpoint rule at cell centers.
    GridDensity { grid: GridSpec, values: Vec<f64> },
    /// Radial density w.r.t. Lebesgue measure, piecewise linear in the radius
    /// between nodes and zero outside their range; integration is the
    /// composite trapezoid rule in r against ω_{n-1} r^{n-1} dr.
    RadialDensity {
        dim: u32,
        nodes: Vec<f64>,
        values: Vec<f64>,
    },
}

/// Quadrature view of a measure: one node per stored value, with the full
/// measure weight (density × volume element) attached to each node.
#[derive(Debug, Clone)]
pub struct Quadrature {
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
}

impl Measure {
    pub fn atomic(domain: &Domain, points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "atomic measure needs as many weights as points".into(),
            ));
        }
        for w in &weights {
            if !(w.is_finite() && *w >= 0.0) {
                return Err(Error::InvalidArgument(
                    "atomic weights must be finite and nonnegative".into(),
                ));
            }
        }
        for p in &points {
            domain.check_contains(p)?;
        }
        Ok(Measure::Atomic { points, weights })
    }

    pub fn grid_density(domain: &Domain, grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        if grid.dim() != domain.dim() as usize {
            return Err(Error::InvalidArgument(format!(
                "grid dimension {} does not match domain dimension {}",
                grid.dim(),
                domain.dim()
            )));
        }
        if values.len() != grid.num_cells() {
            return Err(Error::InvalidArgument(format!(
                "grid density needs {} values, got {}",
                grid.num_cells(),
                values.len()
            )));
        }
        for (k, v) in values.iter().enumerate() {
            if !(v.is_finite() && *v >= 0.0) {
                return Err(Error::InvalidArgument(
                    "density values must be finite and nonnegative".into(),
                ));
            }
            if *v > 0.0 {
                domain.check_contains(&grid.center(k))?;
            }
        }
        Ok(Measure::GridDensity { grid, values })
    }

    /// Uniform density `value` on the cells of `grid` whose centers lie in
    /// the domain, zero elsewhere.
    pub fn constant_on_grid(domain: &Domain, grid: GridSpec, value: f64) -> Result<Self> {
        let values = (0..grid.num_cells())
            .map(|k| {
                if domain.contains(&grid.center(k)) {
                    value
                } else {
                    0.0
                }
            })
            .collect();
        Measure::grid_density(domain, grid, values)
    }

    pub fn radial_density(domain: &Domain, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        match domain.kind() {
            DomainKind::UnitBall | DomainKind::WholeSpace => {}
            DomainKind::HalfSpace => {
                return Err(Error::InvalidArgument(
                    "radial densities require the unit ball or whole space".into(),
                ))
            }
        }
        if nodes.len() != values.len() || nodes.len() < 2 {
            return Err(Error::InvalidArgument(
                "radial density needs at least two nodes with matching values".into(),
            ));
        }
        if !nodes.iter().all(|r| r.is_finite() && *r >= 0.0) {
            return Err(Error::InvalidArgument(
                "radial nodes must be finite and nonnegative".into(),
            ));
        }
        if !nodes.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "radial nodes must be strictly increasing".into(),
            ));
        }
        if domain.kind() == DomainKind::UnitBall && *nodes.last().unwrap() > 1.0 {
            return Err(Error::InvalidArgument(
                "radial support must stay inside the unit ball".into(),
            ));
        }
        if !values.iter().all(|v| v.is_finite() && *v >= 0.0) {
            return Err(Error::InvalidArgument(
                "density values must be finite and nonnegative".into(),
            ));
        }
        Ok(Measure::RadialDensity {
            dim: domain.dim(),
            nodes,
            values,
        })
    }

    /// Uniform radial density on `count` equispaced nodes spanning [0, rmax].
    pub fn constant_radial(domain: &Domain, rmax: f64, count: usize, value: f64) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidArgument("need at least two radial nodes".into()));
        }
        let nodes = (0..count)
            .map(|i| rmax * i as f64 / (count - 1) as f64)
            .collect();
        Measure::radial_density(domain, nodes, vec![value; count])
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Measure::Atomic { .. } => "atomic",
            Measure::GridDensity { .. } => "grid",
            Measure::RadialDensity { .. } => "radial",
        }
    }

    /// Trapezoid length-weights δᵢ for a radial node vector.
    pub(crate) fn radial_deltas(nodes: &[f64]) -> Vec<f64> {
        let n = nodes.len();
        (0..n)
            .map(|i| {
                let lo = if i == 0 { nodes[0] } else { nodes[i - 1] };
                let hi = if i + 1 == n { nodes[n - 1] } else { nodes[i + 1] };
                0.5 * (hi - lo)
            })
            .collect()
    }

    /// Quadrature nodes aligned with the stored values, with full measure
    /// weights (zero-weight nodes included).
    pub fn quadrature(&self) -> Quadrature {
        match self {
            Measure::Atomic { points, weights } => Quadrature {
                points: points.clone(),
                weights: weights.clone(),
            },
            Measure::GridDensity { grid, values } => {
                let vol = grid.cell_volume();
                Quadrature {
                    points: (0..grid.num_cells()).map(|k| grid.center(k)).collect(),
                    weights: values.iter().map(|v| v * vol).collect(),
                }
            }
            Measure::RadialDensity { dim, nodes, values } => {
                let area = sphere_area(*dim);
                let deltas = Self::radial_deltas(nodes);
                Quadrature {
                    points: nodes
                        .iter()
                        .map(|&r| Point::radial(r, *dim as usize))
                        .collect(),
                    weights: nodes
                        .iter()
                        .zip(values.iter())
                        .zip(deltas.iter())
                        .map(|((&r, &v), &d)| area * r.powi(*dim as i32 - 1) * v * d)
                        .collect(),
                }
            }
        }
    }

    /// m(Ω).
    pub fn total_mass(&self) -> f64 {
        self.quadrature().weights.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_mass() == 0.0
    }

    /// ∫ f dm on the frozen nodes. Returns +∞ when f is infinite at a node of
    /// positive weight; NaN from f is an evaluation error.
    pub fn integrate(&self, mut f: impl FnMut(&Point) -> f64) -> Result<f64> {
        let quad = self.quadrature();
        let mut acc = 0.0f64;
        for (p, &w) in quad.points.iter().zip(quad.weights.iter()) {
            if w == 0.0 {
                continue;
            }
            let v = f(p);
            if v.is_nan() {
                return Err(Error::Evaluation(format!(
                    "integrand returned NaN at [{:?}]",
                    p.coords()
                )));
            }
            if v.is_infinite() {
                return Ok(f64::INFINITY);
            }
            acc += w * v;
        }
        Ok(acc)
    }

    /// λ·m for λ ≥ 0.
    pub fn scale(&self, lambda: f64) -> Result<Measure> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale factor must be finite and nonnegative, got {lambda}"
            )));
        }
        self.with_node_factors_unchecked(|_| lambda)
    }

    /// g·dm with g sampled at the frozen nodes; the representation kind is
    /// preserved.
    pub fn reweight(&self, mut g: impl FnMut(&Point) -> f64) -> Result<Measure> {
        let quad = self.quadrature();
        let factors: Vec<f64> = quad.points.iter().map(&mut g).collect();
        for (f, p) in factors.iter().zip(quad.points.iter()) {
            if f.is_nan() {
                return Err(Error::Evaluation(format!(
                    "reweight function returned NaN at [{:?}]",
                    p.coords()
                )));
            }
            if *f < 0.0 {
                return Err(Error::InvalidArgument(
                    "reweight function must be nonnegative on the support".into(),
                ));
            }
            if f.is_infinite() {
                return Err(Error::InvalidArgument(
                    "reweight function must be finite on the support".into(),
                ));
            }
        }
        self.with_node_factors(&factors)
    }

    /// Nodewise version of `reweight`: factors aligned with the stored
    /// values. This is the exact-composition path used by the solver.
    pub fn with_node_factors(&self, factors: &[f64]) -> Result<Measure> {
        let len = self.num_nodes();
        if factors.len() != len {
            return Err(Error::InvalidArgument(format!(
                "expected {len} node factors, got {}",
                factors.len()
            )));
        }
        if factors
            .iter()
            .any(|f| f.is_nan() || f.is_infinite() || *f < 0.0)
        {
            return Err(Error::InvalidArgument(
                "node factors must be finite and nonnegative".into(),
            ));
        }
        let mut i = 0;
        self.with_node_factors_unchecked(|_| {
            let f = factors[i];
            i += 1;
            f
        })
    }

    pub fn num_nodes(&self) -> usize {
        match self {
            Measure::Atomic { points, .. } => points.len(),
            Measure::GridDensity { values, .. } => values.len(),
            Measure::RadialDensity { values, .. } => values.len(),
        }
    }

    fn with_node_factors_unchecked(&self, mut factor: impl FnMut(usize) -> f64) -> Result<Measure> {
        Ok(match self {
            Measure::Atomic { points, weights } => Measure::Atomic {
                points: points.clone(),
                weights: weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| w * factor(i))
                    .collect(),
            },
            Measure::GridDensity { grid, values } => Measure::GridDensity {
                grid: grid.clone(),
                values: values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * factor(i))
                    .collect(),
            },
            Measure::RadialDensity { dim, nodes, values } => Measure::RadialDensity {
                dim: *dim,
                nodes: nodes.clone(),
                values: values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * factor(i))
                    .collect(),
            },
        })
    }
}
