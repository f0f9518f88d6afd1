//! Model domains with explicit Green functions.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainKind {
    WholeSpace,
    UnitBall,
    HalfSpace,
}

impl std::fmt::Display for DomainKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DomainKind::WholeSpace => write!(f, "whole_space"),
            DomainKind::UnitBall => write!(f, "unit_ball"),
            DomainKind::HalfSpace => write!(f, "half_space"),
        }
    }
}

/// One of the three model domains in ℝⁿ, n ≥ 3: all of ℝⁿ, the open unit
/// ball {|x| < 1}, or the open half-space {xₙ > 0}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    kind: DomainKind,
    dim: u32,
}

impl Domain {
    pub fn new(kind: DomainKind, dim: u32) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidArgument(format!(
                "domain dimension must be at least 3, got {dim}"
            )));
        }
        Ok(Domain { kind, dim })
    }

    pub fn whole_space(dim: u32) -> Result<Self> {
        Domain::new(DomainKind::WholeSpace, dim)
    }

    pub fn unit_ball(dim: u32) -> Result<Self> {
        Domain::new(DomainKind::UnitBall, dim)
    }

    pub fn half_space(dim: u32) -> Result<Self> {
        Domain::new(DomainKind::HalfSpace, dim)
    }

    pub fn kind(&self) -> DomainKind {
        self.kind
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    /// Strict interior membership.
    pub fn contains(&self, x: &Point) -> bool {
        if x.dim() != self.dim as usize || !x.is_finite() {
            return false;
        }
        match self.kind {
            DomainKind::WholeSpace => true,
            DomainKind::UnitBall => x.norm_sq() < 1.0,
            DomainKind::HalfSpace => *x.coords().last().unwrap() > 0.0,
        }
    }

    /// Membership in the closure (boundary included). Green potentials extend
    /// continuously by 0 to the boundary, so evaluation sets may touch it.
    pub fn contains_closure(&self, x: &Point) -> bool {
        if x.dim() != self.dim as usize || !x.is_finite() {
            return false;
        }
        match self.kind {
            DomainKind::WholeSpace => true,
            DomainKind::UnitBall => x.norm_sq() <= 1.0 + 1e-12,
            DomainKind::HalfSpace => *x.coords().last().unwrap() >= 0.0,
        }
    }

    pub fn check_contains(&self, x: &Point) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(self.outside_error(x))
        }
    }

    pub fn check_contains_closure(&self, x: &Point) -> Result<()> {
        if self.contains_closure(x) {
            Ok(())
        } else {
            Err(self.outside_error(x))
        }
    }

    fn outside_error(&self, x: &Point) -> Error {
        Error::OutsideDomain {
            domain: format!("{} (n = {})", self.kind, self.dim),
            point: x
                .coords()
                .iter()
                .map(|c| format!("{c}"))
                .collect::<Vec<_>>()
                .join(", "),
        }
    }

    /// Uniform-ish interior sample for randomized tests. Whole space draws
    /// from [-1, 1]ⁿ, the half-space from a unit slab above the wall.
    pub fn sample_interior<R: Rng>(&self, rng: &mut R) -> Point {
        let n = self.dim as usize;
        match self.kind {
            DomainKind::WholeSpace => {
                Point::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap()
            }
            DomainKind::UnitBall => loop {
                let p =
                    Point::new((0..n).map(|_| rng.random_range(-1.0..1.0)).collect()).unwrap();
                if p.norm_sq() < 0.999 {
                    return p;
                }
            },
            DomainKind::HalfSpace => {
                let mut c: Vec<f64> = (0..n - 1).map(|_| rng.random_range(-1.0..1.0)).collect();
                c.push(rng.random_range(0.001..1.0));
                Point::new(c).unwrap()
            }
        }
    }
}

impl std::fmt::Display for Domain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} in R^{}", self.kind, self.dim)
    }
}

/// A point of ℝⁿ with finite coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidArgument("point needs coordinates".into()));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument(
                "point coordinates must be finite".into(),
            ));
        }
        Ok(Point(coords))
    }

    /// Origin of ℝⁿ.
    pub fn origin(dim: usize) -> Self {
        Point(vec![0.0; dim])
    }

    /// The point r·e₁, the canonical representative of radius r.
    pub fn radial(r: f64, dim: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[0] = r;
        Point(c)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        // Exact for axis-aligned points, which radial quadrature relies on.
        let mut nonzero = self.0.iter().filter(|c| **c != 0.0);
        match (nonzero.next(), nonzero.next()) {
            (None, _) => 0.0,
            (Some(c), None) => c.abs(),
            _ => self.norm_sq().sqrt(),
        }
    }

    pub fn dist(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    pub fn dot(&self, other: &Point) -> f64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a * b).sum()
    }

    /// Reflection across the half-space wall {xₙ = 0}.
    pub fn reflect_last(&self) -> Point {
        let mut c = self.0.clone();
        let last = c.len() - 1;
        c[last] = -c[last];
        Point(c)
    }
}
