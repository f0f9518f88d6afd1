//! Numerical potential-theory laboratory: Green kernels of -Δ on model
//! domains, Green potentials of nonnegative measures, monotone construction
//! of the minimal positive solution of u = **G**(u^q dσ) + **G**μ in the
//! sublinear range 0 < q < 1, and numerical verification of the norm and
//! energy estimates that govern when such solutions lie in L^p.

pub mod conditions;
pub mod domain;
pub mod energy;
pub mod error;
pub mod field;
pub mod kernel;
pub mod measure;
pub mod pipeline;
pub mod potential;
pub mod report;
pub mod sampling;
pub mod scenario;
pub mod solver;
pub mod special;

pub use domain::{Domain, DomainKind, Point};
pub use error::{Error, Result};
pub use field::{EvalRule, EvalSet, Field};
pub use measure::{GridSpec, Measure};
