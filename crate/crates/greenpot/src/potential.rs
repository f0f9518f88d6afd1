//! Green potentials **G**m, Lebesgue/measure norms of fields, and the
//! weighted-norm best-constant estimator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::domain::{Domain, DomainKind, Point};
use crate::error::{Error, Result};
use crate::field::{EvalRule, EvalSet, Field};
use crate::kernel::{kernel_from_coords, kernel_value, regular_part};
use crate::measure::{GridSpec, Measure};
use crate::special::{kernel_constant, sphere_area};

/// Potentials extend continuously (by 0) to the boundary, so evaluation is
/// allowed on the closure even though measures may not live there.
fn check_eval_point(domain: &Domain, x: &Point) -> Result<()> {
    domain.check_contains_closure(x)
}

/// ∫ G(x,y) dm(y) as an extended nonnegative real.
///
/// Atoms: direct kernel sum (an atom at x gives +∞). Grid densities: midpoint
/// sums with the singular cell replaced by an equal-volume ball, over which
/// the leading kernel singularity integrates exactly to c_n ω_{n-1} ρ²/2.
/// Radial densities: closed-form radial formulas over trapezoid prefix sums.
pub fn green_potential(domain: &Domain, m: &Measure, x: &Point) -> Result<f64> {
    check_eval_point(domain, x)?;
    Ok(match m {
        Measure::Atomic { points, weights } => atomic_potential(domain, points, weights, x),
        Measure::GridDensity { grid, values } => grid_potential(domain, grid, values, x),
        Measure::RadialDensity { nodes, values, .. } => {
            RadialTable::new(domain, nodes, values).eval(x.norm())
        }
    })
}

fn atomic_potential(domain: &Domain, points: &[Point], weights: &[f64], x: &Point) -> f64 {
    let mut acc = 0.0;
    for (p, &w) in points.iter().zip(weights.iter()) {
        if w == 0.0 {
            continue;
        }
        let g = kernel_value(domain, x, p);
        if g.is_infinite() {
            return f64::INFINITY;
        }
        acc += w * g;
    }
    acc
}

/// Flattened view of a grid density's support cells, built once per
/// evaluation sweep so the inner kernel loop touches no heap.
struct GridTable<'a> {
    domain: Domain,
    grid: &'a GridSpec,
    values: &'a [f64],
    /// support cell indices, ascending
    support: Vec<usize>,
    /// support centers, flattened n-per-cell
    coords: Vec<f64>,
    norms_sq: Vec<f64>,
    vol: f64,
    c_n: f64,
}

impl<'a> GridTable<'a> {
    fn new(domain: &Domain, grid: &'a GridSpec, values: &'a [f64]) -> Self {
        let n = grid.dim();
        let mut support = Vec::new();
        let mut coords = Vec::with_capacity(values.len() / 2);
        let mut norms_sq = Vec::new();
        for (k, &v) in values.iter().enumerate() {
            if v > 0.0 {
                support.push(k);
                let c = grid.center(k);
                coords.extend_from_slice(c.coords());
                norms_sq.push(c.norm_sq());
            }
        }
        let _ = n;
        GridTable {
            domain: *domain,
            grid,
            values,
            support,
            coords,
            norms_sq,
            vol: grid.cell_volume(),
            c_n: kernel_constant(domain.dim()),
        }
    }

    fn eval(&self, x: &Point) -> f64 {
        let n = self.domain.dim();
        let kind = self.domain.kind();
        let dim = x.dim();
        let xc = x.coords();
        let nx2 = x.norm_sq();
        let singular = self
            .grid
            .cell_of(x)
            .filter(|&k| self.values[k] > 0.0)
            .and_then(|k| self.support.binary_search(&k).ok());
        let mut acc = 0.0;
        for (j, &k) in self.support.iter().enumerate() {
            if Some(j) == singular {
                acc += self.values[k] * singular_cell_integral(&self.domain, n, self.vol, x);
            } else {
                let yc = &self.coords[j * dim..(j + 1) * dim];
                let g = kernel_from_coords(kind, n, self.c_n, xc, nx2, yc, self.norms_sq[j]);
                acc += self.values[k] * g * self.vol;
            }
        }
        acc
    }
}

fn grid_potential(domain: &Domain, grid: &GridSpec, values: &[f64], x: &Point) -> f64 {
    GridTable::new(domain, grid, values).eval(x)
}

/// Exact integral of the kernel over the equal-volume ball around x standing
/// in for the cell that contains x, plus the (smooth) image part over the
/// cell. Clamped at zero: very close to the boundary the image part is no
/// longer well resolved at cell scale, while the true cell integral of a
/// positive kernel cannot be negative.
fn singular_cell_integral(domain: &Domain, n: u32, cell_volume: f64, x: &Point) -> f64 {
    let area = sphere_area(n);
    let rho = (cell_volume / (area / n as f64)).powf(1.0 / n as f64);
    let leading = kernel_constant(n) * area * rho * rho / 2.0;
    let image = regular_part(domain, x, x) * cell_volume;
    (leading + image).max(0.0)
}

/// Radial potential evaluator: trapezoid prefix integrals of the density
/// against the exact radial kernel profiles.
///
/// Whole space: u(r) = c_n ω [ r^{2-n} P(r) + T(r) ],
///   P(r) = ∫₀^r s^{n-1} σ ds, T(r) = ∫_r^R s σ ds.
/// Unit ball:   u(r) = c_n ω [ (r^{2-n} - 1) P(r) + ∫_r^R (s - s^{n-1}) σ ds ],
/// which folds the image charge into manifestly nonnegative nodal weights.
pub(crate) struct RadialTable {
    n: u32,
    ball: bool,
    nodes: Vec<f64>,
    /// trapezoid prefix of s^{n-1} σ(s)
    prefix_p: Vec<f64>,
    /// trapezoid suffix of the tail integrand: s σ (whole space) or
    /// (s - s^{n-1}) σ (ball); suffix form keeps every nodal weight
    /// nonnegative, so the evaluation is monotone in the density to round-off
    suffix_t: Vec<f64>,
    values: Vec<f64>,
    scale: f64,
}

impl RadialTable {
    pub(crate) fn new(domain: &Domain, nodes: &[f64], values: &[f64]) -> Self {
        let n = domain.dim();
        let ball = domain.kind() == DomainKind::UnitBall;
        let fp = |r: f64, v: f64| r.powi(n as i32 - 1) * v;
        let ft = |r: f64, v: f64| {
            if ball {
                (r - r.powi(n as i32 - 1)) * v
            } else {
                r * v
            }
        };
        let len = nodes.len();
        let mut prefix_p = vec![0.0; len];
        for i in 1..len {
            let dr = nodes[i] - nodes[i - 1];
            prefix_p[i] = prefix_p[i - 1]
                + 0.5 * dr * (fp(nodes[i - 1], values[i - 1]) + fp(nodes[i], values[i]));
        }
        let mut suffix_t = vec![0.0; len];
        for i in (0..len - 1).rev() {
            let dr = nodes[i + 1] - nodes[i];
            suffix_t[i] = suffix_t[i + 1]
                + 0.5 * dr * (ft(nodes[i], values[i]) + ft(nodes[i + 1], values[i + 1]));
        }
        RadialTable {
            n,
            ball,
            nodes: nodes.to_vec(),
            prefix_p,
            suffix_t,
            values: values.to_vec(),
            scale: kernel_constant(n) * sphere_area(n),
        }
    }

    fn density_at(&self, r: f64, seg: usize) -> f64 {
        let (r0, r1) = (self.nodes[seg], self.nodes[seg + 1]);
        let t = (r - r0) / (r1 - r0);
        self.values[seg] + t * (self.values[seg + 1] - self.values[seg])
    }

    /// P(r) and tail(r), splitting the straddled segment by partial
    /// trapezoids with the interpolated density.
    fn split_at(&self, r: f64) -> (f64, f64) {
        let nodes = &self.nodes;
        let last = nodes.len() - 1;
        if r <= nodes[0] {
            return (0.0, self.suffix_t[0]);
        }
        if r >= nodes[last] {
            return (self.prefix_p[last], 0.0);
        }
        let seg = match nodes.binary_search_by(|a| a.partial_cmp(&r).unwrap()) {
            Ok(j) => return (self.prefix_p[j], self.suffix_t[j]),
            Err(j) => j - 1,
        };
        let v_r = self.density_at(r, seg);
        let fp = |rr: f64, vv: f64| rr.powi(self.n as i32 - 1) * vv;
        let ft = |rr: f64, vv: f64| {
            if self.ball {
                (rr - rr.powi(self.n as i32 - 1)) * vv
            } else {
                rr * vv
            }
        };
        let p = self.prefix_p[seg]
            + 0.5 * (r - nodes[seg]) * (fp(nodes[seg], self.values[seg]) + fp(r, v_r));
        let t = self.suffix_t[seg + 1]
            + 0.5 * (nodes[seg + 1] - r) * (ft(r, v_r) + ft(nodes[seg + 1], self.values[seg + 1]));
        (p, t)
    }

    pub(crate) fn eval(&self, r: f64) -> f64 {
        let (p, tail) = self.split_at(r);
        let kernel_factor = if r == 0.0 {
            // r^{2-n} P(r) → 0 as r → 0
            0.0
        } else if self.ball {
            (r.powi(2 - self.n as i32) - 1.0) * p
        } else {
            r.powi(2 - self.n as i32) * p
        };
        self.scale * (kernel_factor + tail)
    }
}

/// Pointwise `green_potential` over an evaluation set; data-parallel.
pub fn potential_field(domain: &Domain, m: &Measure, eval: &EvalSet) -> Result<Field> {
    let points = eval.all_points();
    for p in &points {
        check_eval_point(domain, p)?;
    }
    let values: Vec<f64> = match m {
        Measure::RadialDensity { nodes, values, .. } => {
            let table = RadialTable::new(domain, nodes, values);
            points.par_iter().map(|p| table.eval(p.norm())).collect()
        }
        Measure::Atomic { points: atoms, weights } => points
            .par_iter()
            .map(|p| atomic_potential(domain, atoms, weights, p))
            .collect(),
        Measure::GridDensity { grid, values } => {
            let table = GridTable::new(domain, grid, values);
            points.par_iter().map(|p| table.eval(p)).collect()
        }
    };
    let rule = match eval {
        EvalSet::Radial { .. } => EvalRule::RadialLinear,
        _ => EvalRule::Nearest,
    };
    Field::new(*domain, eval.clone(), values, rule)
}

/// (∫ |f|^p dx)^{1/p} over the field's own quadrature-complete evaluation set.
pub fn lp_norm_dx(f: &Field, p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "Lebesgue exponent must be positive, got {p}"
        )));
    }
    let weights = f.eval_set().dx_weights().ok_or_else(|| {
        Error::Capability("Lebesgue norms need a grid or radial evaluation set".into())
    })?;
    let mut acc = 0.0;
    for (&v, &w) in f.values().iter().zip(weights.iter()) {
        if w == 0.0 {
            continue;
        }
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        acc += w * v.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// (∫ |f|^p dm)^{1/p}, evaluating f at the measure's support nodes through
/// the field's rule. +∞ propagates.
pub fn lp_norm_dmu(f: &Field, p: f64, m: &Measure) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "norm exponent must be positive, got {p}"
        )));
    }
    let integral = m.integrate(|x| match f.eval(x) {
        Ok(v) => v.powf(p),
        Err(_) => f64::NAN, // surfaced as an evaluation error by integrate
    });
    match integral {
        Ok(v) => Ok(v.powf(1.0 / p)),
        Err(Error::Evaluation(_)) => Err(Error::Capability(
            "field cannot be evaluated at a support node of the measure".into(),
        )),
        Err(e) => Err(e),
    }
}

/// Result of the weighted-norm constant search: the best Rayleigh ratio
/// found and the nonnegative maximizer on the measure's nodes.
#[derive(Debug, Clone)]
pub struct BestConstant {
    pub estimate: f64,
    pub maximizer: Vec<f64>,
}

/// Lower estimate of the best constant c in
/// ‖**G**(f dσ)‖_{L^r(dσ)} ≤ c ‖f‖_{L^s(dσ)}
/// by multi-start projected-gradient ascent on the ratio over f ≥ 0.
///
/// The constant candidate f ≡ 1 is always tried first, then `trials` seeded
/// random starts (independent per-trial streams, so the output is
/// reproducible for a fixed seed regardless of scheduling and nondecreasing
/// in both `trials` and `steps`). A non-finite ratio (atomic σ) reports +∞.
pub fn best_constant_estimate(
    domain: &Domain,
    sigma: &Measure,
    s: f64,
    r: f64,
    trials: usize,
    steps: usize,
    seed: u64,
) -> Result<BestConstant> {
    if !(s.is_finite() && s > 1.0) {
        return Err(Error::InvalidArgument(format!("need s > 1, got {s}")));
    }
    if !(r.is_finite() && r > 0.0 && r < s) {
        return Err(Error::InvalidArgument(format!("need 0 < r < s, got r = {r}")));
    }
    if sigma.is_zero() {
        return Err(Error::InvalidArgument(
            "best-constant search needs a measure with nonempty support".into(),
        ));
    }
    let quad = sigma.quadrature();
    let n_nodes = sigma.num_nodes();
    let eval = EvalSet::points(
        domain,
        quad.points
            .iter()
            .zip(quad.weights.iter())
            .filter(|(_, &w)| w > 0.0)
            .map(|(p, _)| p.clone())
            .collect(),
    )?;
    let support: Vec<usize> = (0..n_nodes).filter(|&i| quad.weights[i] > 0.0).collect();

    // ‖f‖_{L^s(dσ)} on the nodes
    let f_norm = |f: &[f64]| -> f64 {
        support
            .iter()
            .map(|&i| quad.weights[i] * f[i].powf(s))
            .sum::<f64>()
            .powf(1.0 / s)
    };
    // ‖G(f dσ)‖_{L^r(dσ)}, evaluated at the support nodes themselves
    let g_norm = |f: &[f64]| -> Result<f64> {
        let m = sigma.with_node_factors(f)?;
        let field = potential_field(domain, &m, &eval)?;
        let mut acc = 0.0;
        for (j, &i) in support.iter().enumerate() {
            let v = field.values()[j];
            if v.is_infinite() {
                return Ok(f64::INFINITY);
            }
            acc += quad.weights[i] * v.powf(r);
        }
        Ok(acc.powf(1.0 / r))
    };
    let ratio = |f: &[f64]| -> Result<f64> {
        let den = f_norm(f);
        if den == 0.0 {
            return Ok(0.0);
        }
        Ok(g_norm(f)? / den)
    };

    // +∞ is decided by the constant candidate already
    let ones = vec![1.0; n_nodes];
    let r_ones = ratio(&ones)?;
    if r_ones.is_infinite() {
        return Ok(BestConstant {
            estimate: f64::INFINITY,
            maximizer: ones,
        });
    }

    let optimize = |start: Vec<f64>| -> Result<(f64, Vec<f64>)> {
        let mut f = start;
        let den = f_norm(&f);
        if den == 0.0 {
            return Ok((0.0, f));
        }
        for v in &mut f {
            *v /= den;
        }
        let mut current = ratio(&f)?;
        let mut best = (current, f.clone());
        let mut eta = 0.25;
        let fd_h = 1e-6;
        for _ in 0..steps {
            // forward-difference gradient on the support nodes
            let mut grad = vec![0.0; n_nodes];
            let mut gmax = 0.0f64;
            for &i in &support {
                let mut fh = f.clone();
                fh[i] += fd_h;
                let g = (ratio(&fh)? - current) / fd_h;
                grad[i] = g;
                gmax = gmax.max(g.abs());
            }
            if gmax == 0.0 {
                break;
            }
            let mut cand: Vec<f64> = f
                .iter()
                .zip(grad.iter())
                .map(|(&v, &g)| (v + eta * g / gmax).max(0.0))
                .collect();
            let cn = f_norm(&cand);
            if cn == 0.0 {
                eta *= 0.5;
                continue;
            }
            for v in &mut cand {
                *v /= cn;
            }
            let rc = ratio(&cand)?;
            if rc > current {
                f = cand;
                current = rc;
                eta = (eta * 1.5).min(1.0);
                if current > best.0 {
                    best = (current, f.clone());
                }
            } else {
                eta *= 0.5;
                if eta < 1e-12 {
                    break;
                }
            }
        }
        Ok((best.0, best.1))
    };

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(trials + 1);
    starts.push(ones);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x9e37_79b9_7f4a_7c15u64.wrapping_mul(t as u64 + 1)));
        starts.push((0..n_nodes).map(|_| rng.random_range(0.0..1.0)).collect());
    }

    let results: Vec<(f64, Vec<f64>)> = starts
        .into_par_iter()
        .map(optimize)
        .collect::<Result<Vec<_>>>()?;
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for (v, f) in results {
        if v > best.0 {
            best = (v, f);
        }
    }
    Ok(BestConstant {
        estimate: best.0.max(r_ones),
        maximizer: best.1,
    })
}
