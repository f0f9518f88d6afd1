//! Independent oracles shared by the integration suites. These must stay
//! independent of the library's potential/solver code paths: the radial ODE
//! is integrated by shooting + bisection, the best-constant reference is a
//! plain random search.

use greenpot::{Domain, Measure, Point};

/// Torsion function of the unit ball: the potential of the unit density.
pub fn torsion(r: f64) -> f64 {
    (1.0 - r * r) / 6.0
}

/// RK4 integration of u'' + (2/r) u' = -u^{1/2}, u(0) = a, u'(0) = 0.
/// Returns (u(1), reached_boundary).
fn shoot(a: f64, steps: usize) -> (f64, bool) {
    let h = 1.0 / steps as f64;
    let f = |r: f64, u: f64, w: f64| -> (f64, f64) {
        if u <= 0.0 {
            return (w, 0.0);
        }
        // series limit at the origin: u''(0) = -u(0)^{1/2}/3
        let rhs = if r < 1e-12 {
            -u.sqrt() / 3.0
        } else {
            -u.sqrt() - 2.0 * w / r
        };
        (w, rhs)
    };
    let mut u = a;
    let mut w = 0.0;
    let mut r = 0.0;
    for _ in 0..steps {
        if u <= 0.0 {
            return (u, false);
        }
        let (k1u, k1w) = f(r, u, w);
        let (k2u, k2w) = f(r + 0.5 * h, u + 0.5 * h * k1u, w + 0.5 * h * k1w);
        let (k3u, k3w) = f(r + 0.5 * h, u + 0.5 * h * k2u, w + 0.5 * h * k2w);
        let (k4u, k4w) = f(r + h, u + h * k3u, w + h * k3w);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        r += h;
    }
    (u, true)
}

/// Central value u(0) of the radial boundary-value problem
/// -(1/r²)(r² u')' = u^{1/2}, u'(0) = 0, u(1) = 0, by bisection on the
/// shooting parameter: undershoot dies inside, overshoot stays positive.
pub fn shooting_central_value() -> f64 {
    let mut lo = 1e-6;
    let mut hi = 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let (end, reached) = shoot(mid, 20000);
        if reached && end > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Brute-force lower bound for the weighted-norm constant: best Rayleigh
/// ratio over `tries` random nonnegative profiles on the measure's nodes.
pub fn random_search_constant(
    domain: &Domain,
    sigma: &Measure,
    s: f64,
    r: f64,
    tries: usize,
    seed: u64,
) -> f64 {
    use greenpot::potential::potential_field;
    use greenpot::EvalSet;
    use rand::{Rng, SeedableRng};

    let quad = sigma.quadrature();
    let eval = EvalSet::points(domain, quad.points.clone()).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let n = sigma.num_nodes();
    let mut best = 0.0f64;
    for _ in 0..tries {
        let f: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0f64)).collect();
        let fs: f64 = quad
            .weights
            .iter()
            .zip(f.iter())
            .map(|(&w, &v)| w * v.powf(s))
            .sum::<f64>()
            .powf(1.0 / s);
        if fs == 0.0 {
            continue;
        }
        let m = sigma.with_node_factors(&f).unwrap();
        let g = potential_field(domain, &m, &eval).unwrap();
        let gr: f64 = quad
            .weights
            .iter()
            .zip(g.values().iter())
            .map(|(&w, &v)| w * v.powf(r))
            .sum::<f64>()
            .powf(1.0 / r);
        best = best.max(gr / fs);
    }
    best
}

/// High-resolution 1-D trapezoid of (∫_B f(r)^p dx)^{1/p} for radial f.
pub fn radial_lp_oracle(f: impl Fn(f64) -> f64, p: f64, steps: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..=steps {
        let r = i as f64 / steps as f64;
        let w = if i == 0 || i == steps { 0.5 } else { 1.0 };
        acc += w * f(r).powf(p) * 4.0 * std::f64::consts::PI * r * r / steps as f64;
    }
    acc.powf(1.0 / p)
}

/// Halton probe points inside the ball of radius `cap`.
pub fn probes(domain: &Domain, count: usize, cap: f64) -> Vec<Point> {
    greenpot::sampling::halton_in_domain(domain, count, cap)
}
