//! Green functions of -Δ on the model domains.
//!
//! All kernels split as G(x,y) = c_n |x-y|^{2-n} + H(x,y) with H harmonic in
//! each variable and finite on the diagonal. Quadrature leans on that split:
//! the singular part has an exact integral over small balls, the rest is
//! smooth.

use crate::domain::{Domain, DomainKind, Point};
use crate::error::Result;
use crate::special::kernel_constant;

/// G(x,y) on `domain`, as an extended real: the diagonal evaluates to +∞.
///
/// Whole space: c_n |x-y|^{2-n}.
/// Unit ball:   c_n (|x-y|^{2-n} - (|x||y - x*|)^{2-n}), x* = x/|x|²; the
///              image factor is computed through the symmetric product form
///              |x||y - x*| = (|x|²|y|² - 2x·y + 1)^{1/2}, whose value at
///              x = 0 is exactly the limit formula c_n (|y|^{2-n} - 1).
/// Half space:  c_n (|x-y|^{2-n} - |x-ȳ|^{2-n}) with ȳ the reflection of y.
pub fn green_kernel(domain: &Domain, x: &Point, y: &Point) -> Result<f64> {
    domain.check_contains(x)?;
    domain.check_contains(y)?;
    Ok(kernel_value(domain, x, y))
}

/// Kernel evaluation without membership checks; callers guarantee x, y ∈ Ω.
pub(crate) fn kernel_value(domain: &Domain, x: &Point, y: &Point) -> f64 {
    kernel_from_coords(
        domain.kind(),
        domain.dim(),
        kernel_constant(domain.dim()),
        x.coords(),
        x.norm_sq(),
        y.coords(),
        y.norm_sq(),
    )
}

/// v^{(2-n)/2} for v ≥ 0 without powf: reciprocal of v^{(n-2)/2} assembled
/// from integer powers and at most one square root. v = 0 gives +∞.
#[inline]
pub(crate) fn half_pow(v: f64, n: u32) -> f64 {
    let k = (n - 2) / 2;
    let mut p = v.powi(k as i32);
    if (n - 2) % 2 == 1 {
        p *= v.sqrt();
    }
    1.0 / p
}

#[inline]
fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        let d = x - y;
        acc += d * d;
    }
    acc
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y;
    }
    acc
}

/// Allocation-free kernel on raw coordinates; `nx2`, `ny2` carry the squared
/// norms so bulk evaluation can precompute them per node.
#[inline]
pub(crate) fn kernel_from_coords(
    kind: DomainKind,
    n: u32,
    c_n: f64,
    x: &[f64],
    nx2: f64,
    y: &[f64],
    ny2: f64,
) -> f64 {
    let lead = c_n * half_pow(dist_sq(x, y), n);
    match kind {
        DomainKind::WholeSpace => lead,
        DomainKind::UnitBall => {
            let image_sq = nx2 * ny2 - 2.0 * dot(x, y) + 1.0;
            lead - c_n * half_pow(image_sq, n)
        }
        DomainKind::HalfSpace => {
            let last = n as usize - 1;
            let planar = dist_sq(&x[..last], &y[..last]);
            let dz = x[last] + y[last];
            lead - c_n * half_pow(planar + dz * dz, n)
        }
    }
}

/// G minus its leading singularity; finite for x, y in the open domain,
/// including y = x.
pub(crate) fn regular_part(domain: &Domain, x: &Point, y: &Point) -> f64 {
    let n = domain.dim();
    let c = kernel_constant(n);
    match domain.kind() {
        DomainKind::WholeSpace => 0.0,
        DomainKind::UnitBall => {
            // (|x||y-x*|)² = |x|²|y|² - 2 x·y + 1, symmetric in x and y.
            let image_sq = x.norm_sq() * y.norm_sq() - 2.0 * x.dot(y) + 1.0;
            -c * image_sq.powf((2.0 - n as f64) / 2.0)
        }
        DomainKind::HalfSpace => {
            let mirrored = y.reflect_last();
            -c * x.dist(&mirrored).powi(2 - n as i32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn whole_space_unit_distance() {
        let d = Domain::whole_space(3).unwrap();
        let g = green_kernel(&d, &pt(&[0.0, 0.0, 0.0]), &pt(&[1.0, 0.0, 0.0])).unwrap();
        assert!((g - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn ball_center_formula() {
        let d = Domain::unit_ball(3).unwrap();
        let g = green_kernel(&d, &pt(&[0.0, 0.0, 0.0]), &pt(&[0.5, 0.0, 0.0])).unwrap();
        let expected = (1.0 / (4.0 * PI)) * (1.0 / 0.5 - 1.0);
        assert!((g - expected).abs() < 1e-15);
        assert!((expected - 1.0 / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn ball_boundary_vanishing() {
        let d = Domain::unit_ball(3).unwrap();
        let x = pt(&[0.0, 0.0, 0.0]);
        let near = green_kernel(&d, &x, &pt(&[1.0 - 1e-6, 0.0, 0.0])).unwrap();
        let mid = green_kernel(&d, &x, &pt(&[0.5, 0.0, 0.0])).unwrap();
        assert!(near >= 0.0);
        assert!(near <= 1e-4 * mid);
    }

    #[test]
    fn diagonal_is_infinite() {
        for d in [
            Domain::whole_space(3).unwrap(),
            Domain::unit_ball(4).unwrap(),
            Domain::half_space(5).unwrap(),
        ] {
            let mut rng = ChaCha8Rng::seed_from_u64(3);
            let x = d.sample_interior(&mut rng);
            assert_eq!(green_kernel(&d, &x, &x).unwrap(), f64::INFINITY);
        }
    }

    #[test]
    fn symmetry_and_positivity_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [
            Domain::whole_space(3).unwrap(),
            Domain::unit_ball(3).unwrap(),
            Domain::half_space(3).unwrap(),
            Domain::unit_ball(4).unwrap(),
        ] {
            for _ in 0..1000 {
                let x = d.sample_interior(&mut rng);
                let y = d.sample_interior(&mut rng);
                if x == y {
                    continue;
                }
                let gxy = green_kernel(&d, &x, &y).unwrap();
                let gyx = green_kernel(&d, &y, &x).unwrap();
                assert!(gxy > 0.0, "positivity failed on {d}");
                assert!(
                    (gxy - gyx).abs() <= 1e-12 * gxy,
                    "symmetry failed on {d}: {gxy} vs {gyx}"
                );
            }
        }
    }

    #[test]
    fn domain_monotonicity_ball_below_whole_space() {
        let ball = Domain::unit_ball(3).unwrap();
        let all = Domain::whole_space(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let x = ball.sample_interior(&mut rng);
            let y = ball.sample_interior(&mut rng);
            if x == y {
                continue;
            }
            let gb = green_kernel(&ball, &x, &y).unwrap();
            let gw = green_kernel(&all, &x, &y).unwrap();
            assert!(gb <= gw * (1.0 + 1e-14));
        }
    }

    #[test]
    fn membership_enforced() {
        let d = Domain::unit_ball(3).unwrap();
        let inside = pt(&[0.1, 0.0, 0.0]);
        let outside = pt(&[1.2, 0.0, 0.0]);
        assert!(green_kernel(&d, &inside, &outside).is_err());
        assert!(green_kernel(&d, &outside, &inside).is_err());
    }

    /// Discrete Laplacian of x ↦ G(x,y) away from y shrinks like h².
    #[test]
    fn harmonicity_stencil_refinement() {
        for d in [
            Domain::whole_space(3).unwrap(),
            Domain::unit_ball(3).unwrap(),
            Domain::half_space(3).unwrap(),
        ] {
            let y = match d.kind() {
                DomainKind::HalfSpace => pt(&[0.1, -0.2, 0.6]),
                _ => pt(&[0.3, 0.1, -0.2]),
            };
            let x0 = match d.kind() {
                DomainKind::HalfSpace => pt(&[-0.3, 0.25, 0.35]),
                _ => pt(&[-0.35, -0.2, 0.25]),
            };
            let lap = |h: f64| {
                let g = |x: &Point| green_kernel(&d, x, &y).unwrap();
                let mut acc = 0.0;
                for axis in 0..3 {
                    let mut cp = x0.coords().to_vec();
                    let mut cm = x0.coords().to_vec();
                    cp[axis] += h;
                    cm[axis] -= h;
                    acc += g(&pt(&cp)) + g(&pt(&cm)) - 2.0 * g(&x0);
                }
                (acc / (h * h)).abs()
            };
            let coarse = lap(0.02);
            let fine = lap(0.01);
            assert!(fine <= 0.35 * coarse + 1e-9, "{d}: {coarse} -> {fine}");
        }
    }
}
