//! Deterministic low-discrepancy sampling (Halton), used for reproducible,
//! seed-free check points.

use crate::domain::{Domain, DomainKind, Point};

/// Radical-inverse of `index` in the given base; the Halton coordinate.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut value = 0.0;
    while index > 0 {
        value += (index % base) as f64 * f;
        index /= base;
        f *= inv;
    }
    value
}

fn first_primes(k: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(k);
    let mut candidate = 2u64;
    while primes.len() < k {
        if primes.iter().all(|p| candidate % p != 0) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// The i-th Halton point in [0,1)^dim (1-based index; index 0 is skipped to
/// avoid the all-zeros corner).
pub fn halton_point(index: u64, dim: usize) -> Vec<f64> {
    let bases = first_primes(dim);
    bases
        .iter()
        .map(|&b| radical_inverse(index, b))
        .collect()
}

/// First `count` Halton points that fall in the domain after mapping the unit
/// cube to a bounded box: [-cap, cap]ⁿ for the ball and whole space (rejecting
/// |x| ≥ cap on the ball), [-cap, cap]^{n-1} × (0, cap] above a half-space
/// wall. Deterministic and seed-free.
pub fn halton_in_domain(domain: &Domain, count: usize, cap: f64) -> Vec<Point> {
    let n = domain.dim() as usize;
    let mut out = Vec::with_capacity(count);
    let mut index = 1u64;
    while out.len() < count {
        let u = halton_point(index, n);
        index += 1;
        let coords: Vec<f64> = match domain.kind() {
            DomainKind::HalfSpace => u
                .iter()
                .enumerate()
                .map(|(a, &v)| {
                    if a + 1 == n {
                        v * cap + 1e-3
                    } else {
                        (2.0 * v - 1.0) * cap
                    }
                })
                .collect(),
            _ => u.iter().map(|&v| (2.0 * v - 1.0) * cap).collect(),
        };
        let p = Point::new(coords).unwrap();
        if domain.kind() == DomainKind::UnitBall && p.norm_sq() >= cap * cap {
            continue;
        }
        if domain.contains(&p) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base2_prefix() {
        // 1/2, 1/4, 3/4, 1/8, 5/8, ...
        let expected = [0.5, 0.25, 0.75, 0.125, 0.625];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(radical_inverse(i as u64 + 1, 2), *e);
        }
    }

    #[test]
    fn points_land_inside_and_are_deterministic() {
        for d in [
            Domain::unit_ball(3).unwrap(),
            Domain::whole_space(3).unwrap(),
            Domain::half_space(3).unwrap(),
        ] {
            let pts = halton_in_domain(&d, 100, 0.95);
            assert_eq!(pts.len(), 100);
            for p in &pts {
                assert!(d.contains(p));
            }
            assert_eq!(pts, halton_in_domain(&d, 100, 0.95));
        }
    }

    #[test]
    fn low_discrepancy_beats_clumping() {
        // crude equidistribution check on the first coordinate
        let d = Domain::unit_ball(3).unwrap();
        let pts = halton_in_domain(&d, 400, 0.9);
        let left = pts.iter().filter(|p| p.coords()[0] < 0.0).count();
        assert!((150..=250).contains(&left));
    }
}
