//! Dimension-dependent constants of the Laplace kernel, exact for integer n.

use std::f64::consts::PI;

/// Gamma function at half-integer arguments: `gamma_half(k)` = Γ(k/2), k ≥ 1.
///
/// Exact up to rounding — integer arguments unroll the factorial, half-integer
/// arguments walk up from Γ(1/2) = √π.
pub fn gamma_half(k: u32) -> f64 {
    assert!(k >= 1, "gamma_half requires k >= 1");
    if k % 2 == 0 {
        // Γ(m) = (m-1)!
        let m = k / 2;
        (1..m).map(|i| i as f64).product()
    } else {
        // Γ(1/2 + j) = (1/2)(3/2)...(j - 1/2) √π
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x + 1.0 <= k as f64 / 2.0 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

/// Surface area of the unit sphere S^{n-1} in ℝⁿ: ω_{n-1} = 2 π^{n/2} / Γ(n/2).
pub fn sphere_area(n: u32) -> f64 {
    2.0 * PI.powf(n as f64 / 2.0) / gamma_half(n)
}

/// Volume of the unit ball in ℝⁿ.
pub fn ball_volume(n: u32) -> f64 {
    sphere_area(n) / n as f64
}

/// Normalization of the whole-space kernel c_n |x-y|^{2-n}:
/// c_n = Γ(n/2 - 1) / (4 π^{n/2}), fixed so that the kernel inverts -Δ.
pub fn kernel_constant(n: u32) -> f64 {
    assert!(n >= 3, "kernel constant defined for n >= 3");
    gamma_half(n - 2) / (4.0 * PI.powf(n as f64 / 2.0))
}
