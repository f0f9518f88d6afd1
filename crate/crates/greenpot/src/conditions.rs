//! Exponent arithmetic for the existence theory and numerical verification of
//! its hypotheses: the dσ/dμ integrability of **G**σ and **G**μ, the Lebesgue
//! sufficient conditions on density data, the pointwise iterated potential
//! inequalities, and the interaction norm estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::domain::{Domain, Point};
use crate::error::{Error, Result};
use crate::field::EvalSet;
use crate::measure::Measure;
use crate::potential::{lp_norm_dx, potential_field};
use crate::report::ext_real;
use crate::special::sphere_area;

/// The full exponent bundle attached to an admissible (n, p, q).
///
/// γ = (p(n-2) - n)/n,   r = (γ+q)/(1-q),   s = (γ+q)/q,
/// s₁ = np/(n(1-q) + 2p),   s₂ = np/(n + 2p),   conjugates sᵢ' = sᵢ/(sᵢ-1),
/// p_lem = n(1+γ)/(n-2) (the inverse map of γ(p), so p_lem = p).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Exponents {
    pub n: u32,
    pub p: f64,
    pub q: f64,
    pub gamma: f64,
    pub s1: f64,
    pub s2: f64,
    pub r: f64,
    pub s: f64,
    pub s1_conj: f64,
    pub s2_conj: f64,
    pub p_lem: f64,
}

/// Largest relative defect among the bundle's internal identities:
/// p_lem = p, the two Sobolev scaling relations
/// 1/s₁ - 1/(r s₁') = 2/n and 1/s₂ - 1/(γ s₂') = 2/n,
/// and the two algebraic forms of s. Each defect is scaled by the magnitude
/// of its terms, so the check stays meaningful arbitrarily close to the
/// p > n/(n-2) threshold where 1/γ blows up.
pub fn identity_defect(e: &Exponents) -> f64 {
    let n = e.n as f64;
    let two_over_n = 2.0 / n;
    let rel = |defect: f64, scale: f64| defect / scale.max(1.0);
    let t1 = 1.0 / (e.r * e.s1_conj);
    let hls1 = rel(
        (1.0 / e.s1 - t1 - two_over_n).abs(),
        (1.0 / e.s1).max(t1),
    );
    let t2 = 1.0 / (e.gamma * e.s2_conj);
    let hls2 = rel(
        (1.0 / e.s2 - t2 - two_over_n).abs(),
        (1.0 / e.s2).max(t2),
    );
    let conj1 = (1.0 / e.s1 + 1.0 / e.s1_conj - 1.0).abs();
    let conj2 = (1.0 / e.s2 + 1.0 / e.s2_conj - 1.0).abs();
    let p_fixed = rel((e.p_lem - e.p).abs(), e.p);
    let s_alt = (e.p * (n - 2.0) - n * (1.0 - e.q)) / (n * e.q);
    let s_match = rel((e.s - s_alt).abs(), e.s.abs());
    hls1.max(hls2).max(conj1).max(conj2).max(p_fixed).max(s_match)
}

/// Build the bundle, enforcing n ≥ 3, 0 < q < 1 and p > n/(n-2) strictly.
pub fn exponents(n: u32, p: f64, q: f64) -> Result<Exponents> {
    if n < 3 {
        return Err(Error::Hypothesis(format!("need n >= 3, got {n}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Hypothesis(format!(
            "sublinear exponent q must lie in (0, 1), got {q}"
        )));
    }
    let nf = n as f64;
    let threshold = nf / (nf - 2.0);
    if !(p.is_finite() && p > threshold) {
        return Err(Error::Hypothesis(format!(
            "need p > n/(n-2) strictly: p = {p}, n/(n-2) = {threshold}"
        )));
    }
    let gamma = (p * (nf - 2.0) - nf) / nf;
    let s1 = nf * p / (nf * (1.0 - q) + 2.0 * p);
    let s2 = nf * p / (nf + 2.0 * p);
    let e = Exponents {
        n,
        p,
        q,
        gamma,
        s1,
        s2,
        r: (gamma + q) / (1.0 - q),
        s: (gamma + q) / q,
        // conjugates in their cancellation-free forms: sᵢ/(sᵢ-1) loses all
        // precision as p approaches the admissibility threshold
        s1_conj: p / (gamma + q),
        s2_conj: p / gamma,
        p_lem: nf * (1.0 + gamma) / (nf - 2.0),
    };
    debug_assert!(identity_defect(&e) <= 1e-12);
    Ok(e)
}

/// ‖**G**source‖_{L^p(d against)}: the potential of `source` evaluated at the
/// positive-weight nodes of `against` and integrated there. +∞ propagates
/// (e.g. an atomic measure against itself).
pub(crate) fn potential_norm(
    domain: &Domain,
    source: &Measure,
    against: &Measure,
    p: f64,
) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "norm exponent must be positive, got {p}"
        )));
    }
    if against.is_zero() {
        return Ok(0.0);
    }
    if source.is_zero() {
        return Ok(0.0);
    }
    let quad = against.quadrature();
    let mut pts = Vec::new();
    let mut ws = Vec::new();
    for (pt, &w) in quad.points.iter().zip(quad.weights.iter()) {
        if w > 0.0 {
            pts.push(pt.clone());
            ws.push(w);
        }
    }
    let field = potential_field(domain, source, &EvalSet::points(domain, pts)?)?;
    let mut acc = 0.0;
    for (&v, &w) in field.values().iter().zip(ws.iter()) {
        if v.is_infinite() {
            return Ok(f64::INFINITY);
        }
        acc += w * v.powf(p);
    }
    Ok(acc.powf(1.0 / p))
}

/// L^p(dx) norm of a density measure (grid or radial); atoms are rejected.
pub(crate) fn density_lp_norm(m: &Measure, p: f64) -> Result<f64> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "norm exponent must be positive, got {p}"
        )));
    }
    match m {
        Measure::Atomic { .. } => Err(Error::Type(
            "Lebesgue-density norms are defined for density measures, not atoms".into(),
        )),
        Measure::GridDensity { grid, values } => {
            let vol = grid.cell_volume();
            let acc: f64 = values.iter().map(|v| v.powf(p) * vol).sum();
            Ok(acc.powf(1.0 / p))
        }
        Measure::RadialDensity { dim, nodes, values } => {
            let area = sphere_area(*dim);
            let deltas = Measure::radial_deltas(nodes);
            let acc: f64 = nodes
                .iter()
                .zip(values.iter())
                .zip(deltas.iter())
                .map(|((&r, &v), &d)| v.powf(p) * area * r.powi(*dim as i32 - 1) * d)
                .sum();
            Ok(acc.powf(1.0 / p))
        }
    }
}

/// Outcome of the integrability conditions on (σ, μ).
#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    /// ‖**G**σ‖_{L^{(γ+q)/(1-q)}(dσ)}
    #[serde(with = "ext_real")]
    pub n1: f64,
    /// ‖**G**μ‖_{L^γ(dμ)}
    #[serde(with = "ext_real")]
    pub n2: f64,
    pub satisfied: bool,
    /// Both measures vanish: the existence theory does not apply.
    pub degenerate: bool,
}

/// The two integrability conditions behind existence: **G**σ ∈ L^r(dσ) and
/// **G**μ ∈ L^γ(dμ).
pub fn check_thm11(
    domain: &Domain,
    sigma: &Measure,
    mu: &Measure,
    exps: &Exponents,
) -> Result<ConditionReport> {
    let degenerate = sigma.is_zero() && mu.is_zero();
    let n1 = potential_norm(domain, sigma, sigma, exps.r)?;
    let n2 = potential_norm(domain, mu, mu, exps.gamma)?;
    Ok(ConditionReport {
        n1,
        n2,
        satisfied: !degenerate && n1.is_finite() && n2.is_finite(),
        degenerate,
    })
}

/// Outcome of the Lebesgue-density sufficient conditions, with the chain
/// bounds that dominate the direct norms.
#[derive(Debug, Clone, Serialize)]
pub struct DensityConditionReport {
    pub norm_sigma_s1: f64,
    pub norm_mu_s2: f64,
    pub satisfied: bool,
    /// ‖σ‖_{L^{s₁}}^{(γ+1)/(γ+q)}, the chain bound for n1.
    pub bound_n1: f64,
    /// ‖μ‖_{L^{s₂}}^{(γ+1)/γ}, the chain bound for n2.
    pub bound_n2: f64,
    #[serde(with = "ext_real")]
    pub n1: f64,
    #[serde(with = "ext_real")]
    pub n2: f64,
    /// n1 / bound_n1 (0 when the bound degenerates); the unknown constant in
    /// the underlying convolution inequality keeps this a reported ratio, not
    /// an asserted bound.
    pub ratio_sigma: f64,
    /// n2 / bound_n2 (0 when the bound degenerates).
    pub ratio_mu: f64,
}

/// Sufficient conditions σ ∈ L^{s₁}(dx), μ ∈ L^{s₂}(dx) for density data, and
/// a numerical exhibit of the implication towards the integrability
/// conditions.
pub fn check_cor12(
    domain: &Domain,
    sigma: &Measure,
    mu: &Measure,
    exps: &Exponents,
) -> Result<DensityConditionReport> {
    let norm_sigma_s1 = density_lp_norm(sigma, exps.s1)?;
    let norm_mu_s2 = density_lp_norm(mu, exps.s2)?;
    let thm = check_thm11(domain, sigma, mu, exps)?;
    let bound_n1 = norm_sigma_s1.powf((exps.gamma + 1.0) / (exps.gamma + exps.q));
    let bound_n2 = norm_mu_s2.powf((exps.gamma + 1.0) / exps.gamma);
    let ratio = |num: f64, den: f64| if den > 0.0 { num / den } else { 0.0 };
    Ok(DensityConditionReport {
        norm_sigma_s1,
        norm_mu_s2,
        satisfied: norm_sigma_s1.is_finite() && norm_mu_s2.is_finite(),
        bound_n1,
        bound_n2,
        n1: thm.n1,
        n2: thm.n2,
        ratio_sigma: ratio(thm.n1, bound_n1),
        ratio_mu: ratio(thm.n2, bound_n2),
    })
}

/// Max signed violation of the iterated inequality
///   (**G**σ)^t ≤ t **G**((**G**σ)^{t-1} dσ)   (t ≥ 1, reversed for t ≤ 1)
/// over the sample points; positive = violation.
pub fn iterated_check(
    domain: &Domain,
    sigma: &Measure,
    t: f64,
    sample_points: &[Point],
) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "iterated inequality needs t > 0, got {t}"
        )));
    }
    if sigma.is_zero() {
        return Err(Error::InvalidArgument(
            "iterated inequality needs σ ≠ 0".into(),
        ));
    }
    if sample_points.is_empty() {
        return Err(Error::InvalidArgument("no sample points".into()));
    }
    let quad = sigma.quadrature();
    let mut node_pts = Vec::new();
    let mut node_idx = Vec::new();
    for (i, (pt, &w)) in quad.points.iter().zip(quad.weights.iter()).enumerate() {
        if w > 0.0 {
            node_pts.push(pt.clone());
            node_idx.push(i);
        }
    }
    let g_at_nodes = potential_field(domain, sigma, &EvalSet::points(domain, node_pts)?)?;
    let mut factors = vec![0.0; sigma.num_nodes()];
    for (j, &i) in node_idx.iter().enumerate() {
        let g = g_at_nodes.values()[j];
        if !g.is_finite() {
            return Err(Error::InvalidArgument(
                "Gσ must be finite on the support nodes".into(),
            ));
        }
        if g <= 0.0 && t < 1.0 {
            return Err(Error::InvalidArgument(
                "Gσ vanishes at a support node; (Gσ)^{t-1} undefined for t < 1".into(),
            ));
        }
        factors[i] = if t == 1.0 { 1.0 } else { g.powf(t - 1.0) };
    }
    let weighted = sigma.with_node_factors(&factors)?;
    let eval = EvalSet::points(domain, domain_points(domain, sample_points)?)?;
    let lhs_field = potential_field(domain, sigma, &eval)?;
    let rhs_field = potential_field(domain, &weighted, &eval)?;
    let mut worst = f64::NEG_INFINITY;
    for (&g, &h) in lhs_field.values().iter().zip(rhs_field.values().iter()) {
        let lhs = g.powf(t);
        let rhs = t * h;
        let violation = if t >= 1.0 { lhs - rhs } else { rhs - lhs };
        worst = worst.max(violation);
    }
    Ok(worst)
}

fn domain_points(domain: &Domain, pts: &[Point]) -> Result<Vec<Point>> {
    for p in pts {
        domain.check_contains(p)?;
    }
    Ok(pts.to_vec())
}

/// Interaction norm checks, with empirical constants only — the underlying
/// inequalities fix no numeric constants.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaNormReport {
    /// ‖**G**μ‖_{L^{γ+q}(dσ)}, finite whenever the integrability conditions
    /// hold.
    #[serde(with = "ext_real")]
    pub interaction_norm: f64,
    /// Empirical best c over random f in
    /// ‖**G**(f dσ)‖_{L^p(dx)} ≤ c ‖**G**σ‖^{1/s'}_{L^{p/(1-q)}(dx)} ‖f‖_{L^s(dσ)}.
    pub empirical_c: f64,
    /// ‖**G**σ‖_{L^{p/(1-q)}(dx)} / n1^{(γ+q)/(γ+1)}.
    pub norm_chain_ratio: f64,
    pub degenerate: bool,
}

/// Runs the three norm estimates on a scenario where the integrability
/// conditions hold; `eval` supplies the Lebesgue quadrature for the dx norms.
pub fn lemma_norm_checks(
    domain: &Domain,
    sigma: &Measure,
    mu: &Measure,
    exps: &Exponents,
    eval: &EvalSet,
    seed: u64,
) -> Result<LemmaNormReport> {
    let thm = check_thm11(domain, sigma, mu, exps)?;
    if !thm.satisfied && !sigma.is_zero() {
        return Err(Error::Hypothesis(
            "interaction checks assume the integrability conditions hold".into(),
        ));
    }
    if sigma.is_zero() {
        return Ok(LemmaNormReport {
            interaction_norm: 0.0,
            empirical_c: 0.0,
            norm_chain_ratio: 0.0,
            degenerate: true,
        });
    }
    let interaction_norm = potential_norm(domain, mu, sigma, exps.gamma + exps.q)?;

    let p_over = exps.p / (1.0 - exps.q);
    let gsigma = potential_field(domain, sigma, eval)?;
    let gsigma_dx = lp_norm_dx(&gsigma, p_over)?;
    let s_conj = exps.s / (exps.s - 1.0);
    let prefactor = gsigma_dx.powf(1.0 / s_conj);

    // 20 random nonnegative piecewise-constant test functions on σ's nodes
    let quad = sigma.quadrature();
    let n_nodes = sigma.num_nodes();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut empirical_c = 0.0f64;
    for _ in 0..20 {
        let f: Vec<f64> = (0..n_nodes).map(|_| rng.random_range(0.0..1.0)).collect();
        let f_norm = quad
            .weights
            .iter()
            .zip(f.iter())
            .map(|(&w, &v)| w * v.powf(exps.s))
            .sum::<f64>()
            .powf(1.0 / exps.s);
        if f_norm == 0.0 {
            continue;
        }
        let weighted = sigma.with_node_factors(&f)?;
        let gf = potential_field(domain, &weighted, eval)?;
        let num = lp_norm_dx(&gf, exps.p)?;
        empirical_c = empirical_c.max(num / (prefactor * f_norm));
    }

    let norm_chain_ratio = if thm.n1 > 0.0 && thm.n1.is_finite() {
        gsigma_dx / thm.n1.powf((exps.gamma + exps.q) / (exps.gamma + 1.0))
    } else {
        0.0
    };
    Ok(LemmaNormReport {
        interaction_norm,
        empirical_c,
        norm_chain_ratio,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling::halton_in_domain;
    use rand::Rng;

    fn ball() -> Domain {
        Domain::unit_ball(3).unwrap()
    }

    #[test]
    fn bundle_at_the_symmetric_point() {
        let e = exponents(3, 4.0, 0.5).unwrap();
        assert!((e.gamma - 1.0 / 3.0).abs() < 1e-15);
        assert!((e.r - 5.0 / 3.0).abs() < 1e-15);
        assert!((e.s - 5.0 / 3.0).abs() < 1e-15);
        assert!((e.s1 - 12.0 / 9.5).abs() < 1e-15);
        assert!((e.s2 - 12.0 / 11.0).abs() < 1e-15);
        assert!((e.p_lem - 4.0).abs() < 1e-15);
        assert!(identity_defect(&e) <= 1e-12);
    }

    #[test]
    fn inverse_map_identity_in_dimension_four() {
        let e = exponents(4, 3.0, 0.25).unwrap();
        assert!((e.gamma - 0.5).abs() < 1e-15);
        assert!((e.p_lem - 3.0).abs() < 1e-15);
    }

    #[test]
    fn hypothesis_gates() {
        // p exactly at the threshold n/(n-2) is rejected
        assert!(matches!(exponents(3, 3.0, 0.5), Err(Error::Hypothesis(_))));
        assert!(exponents(3, 3.0 + 1e-9, 0.5).is_ok());
        assert!(matches!(exponents(3, 4.0, 0.0), Err(Error::Hypothesis(_))));
        assert!(matches!(exponents(3, 4.0, 1.0), Err(Error::Hypothesis(_))));
        assert!(matches!(exponents(2, 4.0, 0.5), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn identities_hold_over_random_admissible_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..1000 {
            let n = rng.random_range(3u32..9);
            let nf = n as f64;
            let p = nf / (nf - 2.0) + rng.random_range(0.01..10.0);
            let q = rng.random_range(0.01..0.99);
            let e = exponents(n, p, q).unwrap();
            assert!(
                identity_defect(&e) <= 1e-12,
                "defect {} at ({n}, {p}, {q})",
                identity_defect(&e)
            );
        }
    }

    #[test]
    fn atomic_sigma_fails_the_condition() {
        let d = ball();
        let sigma = Measure::atomic(&d, vec![Point::origin(3)], vec![1.0]).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 32, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let rep = check_thm11(&d, &sigma, &mu, &e).unwrap();
        assert_eq!(rep.n1, f64::INFINITY);
        assert!(!rep.satisfied);
    }

    #[test]
    fn zero_sigma_with_density_mu_is_satisfied() {
        let d = ball();
        let sigma = Measure::constant_radial(&d, 1.0, 32, 0.0).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 128, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let rep = check_thm11(&d, &sigma, &mu, &e).unwrap();
        assert_eq!(rep.n1, 0.0);
        assert!(rep.n2.is_finite());
        assert!(rep.satisfied);
        // γ = 1 corresponds to p = 2n/(n-2) = 6 and N₂ = E₁[μ] = 4π/45
        let e1 = exponents(3, 6.0, 0.5).unwrap();
        assert!((e1.gamma - 1.0).abs() < 1e-15);
        let rep1 = check_thm11(&d, &sigma, &mu, &e1).unwrap();
        let exact = 4.0 * std::f64::consts::PI / 45.0;
        assert!((rep1.n2 - exact).abs() < 1e-3 * exact, "{} vs {exact}", rep1.n2);
    }

    #[test]
    fn degenerate_pair_reported() {
        let d = ball();
        let zero = Measure::constant_radial(&d, 1.0, 16, 0.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let rep = check_thm11(&d, &zero, &zero, &e).unwrap();
        assert!(rep.degenerate);
        assert!(!rep.satisfied);
    }

    #[test]
    fn thm11_monotone_under_enlarging_sigma() {
        let d = ball();
        let mu = Measure::constant_radial(&d, 1.0, 64, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let sigma_small = Measure::constant_radial(&d, 1.0, 64, 0.5).unwrap();
        let sigma_big = sigma_small.scale(4.0).unwrap();
        let small = check_thm11(&d, &sigma_small, &mu, &e).unwrap();
        let big = check_thm11(&d, &sigma_big, &mu, &e).unwrap();
        assert!(small.n1 <= big.n1);
        // finiteness is monotone: enlarging σ cannot re-satisfy the condition
        assert!(small.satisfied);
        assert!(big.satisfied);
    }

    #[test]
    fn cor12_constant_density_norm() {
        let d = ball();
        let sigma = Measure::constant_radial(&d, 1.0, 256, 1.0).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 256, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let rep = check_cor12(&d, &sigma, &mu, &e).unwrap();
        let vol = crate::special::ball_volume(3);
        let expected = vol.powf(1.0 / e.s1);
        assert!((rep.norm_sigma_s1 - expected).abs() < 1e-3 * expected);
        assert!(rep.satisfied);
        assert!(rep.n1.is_finite() && rep.n2.is_finite());
        assert!(rep.ratio_sigma > 0.0 && rep.ratio_mu > 0.0);
    }

    #[test]
    fn cor12_rejects_atoms() {
        let d = ball();
        let atom = Measure::atomic(&d, vec![Point::origin(3)], vec![1.0]).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 16, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        assert!(matches!(
            check_cor12(&d, &atom, &mu, &e),
            Err(Error::Type(_))
        ));
    }

    #[test]
    fn iterated_identity_at_t_one() {
        let d = ball();
        let sigma = Measure::constant_radial(&d, 1.0, 128, 1.0).unwrap();
        let pts = halton_in_domain(&d, 50, 0.9);
        let v = iterated_check(&d, &sigma, 1.0, &pts).unwrap();
        assert!(v.abs() <= 1e-10, "violation {v}");
    }

    #[test]
    fn iterated_inequalities_hold_within_quadrature() {
        // support kept off the boundary: t < 1 needs Gσ > 0 at every node
        let d = ball();
        let sigma = Measure::constant_radial(&d, 0.95, 256, 1.0).unwrap();
        let pts = halton_in_domain(&d, 100, 0.9);
        for t in [0.5, 2.0] {
            let v = iterated_check(&d, &sigma, t, &pts).unwrap();
            assert!(v <= 1e-3, "t = {t}: violation {v}");
        }
    }

    #[test]
    fn iterated_rejects_boundary_zero_for_small_t() {
        // a support node at r = 1 has Gσ = 0 exactly; (Gσ)^{t-1} blows up
        let d = ball();
        let sigma = Measure::constant_radial(&d, 1.0, 64, 1.0).unwrap();
        let pts = halton_in_domain(&d, 10, 0.9);
        assert!(matches!(
            iterated_check(&d, &sigma, 0.5, &pts),
            Err(Error::InvalidArgument(_))
        ));
        // fine for t ≥ 1
        assert!(iterated_check(&d, &sigma, 2.0, &pts).is_ok());
    }

    #[test]
    fn lemma_norm_report_is_finite_on_good_data() {
        let d = ball();
        let sigma = Measure::constant_radial(&d, 1.0, 128, 1.0).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 128, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let eval = EvalSet::radial_uniform(&d, 1.0, 128).unwrap();
        let rep = lemma_norm_checks(&d, &sigma, &mu, &e, &eval, 99).unwrap();
        assert!(rep.interaction_norm.is_finite() && rep.interaction_norm > 0.0);
        assert!(rep.empirical_c.is_finite() && rep.empirical_c > 0.0);
        assert!(rep.norm_chain_ratio.is_finite() && rep.norm_chain_ratio > 0.0);
        assert!(!rep.degenerate);
    }

    #[test]
    fn lemma_norm_degenerate_sigma() {
        let d = ball();
        let sigma = Measure::constant_radial(&d, 1.0, 16, 0.0).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 16, 1.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let eval = EvalSet::radial_uniform(&d, 1.0, 16).unwrap();
        let rep = lemma_norm_checks(&d, &sigma, &mu, &e, &eval, 1).unwrap();
        assert!(rep.degenerate);
        assert_eq!(rep.interaction_norm, 0.0);
    }
}
