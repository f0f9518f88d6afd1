//! Scratch calibration runs; numbers reported here get frozen into tests.

use std::time::Instant;

use greenpot::conditions::{check_cor12, check_thm11, exponents, iterated_check, lemma_norm_checks};
use greenpot::energy::{energy, lemma31_check, lemma32_check, riesz_measure_numeric};
use greenpot::potential::{best_constant_estimate, green_potential, lp_norm_dmu, lp_norm_dx, potential_field};
use greenpot::sampling::halton_in_domain;
use greenpot::solver::{picard_solve, SolverConfig};
use greenpot::{Domain, EvalSet, GridSpec, Measure, Point};

fn torsion(r: f64) -> f64 {
    (1.0 - r * r) / 6.0
}

/// RK4 shooting for -(1/r²)(r² u')' = u^{1/2}, u'(0) = 0, u(1) = 0.
/// Substituting v = r·u turns it into v'' = -r (v/r)^{1/2} with v(0) = 0.
/// We integrate u directly: u'' + (2/r) u' = -u^{1/2}.
fn shoot(a: f64, steps: usize) -> (f64, bool) {
    // state (u, w = u'), with the r→0 limit u'' = -u^{1/2}/3 handled by series
    let h = 1.0 / steps as f64;
    let f = |r: f64, u: f64, w: f64| -> (f64, f64) {
        if u <= 0.0 {
            return (w, 0.0);
        }
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
            return (u, false); // hit zero before the boundary
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

fn shooting_oracle() -> f64 {
    let mut lo = 1e-6;
    let mut hi = 1.0;
    // u(1) increasing in a: too small ⇒ hits zero inside, too large ⇒ positive at 1
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

fn main() {
    let d = Domain::unit_ball(3).unwrap();

    // --- 1. grid torsion sweep at h = 1/16, single-threaded timing
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let grid = GridSpec::cube(&[0.0; 3], 1.0, 32).unwrap();
        let m = Measure::constant_on_grid(&d, grid.clone(), 1.0).unwrap();
        let eval = EvalSet::grid_in_domain(&d, grid).unwrap();
        let start = Instant::now();
        let field = pool.install(|| potential_field(&d, &m, &eval).unwrap());
        let elapsed = start.elapsed().as_secs_f64();
        let mut max_rel: f64 = 0.0;
        for (i, &v) in field.values().iter().enumerate() {
            let p = eval.point(i);
            let r = p.norm();
            if r <= 0.8 {
                let exact = torsion(r);
                max_rel = max_rel.max((v - exact).abs() / exact);
            }
        }
        println!("1. grid torsion h=1/16: max rel err (|x|<=0.8) = {max_rel:.3e}, single-thread time = {elapsed:.2}s");
    }

    // --- 2. radial ODE shooting oracle vs Picard
    {
        let oracle = shooting_oracle();
        let sigma = Measure::constant_radial(&d, 1.0, 512, 1.0).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 512, 0.0).unwrap();
        let cfg = SolverConfig {
            q: 0.5,
            max_iter: 400,
            rel_tol: 1e-10,
            eval_set: EvalSet::radial_uniform(&d, 1.0, 512).unwrap(),
        };
        let t = Instant::now();
        let trace = picard_solve(&d, &sigma, &mu, &cfg).unwrap();
        let u0 = trace.solution.values()[0];
        println!(
            "2. shooting u(0) = {oracle:.8}, picard u(0) = {u0:.8}, rel diff = {:.3e}, iters = {}, time = {:.2}s, max mono viol = {:.3e}, eq residual = {:.3e}",
            (u0 - oracle).abs() / oracle,
            trace.iterations(),
            t.elapsed().as_secs_f64(),
            trace.max_monotonicity_violation() / trace.solution.sup_norm(),
            trace.equation_residual.unwrap()
        );
        // scaling law
        for lambda in [0.5, 2.0, 4.0] {
            let scaled = picard_solve(&d, &sigma.scale(lambda).unwrap(), &mu, &cfg).unwrap();
            let factor = lambda * lambda;
            let sup = scaled.solution.sup_norm();
            let max_dev = trace
                .solution
                .values()
                .iter()
                .zip(scaled.solution.values().iter())
                .map(|(a, b)| (factor * a - b).abs())
                .fold(0.0f64, f64::max);
            println!("   scaling λ={lambda}: max dev = {:.3e} rel", max_dev / sup);
        }
    }

    // --- 3. iterated inequalities on grid densities (σ ≡ 1 on the sub-ball
    //        of radius 1/2, so the support cell count stays manageable)
    {
        let pts = halton_in_domain(&d, 100, 0.9);
        for cells in [16usize, 32] {
            let grid = GridSpec::cube(&[0.0; 3], 0.5, cells).unwrap();
            let values: Vec<f64> = (0..grid.num_cells())
                .map(|k| if grid.center(k).norm() < 0.5 { 1.0 } else { 0.0 })
                .collect();
            let sigma = Measure::grid_density(&d, grid, values).unwrap();
            for texp in [0.5, 1.0, 2.0] {
                let t = Instant::now();
                let v = iterated_check(&d, &sigma, texp, &pts).unwrap();
                println!(
                    "3. iterated h=1/{cells}: t={texp} violation = {v:.6e}  ({:.1}s)",
                    t.elapsed().as_secs_f64()
                );
            }
        }
        // radial flavor for the pipeline scenario (support strictly inside)
        let sigma_r = Measure::constant_radial(&d, 511.0 / 512.0, 512, 1.0).unwrap();
        for texp in [0.5, 1.0, 2.0] {
            let v = iterated_check(&d, &sigma_r, texp, &pts).unwrap();
            println!("3r. iterated radial 512: t={texp} violation = {v:.6e}");
        }
    }

    // --- 4. riesz reconstruction + clipping + Richardson differences
    {
        let mu = Measure::constant_radial(&d, 1.0, 2048, 1.0).unwrap();
        let probe: Vec<Point> = halton_in_domain(&d, 64, 0.4);
        let q = 0.5;
        let eval = EvalSet::points(&d, probe.clone()).unwrap();
        let mut pots: Vec<Vec<f64>> = Vec::new();
        for cells in [8usize, 16, 32] {
            let grid = GridSpec::cube(&[0.0; 3], 0.5, cells).unwrap();
            let t = Instant::now();
            let riesz = riesz_measure_numeric(&d, &mu, q, &grid).unwrap();
            let clip_frac = riesz.clipped_mass / riesz.measure.total_mass();
            let gw = potential_field(&d, &riesz.measure, &eval).unwrap();
            let mut sup = 0.0f64;
            for (i, p) in probe.iter().enumerate() {
                let w = green_potential(&d, &mu, p).unwrap().powf(1.0 - q);
                sup = sup.max((gw.values()[i] - w).abs());
            }
            println!(
                "4. riesz h=1/{cells}: literal reconstruction sup = {sup:.6e}, mass = {:.6}, clipped frac = {clip_frac:.3e}, time = {:.1}s",
                riesz.measure.total_mass(),
                t.elapsed().as_secs_f64()
            );
            pots.push(gw.values().to_vec());
        }
        let diff = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b.iter())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0f64, f64::max)
        };
        let d1 = diff(&pots[0], &pots[1]);
        let d2 = diff(&pots[1], &pots[2]);
        println!("4R. richardson: |Gω(1/8)-Gω(1/16)| = {d1:.6e}, |Gω(1/16)-Gω(1/32)| = {d2:.6e}, ratio = {:.3}", d2 / d1);
    }

    // --- 5/6. lemma31 and lemma32 frozen ratios (μ = Lebesgue on ball)
    {
        let mu = Measure::constant_radial(&d, 1.0, 512, 1.0).unwrap();
        let grid = GridSpec::cube(&[0.0; 3], 0.5, 16).unwrap();
        let t = Instant::now();
        let l31 = lemma31_check(&d, &mu, 1.0 / 3.0, 0.5, &grid).unwrap();
        println!(
            "5. lemma31 h=1/16: lhs = {:.8e}, rhs = {:.8e}, ratio = {:.8}, clipped = {:.3e}, time = {:.1}s",
            l31.lhs, l31.rhs, l31.ratio, l31.clipped_mass, t.elapsed().as_secs_f64()
        );
        let eval = EvalSet::radial_uniform(&d, 1.0, 512).unwrap();
        let l32 = lemma32_check(&d, &mu, 1.0 / 3.0, &eval).unwrap();
        println!(
            "6. lemma32: lhs = {:.8e}, rhs = {:.8e}, ratio = {:.8}",
            l32.lhs, l32.rhs, l32.ratio
        );
        // energy closed form check
        let e1 = energy(&d, &mu, 1.0).unwrap();
        println!("   energy γ=1: {:.8} (4π/45 = {:.8})", e1, 4.0 * std::f64::consts::PI / 45.0);
    }

    // --- 7. homogeneous scenario conditions (σ radial short of the boundary)
    {
        let sigma = Measure::constant_radial(&d, 511.0 / 512.0, 512, 1.0).unwrap();
        let mu = Measure::constant_radial(&d, 1.0, 512, 0.0).unwrap();
        let e = exponents(3, 4.0, 0.5).unwrap();
        let thm = check_thm11(&d, &sigma, &mu, &e).unwrap();
        println!("7. thm11: n1 = {:.8}, n2 = {:.8}", thm.n1, thm.n2);
        let cor = check_cor12(&d, &sigma, &mu, &e).unwrap();
        println!(
            "   cor12: |σ|_s1 = {:.8}, ratio_sigma = {:.8}",
            cor.norm_sigma_s1, cor.ratio_sigma
        );
        let eval = EvalSet::radial_uniform(&d, 1.0, 512).unwrap();
        let lem = lemma_norm_checks(&d, &sigma, &mu, &e, &eval, 42).unwrap();
        println!(
            "   lemma26/27/28: interaction = {:.8}, c = {:.8}, chain ratio = {:.8}",
            lem.interaction_norm, lem.empirical_c, lem.norm_chain_ratio
        );
        // mixed scenario variant (μ = Lebesgue ball)
        let mu_full = Measure::constant_radial(&d, 1.0, 512, 1.0).unwrap();
        let thm_m = check_thm11(&d, &sigma, &mu_full, &e).unwrap();
        let lem_m = lemma_norm_checks(&d, &sigma, &mu_full, &e, &eval, 42).unwrap();
        println!(
            "   mixed: n2 = {:.8}, interaction = {:.8}",
            thm_m.n2, lem_m.interaction_norm
        );
    }

    // --- 8. best-constant estimator vs random-search oracle (64 nodes)
    {
        let sigma = Measure::constant_radial(&d, 1.0, 64, 1.0).unwrap();
        let (s, r) = (5.0 / 3.0, 5.0 / 6.0);
        let t = Instant::now();
        let est = best_constant_estimate(&d, &sigma, s, r, 8, 60, 12345).unwrap();
        let est_time = t.elapsed().as_secs_f64();
        // crude random-search oracle
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(999);
        let quad = sigma.quadrature();
        let nodes: Vec<Point> = quad.points.clone();
        let eval = EvalSet::points(&d, nodes).unwrap();
        let mut best = 0.0f64;
        let t = Instant::now();
        for _ in 0..20000 {
            let f: Vec<f64> = (0..64).map(|_| rng.random_range(0.0..1.0f64)).collect();
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
            let g = potential_field(&d, &m, &eval).unwrap();
            let gr: f64 = quad
                .weights
                .iter()
                .zip(g.values().iter())
                .map(|(&w, &v)| w * v.powf(r))
                .sum::<f64>()
                .powf(1.0 / r);
            best = best.max(gr / fs);
        }
        println!(
            "8. best constant: estimator = {:.8} ({est_time:.1}s), random-search oracle = {best:.8} ({:.1}s), est/oracle = {:.4}",
            est.estimate,
            t.elapsed().as_secs_f64(),
            est.estimate / best
        );
    }

    // --- 9. torsion L4 norm for the verify oracle
    {
        let mu = Measure::constant_radial(&d, 1.0, 512, 1.0).unwrap();
        let eval = EvalSet::radial_uniform(&d, 1.0, 512).unwrap();
        let u = potential_field(&d, &mu, &eval).unwrap();
        let l4 = lp_norm_dx(&u, 4.0).unwrap();
        // high-res trapezoid oracle of (∫ ((1-r²)/6)^4 dx)^{1/4}
        let n = 200000;
        let mut acc = 0.0;
        for i in 0..=n {
            let r = i as f64 / n as f64;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc += w * torsion(r).powi(4) * 4.0 * std::f64::consts::PI * r * r / n as f64;
        }
        let oracle = acc.powf(0.25);
        println!("9. torsion L4: field = {l4:.8}, oracle = {oracle:.8}, rel = {:.3e}", (l4 - oracle).abs() / oracle);
        let lmu = lp_norm_dmu(&u, 1.0, &mu).unwrap();
        println!("   L1(dμ) = {lmu:.8} (4π/45 = {:.8})", 4.0 * std::f64::consts::PI / 45.0);
    }
}
