//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use hscomp::balls::{enumerate_ball, DEFAULT_BUDGET_BYTES};
use hscomp::bounds::{
    empirical_compression, extension_bound_hyp, extension_bound_poly, limit_bound, wreath_bound, LimitSystem, Variant,
};
use hscomp::combine::{combine_family, verify_combined, ExtensionScales, KernelFamily};
use hscomp::embed::{corollary_threshold, schoenberg_family, schoenberg_family_for, schoenberg_t, verify_family};
use hscomp::embed::{CompressionProfile, ScaleParams};
use hscomp::group::{cayley_ball, make_extension, make_group, Element, GroupSpec, LampOrder, Lamplighter};
use hscomp::hyp::{default_q, fit_condition2_constants, ray_segment, verify_hyp_lemma, ArithmeticMode, Boundary, HypFamily, HypParams};
use hscomp::poly::{poly_family, poly_scan};

use common::{all_configurations, greedy_ray, WreathOracle};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn coords(x: &Element) -> Vec<f64> {
    x.values().iter().map(|&v| v as f64).collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn formula_golden_values() -> Outcome {
    let poly = extension_bound_poly(1.0).unwrap().value;
    let hyp = extension_bound_hyp(1.0).unwrap().value;
    let wreath = wreath_bound(1.0, 1).unwrap().value;
    let pass = close(poly, 0.25, 1e-12) && close(hyp, 0.2, 1e-12) && close(wreath, 0.4, 1e-12);
    outcome(pass, format!("poly={poly} hyp={hyp} wreath={wreath}"))
}

fn schoenberg_machinery() -> Outcome {
    let z2 = make_group(&GroupSpec::FreeAbelian { rank: 2 }).unwrap();
    let ball = Arc::new(enumerate_ball(&z2, 6).unwrap());
    let eps = 0.1;
    // ℓ² ≤ ℓ¹: ρ₊(R) = R for the identity map
    let t = schoenberg_t(eps, 6.0).unwrap();
    let mut fam = schoenberg_family(ball.clone(), coords, t).unwrap();
    let v = fam.realize().unwrap().clone();
    let gram_err = (&v * v.transpose() - fam.gram()).abs().max();
    let norm_err = v.row_iter().map(|r| (r.norm() - 1.0).abs()).fold(0.0, f64::max);
    let rep = verify_family(&fam, 1, 6.0, eps, f64::INFINITY);
    let near = rep.row("near").unwrap();
    let pass = gram_err <= 1e-9 && norm_err <= 1e-12 && near.violations == 0 && near.pairs_checked > 0;
    outcome(
        pass,
        format!(
            "ball={} gram_err={gram_err:.2e} norm_err={norm_err:.2e} near: {} pairs, {} violations, worst margin {:.3e}",
            ball.len(),
            near.pairs_checked,
            near.violations,
            near.worst_margin
        ),
    )
}

fn corollary_thresholds() -> Outcome {
    let z = make_group(&GroupSpec::FreeAbelian { rank: 1 }).unwrap();
    let prof = CompressionProfile::isometric();
    let mut pass = true;
    let mut checked = 0;
    let mut violations = 0;
    let mut last_a = 0.0;
    for n in 4..=16u64 {
        let params = ScaleParams::new(n, 0.05, 0.5, 2f64.sqrt(), 0.55).unwrap();
        let a_n = corollary_threshold(&prof, &params).unwrap().a_n;
        let ball = Arc::new(enumerate_ball(&z, (2.0 * a_n).ceil() as u32).unwrap());
        let fam = schoenberg_family_for(ball, coords, &prof, params).unwrap();
        let far = verify_family(&fam, n, params.r_n(), params.eps_n(), a_n).row("far").unwrap().clone();
        pass &= far.violations == 0 && !far.vacuous;
        checked += far.pairs_checked;
        violations += far.violations;
        last_a = a_n;
    }
    outcome(
        pass,
        format!("n=4..16, {checked} far pairs, {violations} violations, A_16={last_a:.4}"),
    )
}

fn polynomial_lemma() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for rank in [1, 2] {
        let g = make_group(&GroupSpec::FreeAbelian { rank }).unwrap();
        let scan = match poly_scan(&g, 0.05, 1_000_000) {
            Ok(s) => s,
            Err(e) => return outcome(false, format!("Z^{rank}: {e}")),
        };
        let cond1: usize = scan
            .outcomes
            .iter()
            .map(|o| o.report.row("cond1").unwrap().violations)
            .sum();
        let last = scan.outcomes.last().map_or(0, |o| o.search.n);
        // k(n) grows like 4·rank·n^{3/2+2p}, so n̄ sits near (2·rank)^{1/(2p)}
        let predicted = (2.0 * rank as f64).powf(1.0 / 0.1);
        let above_bar_ok = scan
            .n_bar
            .is_none_or(|nb| scan.outcomes.iter().filter(|o| o.search.n >= nb).all(|o| o.k_within_bound));
        let n_bar = match scan.n_bar {
            Some(nb) => format!("{nb}"),
            None => format!("not reached (expected near {predicted:.0})"),
        };
        pass &= !scan.outcomes.is_empty() && cond1 == 0 && above_bar_ok;
        parts.push(format!(
            "Z^{rank}: ball r={} ({} elts), n=1..{last}, cond1 violations {cond1}, n0={:?}, n_bar={n_bar}",
            scan.ball_radius, scan.ball_size, scan.n0
        ));
    }
    outcome(pass, parts.join("; "))
}

fn hyperbolic_lemma() -> Outcome {
    let f2 = make_group(&GroupSpec::FreeGroup { rank: 2 }).unwrap();
    let a = Boundary::power_of(1);
    let target = Element::from_vec(a.prefix(60));

    // rays from the radius-5 ball against greedy geodesics
    let mut geodesic_ok = true;
    for y in enumerate_ball(&f2, 5).unwrap().elements() {
        let ray = ray_segment(&f2, y, &a, 0, 16).unwrap();
        geodesic_ok &= ray == greedy_ray(&f2, y, &target, 16);
        geodesic_ok &= ray.windows(2).all(|w| f2.distance(&w[0], &w[1]) == 1);
    }

    let mut pass = geodesic_ok;
    let mut outcomes = Vec::new();
    let mut parts = vec![format!("geodesic check {}", if geodesic_ok { "ok" } else { "FAILED" })];
    for n in [2u64, 3] {
        let params = HypParams::with_default_q(n, 0.05, a.clone()).unwrap();
        let q = params.q;
        let m = params.k_n();
        let fam = HypFamily::new(&f2, params).unwrap();
        let out = verify_hyp_lemma(&fam, 3, ArithmeticMode::Exact).unwrap();
        // support radius against an explicit union of greedy rays
        let k_max = (1..).take_while(|&k| (k as f64) < m.sqrt()).last().unwrap();
        let (lo, hi) = (m.ceil() as usize, (2.0 * m).floor() as usize);
        let mut support_exact = true;
        for x in enumerate_ball(&f2, 3).unwrap().elements() {
            let mut support = HashSet::new();
            for z in enumerate_ball(&f2, k_max - 1).unwrap().elements() {
                let y = f2.multiply(x, z);
                support.extend(greedy_ray(&f2, &y, &target, hi).into_iter().skip(lo));
            }
            let brute = support.iter().map(|s| f2.distance(x, s)).max().unwrap();
            let keys: HashSet<Element> = fam.h_vector(x).counts.keys().cloned().collect();
            support_exact &= keys == support && brute == fam.support_radius(x);
        }
        let cond1 = out.report.row("cond1").unwrap();
        let cond2 = out.report.row("cond2").unwrap();
        pass &= cond1.violations == 0 && out.min_l1 >= 1.0 && support_exact && out.max_difference.is_finite();
        parts.push(format!(
            "n={n}: q={q:.6} k(n)={m:.3} min|H|_1={:.4} support radius {} vs bound {:.3} (contained: {}, exact: {}) cond2 max diff {:.4e} ({} violations of {})",
            out.min_l1,
            out.max_support_radius,
            out.support_bound,
            out.support_contained,
            support_exact,
            out.max_difference,
            cond2.violations,
            cond2.pairs_checked
        ));
        outcomes.push(out);
    }
    let fit = fit_condition2_constants(&outcomes, default_q(0.05));
    pass &= fit.is_some();
    if let Some((c, d)) = fit {
        parts.push(format!("fitted C={c:.4} D={d:.4}"));
    }
    outcome(pass, parts.join("; "))
}

fn extension_combiner() -> Outcome {
    let cases = [
        ("Zx(+Z/2)", "extension(free_abelian(1),direct_sum_finite(1,2,2,2,2,2),trivial)", 16),
        ("H3", "extension(free_abelian(2),free_abelian(1),heisenberg)", 3),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (label, spec, radius) in cases {
        let ext = make_extension(&spec.parse().unwrap()).unwrap();
        let n = 1;
        let g = poly_family(ext.quotient(), n, 0.05).unwrap();
        let scales = ExtensionScales::polynomial(n, 0.05, 1.0)
            .unwrap()
            .with_support(g.k() as f64)
            .unwrap();
        let h = KernelFamily::new(&ext, &scales, scales.domain_radius(radius)).unwrap();
        let f = combine_family(&ext, &g, &h, scales);
        let ball = enumerate_ball(ext.total(), radius).unwrap();
        let out = match verify_combined(&f, &ball) {
            Ok(o) => o,
            Err(e) => return outcome(false, format!("{label}: {e}")),
        };
        let near = out.report.row("near").unwrap();
        let far = out.report.row("far").unwrap();
        let ok = out.max_norm_error <= 1e-12
            && near.violations == 0
            && near.out_of_domain == 0
            && (far.vacuous || (far.violations == 0 && far.out_of_domain == 0));
        pass &= ok;
        parts.push(format!(
            "{label} n={n} ball r={radius} ({} elts): norm err {:.1e}, near {}/{} violations, far {}",
            out.ball_size,
            out.max_norm_error,
            near.violations,
            near.pairs_checked,
            if far.vacuous {
                format!("vacuous (needs d >= {:.2})", scales.far_radius())
            } else {
                format!("{}/{} violations at d >= {:.2}", far.violations, far.pairs_checked, scales.far_radius())
            }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn limit_standard() -> Outcome {
    let sys = LimitSystem::constant(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
    let rep = limit_bound(&sys, 1_000_000, Variant::Standard).unwrap();
    let sym = rep.symbolic.unwrap_or(f64::NAN);
    let mut pass = close(rep.value, sym, 0.02);
    let mut last = f64::INFINITY;
    let mut vals = Vec::new();
    for delta in [0.1, 1e-2, 1e-3, 1e-6] {
        let s = LimitSystem::constant(delta, 1.0, 1.0, 0.0, 0.0).unwrap();
        let v = limit_bound(&s, 1_000_000, Variant::Standard).unwrap().value;
        pass &= v < last;
        last = v;
        vals.push(format!("{v:.2e}"));
    }
    pass &= last <= 1e-6;
    outcome(
        pass,
        format!("numeric {:.5} vs symbolic {sym}; delta->0: {}", rep.value, vals.join(", ")),
    )
}

fn limit_quasi() -> Outcome {
    let sys = LimitSystem::constant(1.0, 1.0, 1.0, 0.0, 0.0).unwrap();
    let rep = limit_bound(&sys, 1_000_000, Variant::QuasiGeodesic).unwrap();
    let sym = rep.symbolic.unwrap_or(f64::NAN);
    outcome(
        close(rep.value, sym, 0.02),
        format!("numeric {:.5} vs symbolic {sym} (tolerance 0.02)", rep.value),
    )
}

fn oracles() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for spec in [
        "free_abelian(1)",
        "free_abelian(2)",
        "free_abelian(3)",
        "free_group(2)",
        "free_group(3)",
        "heisenberg",
        "extension(free_abelian(2),free_abelian(1),heisenberg)",
        "extension(free_group(2),free_abelian(1),trivial)",
    ] {
        let g = make_group(&spec.parse().unwrap()).unwrap();
        let bfs = cayley_ball(&g, 8, DEFAULT_BUDGET_BYTES).unwrap();
        let bad = bfs.iter().filter(|(x, d)| g.length(x) != *d).count();
        let size_ok = enumerate_ball(&g, 8).unwrap().len() == bfs.len();
        pass &= bad == 0 && size_ok;
        parts.push(format!("{spec}: {} elts, {bad} mismatches", bfs.len()));
    }
    for (order, values) in [
        (LampOrder::Finite(2), vec![0, 1]),
        (LampOrder::Finite(3), vec![0, 1, 2]),
        (LampOrder::Infinite, vec![-2, -1, 0, 1, 2]),
    ] {
        let oracle = WreathOracle::new(order);
        let l = Lamplighter::new(order);
        let g = make_group(&GroupSpec::Lamplighter { lamp_order: order }).unwrap();
        let cfgs = all_configurations(&values);
        let bad = cfgs
            .iter()
            .filter(|c| g.length(&l.from_lamps(c)) != oracle.distance(c))
            .count();
        pass &= bad == 0;
        parts.push(format!("lamplighter({order}): {} supports, {bad} mismatches", cfgs.len()));
    }
    outcome(pass, parts.join("; "))
}

fn empirical_exponents() -> Outcome {
    let z2 = make_group(&GroupSpec::FreeAbelian { rank: 2 }).unwrap();
    let ball = enumerate_ball(&z2, 64).unwrap();
    let origin = z2.identity();
    let pairs: Vec<(f64, f64)> = ball
        .elements()
        .iter()
        .map(|x| {
            let c = coords(x);
            (z2.distance(&origin, x) as f64, c.iter().map(|v| v * v).sum::<f64>().sqrt())
        })
        .collect();
    // d = 1 has only axis neighbours, where ℓ² = ℓ¹
    let ident = empirical_compression(&pairs, 2.0).unwrap();
    // F(x) = sign(x)·√|x| on ℤ, measured from 0
    let sqrt_pairs: Vec<(f64, f64)> = (-4096i64..=4096)
        .map(|x| (x.unsigned_abs() as f64, (x.unsigned_abs() as f64).sqrt()))
        .collect();
    let sq = empirical_compression(&sqrt_pairs, 1.0).unwrap();
    outcome(
        close(ident.exponent, 1.0, 0.05) && close(sq.exponent, 0.5, 0.05),
        format!(
            "identity on Z^2 (R=64): {:.4} (residual {:.2e}); sqrt on Z: {:.4}",
            ident.exponent, ident.residual, sq.exponent
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Duration, fn() -> Outcome); 10] = [
        ("1", "formula golden values", Duration::from_secs(1), formula_golden_values),
        ("2", "Schoenberg realization on Z^2", Duration::from_secs(10), schoenberg_machinery),
        ("3", "threshold far condition on Z", Duration::from_secs(60), corollary_thresholds),
        ("4", "polynomial-growth lemma on Z, Z^2", Duration::from_secs(300), polynomial_lemma),
        ("5", "free-group lemma on F2", Duration::from_secs(300), hyperbolic_lemma),
        ("6", "extension combiner", Duration::from_secs(600), extension_combiner),
        ("7a", "limit bound, standard variant", Duration::from_secs(30), limit_standard),
        ("7b", "limit bound, quasi-geodesic variant", Duration::from_secs(30), limit_quasi),
        ("8", "length oracles", Duration::from_secs(300), oracles),
        ("9", "empirical compression exponents", Duration::from_secs(30), empirical_exponents),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let pass = out.pass && elapsed <= limit;
        println!(
            "criterion {id:>2} {}: {name} [{:.2}s / {}s] {}",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            limit.as_secs(),
            out.detail
        );
        if !pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
