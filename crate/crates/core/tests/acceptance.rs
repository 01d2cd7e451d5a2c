//! Acceptance criteria, one test each. Every test prints a PASS/FAIL line
//! before asserting, so `cargo test --test acceptance -- --nocapture` gives
//! a readable report.

use std::time::{Duration, Instant};

use num_rational::Ratio;

use typewriter_core::channel::{monte_carlo_pe, pairwise_confusion_prob};
use typewriter_core::construction::{
    enumerate_spectrum, global_rate, gv_delta, gv_rate, structured_weight, union_bound_pe,
    GeneratorPlus,
};
use typewriter_core::curves::{
    c0, capacity, curves_to_csv, delta_of_r, e_gv_star, e_lp1, e_rex, e_sl, e_sl_star, r_lp1,
    r_star, rate_grid, sample_curves, CurveName,
};
use typewriter_core::expurgated::{
    alpha, circulant_eigenvalues, q_form_exact, rho_bar, shannon_code2, ExactDistribution,
};
use typewriter_core::lp::lovasz::qprime;
use typewriter_core::lp::{
    brute_force_max_code, composite_bound, lovasz_bound, lp_solve_lambda, mrrw_search,
    sphere_transform, SphereKind, SphereSpec,
};
use typewriter_core::scalar::entropy_q;
use typewriter_core::word::{seq_distance, Code, ExtendedWeight, Word};

fn report(criterion: &str, ok: bool, detail: String) {
    println!("{} criterion {criterion}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {criterion}: {detail}");
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

#[test]
fn criterion_01_rho_bar() {
    let ((rb, min_eig), took) = timed(|| {
        let rb = (2f64).ln() / (2.0 * (std::f64::consts::PI / 5.0).cos()).ln();
        let min = circulant_eigenvalues(rb).iter().cloned().fold(f64::MAX, f64::min);
        (rb, min)
    });
    let ok = (rb - 1.4404).abs() <= 5e-4
        && (rb - rho_bar()).abs() < 1e-12
        && min_eig.abs() <= 1e-9
        && took < Duration::from_millis(1);
    report("1", ok, format!("rho_bar = {rb:.6}, min eigenvalue = {min_eig:.2e}, {took:?}"));
}

#[test]
fn criterion_02_endpoint_values() {
    let r = c0();
    let lp1 = e_lp1(r).unwrap();
    let sl = e_sl(r).unwrap();
    let sl_star = e_sl_star(r).unwrap();
    let ok = (lp1 - (1.0 - 1.0 / 5f64.sqrt())).abs() <= 1e-9
        && (sl - 1.0).abs() <= 1e-9
        && (sl_star - 0.552786).abs() <= 1e-6;
    report("2", ok, format!("e_lp1 = {lp1:.12}, e_sl = {sl:.12}, e_sl_star = {sl_star:.9}"));
}

#[test]
fn criterion_03_branch_continuity() {
    let log5 = 5f64.log2();
    let oracle = log5 - 0.5 * entropy_q(0.25, 2.0).unwrap() - 0.75;
    let rs = r_star();
    let gap = (e_gv_star(rs).unwrap() - e_rex(rs).unwrap()).abs();
    let delta = delta_of_r(rs).unwrap();
    let ok = (rs - oracle).abs() <= 1e-9 && gap <= 1e-6 && (delta - 0.375).abs() <= 1e-6;
    report("3", ok, format!("R* = {rs:.9}, |gv* - rex| = {gap:.2e}, delta(R*) = {delta:.9}"));
}

#[test]
fn criterion_04_counterexample_margin() {
    let margin = |r: f64| e_gv_star(r).unwrap() - e_rex(r).unwrap();
    let interior: Vec<f64> = rate_grid(c0(), r_star(), 12)[1..11].to_vec();
    let positive = margin(c0()) > 0.0 && interior.iter().all(|&r| margin(r) > 0.0);
    let at_c0 = margin(c0());
    let ok = positive && (at_c0 - 4.0e-3).abs() <= 1e-3;
    report(
        "4",
        ok,
        format!(
            "margin(C0) = {at_c0:.7} (target 4.0e-3 +- 1e-3), delta(C0) = {:.7}, positive on 10 interior samples: {positive}",
            delta_of_r(c0()).unwrap()
        ),
    );
}

#[test]
fn criterion_05_shannon_code_quadratic_form() {
    let (poly, took) = timed(|| {
        let code = shannon_code2().unwrap();
        q_form_exact(&ExactDistribution::on_code(&code).unwrap())
    });
    let exact = poly.as_constant() == Some(Ratio::new(1, 5));
    let mut ok = exact && took < Duration::from_secs(1);
    for rho in [1.0, 1.5, 3.0] {
        let q2 = poly.eval(alpha(rho));
        let exponent = -(rho / 2.0) * q2.log2();
        ok &= (q2 - 0.2).abs() < 1e-15 && (exponent - rho * 5f64.log2() / 2.0).abs() < 1e-12;
    }
    let shown = poly.as_constant().map_or_else(|| "non-constant".to_string(), |r| r.to_string());
    report("5", ok, format!("Q^2 = {shown} for rho in {{1, 1.5, 3}}, {took:?}"));
}

#[test]
fn criterion_06_krawtchouk_identity() {
    let (worst, took) = timed(|| {
        let mut worst = 0.0f64;
        for n in 1..=6usize {
            for ell in 0..=n {
                let spec = SphereSpec::new(n, 5, SphereKind::Frequency, ell).unwrap();
                for u in 0..=n {
                    let x: Vec<usize> = (0..n).map(|i| usize::from(i < u)).collect();
                    let t = sphere_transform(&spec, &x).unwrap();
                    worst = worst.max((t.direct.re - t.closed_form).abs()).max(t.direct.im.abs());
                }
            }
        }
        worst
    });
    let ok = worst <= 1e-9 && took < Duration::from_secs(10);
    report("6", ok, format!("max |direct - closed form| = {worst:.2e} over n <= 6, {took:?}"));
}

#[test]
fn criterion_07_lovasz_chain() {
    let (vals, took) = timed(|| {
        (
            lovasz_bound(1, 5).unwrap(),
            lovasz_bound(2, 5).unwrap(),
            brute_force_max_code(2, ExtendedWeight::Infinite).unwrap().size,
            brute_force_max_code(1, ExtendedWeight::Infinite).unwrap().size,
        )
    });
    let ok = (vals.0 - 5f64.sqrt()).abs() <= 1e-9
        && (vals.1 - 5.0).abs() <= 1e-9
        && vals.2 == 5
        && vals.3 == 2
        && took < Duration::from_secs(1);
    report("7", ok, format!("theta(1) = {:.12}, theta(2) = {:.12}, A(2,inf) = {}, A(1,inf) = {}, {took:?}", vals.0, vals.1, vals.2, vals.3));
}

#[test]
fn criterion_08_lp_soundness_sweep() {
    let (rows, took) = timed(|| {
        let mut rows = Vec::new();
        for n in 1..=3usize {
            let mut ds: Vec<ExtendedWeight> = (1..=2 * n as u32).map(ExtendedWeight::Finite).collect();
            ds.push(ExtendedWeight::Infinite);
            for d in ds {
                let bound = composite_bound(n, d).unwrap();
                let size = brute_force_max_code(n, d).unwrap().size;
                rows.push((n, d, bound, size));
            }
        }
        rows
    });
    let bad: Vec<_> = rows.iter().filter(|r| r.2 < r.3 as f64 - 1e-9).collect();
    for (n, d, b, s) in &rows {
        println!("    n = {n}, d = {d}: bound {b:.4} >= max code {s}");
    }
    let ok = bad.is_empty() && took < Duration::from_secs(60);
    report("8", ok, format!("{} cases, {} violations, {took:?}", rows.len(), bad.len()));
}

#[test]
fn criterion_09_case_analysis() {
    let mut mismatches = 0usize;
    let mut total = 0usize;
    for n in 1..=3usize {
        let size = 5usize.pow(n as u32);
        let zero = Word::zeros(2 * n);
        for i in 0..size {
            let u1 = Word::from_index(i, n);
            for j in 0..size {
                let nu = Word::from_index(j, n);
                let mut symbols = u1.0.clone();
                symbols.extend(u1.0.iter().zip(&nu.0).map(|(&a, &b)| (2 * a + b) % 5));
                let direct = seq_distance(&Word(symbols), &zero).unwrap();
                if structured_weight(&u1.0, &nu.0).unwrap() != direct {
                    mismatches += 1;
                }
                total += 1;
            }
        }
    }
    report("9", mismatches == 0, format!("{total} inputs, {mismatches} mismatches"));
}

#[test]
fn criterion_10_union_bound_vs_simulation() {
    let start = Instant::now();
    let gp = GeneratorPlus::with_block(2, 1, vec![1, 2]).unwrap();
    let spectrum = enumerate_spectrum(&gp).unwrap();
    let bound = union_bound_pe(&spectrum);
    let code = Code::new(gp.codewords().unwrap()).unwrap();
    let sim = monte_carlo_pe(&code, 1_000_000, 2024).unwrap();
    let mut ok = sim.estimate <= bound + 3.0 * sim.ci95_halfwidth;
    println!(
        "    P_e estimate {:.6} +- {:.6}, union bound {bound:.6}",
        sim.estimate, sim.ci95_halfwidth
    );

    // two-codeword sub-codes at several Hamming distances
    let words = code.words();
    let mut checked = std::collections::BTreeSet::new();
    for (i, x) in words.iter().enumerate().skip(1) {
        let zero = &words[0];
        let p = pairwise_confusion_prob(zero, x).unwrap();
        let dh = x.hamming_weight();
        if p == 0.0 || !checked.insert(dh) {
            continue;
        }
        let pair = Code::new(vec![zero.clone(), x.clone()]).unwrap();
        let r = monte_carlo_pe(&pair, 1_000_000, 7 + i as u64).unwrap();
        let expected = (-(dh as f64) - 1.0).exp2();
        let sigma = (expected * (1.0 - expected) / r.trials as f64).sqrt();
        let within = (r.estimate - expected).abs() <= 3.0 * sigma;
        println!("    pair 0/{x}: d_H = {dh}, rate {:.6} vs {expected:.6} ({within})", r.estimate);
        ok &= within;
    }
    let took = start.elapsed();
    ok &= !checked.is_empty() && took < Duration::from_secs(60);
    report("10", ok, format!("distances checked {checked:?}, {took:?}"));
}

#[test]
fn criterion_11_figure1() {
    let curves = sample_curves(c0(), capacity(), 161).unwrap();
    let csv = curves_to_csv(&curves);
    let again = curves_to_csv(&sample_curves(c0(), capacity(), 161).unwrap());
    let get = |name: CurveName| -> Vec<f64> {
        curves.iter().find(|c| c.name == name).unwrap().points.iter().map(|p| p.1).collect()
    };
    let (rex, sl, sl_star, gv, lp1) = (
        get(CurveName::Rex),
        get(CurveName::Sl),
        get(CurveName::SlStar),
        get(CurveName::GvStar),
        get(CurveName::Lp1),
    );
    let monotone = [&rex, &sl, &sl_star, &gv, &lp1]
        .iter()
        .all(|v| v.windows(2).all(|w| w[1] <= w[0] + 1e-12));
    let tol = 1e-12;
    let ordered = (0..161).all(|i| {
        rex[i] <= gv[i] + tol && sl_star[i] <= sl[i] + tol && gv[i] <= sl_star[i] + tol
    });
    let identical = csv == again;
    let ok = curves[0].points.len() == 161 && monotone && ordered && identical;
    report(
        "11",
        ok,
        format!("161 rows, monotone: {monotone}, ordered: {ordered}, byte-identical: {identical}"),
    );
}

#[test]
fn criterion_12_gv_anchor() {
    let d0 = gv_delta(0.0).unwrap();
    let r = gv_rate(0.75).unwrap();
    let back = gv_delta(r).unwrap();
    let rate = global_rate(r);
    let ok = (d0 - 0.8).abs() <= 1e-6 && (back - 0.75).abs() <= 1e-9 && (rate - r_star()).abs() <= 1e-6;
    report("12", ok, format!("gv_delta(0) = {d0:.9}, r(3/4) = {r:.9}, R = {rate:.9} vs R* = {:.9}", r_star()));
}

#[test]
fn lp_trend_towards_asymptotic_bound() {
    let q = qprime(5);
    let mut ok = true;
    for delta in [0.2, 0.3, 0.4] {
        let mut lp_gaps = Vec::new();
        let mut cert_gaps = Vec::new();
        for n in [10usize, 20, 40] {
            let d = (delta * n as f64).round() as usize;
            let asym = r_lp1(q, d as f64 / n as f64).unwrap();
            let lp = lp_solve_lambda(n, d, q).unwrap().objective;
            let cert = mrrw_search(n, d, q).unwrap().objective;
            lp_gaps.push(lp.log2() / n as f64 - asym);
            cert_gaps.push(cert.log2() / n as f64 - asym);
            ok &= cert >= lp * (1.0 - 1e-9);
        }
        let decreasing = |g: &[f64]| g.windows(2).all(|w| w[1] < w[0]);
        ok &= decreasing(&lp_gaps) && decreasing(&cert_gaps) && lp_gaps.iter().all(|&g| g > 0.0);
        println!("    delta = {delta}: LP gaps {lp_gaps:.4?}, certificate gaps {cert_gaps:.4?}");
    }
    report("trend", ok, "gap to r_lp1 decreases over n in {10, 20, 40}".into());
}
