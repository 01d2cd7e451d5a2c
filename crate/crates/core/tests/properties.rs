use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use typewriter_core::channel::{channel_sample, confusable, pairwise_confusion_prob};
use typewriter_core::construction::{structured_weight, union_bound_pe, Spectrum};
use typewriter_core::curves::{c0, capacity, delta_equation, delta_of_r, r_star, CurveName};
use typewriter_core::lp::simplex::{LinearProgram, LpStatus, Relation};
use typewriter_core::lp::{LPSolution, SolutionStatus};
use typewriter_core::scalar::{binomial, entropy_q, krawtchouk_table};
use typewriter_core::word::{hamming_distance, seq_distance, Code, ExtendedWeight, Word};

fn word(n: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..5, n).prop_map(Word)
}

fn word_pair() -> impl Strategy<Value = (Word, Word)> {
    (1usize..8).prop_flat_map(|n| (word(n), word(n)))
}

proptest! {
    #[test]
    fn entropy_bounded_and_symmetric(t in 0.0f64..=1.0, q in 1.5f64..8.0) {
        let h = entropy_q(t, q).unwrap();
        prop_assert!(h <= q.log2() + 1e-12);
        // log(q - 1) < 0 below q = 2, so only then can h go negative
        if q >= 2.0 {
            prop_assert!(h >= -1e-15);
        }
        let b = entropy_q(t, 2.0).unwrap();
        prop_assert!((b - entropy_q(1.0 - t, 2.0).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn krawtchouk_reciprocity(n in 1usize..16, q in 1.5f64..6.0) {
        // (q-1)^u C(n,u) K_l(u) = (q-1)^l C(n,l) K_u(l)
        let t = krawtchouk_table(n, q).unwrap();
        for l in 0..=n {
            prop_assert!((t[l][0] - (q - 1.0).powi(l as i32) * binomial(n, l)).abs() <= 1e-9 * t[l][0]);
            for u in 0..=n {
                let lhs = (q - 1.0).powi(u as i32) * binomial(n, u) * t[l][u];
                let rhs = (q - 1.0).powi(l as i32) * binomial(n, l) * t[u][l];
                let scale = (q - 1.0).powi(u as i32) * binomial(n, u) * t[l][0];
                prop_assert!((lhs - rhs).abs() <= 1e-9 * scale.max(1.0), "l={} u={}: {} vs {}", l, u, lhs, rhs);
            }
        }
    }

    #[test]
    fn word_index_round_trip(n in 1usize..10, seed in any::<u64>()) {
        let index = (seed % 5u64.pow(n as u32)) as usize;
        let w = Word::from_index(index, n);
        prop_assert_eq!(w.index(), index);
        let parsed: Word = w.to_string().parse().unwrap();
        prop_assert_eq!(parsed, w);
    }

    #[test]
    fn distance_symmetric_and_translation_invariant((x, y) in word_pair(), shift in 0u8..5) {
        let d = seq_distance(&x, &y).unwrap();
        prop_assert_eq!(d, seq_distance(&y, &x).unwrap());
        let add = |w: &Word| Word(w.0.iter().map(|&s| (s + shift) % 5).collect());
        prop_assert_eq!(d, seq_distance(&add(&x), &add(&y)).unwrap());
        prop_assert_eq!(d, x.sub(&y).unwrap().weight());
        if let ExtendedWeight::Finite(v) = d {
            // finite coordinates contribute 0 or 1
            prop_assert_eq!(v as usize, hamming_distance(&x, &y).unwrap());
        }
    }

    #[test]
    fn structured_weight_matches_codeword_weight(pair in (1usize..9).prop_flat_map(|n| (word(n), word(n)))) {
        let (u1, nu) = pair;
        let mut symbols = u1.0.clone();
        symbols.extend(u1.0.iter().zip(&nu.0).map(|(&a, &b)| (2 * a + b) % 5));
        prop_assert_eq!(structured_weight(&u1.0, &nu.0).unwrap(), Word(symbols).weight());
    }

    #[test]
    fn channel_output_support(x in (1usize..12).prop_flat_map(word), seed in any::<u64>()) {
        let y = channel_sample(&x, &mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(y.len(), x.len());
        for (a, b) in x.0.iter().zip(&y.0) {
            prop_assert!((b + 5 - a) % 5 <= 1);
        }
    }

    #[test]
    fn confusion_probability_formula((x, y) in word_pair()) {
        prop_assume!(x != y);
        let p = pairwise_confusion_prob(&x, &y).unwrap();
        if confusable(&x, &y).unwrap() {
            let dh = hamming_distance(&x, &y).unwrap() as i32;
            prop_assert_eq!(p, 2f64.powi(-dh));
        } else {
            prop_assert_eq!(p, 0.0);
        }
    }

    #[test]
    fn code_text_round_trip(words in prop::collection::vec(word(4), 1..20)) {
        let code = Code::new(words).unwrap();
        prop_assert_eq!(Code::from_text(&code.to_text()).unwrap(), code);
    }

    #[test]
    fn spectrum_csv_and_union_bound(
        counts in prop::collection::btree_map(0u32..20, 1u64..1000, 0..10),
        inf in 0u64..100,
        extra_w in 1u32..20,
        extra_c in 1u64..10,
    ) {
        let mut s = Spectrum::default();
        for (&w, &c) in &counts {
            s.add(ExtendedWeight::Finite(w), c);
        }
        s.add(ExtendedWeight::Infinite, inf);
        prop_assert_eq!(Spectrum::from_csv(&s.to_csv()).unwrap(), s.clone());
        let mut more = Spectrum::default();
        more.add(ExtendedWeight::Finite(extra_w), extra_c);
        prop_assert!(union_bound_pe(&s.clone().merge(&more)) > union_bound_pe(&s));
    }

    #[test]
    fn curves_non_increasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = (a.min(b), a.max(b));
        let r1 = c0() + lo * (capacity() - c0());
        let r2 = c0() + hi * (capacity() - c0());
        for name in CurveName::ALL {
            prop_assert!(name.eval(r2).unwrap() <= name.eval(r1).unwrap() + 1e-12, "{:?}", name);
        }
    }

    #[test]
    fn delta_inverts_its_equation(t in 0.0f64..=1.0) {
        let r = c0() + t * (r_star() - c0());
        let d = delta_of_r(r).unwrap();
        prop_assert!((0.375 - 1e-9..=0.4).contains(&d));
        prop_assert!((delta_equation(d) - r).abs() <= 1e-10);
    }

    #[test]
    fn lp_solution_text_round_trip(n in 1usize..8, tail in prop::collection::vec(0.0f64..3.0, 8)) {
        let mut lambda = vec![1.0];
        lambda.extend_from_slice(&tail[..n]);
        let sol = LPSolution::from_lambda(n, 1, 5f64.sqrt(), lambda, SolutionStatus::BestFeasible).unwrap();
        prop_assert_eq!(LPSolution::from_text(&sol.to_text()).unwrap(), sol);
    }
}

/// Minimum of `c.x` over `{x >= 0, A x <= b}` in the plane by vertex
/// enumeration; `None` when infeasible.
fn vertex_minimum(c: [f64; 2], rows: &[([f64; 2], f64)]) -> Option<f64> {
    let mut lines: Vec<([f64; 2], f64)> = rows.to_vec();
    lines.push(([-1.0, 0.0], 0.0));
    lines.push(([0.0, -1.0], 0.0));
    let mut best: Option<f64> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let ([a, b], e) = lines[i];
            let ([p, q], f) = lines[j];
            let det = a * q - b * p;
            if det.abs() < 1e-9 {
                continue;
            }
            let x = (e * q - b * f) / det;
            let y = (a * f - e * p) / det;
            if lines.iter().all(|([u, v], r)| u * x + v * y <= r + 1e-7) {
                let val = c[0] * x + c[1] * y;
                best = Some(best.map_or(val, |b: f64| b.min(val)));
            }
        }
    }
    best
}

fn small_coeff() -> impl Strategy<Value = f64> {
    (-6i32..=6).prop_map(f64::from)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplex_matches_vertex_enumeration_in_the_box(
        c in [small_coeff(), small_coeff()],
        rows in prop::collection::vec(([small_coeff(), small_coeff()], (0i32..20).prop_map(f64::from)), 0..5),
    ) {
        // two-phase route: a box keeps the problem bounded
        let mut all = rows.clone();
        all.push(([1.0, 0.0], 10.0));
        all.push(([0.0, 1.0], 10.0));
        let mut lp = LinearProgram::new(c.to_vec());
        for (a, b) in &all {
            lp.constrain(a.to_vec(), Relation::Le, *b);
        }
        let r = lp.solve();
        let expected = vertex_minimum(c, &all).unwrap();
        prop_assert_eq!(r.status, LpStatus::Optimal);
        prop_assert!((r.objective - expected).abs() <= 1e-7 * expected.abs().max(1.0), "{} vs {}", r.objective, expected);
    }

    #[test]
    fn dual_route_matches_vertex_enumeration(
        c in [(0i32..=6).prop_map(f64::from), (0i32..=6).prop_map(f64::from)],
        rows in prop::collection::vec(([small_coeff(), small_coeff()], (-10i32..10).prop_map(f64::from)), 1..5),
    ) {
        // nonnegative costs with <= rows go through the dual simplex
        let mut lp = LinearProgram::new(c.to_vec());
        for (a, b) in &rows {
            lp.constrain(a.to_vec(), Relation::Le, *b);
        }
        let r = lp.solve();
        match vertex_minimum(c, &rows) {
            Some(expected) => {
                prop_assert_eq!(r.status, LpStatus::Optimal);
                prop_assert!((r.objective - expected).abs() <= 1e-7 * expected.abs().max(1.0), "{} vs {}", r.objective, expected);
                for (a, b) in &rows {
                    prop_assert!(a[0] * r.x[0] + a[1] * r.x[1] <= b + 1e-7);
                }
            }
            None => prop_assert_eq!(r.status, LpStatus::Infeasible),
        }
    }
}
