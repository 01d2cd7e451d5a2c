//! Property suites run by `typewriter verify`.
//!
//! Each suite groups the invariants of one module. Checks return a short
//! detail string on success and a diagnostic on failure; suites run their
//! checks in parallel and report in registry order.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{
    channel_sample, monte_carlo_pe, pairwise_confusion_prob, simulate_confusion, trial_rng,
    TypewriterChannel,
};
use crate::construction::{
    enumerate_spectrum, structured_weight, union_bound_from_hamming, union_bound_pe,
    hamming_spectrum, sample_random_g, GeneratorPlus, Spectrum,
};
use crate::curves::{
    c0, capacity, delta_equation, delta_of_r, e_gv_star, e_lp1, e_rex, e_sl, e_sl_star, r_star,
    rate_grid, CurveName,
};
use crate::error::{Error, Result};
use crate::expurgated::{
    circulant_eigenvalues, ex_exponent_inf, q1_uniform, q_form, q_form_exact, rho_bar,
    shannon_code2, ExactDistribution, InputDistribution,
};
use crate::lp::fourier::GroupFunction;
use crate::lp::lovasz::{lovasz_assignment, qprime, sphere_transform, SphereKind, SphereSpec};
use crate::lp::{brute_force_max_code, certificate_function, composite_bound, lp_solve_lambda};
use crate::scalar::{binomial, bisect, entropy_q, krawtchouk, krawtchouk_table, KrawtchoukParams};
use crate::word::{Code, ExtendedWeight, Word};

type Outcome = std::result::Result<String, String>;

pub struct Check {
    pub name: &'static str,
    run: fn() -> Outcome,
}

pub struct Suite {
    pub name: &'static str,
    pub checks: Vec<Check>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub suite: &'static str,
    pub check: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl std::fmt::Display for CheckResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.passed { "ok" } else { "FAILED" };
        write!(f, "{}::{} ... {tag} ({})", self.suite, self.check, self.detail)
    }
}

macro_rules! checks {
    ($($f:ident),* $(,)?) => {
        vec![$(Check { name: stringify!($f), run: $f }),*]
    };
}

/// Every suite, in report order.
pub fn registry() -> Vec<Suite> {
    vec![
        Suite {
            name: "scalar",
            checks: checks![
                entropy_concave_with_maximum,
                krawtchouk_orthogonality,
                krawtchouk_recurrence,
                bisect_deterministic,
            ],
        },
        Suite {
            name: "curves",
            checks: checks![
                curves_continuous_non_increasing,
                gv_star_dominates_rex,
                sl_star_is_scaled_sl,
                delta_round_trip,
            ],
        },
        Suite {
            name: "expurgated",
            checks: checks![
                kernel_psd_below_rho_bar,
                exponent_continuous_at_rho_bar,
                jelinek_minimum_is_iid_uniform,
                shannon_code_upper_chain,
            ],
        },
        Suite {
            name: "construction",
            checks: checks![
                structured_weight_exhaustive,
                structured_weight_sampled,
                nu_zero_words_have_trivial_weight,
                binomial_extension_counts,
                union_bound_monotone,
            ],
        },
        Suite {
            name: "lp",
            checks: checks![
                plancherel,
                g_hat_vanishes_on_frequency_spheres,
                sphere_transform_identity,
                composite_transform_at_zero,
                composite_bound_dominates_max_code,
                lp_single_letter_value,
            ],
        },
        Suite {
            name: "channel",
            checks: checks![
                transition_rows,
                output_support_and_frequencies,
                confusion_frequencies,
                nested_codes_monotone,
            ],
        },
    ]
}

pub fn suite_names() -> Vec<&'static str> {
    registry().iter().map(|s| s.name).collect()
}

/// Runs one suite by name, or all of them.
pub fn run(suite: Option<&str>) -> Result<Vec<CheckResult>> {
    let suites: Vec<Suite> = match suite {
        None => registry(),
        Some(name) => {
            let found: Vec<Suite> = registry().into_iter().filter(|s| s.name == name).collect();
            if found.is_empty() {
                return Err(Error::Precondition(format!(
                    "unknown suite {name:?}; known: {}",
                    suite_names().join(", ")
                )));
            }
            found
        }
    };
    let jobs: Vec<(&'static str, &Check)> = suites
        .iter()
        .flat_map(|s| s.checks.iter().map(move |c| (s.name, c)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|(suite, c)| {
            let (passed, detail) = match (c.run)() {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult {
                suite,
                check: c.name,
                passed,
                detail,
            }
        })
        .collect())
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s(e: Error) -> String {
    e.to_string()
}

// ---- scalar ----

fn entropy_concave_with_maximum() -> Outcome {
    let m = 1000;
    for q in [2.0, 5f64.sqrt(), 3.0, 5.0] {
        let h: Vec<f64> = (0..=m)
            .map(|i| entropy_q(i as f64 / m as f64, q))
            .collect::<Result<_>>()
            .map_err(e2s)?;
        for (i, w) in h.windows(3).enumerate() {
            ensure(w[0] + w[2] - 2.0 * w[1] <= 1e-9, || format!("q={q}: convexity at grid {}", i + 1))?;
        }
        let peak = entropy_q((q - 1.0) / q, q).map_err(e2s)?;
        ensure((peak - q.log2()).abs() <= 1e-9, || format!("q={q}: peak {peak}"))?;
        let top = h.iter().cloned().fold(f64::MIN, f64::max);
        ensure(top <= peak + 1e-9, || format!("q={q}: grid value {top} above peak {peak}"))?;
    }
    Ok("4 alphabets, 1001-point grid".into())
}

fn krawtchouk_orthogonality() -> Outcome {
    let mut worst = 0.0f64;
    for q in [2.0, 3.0, 5f64.sqrt(), 2.7] {
        for n in 1..=8usize {
            let t = krawtchouk_table(n, q).map_err(e2s)?;
            for l in 0..=n {
                for m in 0..=n {
                    let s: f64 = (0..=n)
                        .map(|u| (q - 1.0).powi(u as i32) * binomial(n, u) * t[l][u] * t[m][u])
                        .sum();
                    let norm = q.powi(n as i32) * (q - 1.0).powi(l as i32) * binomial(n, l);
                    let expected = if l == m { norm } else { 0.0 };
                    let scale = norm.max(q.powi(n as i32) * (q - 1.0).powi(m as i32) * binomial(n, m));
                    let err = (s - expected).abs() / scale;
                    worst = worst.max(err);
                    ensure(err <= 1e-6, || format!("q'={q} n={n} l={l} m={m}: {s} vs {expected}"))?;
                }
            }
        }
    }
    Ok(format!("max relative error {worst:.2e}"))
}

fn krawtchouk_recurrence() -> Outcome {
    for q in [2.0, 3.0, 5f64.sqrt(), 2.7] {
        for n in 1..=12usize {
            for u in 0..=n {
                let uf = u as f64;
                let (mut prev, mut cur) = (1.0, (q - 1.0) * (n as f64 - uf) - uf);
                for l in 1..n {
                    let lf = l as f64;
                    let next = (((q - 1.0) * (n as f64 - lf) + lf - q * uf) * cur
                        - (q - 1.0) * (n as f64 - lf + 1.0) * prev)
                        / (lf + 1.0);
                    prev = cur;
                    cur = next;
                    let direct = krawtchouk(KrawtchoukParams::new(n, q, l + 1, uf).map_err(e2s)?)
                        .map_err(e2s)?;
                    ensure((direct - cur).abs() <= 1e-9 * direct.abs().max(1.0), || {
                        format!("q'={q} n={n} l={} u={u}: {direct} vs {cur}", l + 1)
                    })?;
                }
            }
        }
    }
    Ok("n <= 12".into())
}

fn bisect_deterministic() -> Outcome {
    let f = |x: f64| x.powi(3) - 2.0 * x - 5.0;
    let a = bisect(f, 2.0, 3.0, 1e-12).map_err(e2s)?;
    for _ in 0..10 {
        let b = bisect(f, 2.0, 3.0, 1e-12).map_err(e2s)?;
        ensure(a.to_bits() == b.to_bits(), || format!("{a} vs {b}"))?;
    }
    Ok(format!("root {a}"))
}

// ---- curves ----

const CURVES: [CurveName; 5] = [
    CurveName::Rex,
    CurveName::Sl,
    CurveName::SlStar,
    CurveName::GvStar,
    CurveName::Lp1,
];

fn curves_continuous_non_increasing() -> Outcome {
    let grid = rate_grid(c0(), capacity(), 1000);
    for curve in CURVES {
        let v: Vec<f64> = grid.iter().map(|&r| curve.eval(r)).collect::<Result<_>>().map_err(e2s)?;
        for (i, w) in v.windows(2).enumerate() {
            ensure(w[1] <= w[0] + 1e-9, || {
                format!("{}: increases at R = {}", curve.column(), grid[i + 1])
            })?;
            // one grid step is ~1e-3 wide; a jump this large would be a branch break
            ensure(w[0] - w[1] <= 0.02, || format!("{}: jump at R = {}", curve.column(), grid[i + 1]))?;
        }
    }
    Ok("5 curves on 1000 points".into())
}

fn gv_star_dominates_rex() -> Outcome {
    let grid = rate_grid(c0(), r_star(), 1000);
    for &r in &grid {
        let gap = e_gv_star(r).map_err(e2s)? - e_rex(r).map_err(e2s)?;
        ensure(gap >= -1e-9, || format!("gap {gap} at R = {r}"))?;
    }
    let margin = e_gv_star(c0()).map_err(e2s)? - e_rex(c0()).map_err(e2s)?;
    ensure(margin > 0.0, || format!("margin {margin} at C0"))?;
    Ok(format!("margin at C0 = {margin:.7}"))
}

fn sl_star_is_scaled_sl() -> Outcome {
    let factor = e_lp1(c0()).map_err(e2s)?;
    for &r in &rate_grid(c0(), capacity(), 200) {
        let (a, b) = (e_sl_star(r).map_err(e2s)?, e_sl(r).map_err(e2s)? * factor);
        ensure((a - b).abs() <= 1e-12, || format!("R = {r}: {a} vs {b}"))?;
    }
    Ok(format!("factor {factor:.9}"))
}

fn delta_round_trip() -> Outcome {
    let mut worst = 0.0f64;
    for &r in &rate_grid(c0(), r_star(), 200) {
        let d = delta_of_r(r).map_err(e2s)?;
        let err = (delta_equation(d) - r).abs();
        worst = worst.max(err);
        ensure(err <= 1e-10, || format!("R = {r}: residual {err}"))?;
    }
    Ok(format!("max residual {worst:.1e}"))
}

// ---- expurgated ----

fn kernel_psd_below_rho_bar() -> Outcome {
    let top = rho_bar();
    for i in 0..=500 {
        let rho = 1.0 + (top - 1.0) * i as f64 / 500.0;
        let min = circulant_eigenvalues(rho).iter().cloned().fold(f64::MAX, f64::min);
        ensure(min >= -1e-12, || format!("rho = {rho}: eigenvalue {min}"))?;
    }
    Ok(format!("rho in [1, {top:.6}]"))
}

fn exponent_continuous_at_rho_bar() -> Outcome {
    let r = rho_bar();
    let first = -r * q1_uniform(r).log2();
    let second = r * 5f64.log2() / 2.0;
    ensure((first - second).abs() <= 1e-9, || format!("{first} vs {second}"))?;
    let (lo, hi) = (ex_exponent_inf(r * (1.0 - 1e-12)), ex_exponent_inf(r * (1.0 + 1e-12)));
    ensure((lo - hi).abs() <= 1e-9, || format!("jump {lo} -> {hi}"))?;
    Ok(format!("E_x(rho_bar) = {second:.9}"))
}

fn random_simplex(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    // uniform on the simplex via normalised exponentials
    let raw: Vec<f64> = (0..len).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

fn jelinek_minimum_is_iid_uniform() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5e1);
    for rho in [1.0, 1.2, rho_bar()] {
        let target = q1_uniform(rho).powi(2);
        let uniform = q_form(rho, &InputDistribution::uniform(2).map_err(e2s)?).map_err(e2s)?;
        ensure((uniform - target).abs() <= 1e-9, || format!("rho = {rho}: uniform {uniform} vs {target}"))?;
        let mut min_product = f64::MAX;
        let mut min_general = f64::MAX;
        for _ in 0..2000 {
            let p = InputDistribution::new(1, random_simplex(5, &mut rng)).map_err(e2s)?;
            let q1 = q_form(rho, &p).map_err(e2s)?;
            let q2 = q_form(rho, &InputDistribution::product(&p).map_err(e2s)?).map_err(e2s)?;
            ensure((q2 - q1 * q1).abs() <= 1e-9, || format!("rho = {rho}: Q2 {q2} vs Q1^2 {}", q1 * q1))?;
            min_product = min_product.min(q2);
            let general = InputDistribution::new(2, random_simplex(25, &mut rng)).map_err(e2s)?;
            min_general = min_general.min(q_form(rho, &general).map_err(e2s)?);
        }
        ensure(min_product >= target - 1e-6, || format!("rho = {rho}: product minimum {min_product} below {target}"))?;
        ensure(min_general >= target - 1e-6, || format!("rho = {rho}: general minimum {min_general} below {target}"))?;
    }
    Ok("2000 product and 2000 general samples per rho".into())
}

fn shannon_code_upper_chain() -> Outcome {
    let code = shannon_code2().map_err(e2s)?;
    let poly = q_form_exact(&ExactDistribution::on_code(&code).map_err(e2s)?);
    let value = poly.as_constant().ok_or("Q^2 on the Shannon code depends on rho")?;
    ensure(value == num_rational::Ratio::new(1, 5), || format!("Q^2 = {value}"))?;
    for rho in [1.5, 2.0, 3.0] {
        let exponent = -(rho / 2.0) * (1.0f64 / 5.0).log2();
        ensure((exponent - rho * 5f64.log2() / 2.0).abs() <= 1e-12, || format!("rho = {rho}: {exponent}"))?;
    }
    Ok("Q^2 = 1/5 exactly".into())
}

// ---- construction ----

fn direct_weight(u1: &[u8], nu: &[u8]) -> ExtendedWeight {
    let second: Vec<u8> = u1.iter().zip(nu).map(|(&a, &b)| (2 * a + b) % 5).collect();
    let mut symbols = u1.to_vec();
    symbols.extend(second);
    Word(symbols).weight()
}

fn digits(index: usize, n: usize) -> Vec<u8> {
    Word::from_index(index, n).0
}

fn structured_weight_exhaustive() -> Outcome {
    let mut total = 0usize;
    for n in 1..=3usize {
        let size = 5usize.pow(n as u32);
        for i in 0..size {
            let u1 = digits(i, n);
            for j in 0..size {
                let nu = digits(j, n);
                let s = structured_weight(&u1, &nu).map_err(e2s)?;
                ensure(s == direct_weight(&u1, &nu), || format!("u1 = {u1:?}, nu = {nu:?}"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} inputs, no mismatches"))
}

fn structured_weight_sampled() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0de);
    for k in 0..100_000usize {
        let n = 4 + k % 3;
        let u1: Vec<u8> = (0..n).map(|_| rng.gen_range(0..5)).collect();
        let nu: Vec<u8> = (0..n).map(|_| rng.gen_range(0..5)).collect();
        let s = structured_weight(&u1, &nu).map_err(e2s)?;
        ensure(s == direct_weight(&u1, &nu), || format!("u1 = {u1:?}, nu = {nu:?}"))?;
    }
    Ok("100000 samples at n in 4..=6".into())
}

fn nu_zero_words_have_trivial_weight() -> Outcome {
    for n in 1..=3usize {
        let zero = vec![0u8; n];
        for i in 0..5usize.pow(n as u32) {
            let w = structured_weight(&digits(i, n), &zero).map_err(e2s)?;
            ensure(matches!(w, ExtendedWeight::Finite(0) | ExtendedWeight::Infinite), || {
                format!("n = {n}, u1 = {:?}: weight {w}", digits(i, n))
            })?;
        }
    }
    Ok("n <= 3".into())
}

fn binomial_extension_counts() -> Outcome {
    for n in 1..=3usize {
        let size = 5usize.pow(n as u32);
        for j in 0..size {
            let nu = digits(j, n);
            let d = nu.iter().filter(|&&v| v != 0).count();
            let mut counts = vec![0u64; n + 1];
            for i in 0..size {
                match structured_weight(&digits(i, n), &nu).map_err(e2s)? {
                    ExtendedWeight::Finite(w) => {
                        let t = (w as usize).checked_sub(d).filter(|&t| t <= d).ok_or_else(|| {
                            format!("nu = {nu:?}: finite weight {w} outside [d, 2d]")
                        })?;
                        counts[t] += 1;
                    }
                    ExtendedWeight::Infinite => {}
                }
            }
            for (t, &c) in counts.iter().enumerate().take(d + 1) {
                ensure(c as f64 == binomial(d, t), || format!("nu = {nu:?}, t = {t}: {c}"))?;
            }
        }
    }
    Ok("all nu at n <= 3".into())
}

fn union_bound_monotone() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for seed in 0..20u64 {
        let n = 2 + (seed % 2) as usize;
        let g = sample_random_g(n, 1, seed).map_err(e2s)?;
        let gp = GeneratorPlus::new(g.clone());
        let spectrum = enumerate_spectrum(&gp).map_err(e2s)?;
        let from_hamming = union_bound_from_hamming(&hamming_spectrum(&g).map_err(e2s)?);
        let direct = union_bound_pe(&spectrum);
        ensure((direct - from_hamming).abs() <= 1e-12 * direct.max(1.0), || {
            format!("seed {seed}: {direct} vs {from_hamming}")
        })?;
        let mut extra = Spectrum::default();
        extra.add(ExtendedWeight::Finite(rng.gen_range(1..8)), rng.gen_range(1..4));
        extra.add(ExtendedWeight::Infinite, 1);
        let grown = spectrum.clone().merge(&extra);
        ensure(union_bound_pe(&grown) >= direct, || format!("seed {seed}: bound decreased"))?;
    }
    Ok("20 random generators".into())
}

// ---- lp ----

fn random_function(n: usize, rng: &mut ChaCha8Rng) -> std::result::Result<GroupFunction, String> {
    let size = 5usize.pow(n as u32);
    let values = (0..size)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    GroupFunction::from_values(n, 5, values).map_err(e2s)
}

fn plancherel() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        for _ in 0..5 {
            let f = random_function(n, &mut rng)?;
            let g = random_function(n, &mut rng)?;
            let lhs = f.inner(&g).map_err(e2s)?;
            let rhs = f.dft().inner(&g.dft()).map_err(e2s)? / f.len() as f64;
            ensure((lhs - rhs).norm() <= 1e-9 * lhs.norm().max(1.0), || format!("n = {n}: {lhs} vs {rhs}"))?;
        }
    }
    Ok("15 random pairs".into())
}

fn g_hat_vanishes_on_frequency_spheres() -> Outcome {
    for n in 1..=3 {
        let g_hat = lovasz_assignment(n, 5).map_err(e2s)?.dft();
        for ell in 1..=n {
            let sphere = SphereSpec::new(n, 5, SphereKind::Frequency, ell).map_err(e2s)?;
            for w in sphere.members() {
                let v = g_hat.at(g_hat.index_of(&w));
                ensure(v.norm() <= 1e-9, || format!("n = {n}, omega = {w:?}: {v}"))?;
            }
        }
    }
    Ok("n <= 3".into())
}

fn sphere_transform_identity() -> Outcome {
    let mut worst = 0.0f64;
    for n in 1..=6usize {
        for ell in 0..=n {
            let spec = SphereSpec::new(n, 5, SphereKind::Frequency, ell).map_err(e2s)?;
            for u in 0..=n {
                let x: Vec<usize> = (0..n).map(|i| usize::from(i < u)).collect();
                let t = sphere_transform(&spec, &x).map_err(e2s)?;
                let err = (t.direct - Complex64::new(t.closed_form, 0.0)).norm();
                worst = worst.max(err);
                ensure(err <= 1e-9, || format!("n = {n}, l = {ell}, u = {u}: {} vs {}", t.direct, t.closed_form))?;
            }
        }
    }
    Ok(format!("n <= 6, max error {worst:.1e}"))
}

fn composite_transform_at_zero() -> Outcome {
    for n in 1..=3 {
        for d in 1..=n {
            let sol = lp_solve_lambda(n, d, qprime(5)).map_err(e2s)?;
            let f = certificate_function(&sol, 5).map_err(e2s)?;
            let g_hat0 = lovasz_assignment(n, 5).map_err(e2s)?.dft().at(0).re;
            let size = f.len() as f64;
            let expected = g_hat0 * size * sol.lambda[0] / size;
            let got = f.dft().at(0).re;
            ensure((got - expected).abs() <= 1e-9 * g_hat0, || format!("n = {n}, d = {d}: {got} vs {expected}"))?;
        }
    }
    Ok("n <= 3".into())
}

fn composite_bound_dominates_max_code() -> Outcome {
    let mut cases = 0;
    for n in 1..=3usize {
        let mut ds: Vec<ExtendedWeight> = (1..=2 * n as u32).map(ExtendedWeight::Finite).collect();
        ds.push(ExtendedWeight::Infinite);
        for d in ds {
            let bound = composite_bound(n, d).map_err(e2s)?;
            let size = brute_force_max_code(n, d).map_err(e2s)?.size;
            ensure(bound >= size as f64 - 1e-9, || format!("n = {n}, d = {d}: {bound} < {size}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} cases"))
}

fn lp_single_letter_value() -> Outcome {
    let v = lp_solve_lambda(1, 1, 5f64.sqrt()).map_err(e2s)?.objective;
    ensure((v - 5f64.sqrt()).abs() <= 1e-9, || format!("{v}"))?;
    Ok(format!("{v:.12}"))
}

// ---- channel ----

/// `|observed - expected| <= k sigma` for a binomial count.
fn within_sigma(hits: u64, trials: u64, p: f64, k: f64) -> bool {
    let sigma = (trials as f64 * p * (1.0 - p)).sqrt();
    (hits as f64 - trials as f64 * p).abs() <= k * sigma.max(1e-12)
}

fn transition_rows() -> Outcome {
    let w = TypewriterChannel::default().transition_matrix();
    for (x, row) in w.iter().enumerate() {
        let sum: f64 = row.iter().sum();
        ensure((sum - 1.0).abs() <= 1e-15, || format!("row {x} sums to {sum}"))?;
        ensure(row.iter().filter(|&&p| p > 0.0).count() == 2, || format!("row {x}: {row:?}"))?;
    }
    Ok("5 rows".into())
}

fn output_support_and_frequencies() -> Outcome {
    let trials = 1_000_000u64;
    for x in 0..5u8 {
        let input = Word(vec![x]);
        let stays: u64 = (0..trials)
            .into_par_iter()
            .map(|t| {
                let y = channel_sample(&input, &mut trial_rng(x as u64, t)).0[0];
                match (y + 5 - x) % 5 {
                    0 => Ok(1),
                    1 => Ok(0),
                    _ => Err(format!("output {y} from input {x}")),
                }
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))?;
        ensure(within_sigma(stays, trials, 0.5, 5.0), || format!("input {x}: {stays} of {trials} unchanged"))?;
    }
    Ok("10^6 draws per symbol".into())
}

fn confusion_frequencies() -> Outcome {
    let pairs = [("000", "100"), ("000", "110"), ("000", "144"), ("012", "123"), ("21", "10")];
    for (i, (a, b)) in pairs.iter().enumerate() {
        let (x, y): (Word, Word) = (a.parse().map_err(e2s)?, b.parse().map_err(e2s)?);
        let p = pairwise_confusion_prob(&x, &y).map_err(e2s)?;
        let r = simulate_confusion(&x, &y, 1_000_000, 100 + i as u64).map_err(e2s)?;
        ensure(within_sigma(r.errors, r.trials, p, 5.0), || {
            format!("{a} vs {b}: {} against {p}", r.estimate)
        })?;
    }
    Ok(format!("{} pairs, 10^6 trials each", pairs.len()))
}

fn nested_codes_monotone() -> Outcome {
    let words = ["00", "11", "22", "01", "13", "40"];
    let mut prev: Option<(f64, f64)> = None;
    for k in 2..=words.len() {
        let code = Code::new(words[..k].iter().map(|w| w.parse().unwrap()).collect()).map_err(e2s)?;
        let r = monte_carlo_pe(&code, 100_000, 7).map_err(e2s)?;
        // summed per-message error; the average alone may dip when a word
        // confusable with nothing joins
        let (mass, ci) = (k as f64 * r.estimate, k as f64 * r.ci95_halfwidth);
        if let Some((m, c)) = prev {
            ensure(mass >= m - 3.0 * (c + ci), || format!("{k} words: error mass {mass} after {m}"))?;
        }
        prev = Some((mass, ci));
    }
    Ok("5 nested pairs, 10^5 trials".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique() {
        let mut names: Vec<String> = registry()
            .iter()
            .flat_map(|s| s.checks.iter().map(move |c| format!("{}::{}", s.name, c.name)))
            .collect();
        let total = names.len();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), total);
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(run(Some("nope")), Err(Error::Precondition(_))));
    }

    #[test]
    fn fast_suites_pass() {
        for name in ["scalar", "curves", "expurgated"] {
            for r in run(Some(name)).unwrap() {
                assert!(r.passed, "{r}");
            }
        }
    }
}
