//! Christoffel–Darboux certificates for the Krawtchouk program, valid for
//! non-integer `q'`.

use super::certificate::{LPSolution, SolutionStatus, RECHECK_SLACK};
use crate::error::{domain, Error, Result};
use crate::scalar::{binomial, bisect, krawtchouk, krawtchouk_table, KrawtchoukParams, BISECT_TOL};

/// Grid points per unit length used when scanning for sign changes.
const SCAN_PER_UNIT: usize = 64;
/// Relative mass allowed above the true degree of an expansion.
const EXPANSION_NOISE: f64 = 1e-4;

/// Why a candidate polynomial is not a certificate.
#[derive(Debug, Clone, PartialEq)]
pub enum MrrwFailure {
    NegativeCoefficient { ell: usize, value: f64 },
    PositiveValue { u: usize, value: f64 },
}

impl std::fmt::Display for MrrwFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MrrwFailure::NegativeCoefficient { ell, value } => {
                write!(f, "coefficient lambda_{ell} = {value:e} is negative")
            }
            MrrwFailure::PositiveValue { u, value } => {
                write!(f, "Lambda({u}) = {value:e} is positive")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MrrwOutcome {
    Certificate(LPSolution),
    Failed(MrrwFailure),
}

fn k(n: usize, qprime: f64, ell: usize, u: f64) -> Result<f64> {
    krawtchouk(KrawtchoukParams::new(n, qprime, ell, u)?)
}

/// Smallest root of `K_t(.; q')` on `(0, n)`, by a sign scan and bisection.
pub fn first_root(n: usize, qprime: f64, t: usize) -> Result<f64> {
    if t == 0 || t > n {
        return domain(format!("degree {t} has no roots on (0, {n})"));
    }
    let steps = n * SCAN_PER_UNIT;
    let h = n as f64 / steps as f64;
    let mut prev = k(n, qprime, t, 0.0)?;
    for i in 1..=steps {
        let u = i as f64 * h;
        let cur = k(n, qprime, t, u)?;
        if cur == 0.0 {
            return Ok(u);
        }
        if prev.signum() != cur.signum() {
            return bisect(
                |x| k(n, qprime, t, x).unwrap_or(f64::NAN),
                u - h,
                u,
                BISECT_TOL,
            );
        }
        prev = cur;
    }
    Err(Error::Numeric(format!("K_{t} has no sign change on [0, {n}]")))
}

/// `Lambda(u) = (K_t(a) K_{t+1}(u) - K_{t+1}(a) K_t(u))^2 / (a - u)`, expanded
/// in the Krawtchouk basis by orthogonality and checked for feasibility at
/// minimum distance `d`.
pub fn mrrw_certificate(n: usize, d: usize, qprime: f64, t: usize, a: f64) -> Result<MrrwOutcome> {
    if t == 0 || t >= n {
        return Err(Error::Precondition(format!("need 1 <= t < n, got t = {t}, n = {n}")));
    }
    if !(a > 0.0 && a < d as f64 + 1e-12) {
        return Err(Error::Precondition(format!("need 0 < a <= d, got a = {a}, d = {d}")));
    }
    if d == 0 || d > n {
        return Err(Error::Precondition(format!("need 1 <= d <= n, got d = {d}")));
    }
    let kt_a = k(n, qprime, t, a)?;
    let kt1_a = k(n, qprime, t + 1, a)?;
    let table = krawtchouk_table(n, qprime)?;
    let values: Vec<f64> = (0..=n)
        .map(|u| {
            let diff = a - u as f64;
            if diff.abs() < 1e-12 {
                return 0.0;
            }
            let core = kt_a * table[t + 1][u] - kt1_a * table[t][u];
            core * core / diff
        })
        .collect();
    // lambda_l = sum_u w(u) Lambda(u) K_l(u) / (q'^n (q'-1)^l C(n, l))
    let weights: Vec<f64> = (0..=n)
        .map(|u| (qprime - 1.0).powi(u as i32) * binomial(n, u))
        .collect();
    let qn = qprime.powi(n as i32);
    let raw: Vec<f64> = (0..=n)
        .map(|l| {
            let s: f64 = (0..=n).map(|u| weights[u] * values[u] * table[l][u]).sum();
            s / (qn * (qprime - 1.0).powi(l as i32) * binomial(n, l))
        })
        .collect();

    // Lambda has degree 2t + 1, so higher coefficients are rounding noise
    // from the expansion; they are dropped after checking they are small.
    // The truncated polynomial is re-validated below, so this gate only
    // catches gross breakdowns.
    let degree = (2 * t + 1).min(n);
    let scale: f64 = raw
        .iter()
        .enumerate()
        .map(|(l, &c)| (c * table[l][0]).abs())
        .sum();
    let noise: f64 = raw
        .iter()
        .enumerate()
        .skip(degree + 1)
        .map(|(l, &c)| (c * table[l][0]).abs())
        .sum();
    if noise > EXPANSION_NOISE * scale {
        return Err(Error::Numeric(format!(
            "expansion noise {noise:e} beyond degree {degree} (scale {scale:e})"
        )));
    }
    let mut lambda: Vec<f64> = raw;
    for c in lambda.iter_mut().skip(degree + 1) {
        *c = 0.0;
    }

    for (l, &c) in lambda.iter().enumerate() {
        if c * table[l][0] < -RECHECK_SLACK * scale || (l == 0 && c <= 0.0) {
            return Ok(MrrwOutcome::Failed(MrrwFailure::NegativeCoefficient { ell: l, value: c }));
        }
    }
    // re-evaluate from the truncated coefficients
    let recomputed: Vec<f64> = (0..=n)
        .map(|u| lambda.iter().enumerate().map(|(l, &c)| c * table[l][u]).sum())
        .collect();
    for (u, &v) in recomputed.iter().enumerate().skip(d) {
        if v > RECHECK_SLACK * scale {
            return Ok(MrrwOutcome::Failed(MrrwFailure::PositiveValue { u, value: v }));
        }
    }
    let lambda = lambda.into_iter().map(|c| c.max(0.0)).collect();
    Ok(MrrwOutcome::Certificate(LPSolution::from_lambda(
        n,
        d,
        qprime,
        lambda,
        SolutionStatus::Certificate,
    )?))
}

/// Largest degree `t` whose first root is at least `d` (first roots decrease
/// in `t`), so that `a = d` lies between the first roots of `K_{t+1}` and
/// `K_t`; falls back to 1 when even `K_1` has its root below `d`.
pub fn bracketing_degree(n: usize, d: usize, qprime: f64) -> Result<usize> {
    let mut best = 1;
    for t in 1..n {
        if first_root(n, qprime, t)? >= d as f64 {
            best = t;
        } else {
            break;
        }
    }
    Ok(best)
}

/// Best certificate over a window of degrees around the bracketing one, with
/// `a = min(d, first root of K_t)`.
///
/// Positivity of the expansion needs `a` between the first roots of
/// `K_{t+1}` and `K_t`; the best choice is `a = d` with `t` from
/// [`bracketing_degree`].
pub fn mrrw_search(n: usize, d: usize, qprime: f64) -> Result<LPSolution> {
    if n < 2 || d == 0 || d > n {
        return Err(Error::Precondition(format!("need n >= 2 and 1 <= d <= n, got n = {n}, d = {d}")));
    }
    let centre = bracketing_degree(n, d, qprime)?;
    let lo = centre.saturating_sub(2).max(1);
    let hi = (centre + 2).min(n - 1);
    let mut best: Option<LPSolution> = None;
    let mut last_failure = None;
    for t in lo..=hi {
        let root = first_root(n, qprime, t)?;
        let a = (root * (1.0 - 1e-9)).min(d as f64);
        match mrrw_certificate(n, d, qprime, t, a) {
            Ok(MrrwOutcome::Certificate(sol)) => {
                if best.as_ref().is_none_or(|b| sol.objective < b.objective) {
                    best = Some(sol);
                }
            }
            Ok(MrrwOutcome::Failed(f)) => last_failure = Some(format!("at t = {t}: {f}")),
            Err(e) => last_failure = Some(format!("at t = {t}: {e}")),
        }
    }
    best.ok_or_else(|| {
        Error::Numeric(format!(
            "no valid certificate; {}",
            last_failure.unwrap_or_else(|| "no admissible degree".into())
        ))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::certificate::lp_solve_lambda;

    #[test]
    fn first_root_of_k1() {
        // K_1(u) = (q'-1)(n-u) - u vanishes at (q'-1)n/q'
        let r = first_root(10, 2.0, 1).unwrap();
        assert!((r - 5.0).abs() < 1e-9);
        let q = 5f64.sqrt();
        let r = first_root(10, q, 1).unwrap();
        assert!((r - (q - 1.0) * 10.0 / q).abs() < 1e-9);
    }

    #[test]
    fn binary_certificate_below_first_root() {
        let (n, t) = (20, 3);
        let root = first_root(n, 2.0, t).unwrap();
        let d = root.ceil() as usize;
        match mrrw_certificate(n, d, 2.0, t, root - 1e-6).unwrap() {
            MrrwOutcome::Certificate(sol) => {
                assert!(sol.check(1e-7).is_ok());
                let lp = lp_solve_lambda(n, d, 2.0).unwrap();
                assert!(sol.objective >= lp.objective * (1.0 - 1e-9));
            }
            MrrwOutcome::Failed(f) => panic!("{f}"),
        }
    }

    #[test]
    fn certificates_dominate_the_lp() {
        let q = 5f64.sqrt();
        for (n, d) in [(10, 3), (12, 4), (16, 5)] {
            let cert = mrrw_search(n, d, q).unwrap();
            let lp = lp_solve_lambda(n, d, q).unwrap();
            assert!(cert.objective >= lp.objective * (1.0 - 1e-9));
            assert!(cert.check(1e-7).is_ok());
        }
    }

    #[test]
    fn guards() {
        assert!(mrrw_certificate(10, 3, 2.0, 0, 1.0).is_err());
        assert!(mrrw_certificate(10, 3, 2.0, 10, 1.0).is_err());
        assert!(mrrw_certificate(10, 3, 2.0, 2, 4.0).is_err());
        assert!(first_root(5, 2.0, 0).is_err());
    }
}
