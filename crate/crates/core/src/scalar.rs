//! Scalar utilities: entropies, binomials in the log domain, bisection, and
//! Krawtchouk polynomials with a real alphabet parameter.
//!
//! All logarithms are base 2.

use crate::error::{domain, Error, Result};

/// Default argument tolerance for [`bisect`].
pub const BISECT_TOL: f64 = 1e-12;

/// Hard cap on bisection steps.
pub const BISECT_MAX_ITER: usize = 200;

/// Largest length accepted by [`krawtchouk`].
pub const KRAWTCHOUK_MAX_N: usize = 64;

fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// The q-ary entropy `t log(q-1) - t log t - (1-t) log(1-t)` in bits.
pub fn entropy_q(t: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return domain(format!("entropy argument {t} outside [0, 1]"));
    }
    if q.is_nan() || q <= 1.0 {
        return domain(format!("entropy alphabet parameter {q} must exceed 1"));
    }
    let cross = if t == 0.0 { 0.0 } else { t * (q - 1.0).log2() };
    Ok(cross - xlog2x(t) - xlog2x(1.0 - t))
}

/// Binary entropy. Panics only on arguments outside [0, 1], which callers in
/// this crate never produce.
pub(crate) fn h2(t: f64) -> f64 {
    entropy_q(t, 2.0).expect("binary entropy argument in [0, 1]")
}

/// `log2 C(n, k)`.
///
/// Exact integer arithmetic for `n <= 60`; a sum of logarithms of the product
/// form otherwise.
pub fn log_binomial(n: i64, k: i64) -> Result<f64> {
    if n < 0 || k < 0 || k > n {
        return domain(format!("binomial C({n}, {k}) undefined"));
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    if n <= 60 {
        Ok((binomial_u128(n, k) as f64).log2())
    } else {
        Ok((0..k)
            .map(|i| ((n - i) as f64).log2() - ((i + 1) as f64).log2())
            .sum())
    }
}

/// Exact `C(n, k)`; overflows past roughly `n = 125`.
pub fn binomial_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
    }
    c
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        0.0
    } else {
        binomial_u128(n as u64, k as u64) as f64
    }
}

/// Generalized binomial `x (x-1) ... (x-j+1) / j!` for real `x`.
fn binomial_real(x: f64, j: usize) -> f64 {
    let rounded = x.round();
    if (x - rounded).abs() < 1e-12 && rounded >= 0.0 {
        return binomial(rounded as usize, j);
    }
    let mut c = 1.0;
    for i in 0..j {
        c *= (x - i as f64) / (i + 1) as f64;
    }
    c
}

/// Finds a root of `f` on `[lo, hi]` by bisection.
///
/// Stops once the bracket is narrower than `tol` or after
/// [`BISECT_MAX_ITER`] halvings, and returns the bracket midpoint.
pub fn bisect<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let lo_negative = f_lo < 0.0;
    for _ in 0..BISECT_MAX_ITER {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Parameters of a Krawtchouk evaluation `K_ell(u; qprime)` at length `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrawtchoukParams {
    pub n: usize,
    pub qprime: f64,
    pub ell: usize,
    pub u: f64,
}

impl KrawtchoukParams {
    pub fn new(n: usize, qprime: f64, ell: usize, u: f64) -> Result<Self> {
        if n == 0 {
            return domain("Krawtchouk length must be positive");
        }
        if ell > n {
            return domain(format!("Krawtchouk degree {ell} exceeds length {n}"));
        }
        if qprime.is_nan() || qprime <= 1.0 {
            return domain(format!("Krawtchouk parameter {qprime} must exceed 1"));
        }
        Ok(Self { n, qprime, ell, u })
    }
}

/// `K_ell(u; q') = sum_j (-1)^j (q'-1)^(ell-j) C(u, j) C(n-u, ell-j)`,
/// accumulated with Neumaier compensation.
pub fn krawtchouk(params: KrawtchoukParams) -> Result<f64> {
    let KrawtchoukParams { n, qprime, ell, u } = params;
    if n > KRAWTCHOUK_MAX_N {
        return domain(format!(
            "Krawtchouk length {n} exceeds {KRAWTCHOUK_MAX_N}; precision not guaranteed"
        ));
    }
    let base = qprime - 1.0;
    let rest = n as f64 - u;
    let mut sum = CompensatedSum::default();
    for j in 0..=ell {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let term = sign
            * base.powi((ell - j) as i32)
            * binomial_real(u, j)
            * binomial_real(rest, ell - j);
        sum.add(term);
    }
    Ok(sum.total())
}

/// Every `K_0(u), ..., K_n(u)` at integer points `u = 0..=n`, as rows indexed
/// by `ell`.
pub fn krawtchouk_table(n: usize, qprime: f64) -> Result<Vec<Vec<f64>>> {
    (0..=n)
        .map(|ell| {
            (0..=n)
                .map(|u| krawtchouk(KrawtchoukParams::new(n, qprime, ell, u as f64)?))
                .collect()
        })
        .collect()
}

/// Neumaier's variant of Kahan summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}
