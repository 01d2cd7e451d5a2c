//! Expurgated-exponent analysis of the typewriter channel: the Bhattacharyya
//! kernel raised to `1/rho`, its circulant spectrum, the quadratic form
//! `Q^n(rho, P)` for `n <= 2`, and the resulting closed-form exponents.

use num_rational::Ratio;

use crate::error::{domain, Error, Result};
use crate::word::{seq_distance, Code, ExtendedWeight, Word, Q};

/// Tolerance on the total mass of an [`InputDistribution`].
const MASS_TOL: f64 = 1e-12;

/// `alpha = 2^(-1/rho)`, the off-diagonal kernel entry.
pub fn alpha(rho: f64) -> f64 {
    (-1.0 / rho).exp2()
}

/// The 5x5 matrix with entries `g_1(x1, x2)^(1/rho)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BhattacharyyaMatrix {
    pub rho: f64,
    pub alpha: f64,
    pub entries: [[f64; 5]; 5],
}

pub fn g1_matrix(rho: f64) -> Result<BhattacharyyaMatrix> {
    if rho.is_nan() || rho < 1.0 {
        return domain(format!("rho = {rho} must be at least 1"));
    }
    let a = alpha(rho);
    let mut entries = [[0.0; 5]; 5];
    for (i, row) in entries.iter_mut().enumerate() {
        row[i] = 1.0;
        row[(i + 1) % 5] = a;
        row[(i + 4) % 5] = a;
    }
    Ok(BhattacharyyaMatrix {
        rho,
        alpha: a,
        entries,
    })
}

/// `lambda_k = 1 + 2^(1 - 1/rho) cos(2 pi k / 5)` for `k = 0..5`.
pub fn circulant_eigenvalues(rho: f64) -> [f64; 5] {
    let scale = (1.0 - 1.0 / rho).exp2();
    std::array::from_fn(|k| {
        1.0 + scale * (2.0 * std::f64::consts::PI * k as f64 / 5.0).cos()
    })
}

/// Largest `rho` for which the kernel matrix stays positive semidefinite,
/// `log 2 / log(2 cos(pi/5))`.
pub fn rho_bar() -> f64 {
    1.0 / (2.0 * (std::f64::consts::PI / 5.0).cos()).log2()
}

/// `E_x^inf(rho) = E_x^2(rho)` in closed form.
pub fn ex_exponent_inf(rho: f64) -> f64 {
    if rho <= rho_bar() {
        -rho * ((1.0 + (1.0 - 1.0 / rho).exp2()) / 5.0).log2()
    } else {
        rho * 5f64.log2() / 2.0
    }
}

/// `E_ex^2(R) = sup_{rho >= 1} [E_x^2(rho) - rho R]`.
///
/// The supremum is attained at `rho = 1` for `R >= log sqrt 5` and diverges
/// (returned as `+inf`) below.
pub fn e_ex2(rate: f64) -> Result<f64> {
    if rate.is_nan() || rate <= 0.0 {
        return domain(format!("rate {rate} must be positive"));
    }
    if rate < 0.5 * 5f64.log2() {
        Ok(f64::INFINITY)
    } else {
        Ok(2.5f64.log2() - rate)
    }
}

/// A probability distribution on `Z_5^n`, indexed by [`Word::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct InputDistribution {
    n: usize,
    probs: Vec<f64>,
}

impl InputDistribution {
    pub fn new(n: usize, probs: Vec<f64>) -> Result<Self> {
        check_order(n)?;
        if probs.len() != 5usize.pow(n as u32) {
            return Err(Error::LengthMismatch {
                left: 5usize.pow(n as u32),
                right: probs.len(),
            });
        }
        if probs.iter().any(|&p| p.is_nan() || p < 0.0) {
            return domain("probabilities must be nonnegative");
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return domain(format!("probabilities sum to {mass}"));
        }
        Ok(Self { n, probs })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        let size = 5usize.pow(n as u32);
        Self::new(n, vec![1.0 / size as f64; size])
    }

    pub fn point_mass(word: &Word) -> Result<Self> {
        let n = word.len();
        check_order(n)?;
        let mut probs = vec![0.0; 5usize.pow(n as u32)];
        probs[word.index()] = 1.0;
        Self::new(n, probs)
    }

    /// Uniform on the words of `code`.
    pub fn on_code(code: &Code) -> Result<Self> {
        let exact = ExactDistribution::on_code(code)?;
        Self::new(
            exact.n,
            exact
                .probs
                .iter()
                .map(|p| *p.numer() as f64 / *p.denom() as f64)
                .collect(),
        )
    }

    /// `P x P` on `Z_5^2` from a distribution on `Z_5`.
    pub fn product(single: &InputDistribution) -> Result<Self> {
        if single.n != 1 {
            return domain("product expects a single-letter distribution");
        }
        let probs = (0..25).map(|i| single.probs[i / 5] * single.probs[i % 5]).collect();
        Self::new(2, probs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

fn check_order(n: usize) -> Result<()> {
    if !(1..=2).contains(&n) {
        return domain(format!("quadratic form supported for n in {{1, 2}}, got {n}"));
    }
    Ok(())
}

/// Typewriter distance between every pair of words of length `n`, row-major.
fn distance_table(n: usize) -> Vec<ExtendedWeight> {
    let size = 5usize.pow(n as u32);
    let words: Vec<Word> = (0..size).map(|i| Word::from_index(i, n)).collect();
    let mut table = Vec::with_capacity(size * size);
    for x in &words {
        for y in &words {
            table.push(seq_distance(x, y).expect("equal lengths"));
        }
    }
    table
}

/// `Q^n(rho, P) = sum P(x1) P(x2) g_n(x1, x2)^(1/rho)`, with `g_n^(1/rho)`
/// the Kronecker power of [`g1_matrix`]; `0^(1/rho) = 0`.
pub fn q_form(rho: f64, dist: &InputDistribution) -> Result<f64> {
    if rho.is_nan() || rho < 1.0 {
        return domain(format!("rho = {rho} must be at least 1"));
    }
    let a = alpha(rho);
    let size = dist.probs.len();
    let table = distance_table(dist.n);
    let mut total = 0.0;
    for (i, &p) in dist.probs.iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        for (j, &r) in dist.probs.iter().enumerate() {
            if let ExtendedWeight::Finite(d) = table[i * size + j] {
                total += p * r * a.powi(d as i32);
            }
        }
    }
    Ok(total)
}

/// A distribution on `Z_5^n` with exact rational probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactDistribution {
    n: usize,
    probs: Vec<Ratio<i64>>,
}

impl ExactDistribution {
    pub fn new(n: usize, probs: Vec<Ratio<i64>>) -> Result<Self> {
        check_order(n)?;
        if probs.len() != 5usize.pow(n as u32) {
            return Err(Error::LengthMismatch {
                left: 5usize.pow(n as u32),
                right: probs.len(),
            });
        }
        let zero = Ratio::from_integer(0);
        if probs.iter().any(|p| *p < zero) {
            return domain("probabilities must be nonnegative");
        }
        let mass: Ratio<i64> = probs.iter().sum();
        if mass != Ratio::from_integer(1) {
            return domain(format!("probabilities sum to {mass}"));
        }
        Ok(Self { n, probs })
    }

    pub fn on_code(code: &Code) -> Result<Self> {
        let n = code.length();
        check_order(n)?;
        let mut probs = vec![Ratio::from_integer(0); 5usize.pow(n as u32)];
        let share = Ratio::new(1, code.size() as i64);
        for w in code.words() {
            probs[w.index()] += share;
        }
        Self::new(n, probs)
    }
}

/// `Q^n(rho, P)` as a polynomial in `alpha` with exact rational coefficients:
/// `coeffs[j]` multiplies `alpha^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaPolynomial {
    pub coeffs: Vec<Ratio<i64>>,
}

impl AlphaPolynomial {
    pub fn eval(&self, alpha: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * alpha + *c.numer() as f64 / *c.denom() as f64)
    }

    /// The polynomial is a constant `c` (no dependence on `rho`).
    pub fn as_constant(&self) -> Option<Ratio<i64>> {
        let zero = Ratio::from_integer(0);
        if self.coeffs.iter().skip(1).all(|c| *c == zero) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

pub fn q_form_exact(dist: &ExactDistribution) -> AlphaPolynomial {
    let size = dist.probs.len();
    let table = distance_table(dist.n);
    let mut coeffs = vec![Ratio::from_integer(0); dist.n + 1];
    for (i, p) in dist.probs.iter().enumerate() {
        for (j, r) in dist.probs.iter().enumerate() {
            if let ExtendedWeight::Finite(d) = table[i * size + j] {
                coeffs[d as usize] += p * r;
            }
        }
    }
    AlphaPolynomial { coeffs }
}

/// Lexicographically smallest set of `size` words of length `n` that are
/// pairwise non-confusable, if one exists.
pub fn smallest_zero_error_code(n: usize, size: usize) -> Option<Code> {
    let count = 5usize.pow(n as u32);
    let words: Vec<Word> = (0..count).map(|i| Word::from_index(i, n)).collect();
    let compatible = |i: usize, j: usize| {
        seq_distance(&words[i], &words[j]).expect("equal lengths") == ExtendedWeight::Infinite
    };
    fn extend(
        chosen: &mut Vec<usize>,
        start: usize,
        count: usize,
        size: usize,
        compatible: &dyn Fn(usize, usize) -> bool,
    ) -> bool {
        if chosen.len() == size {
            return true;
        }
        for v in start..count {
            if count - v < size - chosen.len() {
                return false;
            }
            if chosen.iter().all(|&c| compatible(c, v)) {
                chosen.push(v);
                if extend(chosen, v + 1, count, size, compatible) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(size);
    if extend(&mut chosen, 0, count, size, &compatible) {
        Some(Code::new(chosen.into_iter().map(|i| words[i].clone()).collect()).expect("nonempty"))
    } else {
        None
    }
}

/// Shannon's length-2 zero-error code for the pentagon, found by exhaustive
/// search over the 25 words.
pub fn shannon_code2() -> Result<Code> {
    smallest_zero_error_code(2, 5)
        .ok_or_else(|| Error::Internal("no five pairwise non-confusable words of length 2".into()))
}

/// Whether all pairs of distinct words in `code` are non-confusable.
pub fn is_zero_error(code: &Code) -> bool {
    let words = code.words();
    words.iter().enumerate().all(|(i, x)| {
        words[i + 1..]
            .iter()
            .all(|y| seq_distance(x, y).map_or(false, |d| d == ExtendedWeight::Infinite))
    })
}

/// `Q` for the uniform single-letter distribution, `(1 + 2^(1-1/rho))/5`.
pub fn q1_uniform(rho: f64) -> f64 {
    (1.0 + (1.0 - 1.0 / rho).exp2()) / Q as f64
}
