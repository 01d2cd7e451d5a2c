//! Structured Gilbert-Varshamov construction for the typewriter channel.
//!
//! Codes have length `2n` and generator matrix
//!
//! ```text
//! G+ = | I_n  2 I_n |
//!      |  0     G   |
//! ```
//!
//! so a message `(u1, u2)` maps to `(u1, 2 u1 + u2 G)`. Weights are typewriter
//! weights; see [`crate::word::symbol_distance`].

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::scalar::{binomial, bisect, h2, BISECT_TOL};
use crate::word::{ExtendedWeight, Word, Q};

/// Maximum number of messages enumerated by the spectrum routines.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

fn guard(exponent: usize) -> Result<usize> {
    let states = (Q as u128).checked_pow(exponent as u32).unwrap_or(u128::MAX);
    if states > ENUMERATION_LIMIT {
        return Err(Error::SizeGuard {
            states,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(states as usize)
}

/// A `k x n` matrix over Z_5, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix5 {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<u8>,
}

impl Matrix5 {
    pub fn new(rows: usize, cols: usize, entries: Vec<u8>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::LengthMismatch {
                left: rows * cols,
                right: entries.len(),
            });
        }
        if entries.iter().any(|&e| e >= Q) {
            return domain("matrix entries must lie in Z_5");
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.entries[r * self.cols + c]
    }

    /// Row vector times matrix over Z_5.
    pub fn left_mul(&self, u: &[u8]) -> Vec<u8> {
        debug_assert_eq!(u.len(), self.rows);
        let mut out = vec![0u32; self.cols];
        for (r, &ur) in u.iter().enumerate() {
            if ur == 0 {
                continue;
            }
            let row = &self.entries[r * self.cols..(r + 1) * self.cols];
            for (o, &g) in out.iter_mut().zip(row) {
                *o += ur as u32 * g as u32;
            }
        }
        out.into_iter().map(|x| (x % Q as u32) as u8).collect()
    }
}

/// Uniform i.i.d. entries in Z_5 from a seeded generator.
pub fn sample_random_g(n: usize, k: usize, seed: u64) -> Result<Matrix5> {
    if n == 0 || k == 0 {
        return domain("random generator needs n, k >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..n * k).map(|_| rng.gen_range(0..Q)).collect();
    Matrix5::new(k, n, entries)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorPlus {
    pub n: usize,
    pub k: usize,
    pub g: Matrix5,
}

impl GeneratorPlus {
    pub fn new(g: Matrix5) -> Self {
        Self {
            n: g.cols,
            k: g.rows,
            g,
        }
    }

    /// Builds `G+` for a `k x n` block `G`; `k = 0` is allowed.
    pub fn with_block(n: usize, k: usize, entries: Vec<u8>) -> Result<Self> {
        Ok(Self::new(Matrix5::new(k, n, entries)?))
    }

    /// The full `(n + k) x 2n` generator matrix.
    pub fn assembled(&self) -> Matrix5 {
        let (n, k) = (self.n, self.k);
        let mut m = Matrix5::zeros(n + k, 2 * n);
        for i in 0..n {
            m.entries[i * 2 * n + i] = 1;
            m.entries[i * 2 * n + n + i] = 2;
        }
        for r in 0..k {
            for c in 0..n {
                m.entries[(n + r) * 2 * n + n + c] = self.g.get(r, c);
            }
        }
        m
    }

    /// The codeword `(u1, 2 u1 + u2 G)`.
    pub fn encode(&self, u1: &[u8], u2: &[u8]) -> Word {
        let nu = self.g.left_mul(u2);
        let mut symbols = u1.to_vec();
        symbols.extend(u1.iter().zip(&nu).map(|(&a, &b)| (2 * a + b) % Q));
        Word(symbols)
    }

    /// All `5^(n+k)` codewords in message order (`u1` most significant).
    pub fn codewords(&self) -> Result<Vec<Word>> {
        let count = guard(self.n + self.k)?;
        let m = self.assembled();
        Ok((0..count)
            .map(|i| Word(m.left_mul(Word::from_index(i, self.n + self.k).symbols())))
            .collect())
    }
}

/// Per-coordinate contribution of `(u1_i, 2 u1_i + nu_i)` to the weight.
///
/// * `u1_i = ±2`: infinite.
/// * `nu_i = 0`: zero for `u1_i = 0`, infinite otherwise.
/// * `nu_i != 0`: among `u1_i ∈ {0, ±1}` exactly one choice contributes 1,
///   one contributes 2, and the third is infinite.
fn coordinate_weight(u1: u8, nu: u8) -> ExtendedWeight {
    use ExtendedWeight::{Finite, Infinite};
    if u1 == 2 || u1 == 3 {
        return Infinite;
    }
    if nu == 0 {
        return if u1 == 0 { Finite(0) } else { Infinite };
    }
    // (choice contributing 1, choice contributing 2)
    let (one, two) = match nu {
        1 => (0, 4),
        4 => (0, 1),
        2 => (4, 1),
        3 => (1, 4),
        _ => unreachable!("nu in Z_5"),
    };
    if u1 == one {
        Finite(1)
    } else if u1 == two {
        Finite(2)
    } else {
        Infinite
    }
}

/// Weight of the codeword `(u1, 2 u1 + nu)` from the case analysis, without
/// forming the codeword.
pub fn structured_weight(u1: &[u8], nu: &[u8]) -> Result<ExtendedWeight> {
    if u1.len() != nu.len() {
        return Err(Error::LengthMismatch {
            left: u1.len(),
            right: nu.len(),
        });
    }
    if u1.iter().chain(nu).any(|&s| s >= Q) {
        return domain("symbols must lie in Z_5");
    }
    Ok(u1
        .iter()
        .zip(nu)
        .map(|(&a, &b)| coordinate_weight(a, b))
        .sum())
}

/// Multiset of weights: finite weight -> count, plus an infinity bucket.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Spectrum {
    pub counts: BTreeMap<u32, u64>,
    pub infinite_count: u64,
}

impl Spectrum {
    pub fn add(&mut self, w: ExtendedWeight, count: u64) {
        if count == 0 {
            return;
        }
        match w {
            ExtendedWeight::Finite(z) => *self.counts.entry(z).or_insert(0) += count,
            ExtendedWeight::Infinite => self.infinite_count += count,
        }
    }

    pub fn merge(mut self, other: &Spectrum) -> Spectrum {
        for (&z, &c) in &other.counts {
            self.add(ExtendedWeight::Finite(z), c);
        }
        self.infinite_count += other.infinite_count;
        self
    }

    pub fn count(&self, z: u32) -> u64 {
        self.counts.get(&z).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum::<u64>() + self.infinite_count
    }

    /// CSV `weight,count` with a final `inf,count` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("weight,count\n");
        for (z, c) in &self.counts {
            let _ = writeln!(out, "{z},{c}");
        }
        let _ = writeln!(out, "inf,{}", self.infinite_count);
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("weight,count") {
            return Err(Error::Parse("expected header weight,count".into()));
        }
        let mut spectrum = Spectrum::default();
        for line in lines {
            let (w, c) = line
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("malformed row {line:?}")))?;
            let count = c
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("{c:?}: {e}")))?;
            spectrum.add(w.parse()?, count);
        }
        Ok(spectrum)
    }
}

/// Spectrum of the `G+` code, enumerating every message and weighing it with
/// [`structured_weight`]. Messages are counted, so a non-injective `G` yields
/// repeated words.
pub fn enumerate_spectrum(gp: &GeneratorPlus) -> Result<Spectrum> {
    guard(gp.n + gp.k)?;
    let inner = 5usize.pow(gp.n as u32);
    let outer = 5usize.pow(gp.k as u32);
    let spectrum = (0..outer)
        .into_par_iter()
        .map(|j| {
            let u2 = Word::from_index(j, gp.k);
            let nu = gp.g.left_mul(u2.symbols());
            let mut local = Spectrum::default();
            for i in 0..inner {
                let u1 = Word::from_index(i, gp.n);
                local.add(
                    structured_weight(u1.symbols(), &nu).expect("lengths agree"),
                    1,
                );
            }
            local
        })
        .reduce(Spectrum::default, |a, b| a.merge(&b));
    Ok(spectrum)
}

/// Spectrum of the `G+` code computed by multiplying out every codeword with
/// the assembled matrix and measuring its typewriter weight directly.
pub fn enumerate_spectrum_direct(gp: &GeneratorPlus) -> Result<Spectrum> {
    let mut spectrum = Spectrum::default();
    for w in gp.codewords()? {
        spectrum.add(w.weight(), 1);
    }
    Ok(spectrum)
}

/// Hamming-weight spectrum `B_d` of `{u2 G}`, counting messages `u2`.
pub fn hamming_spectrum(g: &Matrix5) -> Result<Spectrum> {
    let count = guard(g.rows)?;
    let spectrum = (0..count)
        .into_par_iter()
        .map(|j| {
            let nu = g.left_mul(Word::from_index(j, g.rows).symbols());
            let d = nu.iter().filter(|&&s| s != 0).count() as u32;
            let mut local = Spectrum::default();
            local.add(ExtendedWeight::Finite(d), 1);
            local
        })
        .reduce(Spectrum::default, |a, b| a.merge(&b));
    Ok(spectrum)
}

/// Union bound `sum_{z >= 1} A_z 2^-z`; infinite weights contribute nothing.
pub fn union_bound_pe(spectrum: &Spectrum) -> f64 {
    spectrum
        .counts
        .iter()
        .filter(|(&z, _)| z >= 1)
        .map(|(&z, &c)| c as f64 * (-(z as f64)).exp2())
        .sum()
}

/// The same union bound computed from the Hamming spectrum of `G`:
/// `sum_{d >= 1} sum_{t = 0..d} B_d C(d, t) 2^-(d + t)`.
pub fn union_bound_from_hamming(b: &Spectrum) -> f64 {
    b.counts
        .iter()
        .filter(|(&d, _)| d >= 1)
        .map(|(&d, &count)| {
            let d = d as usize;
            let inner: f64 = (0..=d)
                .map(|t| binomial(d, t) * (-((d + t) as f64)).exp2())
                .sum();
            count as f64 * inner
        })
        .sum()
}

/// Relative GV distance at inner rate `r`: solves
/// `r log 5 = log 5 - H2(delta) - 2 delta` on `(0, 4/5]`.
pub fn gv_delta(r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&r) {
        return domain(format!("inner rate {r} outside [0, 1)"));
    }
    let log5 = 5f64.log2();
    let f = |d: f64| log5 - h2(d) - 2.0 * d - r * log5;
    if f(0.8) >= -1e-15 {
        return Ok(0.8);
    }
    bisect(f, 0.0, 0.8, BISECT_TOL)
}

/// Inner rate `r` at which `gv_delta(r) = delta`, for `0 < delta <= 4/5`.
pub fn gv_rate(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta <= 0.8) {
        return domain(format!("relative distance {delta} outside (0, 4/5]"));
    }
    let log5 = 5f64.log2();
    Ok((log5 - h2(delta) - 2.0 * delta) / log5)
}

/// Rate of the length-`2n` code, `log 5 (1 + r) / 2`.
pub fn global_rate(r: f64) -> f64 {
    5f64.log2() * (1.0 + r) / 2.0
}

/// `(1/n) log B_{delta n}` for the GV ensemble; `None` below `delta_GV(r)`,
/// where the spectrum vanishes.
pub fn gv_spectrum_exponent(r: f64, delta: f64) -> Result<Option<f64>> {
    if !(0.0..=1.0).contains(&delta) {
        return domain(format!("relative weight {delta} outside [0, 1]"));
    }
    if delta < gv_delta(r)? {
        return Ok(None);
    }
    Ok(Some(5f64.log2() * (r - 1.0) + h2(delta) + 2.0 * delta))
}

/// Exponent of the `(delta, tau)` term of the union bound:
/// `log5 (r-1) + H2(delta) + 2 delta + delta H2(tau) - delta (1 + tau)`.
pub fn union_term_exponent(r: f64, delta: f64, tau: f64) -> f64 {
    5f64.log2() * (r - 1.0) + h2(delta) + 2.0 * delta + delta * h2(tau) - delta * (1.0 + tau)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentOptimum {
    pub delta_gv: f64,
    pub delta_star: f64,
    pub tau_star: f64,
    /// `-(1/n) log Pe` for the length-`2n` code, per inner symbol.
    pub exponent_per_symbol: f64,
}

impl ExponentOptimum {
    /// Exponent normalised by the block length `2n`.
    pub fn block_exponent(&self) -> f64 {
        self.exponent_per_symbol / 2.0
    }
}

/// Maximises [`union_term_exponent`] over `tau in [0, 1]` and
/// `delta >= delta_GV(r)` in closed form.
pub fn exponent_optimizer(r: f64) -> Result<ExponentOptimum> {
    let delta_gv = gv_delta(r)?;
    let tau_star = 1.0 / 3.0;
    let (delta_star, exponent) = if delta_gv <= 0.75 {
        (0.75, -(5f64.log2() * (r - 1.0) + 2.0))
    } else {
        (delta_gv, delta_gv * (4.0 / 3.0 - h2(1.0 / 3.0)))
    };
    Ok(ExponentOptimum {
        delta_gv,
        delta_star,
        tau_star,
        exponent_per_symbol: exponent,
    })
}
