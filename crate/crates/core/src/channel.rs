//! The typewriter channel itself: sampling, exact pairwise confusion
//! probabilities, maximum-likelihood decoding and Monte Carlo estimates of the
//! block error probability.
//!
//! Input `i` is received as `i` or `i + 1 mod 5`, each with probability 1/2.
//! Random streams come from ChaCha keyed by a seed, with the stream id set
//! to the trial index, so results do not depend on how trials are scheduled.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::{hamming_distance, seq_distance, Code, Word, Q};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TypewriterChannel {
    pub q: u8,
    pub crossover: f64,
}

impl Default for TypewriterChannel {
    fn default() -> Self {
        Self {
            q: Q,
            crossover: 0.5,
        }
    }
}

impl TypewriterChannel {
    /// `W(y | x)`.
    pub fn transition(&self, x: u8, y: u8) -> f64 {
        if y == x {
            1.0 - self.crossover
        } else if y == (x + 1) % self.q {
            self.crossover
        } else {
            0.0
        }
    }

    pub fn transition_matrix(&self) -> Vec<Vec<f64>> {
        (0..self.q)
            .map(|x| (0..self.q).map(|y| self.transition(x, y)).collect())
            .collect()
    }
}

/// Random source for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Sends `x` through the channel.
pub fn channel_sample<R: Rng + ?Sized>(x: &Word, rng: &mut R) -> Word {
    Word(
        x.symbols()
            .iter()
            .map(|&s| if rng.gen::<bool>() { (s + 1) % Q } else { s })
            .collect(),
    )
}

/// Whether `x` and `y` share a possible channel output.
pub fn confusable(x: &Word, y: &Word) -> Result<bool> {
    Ok(seq_distance(x, y)?.is_finite())
}

/// Probability that the output for input `x` could also have come from `y`:
/// `2^-d_H(x, y)` for confusable pairs, 0 otherwise.
pub fn pairwise_confusion_prob(x: &Word, y: &Word) -> Result<f64> {
    if x == y {
        return Err(Error::Precondition("pairwise confusion needs x != y".into()));
    }
    if !confusable(x, y)? {
        return Ok(0.0);
    }
    Ok((-(hamming_distance(x, y)? as f64)).exp2())
}

/// Whether `y` is a possible output for input `x`.
pub fn reachable(x: &Word, y: &Word) -> bool {
    x.len() == y.len()
        && x
            .symbols()
            .iter()
            .zip(y.symbols())
            .all(|(&a, &b)| b == a || b == (a + 1) % Q)
}

/// Maximum-likelihood decoder for a fixed code.
///
/// Every reachable codeword has likelihood `2^-n`, so decoding picks
/// uniformly among the codewords compatible with the output.
#[derive(Debug, Clone)]
pub struct MlDecoder<'a> {
    code: &'a Code,
    positions: HashMap<&'a Word, Vec<usize>>,
}

impl<'a> MlDecoder<'a> {
    pub fn new(code: &'a Code) -> Self {
        let mut positions: HashMap<&Word, Vec<usize>> = HashMap::new();
        for (i, w) in code.words().iter().enumerate() {
            positions.entry(w).or_default().push(i);
        }
        Self { code, positions }
    }

    /// Indices of codewords that can produce `y`, in increasing order.
    pub fn compatible(&self, y: &Word) -> Vec<usize> {
        let n = y.len();
        let mut out = Vec::new();
        let mut candidate = y.clone();
        // each position came from y_i or y_i - 1
        for mask in 0..(1usize << n) {
            for (i, slot) in candidate.0.iter_mut().enumerate() {
                let s = y.0[i];
                *slot = if mask >> i & 1 == 1 { (s + Q - 1) % Q } else { s };
            }
            if let Some(idx) = self.positions.get(&candidate) {
                out.extend(idx);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn decode<R: Rng + ?Sized>(&self, y: &Word, rng: &mut R) -> Result<usize> {
        if y.len() != self.code.length() {
            return Err(Error::LengthMismatch {
                left: self.code.length(),
                right: y.len(),
            });
        }
        let compatible = self.compatible(y);
        match compatible.len() {
            0 => Err(Error::Precondition(format!("no codeword can produce {y}"))),
            1 => Ok(compatible[0]),
            m => Ok(compatible[rng.gen_range(0..m)]),
        }
    }
}

/// One-shot ML decoding of `y`.
pub fn ml_decode<R: Rng + ?Sized>(code: &Code, y: &Word, rng: &mut R) -> Result<usize> {
    MlDecoder::new(code).decode(y, rng)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimResult {
    pub trials: u64,
    pub errors: u64,
    pub estimate: f64,
    pub ci95_halfwidth: f64,
    pub seed: u64,
}

impl SimResult {
    pub fn from_counts(trials: u64, errors: u64, seed: u64) -> Self {
        let n = trials as f64;
        let p = errors as f64 / n;
        let ci95_halfwidth = if errors == 0 {
            // rule of three
            3.0 / n
        } else {
            1.96 * (p * (1.0 - p) / n).sqrt()
        };
        Self {
            trials,
            errors,
            estimate: p,
            ci95_halfwidth,
            seed,
        }
    }

    pub const CSV_HEADER: &'static str = "trials,errors,estimate,ci95,seed";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{:.12e},{:.12e},{}",
            self.trials, self.errors, self.estimate, self.ci95_halfwidth, self.seed
        )
    }

    pub fn from_csv_row(line: &str) -> Result<Self> {
        let f: Vec<&str> = line.trim().split(',').collect();
        if f.len() != 5 {
            return Err(Error::Parse(format!("expected 5 fields in {line:?}")));
        }
        let int = |s: &str| {
            s.parse::<u64>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        };
        let real = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        };
        Ok(Self {
            trials: int(f[0])?,
            errors: int(f[1])?,
            estimate: real(f[2])?,
            ci95_halfwidth: real(f[3])?,
            seed: int(f[4])?,
        })
    }
}

/// Estimates the average block error probability of `code` under ML decoding
/// with a uniformly drawn message per trial.
pub fn monte_carlo_pe(code: &Code, trials: u64, seed: u64) -> Result<SimResult> {
    if trials == 0 {
        return Err(Error::Precondition("at least one trial required".into()));
    }
    let decoder = MlDecoder::new(code);
    let m = code.size();
    let errors = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let sent = rng.gen_range(0..m);
            let y = channel_sample(&code.words()[sent], &mut rng);
            let got = decoder.decode(&y, &mut rng)?;
            Ok(u64::from(got != sent))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(SimResult::from_counts(trials, errors, seed))
}

/// Empirical frequency, over `trials` channel uses with input `x`, that the
/// output is also reachable from `y`.
pub fn simulate_confusion(x: &Word, y: &Word, trials: u64, seed: u64) -> Result<SimResult> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let hits = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            u64::from(reachable(y, &channel_sample(x, &mut rng)))
        })
        .sum();
    Ok(SimResult::from_counts(trials, hits, seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn transition_rows_sum_to_one() {
        let ch = TypewriterChannel::default();
        for row in ch.transition_matrix() {
            assert_eq!(row.iter().sum::<f64>(), 1.0);
            assert_eq!(row.iter().filter(|&&p| p > 0.0).count(), 2);
        }
    }

    #[test]
    fn samples_stay_in_support_and_are_balanced() {
        let x = w("0");
        let mut rng = trial_rng(5, 0);
        let trials = 1_000_000u64;
        let mut moved = 0u64;
        for _ in 0..trials {
            let y = channel_sample(&x, &mut rng);
            assert!(reachable(&x, &y));
            moved += u64::from(y.0[0] == 1);
        }
        let sigma = (trials as f64 * 0.25).sqrt();
        assert!((moved as f64 - trials as f64 / 2.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn sampling_is_deterministic_per_stream() {
        let x = w("0123401234");
        let a = channel_sample(&x, &mut trial_rng(9, 3));
        let b = channel_sample(&x, &mut trial_rng(9, 3));
        assert_eq!(a, b);
        let others: Vec<Word> = (0..8).map(|s| channel_sample(&x, &mut trial_rng(9, s))).collect();
        assert!(others.iter().any(|o| *o != a));
    }

    #[test]
    fn confusable_examples() {
        assert!(confusable(&w("01"), &w("12")).unwrap());
        assert!(!confusable(&w("0"), &w("2")).unwrap());
        assert!(confusable(&w("3"), &w("3")).unwrap());
        assert!(confusable(&w("0"), &w("01")).is_err());
    }

    #[test]
    fn pairwise_confusion_examples() {
        assert_eq!(pairwise_confusion_prob(&w("0000"), &w("1140")).unwrap(), 0.125);
        assert_eq!(pairwise_confusion_prob(&w("00"), &w("20")).unwrap(), 0.0);
        assert!(pairwise_confusion_prob(&w("00"), &w("00")).is_err());
    }

    #[test]
    fn confusion_frequency_matches_exact_value() {
        for (x, y) in [("000", "100"), ("000", "140"), ("0000", "1144")] {
            let (x, y) = (w(x), w(y));
            let p = pairwise_confusion_prob(&x, &y).unwrap();
            let trials = 1_000_000;
            let sim = simulate_confusion(&x, &y, trials, 17).unwrap();
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((sim.estimate - p).abs() < 5.0 * sigma, "{x} {y}: {}", sim.estimate);
        }
    }

    #[test]
    fn ml_decode_examples() {
        let single = Code::new(vec![w("012")]).unwrap();
        let mut rng = trial_rng(0, 0);
        for _ in 0..100 {
            let y = channel_sample(&single.words()[0], &mut rng);
            assert_eq!(ml_decode(&single, &y, &mut rng).unwrap(), 0);
        }
        let code = Code::new(vec![w("00"), w("33")]).unwrap();
        assert!(ml_decode(&code, &w("22"), &mut rng).is_err());
        assert!(ml_decode(&code, &w("2"), &mut rng).is_err());
    }

    #[test]
    fn decoder_compatible_set_matches_scan() {
        let words: Vec<Word> = (0..25).map(|i| Word::from_index(i, 2)).collect();
        let code = Code::new(words.clone()).unwrap();
        let dec = MlDecoder::new(&code);
        for y in &words {
            let scan: Vec<usize> = (0..words.len()).filter(|&i| reachable(&words[i], y)).collect();
            assert_eq!(dec.compatible(y), scan);
        }
    }

    #[test]
    fn zero_error_code_never_errs() {
        let code = crate::expurgated::shannon_code2().unwrap();
        let sim = monte_carlo_pe(&code, 100_000, 1).unwrap();
        assert_eq!(sim.errors, 0);
        assert_eq!(sim.estimate, 0.0);
        assert_eq!(sim.ci95_halfwidth, 3.0 / 100_000.0);
    }

    #[test]
    fn two_word_code_error_rate() {
        for (a, b, d) in [("00", "10", 1), ("000", "114", 3)] {
            let code = Code::new(vec![w(a), w(b)]).unwrap();
            let p = (-(d as f64) - 1.0).exp2();
            let sim = monte_carlo_pe(&code, 200_000, 4).unwrap();
            let sigma = (p * (1.0 - p) / 200_000f64).sqrt();
            assert!((sim.estimate - p).abs() < 3.0 * sigma, "{a}/{b}: {}", sim.estimate);
        }
    }

    #[test]
    fn monte_carlo_is_reproducible() {
        let code = Code::new(vec![w("00"), w("10"), w("41")]).unwrap();
        let a = monte_carlo_pe(&code, 20_000, 99).unwrap();
        let b = monte_carlo_pe(&code, 20_000, 99).unwrap();
        assert_eq!(a, b);
        assert!(monte_carlo_pe(&code, 0, 1).is_err());
    }

    #[test]
    fn relabeling_keeps_estimate_within_noise() {
        let code = Code::new(vec![w("00"), w("10"), w("41"), w("23")]).unwrap();
        let mut rev = code.words().to_vec();
        rev.reverse();
        let relabeled = Code::new(rev).unwrap();
        let a = monte_carlo_pe(&code, 200_000, 3).unwrap();
        let b = monte_carlo_pe(&relabeled, 200_000, 8).unwrap();
        assert!((a.estimate - b.estimate).abs() < 2.0 * (a.ci95_halfwidth + b.ci95_halfwidth));
    }

    #[test]
    fn sim_result_csv_round_trip() {
        let r = SimResult::from_counts(1000, 37, 5);
        assert_eq!(SimResult::from_csv_row(&r.to_csv_row()).unwrap().errors, 37);
        assert!(SimResult::from_csv_row("1,2,3").is_err());
    }
}
