//! Exact maximum codes for tiny lengths, by branch and bound on a clique
//! problem over `Z_5^n`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::word::{seq_distance, Code, ExtendedWeight, Word, Q};

/// Largest vertex count accepted; one `u128` holds a vertex set.
pub const CLIQUE_LIMIT: usize = 500;

#[derive(Debug, Clone, PartialEq)]
pub struct MaxCode {
    pub size: usize,
    pub code: Code,
}

type Set = u128;

struct Graph {
    adj: Vec<Set>,
}

impl Graph {
    /// Upper bound on the clique number of `cand` by greedy colouring.
    fn colour_bound(&self, mut cand: Set) -> usize {
        let mut colours = 0;
        while cand != 0 {
            colours += 1;
            let mut avail = cand;
            while avail != 0 {
                let v = avail.trailing_zeros() as usize;
                avail &= !(1u128 << v);
                avail &= !self.adj[v];
                cand &= !(1u128 << v);
            }
        }
        colours
    }

    /// Depth-first search in lexicographic order; `best` is replaced only by
    /// strictly larger cliques, so the first maximum found is the
    /// lexicographically smallest.
    fn expand(&self, current: &mut Vec<usize>, mut cand: Set, best: &mut Vec<usize>) {
        if cand == 0 {
            if current.len() > best.len() {
                *best = current.clone();
            }
            return;
        }
        while cand != 0 {
            if current.len() + self.colour_bound(cand) <= best.len() {
                return;
            }
            let v = cand.trailing_zeros() as usize;
            cand &= !(1u128 << v);
            current.push(v);
            self.expand(current, cand & self.adj[v], best);
            current.pop();
        }
        if current.len() > best.len() {
            *best = current.clone();
        }
    }
}

/// Largest code of length `n` over `Z_5` whose distinct words are pairwise at
/// typewriter distance at least `d`, together with the lexicographically
/// smallest such code (words ordered by base-5 index).
pub fn brute_force_max_code(n: usize, d: ExtendedWeight) -> Result<MaxCode> {
    let size = (Q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if n == 0 || size > CLIQUE_LIMIT as u128 || size > Set::BITS as u128 {
        return Err(Error::SizeGuard {
            states: size,
            limit: CLIQUE_LIMIT.min(Set::BITS as usize) as u128,
        });
    }
    let size = size as usize;
    let words: Vec<Word> = (0..size).map(|i| Word::from_index(i, n)).collect();
    let mut adj = vec![0 as Set; size];
    for i in 0..size {
        for j in (i + 1)..size {
            if seq_distance(&words[i], &words[j])? >= d {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let graph = Graph { adj };

    // Translations preserve distance, so some maximum code contains the zero
    // word, and the lexicographically smallest one starts with it.
    let root = graph.adj[0];
    let seconds: Vec<usize> = (1..size).filter(|&v| root >> v & 1 == 1).collect();
    let branches: Vec<Vec<usize>> = seconds
        .par_iter()
        .map(|&v| {
            // restrict to vertices after v so branches are disjoint
            let later: Set = if v + 1 >= 128 { 0 } else { !0u128 << (v + 1) };
            let mut best = Vec::new();
            let mut current = vec![0, v];
            graph.expand(&mut current, root & graph.adj[v] & later, &mut best);
            best
        })
        .collect();
    let best = branches
        .into_iter()
        .fold(vec![0], |acc, b| if b.len() > acc.len() { b } else { acc });
    let code = Code::new(best.iter().map(|&i| words[i].clone()).collect())?;
    Ok(MaxCode {
        size: best.len(),
        code,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pairwise_ok(code: &Code, d: ExtendedWeight) -> bool {
        let w = code.words();
        (0..w.len()).all(|i| ((i + 1)..w.len()).all(|j| seq_distance(&w[i], &w[j]).unwrap() >= d))
    }

    #[test]
    fn small_values() {
        let inf = ExtendedWeight::Infinite;
        assert_eq!(brute_force_max_code(1, inf).unwrap().size, 2);
        assert_eq!(brute_force_max_code(2, inf).unwrap().size, 5);
        assert_eq!(brute_force_max_code(1, ExtendedWeight::Finite(1)).unwrap().size, 5);
        assert_eq!(brute_force_max_code(2, ExtendedWeight::Finite(1)).unwrap().size, 25);
    }

    #[test]
    fn returned_codes_are_valid_and_smallest() {
        let r = brute_force_max_code(1, ExtendedWeight::Infinite).unwrap();
        assert_eq!(r.code.to_text().lines().collect::<Vec<_>>(), vec!["0", "2"]);
        for d in [ExtendedWeight::Finite(2), ExtendedWeight::Infinite] {
            let r = brute_force_max_code(2, d).unwrap();
            assert!(pairwise_ok(&r.code, d));
        }
    }

    #[test]
    fn size_guard() {
        assert!(matches!(
            brute_force_max_code(4, ExtendedWeight::Infinite),
            Err(Error::SizeGuard { .. })
        ));
    }
}
