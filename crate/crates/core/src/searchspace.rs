//! The candidate set `A_(n)(p)`: permutations whose partition against a base
//! permutation `p` is the single part `(n)`.
//!
//! A candidate `q` is indexed by a word `(a₁ … a_{n−1}) ∈ S_{n−1}`: the relative
//! permutation `σ = p⁻¹ ∘ q` is the `n`-cycle `n → a₁ → a₂ → … → a_{n−1} → n`.
//! This is a bijection `S_{n−1} ↔ A_(n)(p)`, so `|A_(n)(p)| = (n−1)!`
//! independently of `p`. Words are enumerated in lexicographic order, and any
//! index range of that order can be enumerated on its own.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::Factorization;
use crate::perm::{factorial, lex_rank, lex_unrank, next_lex, Permutation};

/// An element of `S_{n−1}` naming one candidate of degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CandidateWord {
    pub n: usize,
    pub word: Permutation,
}

impl CandidateWord {
    pub fn new(word: Permutation) -> CandidateWord {
        CandidateWord {
            n: word.degree() + 1,
            word,
        }
    }

    /// Position of this word in the lexicographic order of `S_{n−1}`.
    pub fn lex_index(&self) -> u128 {
        lex_rank(self.word.as_slice())
    }

    pub fn from_lex_index(n: usize, index: u128) -> Option<CandidateWord> {
        if n < 2 {
            return None;
        }
        let word = lex_unrank(n - 1, index)?;
        Some(CandidateWord {
            n,
            word: Permutation::from_zero_based(word),
        })
    }
}

/// `(n−1)!`.
pub fn candidate_count(n: usize) -> Result<u128> {
    if n < 2 {
        return Err(Error::InvalidDegree(n));
    }
    factorial(n - 1).ok_or(Error::Overflow("candidate count"))
}

pub fn unrank_candidate(w: &CandidateWord, base: &Permutation) -> Result<Permutation> {
    if w.n != base.degree() || w.word.degree() + 1 != w.n {
        return Err(Error::DegreeMismatch {
            left: w.n,
            right: base.degree(),
        });
    }
    let sigma = cycle_from_word(w.word.as_slice());
    base.compose(&sigma)
}

fn cycle_from_word(word: &[usize]) -> Permutation {
    let n = word.len() + 1;
    let last = n - 1;
    let mut image = vec![0; n];
    let mut at = last;
    for &a in word {
        image[at] = a;
        at = a;
    }
    image[at] = last;
    Permutation::from_zero_based(image)
}

pub fn rank_candidate(q: &Permutation, base: &Permutation) -> Result<CandidateWord> {
    let partition = base.union_cycle_partition(q)?;
    let n = base.degree();
    if !partition.is_single_part() || n < 2 {
        return Err(Error::NotACandidate { partition });
    }
    let sigma = base.inverse().compose(q)?;
    let s = sigma.as_slice();
    let mut word = Vec::with_capacity(n - 1);
    let mut at = s[n - 1];
    while at != n - 1 {
        word.push(at);
        at = s[at];
    }
    Ok(CandidateWord {
        n,
        word: Permutation::from_zero_based(word),
    })
}

/// Lexicographic stream of `A_(n)(base)` over a range of word indices.
#[derive(Debug, Clone)]
pub struct CandidateStream {
    base: Permutation,
    word: Vec<usize>,
    remaining: u128,
}

impl CandidateStream {
    /// Candidates whose word index lies in `start..end` (clamped to `(n−1)!`).
    pub fn range(base: &Permutation, start: u128, end: u128) -> Result<CandidateStream> {
        let total = candidate_count(base.degree())?;
        let end = end.min(total);
        let start = start.min(end);
        let word = lex_unrank(base.degree() - 1, start.min(total - 1)).expect("index in range");
        Ok(CandidateStream {
            base: base.clone(),
            word,
            remaining: end - start,
        })
    }
}

impl Iterator for CandidateStream {
    type Item = (CandidateWord, Permutation);

    fn next(&mut self) -> Option<Self::Item> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let word = Permutation::from_zero_based(self.word.clone());
        let q = self
            .base
            .compose(&cycle_from_word(&self.word))
            .expect("degrees agree");
        next_lex(&mut self.word);
        Some((CandidateWord::new(word), q))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (n, usize::try_from(self.remaining).ok())
    }
}

/// All of `A_(n)(base)` in word order, optionally truncated to `limit` items.
pub fn enumerate_candidates(base: &Permutation, limit: Option<u128>) -> Result<CandidateStream> {
    CandidateStream::range(base, 0, limit.unwrap_or(u128::MAX))
}

/// Size statistics of the stage-`i` search space viewed as a Cayley graph of
/// `S_{b·k^i − 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyStats {
    pub degree_sym: usize,
    pub order: u128,
    pub node_degree: usize,
    pub transition_bound: usize,
}

pub fn cayley_stats(f: &Factorization, stage: usize) -> Result<CayleyStats> {
    if f.degenerate {
        return Err(Error::Degenerate { m: f.m, r: f.r });
    }
    let max = f.r.saturating_sub(2);
    if stage == 0 || stage > max {
        return Err(Error::StageOutOfRange { stage, max });
    }
    let width =
        f.k.checked_pow(stage as u32)
            .and_then(|v| v.checked_mul(f.b))
            .ok_or(Error::Overflow("stage width"))?;
    let degree_sym = width - 1;
    Ok(CayleyStats {
        degree_sym,
        order: factorial(degree_sym).ok_or(Error::Overflow("symmetric group order"))?,
        node_degree: width - 2,
        transition_bound: width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::factorize;

    fn p(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn word(v: &[usize]) -> CandidateWord {
        CandidateWord::new(p(v))
    }

    fn id(n: usize) -> Permutation {
        Permutation::identity(n).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(candidate_count(3).unwrap(), 2);
        assert_eq!(candidate_count(5).unwrap(), 24);
        assert_eq!(candidate_count(2).unwrap(), 1);
        assert!(candidate_count(1).is_err());
    }

    #[test]
    fn unrank_examples() {
        let got: Vec<_> = [word(&[1, 2]), word(&[2, 1])]
            .iter()
            .map(|w| unrank_candidate(w, &id(3)).unwrap())
            .collect();
        assert_eq!(got, vec![p(&[2, 3, 1]), p(&[3, 1, 2])]);
        assert_eq!(
            unrank_candidate(&word(&[1, 2, 3]), &id(4)).unwrap(),
            p(&[2, 3, 4, 1])
        );
        assert!(unrank_candidate(&word(&[1, 2]), &id(4)).is_err());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(
            rank_candidate(&p(&[3, 1, 2]), &id(3)).unwrap(),
            word(&[2, 1])
        );
        assert!(matches!(
            rank_candidate(&p(&[2, 1, 4, 3]), &id(4)),
            Err(Error::NotACandidate { .. })
        ));
        assert!(matches!(
            rank_candidate(&id(4), &id(4)),
            Err(Error::Incompatible { .. })
        ));
    }

    #[test]
    fn round_trip_both_bases() {
        for base in [id(5), Permutation::circular_rotation(5, 2).unwrap()] {
            for (w, q) in enumerate_candidates(&base, None).unwrap() {
                assert_eq!(rank_candidate(&q, &base).unwrap(), w);
                assert_eq!(unrank_candidate(&w, &base).unwrap(), q);
            }
        }
    }

    #[test]
    fn streams() {
        assert_eq!(enumerate_candidates(&id(3), None).unwrap().count(), 2);
        let all: Vec<_> = enumerate_candidates(&id(4), None).unwrap().collect();
        assert_eq!(all.len(), 6);
        for (_, q) in &all {
            assert!(id(4).union_cycle_partition(q).unwrap().is_single_part());
        }
        let first: Vec<_> = enumerate_candidates(&id(5), Some(1)).unwrap().collect();
        assert_eq!(first.len(), 1);
        assert_eq!(first[0].0, word(&[1, 2, 3, 4]));
        assert_eq!(enumerate_candidates(&id(2), None).unwrap().count(), 1);
    }

    #[test]
    fn ranges_partition_the_stream() {
        let base = id(5);
        let whole: Vec<_> = enumerate_candidates(&base, None).unwrap().collect();
        let mut pieces = Vec::new();
        for (s, e) in [(0, 7), (7, 8), (8, 24), (24, 30)] {
            pieces.extend(CandidateStream::range(&base, s, e).unwrap());
        }
        assert_eq!(pieces, whole);
        for (i, (w, _)) in whole.iter().enumerate() {
            assert_eq!(w.lex_index(), i as u128);
            assert_eq!(
                CandidateWord::from_lex_index(5, i as u128).as_ref(),
                Some(w)
            );
        }
    }

    #[test]
    fn cayley_examples() {
        let f = factorize(9, 3).unwrap();
        let s = cayley_stats(&f, 1).unwrap();
        assert_eq!(
            s,
            CayleyStats {
                degree_sym: 2,
                order: 2,
                node_degree: 1,
                transition_bound: 3
            }
        );
        let f = factorize(8, 4).unwrap();
        let s = cayley_stats(&f, 2).unwrap();
        assert_eq!((s.degree_sym, s.order), (3, 6));
        let f = factorize(12, 3).unwrap();
        let s = cayley_stats(&f, 1).unwrap();
        assert_eq!((s.degree_sym, s.order), (5, 120));
        assert!(cayley_stats(&f, 2).is_err());
        assert!(cayley_stats(&f, 0).is_err());
        assert!(cayley_stats(&factorize(7, 3).unwrap(), 1).is_err());
    }
}
