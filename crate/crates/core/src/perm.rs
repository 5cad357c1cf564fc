//! Permutation algebra on `{1..n}`.
//!
//! Permutations are stored 0-based internally; every constructor that takes
//! images and every text form is 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection on `{1..n}` in one-line form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 1-based images, e.g. `[3, 4, 1, 2]`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        if n == 0 {
            return Err(Error::InvalidDegree(0));
        }
        let mut seen = vec![false; n];
        let mut image = images;
        for v in image.iter_mut() {
            if *v == 0 || *v > n {
                return Err(Error::NotAPermutation {
                    degree: n,
                    reason: format!("value {v} out of range"),
                });
            }
            *v -= 1;
            if std::mem::replace(&mut seen[*v], true) {
                return Err(Error::NotAPermutation {
                    degree: n,
                    reason: format!("value {} repeated", *v + 1),
                });
            }
        }
        Ok(Permutation { image })
    }

    /// Wraps 0-based images that are already known to form a bijection.
    pub(crate) fn from_zero_based(image: Vec<usize>) -> Self {
        debug_assert!(is_bijection(&image));
        Permutation { image }
    }

    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDegree(0));
        }
        Ok(Permutation {
            image: (0..n).collect(),
        })
    }

    /// `C_j`: the identity matrix with its last `j` rows moved to the top.
    pub fn circular_rotation(n: usize, j: usize) -> Result<Self> {
        if n < 2 || j == 0 || j >= n {
            return Err(Error::RotationOutOfRange { n, j });
        }
        Ok(Permutation {
            image: (0..n).map(|i| (i + n - j) % n).collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    /// 1-based image of 1-based position `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    /// 0-based images.
    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `(p ∘ q)(i) = p(q(i))`.
    pub fn compose(&self, q: &Permutation) -> Result<Permutation> {
        self.check_degree(q)?;
        Ok(Permutation {
            image: q.image.iter().map(|&x| self.image[x]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        Permutation { image: inv }
    }

    /// True iff the two permutations disagree at every position.
    pub fn is_compatible(&self, q: &Permutation) -> Result<bool> {
        Ok(self.first_agreement(q)?.is_none())
    }

    /// First 1-based position where both permutations have the same image.
    pub fn first_agreement(&self, q: &Permutation) -> Result<Option<usize>> {
        self.check_degree(q)?;
        Ok(self
            .image
            .iter()
            .zip(&q.image)
            .position(|(a, b)| a == b)
            .map(|i| i + 1))
    }

    /// Cycle lengths of this permutation, fixed points included.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.image.len();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    /// Partition between two compatible permutations: the cycle type of
    /// `p⁻¹ ∘ q`, i.e. the half-lengths of the alternating cycles formed by
    /// the two matchings.
    pub fn union_cycle_partition(&self, q: &Permutation) -> Result<PartitionP2> {
        if let Some(position) = self.first_agreement(q)? {
            return Err(Error::Incompatible { position });
        }
        let mut inv = vec![0; self.image.len()];
        for (i, &v) in self.image.iter().enumerate() {
            inv[v] = i;
        }
        let relative = Permutation {
            image: q.image.iter().map(|&x| inv[x]).collect(),
        };
        Ok(PartitionP2::from_sorted_unchecked(relative.cycle_lengths()))
    }

    /// Block-diagonal scaling `k∗q`: `k` copies of `q` along the diagonal.
    pub fn scale(&self, k: usize) -> Result<Permutation> {
        if k == 0 {
            return Err(Error::InvalidParameters("scale factor must be >= 1".into()));
        }
        let n = self.image.len();
        let mut image = Vec::with_capacity(n * k);
        for t in 0..k {
            image.extend(self.image.iter().map(|&v| v + t * n));
        }
        Ok(Permutation { image })
    }

    /// Inverse of [`Permutation::scale`]: if this permutation is block-diagonal
    /// with identical blocks of size `block`, returns the block.
    pub fn unscale(&self, block: usize) -> Option<Permutation> {
        let n = self.image.len();
        if block == 0 || !n.is_multiple_of(block) {
            return None;
        }
        let head = &self.image[..block];
        if head.iter().any(|&v| v >= block) {
            return None;
        }
        for t in 1..n / block {
            let chunk = &self.image[t * block..(t + 1) * block];
            if chunk.iter().zip(head).any(|(&v, &h)| v != h + t * block) {
                return None;
            }
        }
        Some(Permutation {
            image: head.to_vec(),
        })
    }

    fn check_degree(&self, q: &Permutation) -> Result<()> {
        if self.degree() != q.degree() {
            return Err(Error::DegreeMismatch {
                left: self.degree(),
                right: q.degree(),
            });
        }
        Ok(())
    }
}

fn is_bijection(image: &[usize]) -> bool {
    let mut seen = vec![false; image.len()];
    image
        .iter()
        .all(|&v| v < image.len() && !std::mem::replace(&mut seen[v], true))
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.image.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad permutation entry {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(images)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_based().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let images = Vec::<usize>::deserialize(d)?;
        Permutation::new(images).map_err(serde::de::Error::custom)
    }
}

/// A partition of `n` into positive parts, kept in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionP2 {
    parts: Vec<usize>,
}

impl PartitionP2 {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(PartitionP2 { parts })
    }

    /// The partition with `count` parts all equal to `size`.
    pub fn uniform(count: usize, size: usize) -> Result<Self> {
        PartitionP2::new(vec![size; count])
    }

    pub(crate) fn from_sorted_unchecked(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        PartitionP2 { parts }
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn smallest_part(&self) -> usize {
        *self.parts.last().expect("partition has at least one part")
    }

    pub fn is_single_part(&self) -> bool {
        self.parts.len() == 1
    }

    /// Part-replication: `k` copies of every part.
    pub fn scale(&self, k: usize) -> Result<PartitionP2> {
        if k == 0 {
            return Err(Error::InvalidParameters("scale factor must be >= 1".into()));
        }
        let parts = self
            .parts
            .iter()
            .flat_map(|&p| std::iter::repeat_n(p, k))
            .collect();
        Ok(PartitionP2 { parts })
    }
}

impl fmt::Display for PartitionP2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for PartitionP2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad partition part {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        PartitionP2::new(parts)
    }
}

impl Serialize for PartitionP2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PartitionP2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        PartitionP2::new(parts).map_err(serde::de::Error::custom)
    }
}

/// Steps `a` to its lexicographic successor; returns `false` (leaving `a`
/// sorted ascending) when `a` was the last arrangement.
pub fn next_lex<T: Ord>(a: &mut [T]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        a.reverse();
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// `n!`, or `None` on overflow.
pub fn factorial(n: usize) -> Option<u128> {
    (1..=n as u128).try_fold(1u128, |acc, x| acc.checked_mul(x))
}

/// The `index`-th permutation of `0..n` in lexicographic order (Lehmer code).
pub fn lex_unrank(n: usize, mut index: u128) -> Option<Vec<usize>> {
    if index >= factorial(n)? {
        return None;
    }
    let mut pool: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n);
    for remaining in (1..=n).rev() {
        let block = factorial(remaining - 1)?;
        let digit = (index / block) as usize;
        index %= block;
        out.push(pool.remove(digit));
    }
    Some(out)
}

/// Lexicographic index of a permutation of `0..n`.
pub fn lex_rank(image: &[usize]) -> u128 {
    let n = image.len();
    let mut rank = 0u128;
    for i in 0..n {
        let smaller = image[i + 1..].iter().filter(|&&v| v < image[i]).count() as u128;
        rank = rank * (n - i) as u128 + smaller;
    }
    rank
}
