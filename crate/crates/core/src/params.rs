//! Search parameters: the `(b, k)` factorization of `m` and the optimal
//! adjacent partitions `β₁ … β_{r−1}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::PartitionP2;

/// `m = b · k^(r−1)` with `b` minimal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Factorization {
    pub m: usize,
    pub r: usize,
    pub b: usize,
    pub k: usize,
    pub degenerate: bool,
}

impl Factorization {
    /// Degree of the stage-`i` BTU, `b·k^(i−1)`.
    pub fn stage_degree(&self, stage: usize) -> usize {
        self.b * self.k.pow(stage as u32 - 1)
    }

    /// Warning text when `r ≥ m/2`, outside the density the construction assumes.
    pub fn density_warning(&self) -> Option<String> {
        (2 * self.r >= self.m).then(|| {
            format!(
                "r={} is not below m/2 (m={}); the optimal-partition construction assumes r < m/2",
                self.r, self.m
            )
        })
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={} r={} b={} k={}", self.m, self.r, self.b, self.k)?;
        if self.degenerate {
            f.write_str(" (degenerate)")?;
        }
        Ok(())
    }
}

/// Exact integer `e`-th root of `x`, if one exists.
pub fn exact_root(x: usize, e: u32) -> Option<usize> {
    if e == 0 {
        return None;
    }
    if x < 2 || e == 1 {
        return Some(x);
    }
    // largest c with c^e <= x, by bisection on integers
    let (mut lo, mut hi) = (1usize, x);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match mid.checked_pow(e) {
            Some(v) if v <= x => lo = mid,
            _ => hi = mid - 1,
        }
    }
    (lo.checked_pow(e) == Some(x)).then_some(lo)
}

pub fn factorize(m: usize, r: usize) -> Result<Factorization> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!("r={r}: need r >= 2")));
    }
    if m <= r {
        return Err(Error::InvalidParameters(format!(
            "m={m}, r={r}: need m > r"
        )));
    }
    let e = (r - 1) as u32;
    for b in 1..=m {
        if !m.is_multiple_of(b) {
            continue;
        }
        if let Some(k) = exact_root(m / b, e) {
            return Ok(Factorization {
                m,
                r,
                b,
                k,
                degenerate: k == 1,
            });
        }
    }
    unreachable!("b = m always yields k = 1")
}

/// `β₁ … β_{r−1}` for a factorization; `betas[i−1]` sits between slots `i` and `i+1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalPartitionSet {
    pub factorization: Factorization,
    pub betas: Vec<PartitionP2>,
}

impl fmt::Display for OptimalPartitionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, beta) in self.betas.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{beta}")?;
        }
        Ok(())
    }
}

pub fn optimal_partitions(f: &Factorization) -> Result<OptimalPartitionSet> {
    if f.degenerate {
        return Err(Error::Degenerate { m: f.m, r: f.r });
    }
    let betas = partition_loop(f.b, f.k, f.r)?;
    debug_assert_eq!(betas, closed_form_partitions(f.b, f.k, f.r)?);
    Ok(OptimalPartitionSet {
        factorization: *f,
        betas,
    })
}

/// Builds the partitions incrementally: each round appends the single-part
/// partition of the current degree and scales every earlier one by `k`.
pub fn partition_loop(b: usize, k: usize, r: usize) -> Result<Vec<PartitionP2>> {
    if b == 0 || k == 0 || r < 2 {
        return Err(Error::InvalidParameters(format!(
            "b={b}, k={k}, r={r}: need b, k >= 1 and r >= 2"
        )));
    }
    let mut z = b * k;
    let mut betas: Vec<PartitionP2> = Vec::with_capacity(r - 1);
    for _ in 1..r {
        for earlier in betas.iter_mut() {
            *earlier = earlier.scale(k)?;
        }
        betas.push(PartitionP2::uniform(1, z)?);
        z = z
            .checked_mul(k)
            .ok_or(Error::Overflow("partition degree"))?;
    }
    Ok(betas)
}

/// `β_i` = `k^(r−1−i)` parts of size `b·k^i`.
pub fn closed_form_partitions(b: usize, k: usize, r: usize) -> Result<Vec<PartitionP2>> {
    if b == 0 || k == 0 || r < 2 {
        return Err(Error::InvalidParameters(format!(
            "b={b}, k={k}, r={r}: need b, k >= 1 and r >= 2"
        )));
    }
    (1..r)
        .map(|i| {
            let count = k
                .checked_pow((r - 1 - i) as u32)
                .ok_or(Error::Overflow("part count"))?;
            let size = k
                .checked_pow(i as u32)
                .and_then(|v| v.checked_mul(b))
                .ok_or(Error::Overflow("part size"))?;
            PartitionP2::uniform(count, size)
        })
        .collect()
}
