//! Brute-force ground truth at small sizes: every labeled `(m, r)` BTU, its
//! true maximum girth, and a partition-signature census.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::backtrack::{Backtrack, LexPermutations, SlotChoices};
use crate::btu::Btu;
use crate::engine::{search, SearchConfig};
use crate::error::{Error, Result};
use crate::perm::{factorial, PartitionP2, Permutation};

/// Compatibility checks the oracle is willing to spend.
pub const CHECK_BUDGET: u128 = 10_000_000;

/// Derangement count `D_m`.
fn derangements(m: usize) -> u128 {
    let (mut prev, mut cur) = (1u128, 0u128);
    if m == 0 {
        return 1;
    }
    for i in 2..=m as u128 {
        (prev, cur) = (cur, (i - 1).saturating_mul(prev.saturating_add(cur)));
    }
    cur
}

/// Upper bound on compatibility checks for the slot-by-slot sweep: level `t`
/// tries every permutation against at most `t−1` earlier slots, and at most
/// `D_m` partners survive per earlier level.
pub fn estimate_checks(m: usize, r: usize, fix_first: bool) -> u128 {
    let all = factorial(m).unwrap_or(u128::MAX);
    let first = if fix_first { 1 } else { all };
    let d = derangements(m);
    let mut partial = first;
    let mut total = 0u128;
    for t in 2..=r {
        total = total.saturating_add(partial.saturating_mul(all).saturating_mul(t as u128 - 1));
        partial = partial.saturating_mul(d);
    }
    total
}

fn guard(m: usize, r: usize, fix_first: bool) -> Result<()> {
    if m == 0 || r == 0 {
        return Err(Error::InvalidParameters(format!(
            "m={m}, r={r}: both must be >= 1"
        )));
    }
    let estimate = estimate_checks(m, r, fix_first);
    if estimate > CHECK_BUDGET {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: CHECK_BUDGET,
        });
    }
    Ok(())
}

/// All ordered tuples of `r` pairwise-compatible permutations of degree `m`,
/// lexicographic, optionally with slot 1 pinned to the identity.
pub fn enumerate_btus(m: usize, r: usize, fix_first: bool) -> Result<impl Iterator<Item = Btu>> {
    let empty = r > m;
    if !empty {
        guard(m, r, fix_first)?;
    }
    let choices = move |level: usize, _: &[Permutation]| -> SlotChoices {
        if level == 0 && fix_first {
            Box::new(std::iter::once(Permutation::identity(m).expect("m >= 1")))
        } else {
            Box::new(LexPermutations::new(m))
        }
    };
    let accept = |_: usize, filled: &[Permutation], p: &Permutation| {
        filled
            .iter()
            .all(|f| f.as_slice().iter().zip(p.as_slice()).all(|(a, b)| a != b))
    };
    Ok(Backtrack::new(if empty { 0 } else { r }, choices, accept))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleReport {
    pub m: usize,
    pub r: usize,
    pub max_girth: usize,
    pub maximizer_count: u64,
    pub witness: Btu,
    pub enumerated: u64,
    pub first_slot_fixed: bool,
}

pub fn max_girth(m: usize, r: usize, fix_first: bool) -> Result<OracleReport> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!(
            "r={r}: girth needs r >= 2"
        )));
    }
    let mut best: Option<(usize, Btu)> = None;
    let mut count = 0u64;
    let mut enumerated = 0u64;
    for btu in enumerate_btus(m, r, fix_first)? {
        enumerated += 1;
        let g = btu.girth().girth.expect("r >= 2 graphs have cycles");
        match &best {
            Some((bg, _)) if g < *bg => {}
            Some((bg, _)) if g == *bg => count += 1,
            _ => {
                best = Some((g, btu));
                count = 1;
            }
        }
    }
    let (max_girth, witness) =
        best.ok_or_else(|| Error::InvalidParameters(format!("no ({m},{r}) BTU exists")))?;
    Ok(OracleReport {
        m,
        r,
        max_girth,
        maximizer_count: count,
        witness,
        enumerated,
        first_slot_fixed: fix_first,
    })
}

/// Tuple counts grouped by adjacent-partition signature.
pub fn phi_census(m: usize, r: usize, fix_first: bool) -> Result<BTreeMap<Vec<PartitionP2>, u64>> {
    let mut census = BTreeMap::new();
    for btu in enumerate_btus(m, r, fix_first)? {
        *census.entry(btu.adjacent_partitions()).or_insert(0) += 1;
    }
    Ok(census)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum EngineOutcome {
    Ran { girth: usize, btu: Btu },
    Inapplicable { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub m: usize,
    pub r: usize,
    pub engine: EngineOutcome,
    pub oracle: OracleReport,
    pub equal: bool,
}

/// Runs the engine (default configuration) and the oracle side by side.
/// A girth mismatch is reported, not raised.
pub fn verify_search(m: usize, r: usize) -> Result<VerifyReport> {
    let oracle = max_girth(m, r, true)?;
    let engine = match search(m, r, &SearchConfig::default()) {
        Ok(res) => EngineOutcome::Ran {
            girth: res.girth,
            btu: res.btu,
        },
        Err(e) => EngineOutcome::Inapplicable {
            reason: e.to_string(),
        },
    };
    let equal = matches!(&engine, EngineOutcome::Ran { girth, .. } if *girth == oracle.max_girth);
    Ok(VerifyReport {
        m,
        r,
        engine,
        oracle,
        equal,
    })
}
