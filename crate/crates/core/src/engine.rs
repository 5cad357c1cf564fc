//! Staged enumeration search for a girth-maximum `(m, r)` BTU inside the
//! `Z(m, r)` family, plus full enumeration of that family.
//!
//! Stage 2 is `[I, C_j]` of degree `b·k`. Every later stage `i` scales the
//! previous BTU by `k`, rebases so slot `i−1` is the identity, re-chooses slot
//! `i−2` as `k∗q` for `q ∈ A(I)` of degree `b·k^(i−2)`, and appends a new last
//! slot (a rotation `C_j`, or under the relaxed ladder any single-cycle
//! candidate). The configuration with the largest girth wins; ties go to the
//! lexicographically smallest `(last slot, q)` key.

use std::fmt;
use std::thread;

use serde::{Deserialize, Serialize};

use crate::backtrack::{Backtrack, LexPermutations, SlotChoices};
use crate::btu::Btu;
use crate::error::{Error, Result};
use crate::params::{closed_form_partitions, factorize, Factorization};
use crate::perm::{PartitionP2, Permutation};
use crate::searchspace::{enumerate_candidates, CandidateWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Carry one best configuration from stage to stage.
    #[default]
    Best,
    /// Carry every co-maximal configuration forward.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationPolicy {
    /// Only rotations with `min(j, n−j)` above the stage threshold and `gcd(j, n) = 1`.
    Strict,
    /// Fall back to any coprime rotation, then to all single-cycle candidates.
    #[default]
    Relaxed,
    /// Stage 2 as relaxed; later stages sweep every single-cycle last slot.
    Full,
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SearchMode::Best => "best",
            SearchMode::Exhaustive => "exhaustive",
        })
    }
}

impl fmt::Display for RotationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RotationPolicy::Strict => "strict",
            RotationPolicy::Relaxed => "relaxed",
            RotationPolicy::Full => "full",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub rotation_policy: RotationPolicy,
    pub worker_count: usize,
    /// Upper bound on the `q` words (and enumerated last slots) tried per stage.
    pub candidate_cap: Option<u128>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::Best,
            rotation_policy: RotationPolicy::Relaxed,
            worker_count: 1,
            candidate_cap: None,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(Error::InvalidParameters("worker_count must be >= 1".into()));
        }
        if self.candidate_cap == Some(0) {
            return Err(Error::InvalidParameters(
                "candidate_cap must be >= 1".into(),
            ));
        }
        Ok(())
    }
}

/// Which rung of the rotation ladder filled a stage's last slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotSource {
    Admissible,
    Coprime,
    Enumerated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTrace {
    pub stage: usize,
    pub n: usize,
    pub source: SlotSource,
    /// Chosen rotation, `None` when the last slot came from candidate enumeration.
    pub rotation_j: Option<usize>,
    pub last_slot_word: Option<CandidateWord>,
    /// Number of last-slot options at the ladder rung used.
    pub last_slot_options: usize,
    /// Configurations examined, including those rejected for incompatibility.
    pub configurations: u64,
    /// Configurations whose girth was evaluated.
    pub candidates_evaluated: u64,
    pub best_girth: usize,
    pub best_candidate_word: Option<CandidateWord>,
    pub co_maximal: usize,
    pub branches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub factorization: Factorization,
    pub btu: Btu,
    pub girth: usize,
    pub traces: Vec<StageTrace>,
    pub config: SearchConfig,
    /// Every co-maximal final BTU in key order (exhaustive mode only).
    pub co_maximal: Vec<Btu>,
}

impl SearchResult {
    pub fn partitions(&self) -> Vec<PartitionP2> {
        self.btu.adjacent_partitions()
    }
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Rotations `j ∈ [1, n−1]` with `min(j, n−j) > threshold` and `gcd(j, n) = 1`.
pub fn admissible_rotations(n: usize, threshold: usize) -> Vec<usize> {
    (1..n)
        .filter(|&j| j.min(n - j) > threshold && gcd(j, n) == 1)
        .collect()
}

/// Rotations with `gcd(j, n) = 1`; each gives the single-part partition `(n)`.
pub fn coprime_rotations(n: usize) -> Vec<usize> {
    (1..n).filter(|&j| gcd(j, n) == 1).collect()
}

#[derive(Debug, Clone)]
enum LastSlot {
    Rotation(usize),
    Candidate(CandidateWord),
}

#[derive(Debug, Clone)]
struct LastOption {
    slot: LastSlot,
    perm: Permutation,
}

/// A stage-`i` BTU after scaling and rebasing, ready to take a new `q`.
struct Prepared {
    /// Slots `1..=i−2` of the rebased BTU.
    lower: Vec<Permutation>,
    /// Inverse of rebased slot `i−2`.
    anchor_inv: Permutation,
}

impl Prepared {
    fn new(prev: &Btu, k: usize) -> Result<Prepared> {
        let scaled = prev
            .perms()
            .iter()
            .map(|p| p.scale(k))
            .collect::<Result<Vec<_>>>()?;
        let rebased = Btu::new_unchecked(scaled).rebase(prev.r())?;
        let mut lower = rebased.into_perms();
        lower.truncate(prev.r() - 1);
        let anchor_inv = lower.last().expect("stage >= 3 has a slot i-2").inverse();
        Ok(Prepared { lower, anchor_inv })
    }

    /// Slots `1..=i−2` with slot `i−2` replaced by `scaled_q`; the lower slots
    /// follow by the same right relabeling, so their mutual partitions hold.
    fn lower_slots(&self, scaled_q: &Permutation) -> Vec<Permutation> {
        let relabel = self.anchor_inv.compose(scaled_q).expect("degrees agree");
        let mut out: Vec<Permutation> = self.lower[..self.lower.len() - 1]
            .iter()
            .map(|p| p.compose(&relabel).expect("degrees agree"))
            .collect();
        out.push(scaled_q.clone());
        out
    }
}

struct Configuration<'a> {
    branch: usize,
    last: &'a LastOption,
    q_word: &'a CandidateWord,
    scaled_q: &'a Permutation,
}

fn pairwise_compatible(perms: &[Permutation]) -> bool {
    for i in 0..perms.len() {
        for j in i + 1..perms.len() {
            let (a, b) = (perms[i].as_slice(), perms[j].as_slice());
            if a.iter().zip(b).any(|(x, y)| x == y) {
                return false;
            }
        }
    }
    true
}

/// Girth of every configuration, `None` where slots conflict. Work is split
/// into contiguous index ranges, so the output order never depends on the
/// worker count.
fn evaluate_all(
    configs: &[Configuration<'_>],
    prepared: &[Prepared],
    identity: &Permutation,
    workers: usize,
) -> Vec<Option<(usize, Vec<Permutation>)>> {
    let eval = |c: &Configuration<'_>| {
        let mut perms = prepared[c.branch].lower_slots(c.scaled_q);
        perms.push(identity.clone());
        perms.push(c.last.perm.clone());
        if !pairwise_compatible(&perms) {
            return None;
        }
        let btu = Btu::new_unchecked(perms);
        let g = btu.girth().girth?;
        Some((g, btu.into_perms()))
    };
    if workers <= 1 || configs.len() < 2 {
        return configs.iter().map(eval).collect();
    }
    let chunk = configs.len().div_ceil(workers);
    thread::scope(|s| {
        let handles: Vec<_> = configs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(eval).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}

struct StageOutcome {
    branches: Vec<Btu>,
    trace: StageTrace,
}

fn last_slot_options(
    source: SlotSource,
    n: usize,
    threshold: usize,
    cap: Option<u128>,
) -> Result<Vec<LastOption>> {
    let rotation = |j| {
        Ok(LastOption {
            slot: LastSlot::Rotation(j),
            perm: Permutation::circular_rotation(n, j)?,
        })
    };
    match source {
        SlotSource::Admissible => admissible_rotations(n, threshold)
            .into_iter()
            .map(rotation)
            .collect(),
        SlotSource::Coprime => coprime_rotations(n).into_iter().map(rotation).collect(),
        SlotSource::Enumerated => Ok(enumerate_candidates(&Permutation::identity(n)?, cap)?
            .map(|(w, perm)| LastOption {
                slot: LastSlot::Candidate(w),
                perm,
            })
            .collect()),
    }
}

fn ladder(policy: RotationPolicy, stage: usize) -> &'static [SlotSource] {
    match policy {
        RotationPolicy::Strict => &[SlotSource::Admissible],
        RotationPolicy::Full if stage > 2 => &[SlotSource::Enumerated],
        RotationPolicy::Relaxed | RotationPolicy::Full => &[
            SlotSource::Admissible,
            SlotSource::Coprime,
            SlotSource::Enumerated,
        ],
    }
}

fn describe_last(trace: &mut StageTrace, last: &LastSlot) {
    match last {
        LastSlot::Rotation(j) => trace.rotation_j = Some(*j),
        LastSlot::Candidate(w) => trace.last_slot_word = Some(w.clone()),
    }
}

fn stage_two(f: &Factorization, config: &SearchConfig) -> Result<StageOutcome> {
    let n = f.stage_degree(2);
    let identity = Permutation::identity(n)?;
    for &source in ladder(config.rotation_policy, 2) {
        let options = last_slot_options(source, n, f.b, None)?;
        if options.is_empty() {
            continue;
        }
        let keep = match config.mode {
            SearchMode::Best => 1,
            SearchMode::Exhaustive => options.len(),
        };
        let branches: Vec<Btu> = options[..keep]
            .iter()
            .map(|o| Btu::new(vec![identity.clone(), o.perm.clone()]))
            .collect::<Result<_>>()?;
        let best_girth = branches[0]
            .girth()
            .girth
            .expect("two compatible matchings form cycles");
        let mut trace = StageTrace {
            stage: 2,
            n,
            source,
            rotation_j: None,
            last_slot_word: None,
            last_slot_options: options.len(),
            configurations: keep as u64,
            candidates_evaluated: keep as u64,
            best_girth,
            best_candidate_word: None,
            co_maximal: keep,
            branches: 1,
        };
        describe_last(&mut trace, &options[0].slot);
        return Ok(StageOutcome { branches, trace });
    }
    Err(Error::StageDeadEnd { stage: 2, n })
}

fn later_stage(
    stage: usize,
    f: &Factorization,
    config: &SearchConfig,
    previous: &[Btu],
) -> Result<StageOutcome> {
    let n = f.stage_degree(stage);
    let q_degree = f.stage_degree(stage - 1);
    let identity = Permutation::identity(n)?;
    let prepared = previous
        .iter()
        .map(|b| Prepared::new(b, f.k))
        .collect::<Result<Vec<_>>>()?;
    let q_choices: Vec<(CandidateWord, Permutation)> =
        enumerate_candidates(&Permutation::identity(q_degree)?, config.candidate_cap)?
            .map(|(w, q)| {
                let scaled = q.scale(f.k).expect("k >= 1");
                (w, scaled)
            })
            .collect();

    for &source in ladder(config.rotation_policy, stage) {
        let options = last_slot_options(source, n, q_degree, config.candidate_cap)?;
        let mut configs = Vec::with_capacity(options.len() * q_choices.len() * prepared.len());
        for last in &options {
            for (q_word, scaled_q) in &q_choices {
                for branch in 0..prepared.len() {
                    configs.push(Configuration {
                        branch,
                        last,
                        q_word,
                        scaled_q,
                    });
                }
            }
        }
        let results = evaluate_all(&configs, &prepared, &identity, config.worker_count);
        let evaluated = results.iter().filter(|r| r.is_some()).count();
        let Some(best_girth) = results.iter().flatten().map(|(g, _)| *g).max() else {
            continue;
        };
        let co_maximal = results
            .iter()
            .flatten()
            .filter(|(g, _)| *g == best_girth)
            .count();
        let mut winners = configs.iter().zip(results).filter_map(|(c, r)| {
            r.filter(|(g, _)| *g == best_girth)
                .map(|(_, perms)| (c, perms))
        });
        let (first_config, first_perms) = winners.next().expect("a maximum exists");
        let mut branches = vec![Btu::new_unchecked(first_perms)];
        if config.mode == SearchMode::Exhaustive {
            branches.extend(winners.map(|(_, perms)| Btu::new_unchecked(perms)));
        }
        let mut trace = StageTrace {
            stage,
            n,
            source,
            rotation_j: None,
            last_slot_word: None,
            last_slot_options: options.len(),
            configurations: configs.len() as u64,
            candidates_evaluated: evaluated as u64,
            best_girth,
            best_candidate_word: Some(first_config.q_word.clone()),
            co_maximal,
            branches: prepared.len(),
        };
        describe_last(&mut trace, &first_config.last.slot);
        return Ok(StageOutcome { branches, trace });
    }
    Err(Error::StageDeadEnd { stage, n })
}

pub fn search(m: usize, r: usize, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let f = factorize(m, r)?;
    if f.degenerate {
        return Err(Error::Degenerate { m, r });
    }
    let mut traces = Vec::with_capacity(r - 1);
    let mut outcome = stage_two(&f, config)?;
    traces.push(outcome.trace.clone());
    for stage in 3..=r {
        outcome = later_stage(stage, &f, config, &outcome.branches)?;
        traces.push(outcome.trace.clone());
    }

    let btu = outcome.branches[0].clone();
    let betas = closed_form_partitions(f.b, f.k, r)?;
    if !btu.in_phi(&betas) {
        return Err(Error::Postcondition(format!(
            "result partitions {:?} differ from the optimal set",
            btu.adjacent_partitions()
        )));
    }
    if !btu.perms()[r - 2].is_identity() {
        return Err(Error::Postcondition(format!(
            "slot {} is not the identity",
            r - 1
        )));
    }
    let girth = btu.girth().girth.expect("r >= 2");
    let co_maximal = match config.mode {
        SearchMode::Best => Vec::new(),
        SearchMode::Exhaustive => outcome.branches,
    };
    Ok(SearchResult {
        factorization: f,
        btu,
        girth,
        traces,
        config: config.clone(),
        co_maximal,
    })
}

/// Every member of `Z(m, r)` in lexicographic slot order.
///
/// Slot `r−2` ranges over `(k∗q)` with `q ∈ A(I)` (forced by its partition
/// against the identity in slot `r−1`); slots below range over all scalings
/// of `S_{b·k^j}` filtered by their partition against the next slot; slot `r`
/// ranges over `A_(m)(I_m)`.
pub fn enumerate_z(m: usize, r: usize, cap: Option<u64>) -> Result<impl Iterator<Item = Btu>> {
    let f = factorize(m, r)?;
    if f.degenerate {
        return Err(Error::Degenerate { m, r });
    }
    let betas = closed_form_partitions(f.b, f.k, r)?;
    let identity = Permutation::identity(m)?;
    let k = f.k;
    let b = f.b;

    let choices = move |level: usize, _: &[Permutation]| -> SlotChoices {
        let slot = level + 1;
        if slot == r - 1 {
            return Box::new(std::iter::once(identity.clone()));
        }
        if slot == r {
            let stream = enumerate_candidates(&identity, None).expect("m >= 2");
            return Box::new(stream.map(|(_, q)| q));
        }
        let width = b * k.pow(slot as u32);
        let factor = k.pow((r - 1 - slot) as u32);
        let scale = move |q: Permutation| q.scale(factor).expect("factor >= 1");
        if slot == r - 2 {
            let base = Permutation::identity(width).expect("width >= 1");
            let stream = enumerate_candidates(&base, None).expect("width >= 2");
            Box::new(stream.map(move |(_, q)| scale(q)))
        } else {
            Box::new(LexPermutations::new(width).map(scale))
        }
    };
    let accept = move |level: usize, filled: &[Permutation], p: &Permutation| {
        if !filled.iter().all(|f| f.is_compatible(p).unwrap_or(false)) {
            return false;
        }
        match filled.last() {
            Some(prev) => prev.union_cycle_partition(p).ok().as_ref() == Some(&betas[level - 1]),
            None => true,
        }
    };
    let limit = cap.map_or(usize::MAX, |c| usize::try_from(c).unwrap_or(usize::MAX));
    Ok(Backtrack::new(r, choices, accept).take(limit))
}
